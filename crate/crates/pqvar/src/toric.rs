//! Toric resolution data of a cyclic quotient singularity: the rays of
//! negative discrepancy, the polyhedron of sections vanishing along the
//! exceptional locus, its lattice points, the minimal monomial basis of the
//! resulting ideals, and the exponent at which their powers stabilize.

use num::integer::{gcd, lcm};
use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Rat;
use crate::error::{Error, Result};
use crate::singularity::CyclicSingularityType;

/// One exceptional ray of negative discrepancy: `w` is the primitive-scaled
/// lattice point of the ray and `u` the equally scaled discrepancy, so the
/// sections of the k-th ideal are cut out by ⟨x, w⟩ ≥ −k·u.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayDatum {
    pub w: Vec<i64>,
    pub u: i64,
}

/// A monomial ideal in n variables, stored by its unique minimal generating
/// set (an antichain under componentwise divisibility).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialIdeal {
    n: usize,
    gens: Vec<Vec<u32>>,
}

/// For each power j of the distinguished generator with age(j) < 1, the ray
/// datum (w, u) with w = λ·((j·a_i mod m)/m)_i, λ clearing all denominators,
/// and u = λ·(age(j) − 1) < 0.  Ordered by ascending j; vectors that are
/// multiples of other rays are retained (their constraints are dominated).
pub fn negative_rays(sing: &CyclicSingularityType) -> Vec<RayDatum> {
    let m = sing.m;
    let mut out = Vec::new();
    for j in 1..m {
        let r: Vec<u64> = sing.weights.iter().map(|&a| j * a % m).collect();
        let s: u64 = r.iter().sum();
        if s >= m {
            continue;
        }
        let lambda = r
            .iter()
            .map(|&ri| m / gcd(ri, m))
            .fold(1u64, lcm);
        let w: Vec<i64> = r.iter().map(|&ri| (lambda * ri / m) as i64).collect();
        let u = w.iter().sum::<i64>() - lambda as i64;
        debug_assert!(u < 0);
        out.push(RayDatum { w, u });
    }
    out
}

/// Drop every ray whose constraint is implied by a multiple of another ray:
/// if w = t·w′ (t ≥ 1) and t·u′ ≤ u, then ⟨x,w′⟩ ≥ −u′ forces ⟨x,w⟩ ≥ −u.
pub fn dominated_filter(rays: &[RayDatum]) -> Vec<RayDatum> {
    let mut keep: Vec<RayDatum> = Vec::new();
    'outer: for (i, r) in rays.iter().enumerate() {
        for (j, r2) in rays.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(t) = multiple_of(&r.w, &r2.w) {
                let implied = t as i64 * r2.u <= r.u;
                let tie = t == 1 && r2.u == r.u;
                // on exact ties keep only the first occurrence
                if implied && (!tie || j < i) {
                    continue 'outer;
                }
            }
        }
        keep.push(r.clone());
    }
    keep
}

/// If a = t·b for a positive integer t, return t.
fn multiple_of(a: &[i64], b: &[i64]) -> Option<u64> {
    if a.len() != b.len() {
        return None;
    }
    let mut t: Option<u64> = None;
    for (&x, &y) in a.iter().zip(b) {
        if y == 0 {
            if x != 0 {
                return None;
            }
            continue;
        }
        if x % y != 0 || x / y <= 0 {
            return None;
        }
        let q = (x / y) as u64;
        match t {
            None => t = Some(q),
            Some(p) if p != q => return None,
            _ => {}
        }
    }
    t.or(Some(1))
}

fn check_rays(rays: &[RayDatum]) -> Result<usize> {
    if rays.is_empty() {
        return Err(Error::usage(
            "no rays given: canonical types have the unit ideal and no polytope",
        ));
    }
    let n = rays[0].w.len();
    for r in rays {
        if r.w.len() != n {
            return Err(Error::usage("rays of unequal dimension"));
        }
        if r.u >= 0 {
            return Err(Error::usage(
                "ray with nonnegative discrepancy: constraint is vacuous",
            ));
        }
    }
    Ok(n)
}

/// The vector l with l_i the least positive integer such that l_i·e_i
/// satisfies every ray constraint at k = 1.
pub fn min_mult_point(rays: &[RayDatum]) -> Result<Vec<u64>> {
    let n = check_rays(rays)?;
    let mut l = vec![1u64; n];
    for r in rays {
        for i in 0..n {
            if r.w[i] == 0 {
                return Err(Error::validation(format!(
                    "ray {:?} has a zero entry: the fixed locus is not isolated \
                     and the ideal is not cofinite in that direction",
                    r.w
                )));
            }
            let need = (-r.u + r.w[i] - 1) / r.w[i]; // ceil(-u / w_i)
            l[i] = l[i].max(need as u64);
        }
    }
    Ok(l)
}

/// All lattice points α with 0 ≤ α_i ≤ k·l_i and ⟨α, w_ρ⟩ ≥ −k·u_ρ for all
/// rays, in lexicographic order.  This finite set generates the k-th ideal:
/// any point of the polyhedron outside the box is divisible by its
/// componentwise minimum with k·l, which lies inside.
pub fn lattice_points(rays: &[RayDatum], k: u32) -> Result<Vec<Vec<u32>>> {
    if k == 0 {
        return Err(Error::usage("k must be at least 1"));
    }
    let n = check_rays(rays)?;
    let l = min_mult_point(rays)?;
    let kbox: Vec<u32> = l.iter().map(|&li| li as u32 * k).collect();
    let targets: Vec<i64> = rays.iter().map(|r| -(k as i64) * r.u).collect();
    // suffix_max[ρ][i] = largest achievable ⟨·, w_ρ⟩ over coordinates ≥ i
    let mut suffix_max = vec![vec![0i64; n + 1]; rays.len()];
    for (ri, r) in rays.iter().enumerate() {
        for i in (0..n).rev() {
            suffix_max[ri][i] = suffix_max[ri][i + 1] + r.w[i] * kbox[i] as i64;
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    let mut dots = vec![0i64; rays.len()];
    dfs_points(
        rays,
        &kbox,
        &targets,
        &suffix_max,
        0,
        &mut cur,
        &mut dots,
        &mut out,
    );
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs_points(
    rays: &[RayDatum],
    kbox: &[u32],
    targets: &[i64],
    suffix_max: &[Vec<i64>],
    depth: usize,
    cur: &mut Vec<u32>,
    dots: &mut Vec<i64>,
    out: &mut Vec<Vec<u32>>,
) {
    if depth == cur.len() {
        if dots.iter().zip(targets).all(|(&d, &t)| d >= t) {
            out.push(cur.clone());
        }
        return;
    }
    for v in 0..=kbox[depth] {
        if v > 0 {
            for (ri, r) in rays.iter().enumerate() {
                dots[ri] += r.w[depth];
            }
        }
        // prune: even maxing the remaining coordinates cannot reach a target
        let feasible = (0..rays.len())
            .all(|ri| dots[ri] + suffix_max[ri][depth + 1] >= targets[ri]);
        if feasible {
            cur[depth] = v;
            dfs_points(rays, kbox, targets, suffix_max, depth + 1, cur, dots, out);
        }
    }
    for (ri, r) in rays.iter().enumerate() {
        dots[ri] -= r.w[depth] * kbox[depth] as i64;
    }
    cur[depth] = 0;
}

/// The unique minimal monomial basis of the k-th ideal.
pub fn minimal_basis(rays: &[RayDatum], k: u32) -> Result<MonomialIdeal> {
    let n = check_rays(rays)?;
    let pts = lattice_points(rays, k)?;
    Ok(MonomialIdeal::from_generators(n, pts))
}

impl MonomialIdeal {
    /// Minimalize an arbitrary generating set into the antichain.
    pub fn from_generators(n: usize, mut gens: Vec<Vec<u32>>) -> Self {
        gens.sort_by_key(|g| (g.iter().map(|&x| x as u64).sum::<u64>(), g.clone()));
        gens.dedup();
        let mut kept: Vec<Vec<u32>> = Vec::new();
        'next: for g in gens {
            for h in &kept {
                if divides(h, &g) {
                    continue 'next;
                }
            }
            kept.push(g);
        }
        kept.sort();
        MonomialIdeal { n, gens: kept }
    }

    /// The unit ideal (generated by 1).
    pub fn unit(n: usize) -> Self {
        MonomialIdeal {
            n,
            gens: vec![vec![0; n]],
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.iter().all(|&x| x == 0))
    }

    /// True iff x^α lies in the ideal, i.e. some generator divides α.
    pub fn member(&self, alpha: &[u32]) -> Result<bool> {
        if alpha.len() != self.n {
            return Err(Error::usage(format!(
                "exponent vector has length {}, ideal lives in {} variables",
                alpha.len(),
                self.n
            )));
        }
        Ok(self.gens.iter().any(|g| divides(g, alpha)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::usage("ideal product across different variable counts"));
        }
        let mut prods = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                prods.push(a.iter().zip(b).map(|(&x, &y)| x + y).collect());
            }
        }
        Ok(MonomialIdeal::from_generators(self.n, prods))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(MonomialIdeal::unit(self.n));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x <= y)
}

/// The exponent s = (n−1)·s′ with s′ the least positive integer clearing the
/// denominators of every vertex of the k = 1 polytope Box_l ∩ P_D; powers of
/// the s-th ideal then reproduce the (s·k)-th ideals exactly.
pub fn stabilization_exponent(rays: &[RayDatum]) -> Result<u64> {
    let n = check_rays(rays)?;
    if n < 2 {
        return Err(Error::usage(
            "stabilization exponent needs ambient dimension at least 2",
        ));
    }
    let l = min_mult_point(rays)?;
    // constraint rows (c, b, ge): ⟨x, c⟩ ≥ b when ge, else ⟨x, c⟩ ≤ b
    let mut rows: Vec<(Vec<i64>, i64, bool)> = Vec::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        rows.push((e.clone(), 0, true));
        rows.push((e, l[i] as i64, false));
    }
    for r in rays {
        rows.push((r.w.clone(), -r.u, true));
    }
    let mut sprime = BigInt::one();
    let mut found_vertex = false;
    for subset in combinations(rows.len(), n) {
        let mat: Vec<Vec<Rat>> = subset
            .iter()
            .map(|&i| rows[i].0.iter().map(|&c| Rat::from_integer(c.into())).collect())
            .collect();
        let rhs: Vec<Rat> = subset
            .iter()
            .map(|&i| Rat::from_integer(rows[i].1.into()))
            .collect();
        let x = match solve_square(&mat, &rhs) {
            Some(x) => x,
            None => continue,
        };
        let feasible = rows.iter().all(|(c, b, ge)| {
            let dot: Rat = c
                .iter()
                .zip(&x)
                .map(|(&ci, xi)| Rat::from_integer(ci.into()) * xi)
                .sum();
            let bb = Rat::from_integer((*b).into());
            if *ge {
                dot >= bb
            } else {
                dot <= bb
            }
        });
        if !feasible {
            continue;
        }
        found_vertex = true;
        for xi in &x {
            let d = xi.denom().abs();
            sprime = num::integer::lcm(sprime.clone(), d);
        }
    }
    if !found_vertex {
        return Err(Error::validation("polytope has no vertices"));
    }
    let sprime: u64 = sprime
        .try_into()
        .map_err(|_| Error::internal("stabilization exponent overflows u64"))?;
    Ok((n as u64 - 1) * sprime)
}

/// All size-k index subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Exact solution of a square linear system; None if singular.
fn solve_square(mat: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = mat.len();
    let mut a: Vec<Vec<Rat>> = mat.to_vec();
    let mut b: Vec<Rat> = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for j in col..n {
            a[col][j] = &a[col][j] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    let t = &a[col][j] * &f;
                    a[r][j] -= t;
                }
                let t = &b[col] * &f;
                b[r] -= t;
            }
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::singularity::CyclicSingularityType;

    fn sing(m: u64, w: &[u64]) -> CyclicSingularityType {
        CyclicSingularityType::new(m, w.to_vec()).unwrap()
    }

    fn ray(w: &[i64], u: i64) -> RayDatum {
        RayDatum { w: w.to_vec(), u }
    }

    #[test]
    fn rays_of_known_types() {
        assert_eq!(
            negative_rays(&sing(6, &[1, 1, 1])),
            vec![ray(&[1, 1, 1], -3)]
        );
        assert_eq!(
            negative_rays(&sing(8, &[1, 1, 3])),
            vec![ray(&[1, 1, 3], -3), ray(&[3, 3, 1], -1)]
        );
        assert_eq!(
            negative_rays(&sing(12, &[1, 1, 5])),
            vec![ray(&[1, 1, 5], -5), ray(&[1, 1, 1], -1), ray(&[5, 5, 1], -1)]
        );
        assert_eq!(
            negative_rays(&sing(5, &[1, 1])),
            vec![ray(&[1, 1], -3), ray(&[2, 2], -1)]
        );
        assert_eq!(
            negative_rays(&sing(8, &[1, 1, 1])),
            vec![ray(&[1, 1, 1], -5), ray(&[1, 1, 1], -1)]
        );
        assert!(negative_rays(&sing(2, &[1, 1, 1])).is_empty());
        assert!(negative_rays(&sing(3, &[1, 2])).is_empty());
    }

    #[test]
    fn min_mult_points() {
        assert_eq!(
            min_mult_point(&negative_rays(&sing(6, &[1, 1, 1]))).unwrap(),
            vec![3, 3, 3]
        );
        assert_eq!(
            min_mult_point(&negative_rays(&sing(8, &[1, 1, 3]))).unwrap(),
            vec![3, 3, 1]
        );
        assert_eq!(
            min_mult_point(&negative_rays(&sing(12, &[1, 1, 5]))).unwrap(),
            vec![5, 5, 1]
        );
        assert_eq!(
            min_mult_point(&negative_rays(&sing(5, &[1, 1]))).unwrap(),
            vec![3, 3]
        );
    }

    #[test]
    fn lattice_point_counts() {
        // {x in [0,3]^3 : x1+x2+x3 >= 3} — brute count 54
        let pts = lattice_points(&negative_rays(&sing(6, &[1, 1, 1])), 1).unwrap();
        assert_eq!(pts.len(), 54);
        assert!(pts.contains(&vec![3, 0, 0]));
        assert!(pts.contains(&vec![1, 1, 1]));
        assert!(!pts.contains(&vec![1, 1, 0]));

        // {x in [0,3]^2 : x1+x2 >= 3} — 10 points
        let pts2 = lattice_points(&negative_rays(&sing(5, &[1, 1])), 1).unwrap();
        assert_eq!(pts2.len(), 10);
    }

    #[test]
    fn box_corner_is_member() {
        for (m, w) in [(6u64, vec![1, 1, 1]), (8, vec![1, 1, 3]), (12, vec![1, 1, 5])] {
            let rays = negative_rays(&sing(m, &w));
            let l = min_mult_point(&rays).unwrap();
            let pts = lattice_points(&rays, 1).unwrap();
            for i in 0..w.len() {
                let mut e = vec![0u32; w.len()];
                e[i] = l[i] as u32;
                assert!(pts.contains(&e), "1/{}{:?} missing l_{}·e_{}", m, w, i, i);
            }
        }
    }

    #[test]
    fn minimal_bases() {
        // cube of the maximal ideal: the 10 monomials of degree 3
        let b = minimal_basis(&negative_rays(&sing(6, &[1, 1, 1])), 1).unwrap();
        assert_eq!(b.generators().len(), 10);
        assert!(b
            .generators()
            .iter()
            .all(|g| g.iter().map(|&x| x as u64).sum::<u64>() == 3));

        // 10th power of the maximal ideal: 66 monomials of degree 10
        let b2 = minimal_basis(&negative_rays(&sing(8, &[1, 1, 1])), 2).unwrap();
        assert_eq!(b2.generators().len(), 66);
        assert!(b2
            .generators()
            .iter()
            .all(|g| g.iter().map(|&x| x as u64).sum::<u64>() == 10));
    }

    #[test]
    fn squared_mixed_ideal_matches_symbolic_square() {
        // ((t1,t2)^3 + (t3))^2 built directly from its generators
        let j = MonomialIdeal::from_generators(
            3,
            vec![
                vec![3, 0, 0],
                vec![2, 1, 0],
                vec![1, 2, 0],
                vec![0, 3, 0],
                vec![0, 0, 1],
            ],
        );
        let j2 = j.pow(2).unwrap();
        let b = minimal_basis(&negative_rays(&sing(8, &[1, 1, 3])), 2).unwrap();
        assert_eq!(j2, b);
    }

    #[test]
    fn membership() {
        let b = minimal_basis(&negative_rays(&sing(8, &[1, 1, 3])), 2).unwrap();
        assert!(b.member(&[0, 0, 2]).unwrap());
        assert!(!b.member(&[0, 0, 1]).unwrap());
        for g in b.generators() {
            assert!(b.member(g).unwrap());
        }
        assert!(b.member(&[0, 0]).is_err());
    }

    #[test]
    fn membership_matches_halfspaces() {
        // for ideals built from rays, divisibility == the halfspace test
        for (m, w, k) in [
            (8u64, vec![1, 1, 3], 2u32),
            (6, vec![1, 1, 1], 2),
            (12, vec![1, 1, 5], 1),
        ] {
            let rays = negative_rays(&sing(m, &w));
            let ideal = minimal_basis(&rays, k).unwrap();
            let l = min_mult_point(&rays).unwrap();
            let n = w.len();
            let bound: Vec<u32> = l.iter().map(|&x| (x as u32) * k + 2).collect();
            let mut alpha = vec![0u32; n];
            loop {
                let hs = rays.iter().all(|r| {
                    let dot: i64 = r
                        .w
                        .iter()
                        .zip(&alpha)
                        .map(|(&wi, &ai)| wi * ai as i64)
                        .sum();
                    dot >= -(k as i64) * r.u
                });
                assert_eq!(ideal.member(&alpha).unwrap(), hs, "at {:?}", alpha);
                // odometer increment
                let mut i = 0;
                loop {
                    if i == n {
                        return;
                    }
                    alpha[i] += 1;
                    if alpha[i] <= bound[i] {
                        break;
                    }
                    alpha[i] = 0;
                    i += 1;
                }
            }
        }
    }

    #[test]
    fn antichain_property() {
        for (m, w, k) in [(8u64, vec![1, 1, 3], 2u32), (12, vec![1, 1, 5], 3)] {
            let b = minimal_basis(&negative_rays(&sing(m, &w)), k).unwrap();
            let g = b.generators();
            for i in 0..g.len() {
                for j in 0..g.len() {
                    if i != j {
                        assert!(!divides(&g[i], &g[j]));
                    }
                }
            }
        }
    }

    #[test]
    fn dominated_rays_are_safe() {
        for (m, w) in [
            (5u64, vec![1, 1]),
            (8, vec![1, 1, 1]),
            (12, vec![1, 1, 5]),
            (12, vec![1, 1]),
        ] {
            let rays = negative_rays(&sing(m, &w));
            let filtered = dominated_filter(&rays);
            for k in 1..=3u32 {
                assert_eq!(
                    minimal_basis(&rays, k).unwrap(),
                    minimal_basis(&filtered, k).unwrap(),
                    "1/{}{:?} k={}",
                    m,
                    w,
                    k
                );
            }
        }
        // the filter must do real work somewhere
        let rays = negative_rays(&sing(5, &[1, 1]));
        assert_eq!(dominated_filter(&rays).len(), 1);
    }

    #[test]
    fn power_containment() {
        for (m, w) in [(6u64, vec![1, 1, 1]), (8, vec![1, 1, 3]), (12, vec![1, 1, 5])] {
            let rays = negative_rays(&sing(m, &w));
            for k in 1..=3u32 {
                for j in 1..=3u32 {
                    let prod = minimal_basis(&rays, k)
                        .unwrap()
                        .mul(&minimal_basis(&rays, j).unwrap())
                        .unwrap();
                    let big = minimal_basis(&rays, k + j).unwrap();
                    for g in prod.generators() {
                        assert!(big.member(g).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn stabilization_exponents() {
        assert_eq!(
            stabilization_exponent(&negative_rays(&sing(6, &[1, 1, 1]))).unwrap(),
            2
        );
        assert_eq!(
            stabilization_exponent(&negative_rays(&sing(5, &[1, 1]))).unwrap(),
            1
        );
        assert_eq!(
            stabilization_exponent(&negative_rays(&sing(8, &[1, 1, 3]))).unwrap(),
            2
        );
    }

    #[test]
    fn stabilized_powers_equal_scaled_ideals() {
        for (m, w) in [
            (6u64, vec![1, 1, 1]),
            (8, vec![1, 1, 3]),
            (8, vec![1, 1, 1]),
            (5, vec![1, 1]),
            (12, vec![1, 1, 5]),
        ] {
            let rays = negative_rays(&sing(m, &w));
            let s = stabilization_exponent(&rays).unwrap() as u32;
            let base = minimal_basis(&rays, s).unwrap();
            for k in 1..=4u32 {
                assert_eq!(
                    base.pow(k).unwrap(),
                    minimal_basis(&rays, s * k).unwrap(),
                    "1/{}{:?} s={} k={}",
                    m,
                    w,
                    s,
                    k
                );
            }
        }
    }

    #[test]
    fn error_paths() {
        assert!(lattice_points(&[], 1).is_err());
        assert!(lattice_points(&[ray(&[1, 1], 0)], 1).is_err());
        assert!(lattice_points(&[ray(&[1, 1], -1)], 0).is_err());
        assert!(min_mult_point(&[ray(&[1, 0], -1)]).is_err());
        let a = MonomialIdeal::unit(2);
        let b = MonomialIdeal::unit(3);
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn unit_ideal() {
        let u = MonomialIdeal::unit(3);
        assert!(u.is_unit());
        assert!(u.member(&[5, 0, 2]).unwrap());
        assert_eq!(u.pow(3).unwrap(), u);
        let nontrivial = minimal_basis(&negative_rays(&sing(6, &[1, 1, 1])), 1).unwrap();
        assert!(!nontrivial.is_unit());
    }
}
