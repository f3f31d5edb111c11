//! Branching-data classification: enumerate the admissible covering types
//! of three-curve quotients with rational factor quotients, then decide by
//! brute force whether a prescribed group realizes each type as a cover of
//! the line.

use std::collections::HashMap;

use num::{BigInt, BigRational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, CayleyGroup};

/// A group to run the existence search against: either an abelian group
/// given by its invariant factors or an arbitrary multiplication table.
#[derive(Clone, Debug)]
pub enum GroupSpec {
    Abelian(AbelianGroup),
    Table(CayleyGroup),
}

impl GroupSpec {
    pub fn size(&self) -> u64 {
        match self {
            GroupSpec::Abelian(g) => g.size(),
            GroupSpec::Table(g) => g.size() as u64,
        }
    }

    pub fn name(&self) -> String {
        match self {
            GroupSpec::Abelian(g) => {
                let parts: Vec<String> =
                    g.orders().iter().map(|o| format!("Z{}", o)).collect();
                parts.join("x")
            }
            GroupSpec::Table(g) => g.name.clone(),
        }
    }

    /// Expand to an explicit table (index 0 = identity).
    pub fn to_table(&self) -> Result<CayleyGroup> {
        match self {
            GroupSpec::Table(g) => Ok(g.clone()),
            GroupSpec::Abelian(g) => {
                let elements = g.elements();
                let index: HashMap<Vec<u64>, usize> = elements
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (e.0.clone(), i))
                    .collect();
                let table: Vec<Vec<usize>> = elements
                    .iter()
                    .map(|a| {
                        elements
                            .iter()
                            .map(|b| index[&g.add(a, b).0])
                            .collect()
                    })
                    .collect();
                CayleyGroup::from_table(&self.name(), table)
            }
        }
    }
}

/// Admissible branching data for one factor: the covering curve's genus and
/// the nondecreasing list of branching indices of the cover of the line.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FactorType {
    pub genus: u64,
    pub branch_indices: Vec<u64>,
}

/// One candidate shape of a three-curve quotient: a common group order and
/// per-factor branching data, factors sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeTuple {
    pub group_order: u64,
    pub factors: Vec<FactorType>,
}

impl TypeTuple {
    pub fn genera(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.genus).collect()
    }

    pub fn types(&self) -> Vec<Vec<u64>> {
        self.factors
            .iter()
            .map(|f| f.branch_indices.clone())
            .collect()
    }
}

/// All branching data over the line for group order `n` with covering genus
/// in 2..=g_max: nondecreasing divisor lists m with every m dividing n,
/// m ≤ 4g + 2, r ≤ 4(g−1)/n + 4, and the Riemann–Hurwitz count
/// 2g − 2 = n(−2 + Σ(m−1)/m) landing on an integer genus in range.
fn factor_types(n: u64, g_max: u64, r_exact: Option<usize>) -> Vec<FactorType> {
    let divisors: Vec<u64> = (2..=n).filter(|m| n % m == 0).collect();
    // r ≤ 4(g−1)/n + 4 with g ≤ g_max caps the list length
    let r_cap = (4 * (g_max - 1) / n + 4) as usize;
    let r_range: Vec<usize> = match r_exact {
        Some(r) => {
            if r <= r_cap {
                vec![r]
            } else {
                Vec::new()
            }
        }
        None => (0..=r_cap).collect(),
    };
    let mut out = Vec::new();
    for r in r_range {
        let mut stack: Vec<u64> = Vec::with_capacity(r);
        // ramification = Σ (n/m)(m−1), an integer since every m divides n
        dfs_types(n, g_max, r, &divisors, &mut stack, 0, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

fn dfs_types(
    n: u64,
    g_max: u64,
    r: usize,
    divisors: &[u64],
    stack: &mut Vec<u64>,
    ramification: u64,
    out: &mut Vec<FactorType>,
) {
    if stack.len() == r {
        // 2g − 2 = −2n + ramification
        let rhs = ramification as i64 - 2 * n as i64;
        if rhs < 2 || rhs % 2 != 0 {
            return;
        }
        let g = (rhs + 2) as u64 / 2;
        if g < 2 || g > g_max {
            return;
        }
        if stack.iter().any(|&m| m > 4 * g + 2) {
            return;
        }
        if (n as usize) * r > (4 * n + 4 * g - 4) as usize {
            return;
        }
        out.push(FactorType {
            genus: g,
            branch_indices: stack.clone(),
        });
        return;
    }
    let remaining = (r - stack.len()) as u64;
    // every further index contributes at least (n/m)(m−1) ≥ the current
    // floor and less than n, which brackets the reachable genus range
    let floor = stack.last().copied().unwrap_or(2);
    let min_term = (n / floor) * (floor - 1);
    let max_total = ramification + remaining * n;
    let min_total = ramification + remaining * min_term;
    if (max_total as i64) - 2 * (n as i64) < 2 {
        return;
    }
    if (min_total as i64) - 2 * (n as i64) > (2 * g_max - 2) as i64 {
        return;
    }
    for &m in divisors.iter().filter(|&&m| m >= floor) {
        stack.push(m);
        dfs_types(
            n,
            g_max,
            r,
            divisors,
            stack,
            ramification + (n / m) * (m - 1),
            out,
        );
        stack.pop();
    }
}

/// Enumerate every admissible three-factor type tuple with genera bounded
/// by `g_max` and group order up to the automorphism bound 84(g_max − 1).
/// `r_exact` restricts every factor to exactly that many branch points.
pub fn enumerate_types(g_max: u64, r_exact: Option<usize>) -> Result<Vec<TypeTuple>> {
    if g_max < 2 {
        return Err(Error::usage("the genus bound must be at least 2"));
    }
    let mut out = Vec::new();
    for n in 2..=84 * (g_max - 1) {
        let types = factor_types(n, g_max, r_exact);
        if types.is_empty() {
            continue;
        }
        // unordered triples with repetition, factors ascending
        for i in 0..types.len() {
            for j in i..types.len() {
                for k in j..types.len() {
                    out.push(TypeTuple {
                        group_order: n,
                        factors: vec![
                            types[i].clone(),
                            types[j].clone(),
                            types[k].clone(),
                        ],
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Re-check every constraint on a tuple with rational arithmetic;
/// deliberately separate from the integer search path.
pub fn verify_tuple(t: &TypeTuple, g_max: u64) -> bool {
    if t.factors.len() != 3 || t.group_order > 84 * (g_max - 1) {
        return false;
    }
    let n = BigRational::from(BigInt::from(t.group_order));
    for f in &t.factors {
        if f.genus < 2 || f.genus > g_max {
            return false;
        }
        let mut sum = BigRational::from(BigInt::from(-2));
        for &m in &f.branch_indices {
            if m < 2 || m > 4 * f.genus + 2 || t.group_order % m != 0 {
                return false;
            }
            sum += BigRational::new(BigInt::from(m - 1), BigInt::from(m));
        }
        if n.clone() * sum != BigRational::from(BigInt::from(2 * f.genus as i64 - 2)) {
            return false;
        }
        let r_bound = BigRational::new(
            BigInt::from(4 * (f.genus - 1)),
            BigInt::from(t.group_order),
        ) + BigRational::from(BigInt::from(4));
        if BigRational::from(BigInt::from(f.branch_indices.len() as u64)) > r_bound {
            return false;
        }
        let mut sorted = f.branch_indices.clone();
        sorted.sort();
        if sorted != f.branch_indices {
            return false;
        }
    }
    true
}

/// A realization of one branching type: elements of the prescribed orders,
/// product the identity, generating the whole group.  Indices refer to the
/// group's multiplication table.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratingVector {
    pub elements: Vec<usize>,
    pub orders: Vec<u64>,
}

/// Search for the first generating vector of the given type, trying the
/// first r − 1 elements in table order and forcing the last to the inverse
/// of their product.  Returns None when no vector exists.
pub fn generating_vectors(
    group: &GroupSpec,
    branch_indices: &[u64],
) -> Result<Option<GeneratingVector>> {
    search_vectors(group, branch_indices, true).map(|(first, _)| first)
}

/// Exhaustive count of generating vectors of the given type.
pub fn count_generating_vectors(group: &GroupSpec, branch_indices: &[u64]) -> Result<u64> {
    search_vectors(group, branch_indices, false).map(|(_, count)| count)
}

fn search_vectors(
    group: &GroupSpec,
    branch_indices: &[u64],
    stop_at_first: bool,
) -> Result<(Option<GeneratingVector>, u64)> {
    let r = branch_indices.len();
    if r > 4 {
        return Err(Error::usage(
            "generating-vector search is limited to at most 4 branch points",
        ));
    }
    if branch_indices.iter().any(|&m| m < 2) {
        return Err(Error::usage("branching indices must be at least 2"));
    }
    let table = group.to_table()?;
    if r == 0 {
        // an unramified vector generates only the trivial group
        return Ok(if table.size() == 1 {
            (
                Some(GeneratingVector {
                    elements: vec![],
                    orders: vec![],
                }),
                1,
            )
        } else {
            (None, 0)
        });
    }
    let candidates: Vec<Vec<usize>> = branch_indices
        .iter()
        .take(r - 1)
        .map(|&m| table.elements_of_order(m))
        .collect();
    let last_order = branch_indices[r - 1];
    let mut first = None;
    let mut count = 0u64;
    let mut tuple = vec![0usize; r];
    let mut cursor = vec![0usize; r.saturating_sub(1)];
    'outer: loop {
        // assemble the prefix product for the current cursor
        let mut prod = 0usize;
        let mut valid = true;
        for (j, c) in candidates.iter().enumerate() {
            if c.is_empty() {
                valid = false;
                break;
            }
            tuple[j] = c[cursor[j]];
            prod = table.mul(prod, tuple[j]);
        }
        if !valid {
            break;
        }
        let last = table.inv(prod);
        if table.order_of(last) == last_order {
            tuple[r - 1] = last;
            if table.generates(&tuple) {
                count += 1;
                if first.is_none() {
                    first = Some(GeneratingVector {
                        elements: tuple.clone(),
                        orders: branch_indices.to_vec(),
                    });
                    if stop_at_first {
                        break;
                    }
                }
            }
        }
        if r == 1 {
            break;
        }
        // advance the mixed-radix cursor over the candidate lists
        let mut j = r - 1;
        loop {
            if j == 0 {
                break 'outer;
            }
            j -= 1;
            cursor[j] += 1;
            if cursor[j] < candidates[j].len() {
                break;
            }
            cursor[j] = 0;
        }
    }
    Ok((first, count))
}

/// Re-verify a claimed generating vector against the group.
pub fn verify_vector(group: &GroupSpec, v: &GeneratingVector) -> Result<bool> {
    let table = group.to_table()?;
    if v.elements.len() != v.orders.len() {
        return Ok(false);
    }
    for (&e, &m) in v.elements.iter().zip(&v.orders) {
        if e >= table.size() || table.order_of(e) != m {
            return Ok(false);
        }
    }
    let prod = v.elements.iter().fold(0usize, |p, &e| table.mul(p, e));
    Ok(prod == 0 && (table.size() == 1 || table.generates(&v.elements)))
}

/// A type tuple together with a group of the right order that realizes all
/// three factors.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateRecord {
    pub group_name: String,
    pub group_order: u64,
    pub tuple: TypeTuple,
    pub witnesses: Vec<GeneratingVector>,
}

/// Join the type enumeration with the existence search: for every tuple and
/// every supplied group of matching order, report the tuples all of whose
/// factors admit generating vectors.
pub fn classify_candidates(
    g_max: u64,
    r_exact: Option<usize>,
    groups: &[GroupSpec],
) -> Result<Vec<CandidateRecord>> {
    let tuples = enumerate_types(g_max, r_exact)?;
    let mut out = Vec::new();
    for (gi, group) in groups.iter().enumerate() {
        let mut memo: HashMap<Vec<u64>, Option<GeneratingVector>> = HashMap::new();
        for t in &tuples {
            if t.group_order != group.size() {
                continue;
            }
            let mut witnesses = Vec::with_capacity(3);
            let mut ok = true;
            for f in &t.factors {
                let found = match memo.get(&f.branch_indices) {
                    Some(cached) => cached.clone(),
                    None => {
                        let v = generating_vectors(group, &f.branch_indices)?;
                        memo.insert(f.branch_indices.clone(), v.clone());
                        v
                    }
                };
                match found {
                    Some(w) => witnesses.push(w),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                out.push(CandidateRecord {
                    group_name: format!("{}#{}", group.name(), gi),
                    group_order: t.group_order,
                    tuple: t.clone(),
                    witnesses,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn(n: u64) -> GroupSpec {
        GroupSpec::Abelian(AbelianGroup::new(vec![n]).unwrap())
    }

    fn tuple(n: u64, rows: &[(u64, &[u64])]) -> TypeTuple {
        TypeTuple {
            group_order: n,
            factors: rows
                .iter()
                .map(|(g, t)| FactorType {
                    genus: *g,
                    branch_indices: t.to_vec(),
                })
                .collect(),
        }
    }

    #[test]
    fn smallest_enumeration_contains_the_order_six_tuple() {
        let ts = enumerate_types(2, Some(3)).unwrap();
        let want = tuple(6, &[(2, &[3, 6, 6]), (2, &[3, 6, 6]), (2, &[3, 6, 6])]);
        assert!(ts.contains(&want));
        for t in &ts {
            assert!(verify_tuple(t, 2), "constraint violated by {:?}", t);
        }
    }

    #[test]
    fn order_eight_tuple_needs_genus_three() {
        let ts = enumerate_types(3, Some(3)).unwrap();
        let want = tuple(8, &[(2, &[2, 8, 8]), (2, &[2, 8, 8]), (3, &[4, 8, 8])]);
        assert!(ts.contains(&want));
    }

    #[test]
    fn full_run_contains_all_twelve_reference_rows() {
        let ts = enumerate_types(6, Some(3)).unwrap();
        let rows: Vec<TypeTuple> = vec![
            tuple(6, &[(2, &[3, 6, 6]), (2, &[3, 6, 6]), (2, &[3, 6, 6])]),
            tuple(8, &[(2, &[2, 8, 8]), (2, &[2, 8, 8]), (3, &[4, 8, 8])]),
            tuple(10, &[(2, &[2, 5, 10]), (2, &[2, 5, 10]), (4, &[5, 10, 10])]),
            tuple(12, &[(3, &[2, 12, 12]), (3, &[2, 12, 12]), (3, &[3, 4, 12])]),
            tuple(32, &[(3, &[2, 4, 8]), (3, &[2, 4, 8]), (3, &[2, 4, 8])]),
            tuple(64, &[(5, &[2, 4, 8]), (5, &[2, 4, 8]), (5, &[2, 4, 8])]),
            tuple(72, &[(4, &[2, 3, 12]), (4, &[2, 3, 12]), (4, &[2, 3, 12])]),
            tuple(80, &[(5, &[2, 5, 5]), (5, &[2, 5, 5]), (5, &[2, 5, 5])]),
            tuple(96, &[(3, &[2, 3, 8]), (3, &[2, 3, 8]), (3, &[2, 3, 8])]),
            tuple(168, &[(3, &[2, 3, 7]), (3, &[2, 3, 7]), (3, &[2, 3, 7])]),
            tuple(192, &[(5, &[2, 3, 8]), (5, &[2, 3, 8]), (5, &[2, 3, 8])]),
        ];
        for row in &rows {
            assert!(ts.contains(row), "missing {:?}", row);
        }
        for t in &ts {
            assert!(verify_tuple(t, 6), "constraint violated by {:?}", t);
        }
    }

    #[test]
    fn no_tuple_with_all_indices_two_at_three_points() {
        let ts = enumerate_types(6, Some(3)).unwrap();
        assert!(ts.iter().all(|t| t
            .factors
            .iter()
            .all(|f| f.branch_indices != vec![2, 2, 2])));
    }

    #[test]
    fn unramified_enumeration_is_empty() {
        assert!(enumerate_types(2, Some(0)).unwrap().is_empty());
    }

    #[test]
    fn hyperelliptic_boundary_appears_without_r_filter() {
        let ts = enumerate_types(2, None).unwrap();
        assert!(ts.iter().any(|t| t.group_order == 2
            && t.factors[0].branch_indices == vec![2; 6]));
    }

    #[test]
    fn cyclic_witnesses_match_hand_search() {
        let w = generating_vectors(&zn(6), &[3, 6, 6]).unwrap().unwrap();
        assert_eq!(w.elements, vec![2, 5, 5]);
        let w8 = generating_vectors(&zn(8), &[2, 8, 8]).unwrap().unwrap();
        assert_eq!(w8.elements, vec![4, 1, 3]);
        assert!(generating_vectors(&zn(8), &[3, 8, 8]).unwrap().is_none());
        assert!(generating_vectors(&zn(8), &[4, 8, 8]).unwrap().is_some());
    }

    #[test]
    fn witnesses_reverify() {
        for (n, t) in [
            (6u64, vec![3u64, 6, 6]),
            (8, vec![2, 8, 8]),
            (8, vec![4, 8, 8]),
            (10, vec![2, 5, 10]),
            (10, vec![5, 10, 10]),
            (12, vec![2, 12, 12]),
            (12, vec![3, 4, 12]),
        ] {
            let g = zn(n);
            let w = generating_vectors(&g, &t).unwrap().unwrap();
            assert!(verify_vector(&g, &w).unwrap(), "invalid witness for {:?}", t);
        }
    }

    #[test]
    fn dihedral_group_realizes_mixed_type() {
        let d4 = CayleyGroup::from_permutations(
            "D4",
            &[vec![1, 2, 3, 0], vec![3, 2, 1, 0]],
        )
        .unwrap();
        let g = GroupSpec::Table(d4);
        assert_eq!(g.size(), 8);
        let w = generating_vectors(&g, &[2, 2, 4]).unwrap();
        assert!(w.is_some());
        assert!(verify_vector(&g, &w.unwrap()).unwrap());
        assert!(generating_vectors(&g, &[4, 4, 4]).unwrap().is_none());
    }

    #[test]
    fn candidate_join_matches_reference_rows_one_to_four() {
        let groups = vec![zn(6), zn(8), zn(10), zn(12)];
        let records = classify_candidates(6, Some(3), &groups).unwrap();
        let mut found: Vec<(u64, Vec<Vec<u64>>)> = records
            .iter()
            .map(|r| (r.group_order, r.tuple.types()))
            .collect();
        found.dedup();
        let expected: Vec<(u64, Vec<Vec<u64>>)> = vec![
            (6, vec![vec![3, 6, 6]; 3]),
            (8, vec![vec![2, 8, 8], vec![2, 8, 8], vec![4, 8, 8]]),
            (10, vec![vec![2, 5, 10], vec![2, 5, 10], vec![5, 10, 10]]),
            (12, vec![vec![2, 12, 12], vec![2, 12, 12], vec![3, 4, 12]]),
        ];
        for e in &expected {
            assert!(found.contains(e), "missing candidate {:?}", e);
        }
        for r in &records {
            for w in &r.witnesses {
                let group = groups
                    .iter()
                    .find(|g| g.size() == r.group_order)
                    .unwrap();
                assert!(verify_vector(group, w).unwrap());
            }
        }
    }

    #[test]
    fn empty_group_list_yields_nothing() {
        assert!(classify_candidates(2, Some(3), &[]).unwrap().is_empty());
    }

    /// Existence of a cyclic generating vector with rational quotient is
    /// equivalent to: all indices divide n, their pairwise lcm over any
    /// r − 1 of them is n, and the indices attaining the full power of two
    /// in n are even in number.
    #[test]
    fn cyclic_search_agrees_with_congruence_characterization() {
        fn v2(mut x: u64) -> u32 {
            let mut k = 0;
            while x % 2 == 0 {
                x /= 2;
                k += 1;
            }
            k
        }
        fn lcm(a: u64, b: u64) -> u64 {
            a / num::integer::gcd(a, b) * b
        }
        for n in 2..=24u64 {
            let g = zn(n);
            let divisors: Vec<u64> = (2..=n).filter(|m| n % m == 0).collect();
            for i in 0..divisors.len() {
                for j in i..divisors.len() {
                    for k in j..divisors.len() {
                        let t = [divisors[i], divisors[j], divisors[k]];
                        let full = t.iter().fold(1u64, |l, &m| lcm(l, m));
                        let drop_one_ok = (0..3).all(|skip| {
                            let l = t
                                .iter()
                                .enumerate()
                                .filter(|&(idx, _)| idx != skip)
                                .fold(1u64, |l, (_, &m)| lcm(l, m));
                            l == n
                        });
                        let parity_ok = n % 2 == 1
                            || t.iter().filter(|&&m| v2(m) == v2(n)).count() % 2 == 0;
                        let predicted = full == n && drop_one_ok && parity_ok;
                        let found =
                            generating_vectors(&g, &t).unwrap().is_some();
                        assert_eq!(
                            found, predicted,
                            "n = {}, type {:?}: search {} vs characterization {}",
                            n, t, found, predicted
                        );
                    }
                }
            }
        }
    }
}
