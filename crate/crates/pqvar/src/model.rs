//! Products of curves with a diagonal abelian action: model validation,
//! the singular locus of the quotient with exact cyclic types, and the
//! Hodge-theoretic invariants obtained by character counting.

use num::integer::gcd;
use num::{BigInt, BigRational, Zero};
use serde::Serialize;

use crate::curve::{validate_marked_orbit, ActionSpec, MarkedOrbit, WeightedCurve};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};
use crate::singularity::{CyclicSingularityType, ReidTaiClass};

/// One curve factor together with the group action on its canonical ring
/// and the complete list of marked orbits of points with nontrivial
/// stabilizer.
#[derive(Clone, Debug)]
pub struct Factor {
    pub curve: WeightedCurve,
    pub action: ActionSpec,
    pub orbits: Vec<MarkedOrbit>,
}

/// A quotient of a product of curves by a finite abelian group acting
/// diagonally.  Construction validates the entire data set: equation
/// semi-invariance, faithfulness on each factor, every marked orbit's local
/// data, orbit sizes, and the Riemann–Hurwitz count that certifies the orbit
/// lists are complete.
#[derive(Clone, Debug)]
pub struct ProductQuotientModel {
    name: String,
    group: AbelianGroup,
    factors: Vec<Factor>,
}

/// One class of singular points of the quotient: the same tuple of marked
/// orbits yields `count` points, each a cyclic quotient singularity whose
/// weights are listed in factor order (the engine's chart order).
#[derive(Clone, Debug, Serialize)]
pub struct SingularPoint {
    pub orbit_indices: Vec<usize>,
    pub order: u64,
    pub weights: Vec<u64>,
    pub count: u64,
}

impl SingularPoint {
    pub fn raw_type(&self) -> CyclicSingularityType {
        CyclicSingularityType::new(self.order, self.weights.clone()).expect("raw type is valid")
    }
}

/// The full singular locus, in deterministic (orbit-tuple) order.
#[derive(Clone, Debug, Serialize)]
pub struct SingularLocus {
    pub points: Vec<SingularPoint>,
}

impl SingularLocus {
    pub fn total(&self) -> u64 {
        self.points.iter().map(|p| p.count).sum()
    }

    /// Counts aggregated by the canonical form of the singularity type,
    /// sorted by (order, weights).
    pub fn by_canonical_type(&self) -> Vec<(CyclicSingularityType, u64)> {
        let mut agg: Vec<(CyclicSingularityType, u64)> = Vec::new();
        for p in &self.points {
            let canon = p.raw_type().canonical_form();
            match agg.iter_mut().find(|(t, _)| *t == canon) {
                Some((_, c)) => *c += p.count,
                None => agg.push((canon, p.count)),
            }
        }
        agg.sort_by(|a, b| (a.0.m, a.0.weights.clone()).cmp(&(b.0.m, b.0.weights.clone())));
        agg
    }
}

/// Invariant section counts of the canonical bundles: `pg` is the dimension
/// of the invariants of the full tensor product, `q[j-1]` sums the invariant
/// dimensions over all j-element subsets of the factors, and `chi` is the
/// holomorphic Euler characteristic (two factors only).
#[derive(Clone, Debug, Serialize)]
pub struct HodgeInvariants {
    pub pg: u64,
    pub q: Vec<u64>,
    pub chi: Option<i64>,
}

impl HodgeInvariants {
    /// Numerically Calabi–Yau: geometric genus one and all intermediate
    /// invariant counts zero.  Only meaningful for three factors.
    pub fn numerical_cy(&self) -> bool {
        self.pg == 1 && self.q.iter().all(|&x| x == 0)
    }
}

/// Self-intersection of the canonical class: `product` on the (singular)
/// quotient, `resolution` after pulling back to the minimal resolution of
/// the supported singularity types.
#[derive(Clone, Debug)]
pub struct SelfIntersections {
    pub product: i64,
    pub resolution: BigRational,
}

impl ProductQuotientModel {
    pub fn new(name: &str, group: AbelianGroup, factors: Vec<Factor>) -> Result<Self> {
        if !(2..=3).contains(&factors.len()) {
            return Err(Error::usage(format!(
                "model {} has {} factors; two (surface) or three (threefold) are supported",
                name,
                factors.len()
            )));
        }
        let model = ProductQuotientModel {
            name: name.to_string(),
            group,
            factors,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.group.size()
    }

    pub fn dimension(&self) -> usize {
        self.factors.len()
    }

    fn validate(&self) -> Result<()> {
        let g_order = self.order();
        for (fi, f) in self.factors.iter().enumerate() {
            f.action.check_equation_semi_invariant(&self.group, &f.curve)?;
            for d in 1..=2u32 {
                for alpha in f.curve.canonical_monomials(d) {
                    f.action.monomial_character(&self.group, &alpha)?;
                }
            }
            let mut labels: Vec<&str> = f.orbits.iter().map(|o| o.label.as_str()).collect();
            labels.sort();
            labels.dedup();
            if labels.len() != f.orbits.len() {
                return Err(Error::validation(format!(
                    "factor {} of {} has duplicate orbit labels",
                    fi, self.name
                )));
            }
        }
        if let Some((fi, h)) = self.quasi_etale_offender() {
            return Err(Error::validation(format!(
                "group element {:?} acts trivially on factor {} of {}: \
                 the quotient map is not quasi-étale in the required sense",
                h.0, fi, self.name
            )));
        }
        for (fi, f) in self.factors.iter().enumerate() {
            let mut ramification: u128 = 0;
            for o in &f.orbits {
                validate_marked_orbit(&f.curve, &f.action, &self.group, o)?;
                if o.orbit_size * o.stabilizer_order != g_order {
                    return Err(Error::validation(format!(
                        "{} / orbit {}: orbit size {} × stabilizer order {} ≠ group order {}",
                        f.curve.name, o.label, o.orbit_size, o.stabilizer_order, g_order
                    )));
                }
                ramification +=
                    o.orbit_size as u128 * o.multiplicity as u128 * (o.stabilizer_order - 1) as u128;
            }
            // Riemann–Hurwitz for C → C/G certifies the orbit list is
            // complete: 2g−2 = |G|(2g′−2) + Σ size·mult·(stab−1) must admit
            // an integer quotient genus g′ ≥ 0
            let g = f.curve.genus() as i128;
            let numer = 2 * g - 2 - ramification as i128 + 2 * g_order as i128;
            let denom = 2 * g_order as i128;
            if numer < 0 || numer % denom != 0 {
                return Err(Error::validation(format!(
                    "factor {} of {}: marked orbits are inconsistent with any \
                     quotient genus (ramification sum {} against genus {})",
                    fi, self.name, ramification, f.curve.genus()
                )));
            }
        }
        Ok(())
    }

    /// Quotient genus of one factor, available after validation.
    pub fn quotient_genus(&self, factor: usize) -> u64 {
        let f = &self.factors[factor];
        let ram: u128 = f
            .orbits
            .iter()
            .map(|o| o.orbit_size as u128 * o.multiplicity as u128 * (o.stabilizer_order - 1) as u128)
            .sum();
        let numer = 2 * f.curve.genus() as i128 - 2 - ram as i128 + 2 * self.order() as i128;
        (numer / (2 * self.order() as i128)) as u64
    }

    /// The first nontrivial element acting trivially on some factor, if any.
    /// `None` means the action is faithful on every factor, which for a
    /// diagonal action makes the quotient map quasi-étale.
    pub fn quasi_etale_offender(&self) -> Option<(usize, GroupElement)> {
        for h in self.group.elements() {
            if h.0.iter().all(|&e| e == 0) {
                continue;
            }
            for (fi, f) in self.factors.iter().enumerate() {
                if acts_trivially(&f.curve, &f.action, &h) {
                    return Some((fi, h));
                }
            }
        }
        None
    }

    pub fn quasi_etale_check(&self) -> bool {
        self.quasi_etale_offender().is_none()
    }

    /// All classes of singular points of the quotient: one entry per tuple
    /// of marked orbits whose stabilizers intersect nontrivially.
    pub fn singular_locus(&self) -> Result<SingularLocus> {
        let g_order = self.group.size();
        let k = self.factors.len();
        let mut points = Vec::new();
        let mut tuple = vec![0usize; k];
        loop {
            let orbits: Vec<&MarkedOrbit> = tuple
                .iter()
                .enumerate()
                .map(|(f, &o)| &self.factors[f].orbits[o])
                .collect();
            if !orbits.is_empty() {
                let gens: Vec<GroupElement> = orbits
                    .iter()
                    .map(|o| o.stabilizer_generator.clone())
                    .collect();
                let h = self.group.cyclic_intersection(&gens);
                let order = self.group.order_of(&h);
                if order >= 2 {
                    let mut weights = Vec::with_capacity(k);
                    for o in &orbits {
                        let j = self
                            .group
                            .dlog(&o.stabilizer_generator, &h)
                            .ok_or_else(|| {
                                Error::internal(format!(
                                    "intersection generator escapes the stabilizer of orbit {}",
                                    o.label
                                ))
                            })?;
                        let m = o.stabilizer_order;
                        let raw = (j as u128 * o.rotation as u128 % m as u128) as u64;
                        let num = raw as u128 * order as u128;
                        if num % m as u128 != 0 {
                            return Err(Error::internal(format!(
                                "rotation ζ^{} of order-{} stabilizer does not restrict to \
                                 the order-{} intersection",
                                raw, m, order
                            )));
                        }
                        let w = ((num / m as u128) % order as u128) as u64;
                        if w == 0 || gcd(w, order) != 1 {
                            return Err(Error::internal(format!(
                                "restricted rotation weight {} is not a unit mod {}",
                                w, order
                            )));
                        }
                        weights.push(w);
                    }
                    let instances: u128 = orbits
                        .iter()
                        .map(|o| o.orbit_size as u128 * o.multiplicity as u128)
                        .product();
                    let num = instances * order as u128;
                    if num % g_order as u128 != 0 {
                        return Err(Error::internal(
                            "orbit product does not split into whole diagonal orbits",
                        ));
                    }
                    points.push(SingularPoint {
                        orbit_indices: tuple.clone(),
                        order,
                        weights,
                        count: (num / g_order as u128) as u64,
                    });
                }
            }
            // next tuple in lexicographic order
            let mut pos = k;
            while pos > 0 {
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < self.factors[pos].orbits.len() {
                    break;
                }
                tuple[pos] = 0;
                if pos == 0 {
                    return Ok(SingularLocus { points });
                }
            }
            if self.factors.iter().any(|f| f.orbits.is_empty()) {
                return Ok(SingularLocus { points });
            }
        }
    }

    fn char_strides(&self) -> Vec<u64> {
        let orders = self.group.orders();
        let mut strides = vec![1u64; orders.len()];
        for j in (0..orders.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * orders[j + 1];
        }
        strides
    }

    fn char_neg(&self, idx: u64) -> u64 {
        let orders = self.group.orders();
        let strides = self.char_strides();
        let mut out = 0u64;
        for j in 0..orders.len() {
            let c = (idx / strides[j]) % orders[j];
            out += ((orders[j] - c) % orders[j]) * strides[j];
        }
        out
    }

    fn char_add(&self, a: u64, b: u64) -> u64 {
        let orders = self.group.orders();
        let strides = self.char_strides();
        let mut out = 0u64;
        for j in 0..orders.len() {
            let ca = (a / strides[j]) % orders[j];
            let cb = (b / strides[j]) % orders[j];
            out += ((ca + cb) % orders[j]) * strides[j];
        }
        out
    }

    /// How many monomials of H⁰(dK) on the given factor carry each character
    /// of the group, indexed by mixed radix over the generator orders.
    pub fn character_counts(&self, factor: usize, d: u32) -> Result<Vec<u64>> {
        let f = &self.factors[factor];
        let strides = self.char_strides();
        let mut counts = vec![0u64; self.group.size() as usize];
        for alpha in f.curve.canonical_monomials(d) {
            let ch = f.action.monomial_character(&self.group, &alpha)?;
            let idx: u64 = ch
                .vals
                .iter()
                .zip(&strides)
                .map(|(&c, &s)| c * s)
                .sum();
            counts[idx as usize] += 1;
        }
        Ok(counts)
    }

    /// Invariant dimension of ⊗ᵢ H⁰(dKᵢ) under the diagonal action.
    pub fn invariant_dimension(&self, d: u32) -> Result<u64> {
        let counts: Vec<Vec<u64>> = (0..self.factors.len())
            .map(|i| self.character_counts(i, d))
            .collect::<Result<_>>()?;
        Ok(match counts.len() {
            2 => self.pair_invariants(&counts[0], &counts[1]),
            3 => self.triple_invariants(&counts[0], &counts[1], &counts[2]),
            _ => unreachable!("factor count validated on construction"),
        })
    }

    fn pair_invariants(&self, a: &[u64], b: &[u64]) -> u64 {
        (0..a.len() as u64)
            .map(|c| a[c as usize] * b[self.char_neg(c) as usize])
            .sum()
    }

    fn triple_invariants(&self, a: &[u64], b: &[u64], c: &[u64]) -> u64 {
        let mut total = 0u64;
        for ia in 0..a.len() as u64 {
            if a[ia as usize] == 0 {
                continue;
            }
            for ib in 0..b.len() as u64 {
                if b[ib as usize] == 0 {
                    continue;
                }
                let ic = self.char_neg(self.char_add(ia, ib));
                total += a[ia as usize] * b[ib as usize] * c[ic as usize];
            }
        }
        total
    }

    /// Geometric genus, intermediate invariant counts, and (for surfaces)
    /// the holomorphic Euler characteristic of the quotient.
    pub fn hodge_invariants(&self) -> Result<HodgeInvariants> {
        let counts: Vec<Vec<u64>> = (0..self.factors.len())
            .map(|i| self.character_counts(i, 1))
            .collect::<Result<_>>()?;
        let q1: u64 = counts.iter().map(|c| c[0]).sum();
        match counts.len() {
            2 => {
                let pg = self.pair_invariants(&counts[0], &counts[1]);
                let chi = 1 - q1 as i64 + pg as i64;
                Ok(HodgeInvariants {
                    pg,
                    q: vec![q1],
                    chi: Some(chi),
                })
            }
            3 => {
                let q2 = self.pair_invariants(&counts[0], &counts[1])
                    + self.pair_invariants(&counts[0], &counts[2])
                    + self.pair_invariants(&counts[1], &counts[2]);
                let pg = self.triple_invariants(&counts[0], &counts[1], &counts[2]);
                Ok(HodgeInvariants {
                    pg,
                    q: vec![q1, q2],
                    chi: None,
                })
            }
            _ => unreachable!(),
        }
    }

    /// Surfaces only: K² of the quotient and of its minimal resolution.
    /// Supports baskets of cyclic points whose canonical form is 1/m(1,1)
    /// (resolution correction (m−2)²/m) or the zero-correction chains
    /// 1/m(1,m−1); anything else is reported as unsupported.
    pub fn k_squared(&self) -> Result<SelfIntersections> {
        if self.factors.len() != 2 {
            return Err(Error::usage(
                "self-intersection numbers are defined here for two factors",
            ));
        }
        let g1 = self.factors[0].curve.genus() as i128;
        let g2 = self.factors[1].curve.genus() as i128;
        let num = 8 * (g1 - 1) * (g2 - 1);
        if num % self.order() as i128 != 0 {
            return Err(Error::validation(format!(
                "8(g₁−1)(g₂−1) = {} is not divisible by the group order {}",
                num,
                self.order()
            )));
        }
        let k2 = (num / self.order() as i128) as i64;
        let mut correction = BigRational::zero();
        for (t, count) in self.singular_locus()?.by_canonical_type() {
            let w = &t.weights;
            if w == &[1, 1] {
                let c = BigRational::new(
                    BigInt::from((t.m as i64 - 2) * (t.m as i64 - 2)),
                    BigInt::from(t.m),
                );
                correction += c * BigRational::from(BigInt::from(count));
            } else if w.len() == 2 && w[0] == 1 && w[1] == t.m - 1 {
                // chain of (−2)-curves: no correction
            } else {
                return Err(Error::validation(format!(
                    "unsupported basket entry {} for the resolution correction",
                    t
                )));
            }
        }
        let resolution = BigRational::from(BigInt::from(k2)) - correction;
        Ok(SelfIntersections {
            product: k2,
            resolution,
        })
    }

    /// Threefolds only: the numerical Calabi–Yau test (pg, q₂, q₁) = (1,0,0).
    pub fn numerical_cy(&self) -> Result<bool> {
        if self.factors.len() != 3 {
            return Err(Error::usage(
                "the numerical Calabi–Yau test applies to three factors",
            ));
        }
        Ok(self.hodge_invariants()?.numerical_cy())
    }

    /// Stabilizer classes with their local types, restricted to classes
    /// whose type is noncanonical — the points that can impose conditions
    /// on pluricanonical sections.
    pub fn noncanonical_points(&self) -> Result<Vec<SingularPoint>> {
        Ok(self
            .singular_locus()?
            .points
            .into_iter()
            .filter(|p| p.raw_type().reid_tai_class() == ReidTaiClass::Noncanonical)
            .collect())
    }
}

fn acts_trivially(curve: &WeightedCurve, action: &ActionSpec, h: &GroupElement) -> bool {
    let w = action.element_weights(h);
    let m = action.modulus;
    let degs = curve.generator_degrees();
    let anchor = match (0..degs.len()).find(|&i| degs[i] == 1) {
        Some(i) => i,
        None => return false,
    };
    let t = w[anchor];
    (0..degs.len()).all(|i| w[i] == (degs[i] as u128 * t as u128 % m as u128) as u64)
}
