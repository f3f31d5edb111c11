//! The pluricanonical counting engine: invariant monomial sections of the
//! product are filtered through the stalk ideals of the noncanonical
//! singularities, yielding lower bounds (exact where attested) for the
//! plurigenera of a resolution, canonical volume and minimality for
//! surfaces, and a Calabi–Yau verdict for threefolds.

use num::{BigInt, BigRational, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ProductQuotientModel;
use crate::toric::{minimal_basis, negative_rays, MonomialIdeal, RayDatum};

/// Upper bound on the number of witness monomials kept per degree.
pub const WITNESS_CAP: usize = 64;

/// The local condition imposed at one class of noncanonical singular
/// points: a pluricanonical monomial passes iff its vector of vanishing
/// orders along the factors lies in the stalk ideal of the class's type.
#[derive(Clone, Debug)]
pub struct StalkCondition {
    pub label: String,
    pub rays: Vec<RayDatum>,
    pub order_maps: Vec<Vec<u32>>,
    pub point_count: u64,
    pub type_display: String,
}

/// One stalk condition per noncanonical singular class, in locus order.
pub fn stalk_conditions(model: &ProductQuotientModel) -> Result<Vec<StalkCondition>> {
    let mut out = Vec::new();
    for p in model.noncanonical_points()? {
        let t = p.raw_type();
        let rays = negative_rays(&t);
        let order_maps: Vec<Vec<u32>> = p
            .orbit_indices
            .iter()
            .enumerate()
            .map(|(f, &o)| model.factors()[f].orbits[o].vanishing_orders.clone())
            .collect();
        let label = p
            .orbit_indices
            .iter()
            .enumerate()
            .map(|(f, &o)| model.factors()[f].orbits[o].label.clone())
            .collect::<Vec<_>>()
            .join("×");
        out.push(StalkCondition {
            label,
            rays,
            order_maps,
            point_count: p.count,
            type_display: t.to_string(),
        });
    }
    Ok(out)
}

/// An invariant pluricanonical monomial that passed every stalk condition,
/// as one exponent vector per factor.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub exponents: Vec<Vec<u32>>,
    pub display: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlurigenusReport {
    pub d: u32,
    pub invariant_dimension: u64,
    pub count: u64,
    pub conditions: usize,
    pub witnesses: Vec<Witness>,
    pub witnesses_truncated: bool,
}

/// Count the invariant monomials of ⊗ᵢH⁰(dKᵢ) whose vanishing-order vectors
/// lie in every stalk ideal — a lower bound for the d-th plurigenus of a
/// resolution, exact when the model's exactness attestation covers d.
pub fn plurigenus_monomial(model: &ProductQuotientModel, d: u32) -> Result<PlurigenusReport> {
    if d == 0 {
        return Err(Error::usage("plurigenus degree must be positive"));
    }
    let conditions = stalk_conditions(model)?;
    let ideals: Vec<MonomialIdeal> = conditions
        .iter()
        .map(|c| minimal_basis(&c.rays, d))
        .collect::<Result<_>>()?;

    let k = model.factors().len();
    let group_size = model.group().size() as usize;
    let mut monomials: Vec<Vec<Vec<u32>>> = Vec::with_capacity(k);
    let mut chars: Vec<Vec<u64>> = Vec::with_capacity(k);
    for f in model.factors() {
        let ms = f.curve.canonical_monomials(d);
        let cs: Vec<u64> = ms
            .iter()
            .map(|a| {
                let ch = f.action.monomial_character(model.group(), a)?;
                Ok(char_index(model, &ch.vals))
            })
            .collect::<Result<_>>()?;
        monomials.push(ms);
        chars.push(cs);
    }
    // bucket the last factor by character
    let last = k - 1;
    let mut bucket: Vec<Vec<usize>> = vec![Vec::new(); group_size];
    for (i, &c) in chars[last].iter().enumerate() {
        bucket[c as usize].push(i);
    }

    let passes = |tuple: &[usize]| -> Result<bool> {
        for (cond, ideal) in conditions.iter().zip(&ideals) {
            let orders: Vec<u32> = tuple
                .iter()
                .enumerate()
                .map(|(f, &i)| {
                    monomials[f][i]
                        .iter()
                        .zip(&cond.order_maps[f])
                        .map(|(&e, &o)| e as u64 * o as u64)
                        .sum::<u64>() as u32
                })
                .collect();
            if !ideal.member(&orders)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let witness = |tuple: &[usize]| -> Witness {
        let alphas: Vec<&Vec<u32>> =
            tuple.iter().enumerate().map(|(f, &i)| &monomials[f][i]).collect();
        Witness {
            exponents: alphas.iter().map(|a| (*a).clone()).collect(),
            display: alphas
                .iter()
                .enumerate()
                .map(|(f, a)| model.factors()[f].curve.format_monomial(a))
                .collect::<Vec<_>>()
                .join(" ⊗ "),
        }
    };

    // parallel over the first factor; partial results merge in index order
    // so the witness list is deterministic
    let partials: Result<Vec<(u64, Vec<Witness>)>> = (0..monomials[0].len())
        .into_par_iter()
        .map(|i0| {
            let mut local_count = 0u64;
            let mut local_witnesses = Vec::new();
            let mut take = |tuple: &[usize]| -> Result<()> {
                if passes(tuple)? {
                    local_count += 1;
                    if local_witnesses.len() < WITNESS_CAP {
                        local_witnesses.push(witness(tuple));
                    }
                }
                Ok(())
            };
            match k {
                2 => {
                    let needed = char_neg_index(model, chars[0][i0]);
                    for &i1 in &bucket[needed as usize] {
                        take(&[i0, i1])?;
                    }
                }
                3 => {
                    for i1 in 0..monomials[1].len() {
                        let sum = char_add_index(model, chars[0][i0], chars[1][i1]);
                        let needed = char_neg_index(model, sum);
                        for &i2 in &bucket[needed as usize] {
                            take(&[i0, i1, i2])?;
                        }
                    }
                }
                _ => unreachable!("factor count validated on construction"),
            }
            Ok((local_count, local_witnesses))
        })
        .collect();

    let mut count = 0u64;
    let mut witnesses = Vec::new();
    for (local_count, local_witnesses) in partials? {
        count += local_count;
        for w in local_witnesses {
            if witnesses.len() < WITNESS_CAP {
                witnesses.push(w);
            }
        }
    }
    let truncated = count > witnesses.len() as u64;

    Ok(PlurigenusReport {
        d,
        invariant_dimension: model.invariant_dimension(d)?,
        count,
        conditions: conditions.len(),
        witnesses,
        witnesses_truncated: truncated,
    })
}

fn char_strides(model: &ProductQuotientModel) -> Vec<u64> {
    let orders = model.group().orders();
    let mut strides = vec![1u64; orders.len()];
    for j in (0..orders.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * orders[j + 1];
    }
    strides
}

fn char_index(model: &ProductQuotientModel, vals: &[u64]) -> u64 {
    vals.iter()
        .zip(char_strides(model))
        .map(|(&c, s)| c * s)
        .sum()
}

fn char_neg_index(model: &ProductQuotientModel, idx: u64) -> u64 {
    let orders = model.group().orders();
    let strides = char_strides(model);
    let mut out = 0u64;
    for j in 0..orders.len() {
        let c = (idx / strides[j]) % orders[j];
        out += ((orders[j] - c) % orders[j]) * strides[j];
    }
    out
}

fn char_add_index(model: &ProductQuotientModel, a: u64, b: u64) -> u64 {
    let orders = model.group().orders();
    let strides = char_strides(model);
    let mut out = 0u64;
    for j in 0..orders.len() {
        let ca = (a / strides[j]) % orders[j];
        let cb = (b / strides[j]) % orders[j];
        out += ((ca + cb) % orders[j]) * strides[j];
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CodimensionReport {
    pub invariant_dimension: u64,
    pub count: u64,
    pub codimension: u64,
}

/// How many invariant bicanonical monomials the stalk ideals cut out.
pub fn codimension_check(model: &ProductQuotientModel) -> Result<CodimensionReport> {
    let rep = plurigenus_monomial(model, 2)?;
    Ok(CodimensionReport {
        invariant_dimension: rep.invariant_dimension,
        count: rep.count,
        codimension: rep.invariant_dimension - rep.count,
    })
}

/// Which degrees the monomial count is certified to be the exact plurigenus
/// for, with the mathematical reason recorded as free text.
#[derive(Clone, Debug, Serialize)]
pub struct Exactness {
    pub claim: ExactnessClaim,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ExactnessClaim {
    None,
    Degrees(Vec<u32>),
    All,
}

impl Exactness {
    pub fn none(reason: &str) -> Self {
        Exactness {
            claim: ExactnessClaim::None,
            reason: reason.to_string(),
        }
    }

    pub fn degrees(ds: &[u32], reason: &str) -> Self {
        Exactness {
            claim: ExactnessClaim::Degrees(ds.to_vec()),
            reason: reason.to_string(),
        }
    }

    pub fn all(reason: &str) -> Self {
        Exactness {
            claim: ExactnessClaim::All,
            reason: reason.to_string(),
        }
    }

    pub fn attests(&self, d: u32) -> bool {
        match &self.claim {
            ExactnessClaim::None => false,
            ExactnessClaim::Degrees(v) => v.contains(&d),
            ExactnessClaim::All => true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CyVerdict {
    /// The model is not a numerically Calabi–Yau threefold to begin with.
    NotApplicable { reason: String },
    /// Some plurigenus lower bound exceeds one: certified not Calabi–Yau.
    /// `kappa_at_least_two` is set when at least three witnesses each use a
    /// generator that no other witness uses, so the pluricanonical image
    /// cannot collapse to a point or a curve.
    NotCy {
        d: u32,
        count: u64,
        witnesses: Vec<Witness>,
        kappa_at_least_two: bool,
    },
    /// Every count up to d_max is one and the counts are attested exact.
    ConsistentCy { d_max: u32 },
    /// Counts do not contradict Calabi–Yau but are not attested exact, or a
    /// count vanished; the monomial method alone cannot decide.
    Inconclusive { d: u32, count: u64, reason: String },
}

/// Decide the Calabi–Yau status of a threefold model from the monomial
/// plurigenus counts for d = 1..=d_max.
pub fn cy_verdict(
    model: &ProductQuotientModel,
    exactness: &Exactness,
    d_max: u32,
) -> Result<CyVerdict> {
    if model.dimension() != 3 {
        return Err(Error::usage(
            "the Calabi–Yau verdict is defined for three-factor models",
        ));
    }
    if d_max == 0 {
        return Err(Error::usage("verdict needs at least degree 1"));
    }
    let hodge = model.hodge_invariants()?;
    if !hodge.numerical_cy() {
        return Ok(CyVerdict::NotApplicable {
            reason: format!(
                "invariants (pg, q₂, q₁) = ({}, {}, {}) differ from (1, 0, 0)",
                hodge.pg, hodge.q[1], hodge.q[0]
            ),
        });
    }
    let mut reports = Vec::with_capacity(d_max as usize);
    for d in 1..=d_max {
        let rep = plurigenus_monomial(model, d)?;
        if rep.count >= 2 {
            let kappa = has_three_private_witnesses(&rep.witnesses);
            return Ok(CyVerdict::NotCy {
                d,
                count: rep.count,
                witnesses: rep.witnesses,
                kappa_at_least_two: kappa,
            });
        }
        reports.push(rep);
    }
    for rep in &reports {
        if rep.count == 0 {
            return Ok(CyVerdict::Inconclusive {
                d: rep.d,
                count: 0,
                reason: format!(
                    "no invariant monomial survives the stalk ideals at degree {}; \
                     the monomial basis cannot certify a trivial canonical class",
                    rep.d
                ),
            });
        }
        if !exactness.attests(rep.d) {
            return Ok(CyVerdict::Inconclusive {
                d: rep.d,
                count: 1,
                reason: format!(
                    "count 1 at degree {} is only a lower bound: no exactness \
                     attestation covers this degree",
                    rep.d
                ),
            });
        }
    }
    Ok(CyVerdict::ConsistentCy { d_max })
}

/// True when at least three witnesses each contain, in some factor, a
/// generator with positive exponent that every other witness avoids.
fn has_three_private_witnesses(witnesses: &[Witness]) -> bool {
    let mut private = 0;
    for (wi, w) in witnesses.iter().enumerate() {
        let mut found = false;
        'outer: for (f, alpha) in w.exponents.iter().enumerate() {
            for (j, &e) in alpha.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if witnesses
                    .iter()
                    .enumerate()
                    .all(|(oi, o)| oi == wi || o.exponents[f][j] == 0)
                {
                    found = true;
                    break 'outer;
                }
            }
        }
        if found {
            private += 1;
            if private >= 3 {
                return true;
            }
        }
    }
    false
}

#[derive(Clone, Debug)]
pub struct VolumeReport {
    pub p2: u64,
    pub q: u64,
    pub pg: u64,
    pub volume: i64,
    pub k2_product: i64,
    pub k2_resolution: BigRational,
    pub excess: BigRational,
    pub minimal: bool,
    pub p3_checked: bool,
}

/// Canonical volume of a two-factor quotient from the bicanonical count,
/// and minimality of the resolution by comparison with K̂².  Requires
/// K̂² > 0 and a nonzero bicanonical count; with `check_p3` the identity
/// (P₃ − P₂)/2 = volume is verified as well.
pub fn volume_and_minimality(
    model: &ProductQuotientModel,
    check_p3: bool,
) -> Result<VolumeReport> {
    if model.dimension() != 2 {
        return Err(Error::usage(
            "canonical volume is computed for two-factor models",
        ));
    }
    let k = model.k_squared()?;
    if k.resolution <= BigRational::zero() {
        return Err(Error::validation(format!(
            "K̂² = {} is not positive: the volume argument does not apply",
            k.resolution
        )));
    }
    let hodge = model.hodge_invariants()?;
    let p2 = plurigenus_monomial(model, 2)?.count;
    if p2 == 0 {
        return Err(Error::validation(
            "bicanonical count is zero: the volume argument does not apply",
        ));
    }
    let volume = p2 as i64 + hodge.q[0] as i64 - hodge.pg as i64 - 1;
    if check_p3 {
        let p3 = plurigenus_monomial(model, 3)?.count;
        if p3 as i64 - p2 as i64 != 2 * volume {
            return Err(Error::validation(format!(
                "plurigenus cross-check failed: P₃ − P₂ = {} but 2·volume = {}",
                p3 as i64 - p2 as i64,
                2 * volume
            )));
        }
    }
    let excess = BigRational::from(BigInt::from(volume)) - k.resolution.clone();
    if excess < BigRational::zero() {
        return Err(Error::validation(format!(
            "volume {} is smaller than K̂² = {}: inconsistent data",
            volume, k.resolution
        )));
    }
    Ok(VolumeReport {
        p2,
        q: hodge.q[0],
        pg: hodge.pg,
        volume,
        k2_product: k.product,
        k2_resolution: k.resolution.clone(),
        excess: excess.clone(),
        minimal: excess.is_zero(),
        p3_checked: check_p3,
    })
}
