//! Built-in reference models: a rigid Calabi–Yau candidate threefold, a
//! threefold that passes the numerical Calabi–Yau test but carries too many
//! bicanonical sections, and the family of surfaces built from two Fermat
//! curves of degree b².

use crate::curve::{basis_change, ActionSpec, MarkedOrbit, WeightedCurve};
use crate::cyclotomic::{rat_int, Cyclotomic};
use crate::engine::Exactness;
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::model::{Factor, ProductQuotientModel};

fn one() -> Cyclotomic {
    Cyclotomic::one(1)
}

fn neg_one() -> Cyclotomic {
    Cyclotomic::from_rational(rat_int(-1))
}

fn zero() -> Cyclotomic {
    Cyclotomic::zero(1)
}

fn orbit(
    label: &str,
    representative: Vec<Cyclotomic>,
    group: &AbelianGroup,
    stabilizer: &[i64],
    stabilizer_order: u64,
    rotation: u64,
    orbit_size: u64,
    multiplicity: u64,
    vanishing_orders: Vec<u32>,
) -> Result<MarkedOrbit> {
    Ok(MarkedOrbit {
        label: label.to_string(),
        representative,
        stabilizer_generator: group.element(stabilizer)?,
        stabilizer_order,
        rotation,
        orbit_size,
        multiplicity,
        vanishing_orders,
    })
}

/// Z/6 acting on three copies of the genus-2 curve y² = x0⁶ + x1⁶: the
/// quotient is a rigid numerically Calabi–Yau threefold.
pub fn z6_cy3() -> Result<ProductQuotientModel> {
    let curve = WeightedCurve::new(
        "y2_x0^6_x1^6",
        vec!["x0".into(), "x1".into(), "y".into()],
        vec![1, 1, 3],
        1,
        vec![
            (one(), vec![0, 0, 2]),
            (neg_one(), vec![6, 0, 0]),
            (neg_one(), vec![0, 6, 0]),
        ],
        vec![None, None, Some(1)],
    )?;
    let group = AbelianGroup::new(vec![6])?;
    let action = ActionSpec::new(6, vec![vec![1, 2, 3]])?;
    let orbits = vec![
        orbit(
            "p01",
            vec![one(), zero(), one()],
            &group,
            &[1],
            6,
            1,
            1,
            2,
            vec![0, 1, 0],
        )?,
        orbit(
            "p23",
            vec![zero(), one(), one()],
            &group,
            &[2],
            3,
            2,
            2,
            1,
            vec![1, 0, 0],
        )?,
    ];
    let factor = Factor {
        curve,
        action,
        orbits,
    };
    ProductQuotientModel::new(
        "z6_cy3",
        group,
        vec![factor.clone(), factor.clone(), factor],
    )
}

/// Z/8 acting on C × C × C′ with C: y² = x0⁵x1 + x0x1⁵ (genus 2) and
/// C′: y² = x0⁸ + x1⁸ (genus 3): numerically Calabi–Yau but of general type.
pub fn z8_fake_cy() -> Result<ProductQuotientModel> {
    let group = AbelianGroup::new(vec![8])?;
    let c2 = WeightedCurve::new(
        "y2_x0^5x1_x0x1^5",
        vec!["x0".into(), "x1".into(), "y".into()],
        vec![1, 1, 3],
        1,
        vec![
            (one(), vec![0, 0, 2]),
            (neg_one(), vec![5, 1, 0]),
            (neg_one(), vec![1, 5, 0]),
        ],
        vec![None, None, Some(1)],
    )?;
    let a2 = ActionSpec::new(8, vec![vec![1, 3, 4]])?;
    let orbits2 = vec![
        orbit(
            "q0",
            vec![zero(), one(), zero()],
            &group,
            &[1],
            8,
            3,
            1,
            1,
            vec![2, 0, 1],
        )?,
        orbit(
            "q1",
            vec![one(), zero(), zero()],
            &group,
            &[1],
            8,
            1,
            1,
            1,
            vec![0, 2, 1],
        )?,
        orbit(
            "p",
            vec![one(), Cyclotomic::root_of_unity(8, 1), zero()],
            &group,
            &[4],
            2,
            1,
            4,
            1,
            vec![0, 0, 1],
        )?,
    ];
    let genus2_factor = Factor {
        curve: c2,
        action: a2,
        orbits: orbits2,
    };

    let c3 = WeightedCurve::new(
        "y2_x0^8_x1^8",
        vec!["x0".into(), "x1".into(), "y".into()],
        vec![1, 1, 4],
        2,
        vec![
            (one(), vec![0, 0, 2]),
            (neg_one(), vec![8, 0, 0]),
            (neg_one(), vec![0, 8, 0]),
        ],
        vec![None, None, Some(1)],
    )?;
    let a3 = ActionSpec::new(16, vec![vec![1, 3, 4]])?;
    let orbits3 = vec![
        orbit(
            "s12",
            vec![one(), zero(), one()],
            &group,
            &[1],
            8,
            1,
            1,
            2,
            vec![0, 1, 0],
        )?,
        orbit(
            "s34",
            vec![zero(), one(), one()],
            &group,
            &[2],
            4,
            3,
            2,
            1,
            vec![1, 0, 0],
        )?,
    ];
    let genus3_factor = Factor {
        curve: c3,
        action: a3,
        orbits: orbits3,
    };

    ProductQuotientModel::new(
        "z8_fake_cy",
        group,
        vec![genus2_factor.clone(), genus2_factor, genus3_factor],
    )
}

/// The surface family: two copies of the Fermat curve of degree n = b² with
/// Z/n × Z/n acting through complementary bases, so that the quotient is a
/// numerical quintic-like surface with b singular points of type 1/b(1,1).
pub fn fermat_surface(b: u64) -> Result<ProductQuotientModel> {
    if !(3..=20).contains(&b) {
        return Err(Error::usage("the Fermat surface family is built for 3 ≤ b ≤ 20"));
    }
    let n = b * b;
    let m = n * (n - 3);
    let ni = n as i64;
    let curve = fermat_curve(n as u32)?;
    let group = AbelianGroup::new(vec![n, n])?;

    let std_rows: Vec<Vec<i64>> = vec![vec![-1, -(ni - 2), -1], vec![-1, -1, -(ni - 2)]];
    let action1 = ActionSpec::new(m, std_rows.clone())?;

    // the second factor carries the standard action of the basis
    // g₂ = g₁h₁ᵇ, h₂ = g₁⁻ᵇh₁⁻¹; rewrite it in terms of (g₁, h₁)
    let old_in_new = basis_change(n, &[vec![1, b as i64], vec![-(b as i64), -1]])?;
    let std_mod: Vec<Vec<u64>> = std_rows
        .iter()
        .map(|r| r.iter().map(|&w| w.rem_euclid(m as i64) as u64).collect())
        .collect();
    let rows2: Vec<Vec<i64>> = (0..2)
        .map(|j| {
            (0..3)
                .map(|i| {
                    let mut acc: u128 = 0;
                    for t in 0..2 {
                        acc += old_in_new[j][t] as u128 * std_mod[t][i] as u128;
                    }
                    (acc % m as u128) as i64
                })
                .collect()
        })
        .collect();
    let action2 = ActionSpec::new(m, rows2)?;

    let eta = Cyclotomic::root_of_unity(2 * n, 1); // ηⁿ = −1
    let rep_a = vec![one(), zero(), eta.clone()];
    let rep_b = vec![one(), eta.clone(), zero()];
    let rep_c = vec![zero(), one(), eta];

    let mk = |labels: [&str; 3], stabs: [Vec<i64>; 3]| -> Result<Vec<MarkedOrbit>> {
        let reps = [rep_a.clone(), rep_b.clone(), rep_c.clone()];
        let orders = [vec![0u32, 1, 0], vec![0, 0, 1], vec![1, 0, 0]];
        (0..3)
            .map(|i| {
                orbit(
                    labels[i],
                    reps[i].clone(),
                    &group,
                    &stabs[i],
                    n,
                    n - 1,
                    n,
                    1,
                    orders[i].clone(),
                )
            })
            .collect()
    };

    let factor1 = Factor {
        curve: curve.clone(),
        action: action1,
        orbits: mk(
            ["A1", "B1", "C1"],
            [
                vec![1, 0],
                vec![0, 1],
                vec![ni - 1, ni - 1],
            ],
        )?,
    };
    let factor2 = Factor {
        curve,
        action: action2,
        orbits: mk(
            ["A2", "B2", "C2"],
            [
                vec![1, b as i64],
                vec![ni - b as i64, ni - 1],
                vec![b as i64 - 1, ni + 1 - b as i64],
            ],
        )?,
    };

    ProductQuotientModel::new(&format!("fermat_b{}", b), group, vec![factor1, factor2])
}

/// The quotient admits a crepant resolution with trivial canonical class,
/// so every plurigenus equals one and the single surviving invariant
/// monomial realizes it in every degree.
pub fn z6_exactness() -> Exactness {
    Exactness::all(
        "a crepant resolution exists and has trivial canonical class; each \
         plurigenus is one and the invariant monomial count attains it",
    )
}

/// No exactness is claimed: the bicanonical witnesses already certify a
/// positive-dimensional pluricanonical image without exact counts.
pub fn z8_exactness() -> Exactness {
    Exactness::none(
        "lower bounds suffice: three independent bicanonical witnesses rule \
         out a trivial canonical class",
    )
}

/// Vanishing on the minimal resolution identifies the bicanonical count
/// with the bicanonical plurigenus; higher degrees are left unattested.
pub fn fermat_exactness() -> Exactness {
    Exactness::degrees(
        &[2],
        "the stalk ideals cut the invariant bicanonical space down to the \
         bicanonical system of the resolution, where vanishing gives equality",
    )
}

fn fermat_curve(n: u32) -> Result<WeightedCurve> {
    WeightedCurve::new(
        &format!("fermat_{}", n),
        vec!["x0".into(), "x1".into(), "x2".into()],
        vec![1, 1, 1],
        n - 3,
        vec![
            (one(), vec![n, 0, 0]),
            (one(), vec![0, n, 0]),
            (one(), vec![0, 0, n]),
        ],
        vec![None, None, Some(n - 1)],
    )
}
