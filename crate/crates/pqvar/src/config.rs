//! Model and group-list configuration: a versioned TOML schema in which
//! every number is exact — rational scalars and roots of unity are written
//! as literals like `1/2*z(6)^-1` — plus loaders that cross-check the
//! declared data against the validated in-memory model.

use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;

use crate::classify::GroupSpec;
use crate::curve::{ActionSpec, MarkedOrbit, WeightedCurve};
use crate::cyclotomic::parse_cyclotomic;
use crate::engine::Exactness;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, CayleyGroup};
use crate::model::{Factor, ProductQuotientModel};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelConfig {
    format_version: u32,
    name: String,
    group: GroupSection,
    #[serde(rename = "factor")]
    factors: Vec<FactorSection>,
    exactness: Option<ExactnessSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSection {
    orders: Vec<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorSection {
    curve: CurveSection,
    action: ActionSection,
    #[serde(rename = "orbit", default)]
    orbits: Vec<OrbitSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveSection {
    name: String,
    generators: Vec<String>,
    degrees: Vec<u32>,
    kappa: u32,
    genus: u64,
    #[serde(default)]
    max_exponent: HashMap<String, u32>,
    #[serde(rename = "term")]
    terms: Vec<TermSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSection {
    coefficient: String,
    exponents: Vec<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionSection {
    modulus: u64,
    weights: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitSection {
    label: String,
    representative: Vec<String>,
    stabilizer: Vec<i64>,
    stabilizer_order: u64,
    rotation: u64,
    size: u64,
    multiplicity: u64,
    vanishing_orders: Vec<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExactnessSection {
    claim: ClaimValue,
    reason: String,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ClaimValue {
    Keyword(String),
    Degrees(Vec<u32>),
}

/// Parse a model configuration and build the fully validated model plus
/// its exactness attestation.
pub fn load_model_str(text: &str) -> Result<(ProductQuotientModel, Exactness)> {
    let cfg: ModelConfig = toml::from_str(text)
        .map_err(|e| Error::usage(format!("configuration does not parse: {}", e)))?;
    if cfg.format_version != FORMAT_VERSION {
        return Err(Error::usage(format!(
            "unsupported format_version {} (expected {})",
            cfg.format_version, FORMAT_VERSION
        )));
    }
    let group = AbelianGroup::new(cfg.group.orders.clone())?;
    let mut factors = Vec::with_capacity(cfg.factors.len());
    for (fi, f) in cfg.factors.iter().enumerate() {
        let ctx = |msg: String| format!("factor {}: {}", fi + 1, msg);
        let max_exp: Vec<Option<u32>> = f
            .curve
            .generators
            .iter()
            .map(|g| f.curve.max_exponent.get(g).copied())
            .collect();
        for key in f.curve.max_exponent.keys() {
            if !f.curve.generators.contains(key) {
                return Err(Error::usage(ctx(format!(
                    "max_exponent names unknown generator {:?}",
                    key
                ))));
            }
        }
        let equation = f
            .curve
            .terms
            .iter()
            .map(|t| Ok((parse_cyclotomic(&t.coefficient)?, t.exponents.clone())))
            .collect::<Result<Vec<_>>>()?;
        let curve = WeightedCurve::new(
            &f.curve.name,
            f.curve.generators.clone(),
            f.curve.degrees.clone(),
            f.curve.kappa,
            equation,
            max_exp,
        )?;
        if curve.genus() != f.curve.genus {
            return Err(Error::validation(ctx(format!(
                "declared genus {} but the curve has genus {}",
                f.curve.genus,
                curve.genus()
            ))));
        }
        let action = ActionSpec::new(f.action.modulus, f.action.weights.clone())?;
        let orbits = f
            .orbits
            .iter()
            .map(|o| {
                Ok(MarkedOrbit {
                    label: o.label.clone(),
                    representative: o
                        .representative
                        .iter()
                        .map(|s| parse_cyclotomic(s))
                        .collect::<Result<Vec<_>>>()?,
                    stabilizer_generator: group.element(&o.stabilizer)?,
                    stabilizer_order: o.stabilizer_order,
                    rotation: o.rotation,
                    orbit_size: o.size,
                    multiplicity: o.multiplicity,
                    vanishing_orders: o.vanishing_orders.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        factors.push(Factor {
            curve,
            action,
            orbits,
        });
    }
    let model = ProductQuotientModel::new(&cfg.name, group, factors)?;
    let exactness = match cfg.exactness {
        None => Exactness::none("no attestation in configuration"),
        Some(e) => match e.claim {
            ClaimValue::Keyword(k) if k == "all" => Exactness::all(&e.reason),
            ClaimValue::Keyword(k) if k == "none" => Exactness::none(&e.reason),
            ClaimValue::Keyword(k) => {
                return Err(Error::usage(format!(
                    "exactness claim must be \"all\", \"none\", or a degree list, got {:?}",
                    k
                )))
            }
            ClaimValue::Degrees(ds) => Exactness::degrees(&ds, &e.reason),
        },
    };
    Ok((model, exactness))
}

/// Load a model configuration from a file.
pub fn load_model_path(path: &Path) -> Result<(ProductQuotientModel, Exactness)> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::usage(format!("cannot read configuration {}: {}", path.display(), e))
    })?;
    load_model_str(&text)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupListConfig {
    #[serde(rename = "group")]
    groups: Vec<GroupEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupEntry {
    name: Option<String>,
    orders: Option<Vec<u64>>,
    permutations: Option<Vec<Vec<usize>>>,
    table: Option<Vec<Vec<usize>>>,
}

/// Parse a group list for the classification search.  Each entry is an
/// abelian group (by its cyclic orders), a permutation group (by generator
/// images), or an explicit multiplication table.
pub fn load_groups_str(text: &str) -> Result<Vec<GroupSpec>> {
    let cfg: GroupListConfig = toml::from_str(text)
        .map_err(|e| Error::usage(format!("group list does not parse: {}", e)))?;
    cfg.groups
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            let name = entry
                .name
                .clone()
                .unwrap_or_else(|| format!("group{}", i + 1));
            match (&entry.orders, &entry.permutations, &entry.table) {
                (Some(orders), None, None) => {
                    Ok(GroupSpec::Abelian(AbelianGroup::new(orders.clone())?))
                }
                (None, Some(perms), None) => Ok(GroupSpec::Table(
                    CayleyGroup::from_permutations(&name, perms)?,
                )),
                (None, None, Some(table)) => Ok(GroupSpec::Table(CayleyGroup::from_table(
                    &name,
                    table.clone(),
                )?)),
                _ => Err(Error::usage(format!(
                    "group entry {} must set exactly one of orders, permutations, table",
                    i + 1
                ))),
            }
        })
        .collect()
}

/// Load a group list from a file.
pub fn load_groups_path(path: &Path) -> Result<Vec<GroupSpec>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::usage(format!("cannot read group list {}: {}", path.display(), e))
    })?;
    load_groups_str(&text)
}
