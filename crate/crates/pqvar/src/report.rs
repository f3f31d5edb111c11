//! Report types emitted by the command-line interface: one serializable
//! machine view per command (the stable contract) and one human-readable
//! rendering.  Field order is fixed and all numbers are exact, so identical
//! inputs serialize to identical bytes.

use serde::Serialize;

use crate::classify::{CandidateRecord, TypeTuple};
use crate::engine::{
    self, stalk_conditions, CyVerdict, Exactness, PlurigenusReport,
};
use crate::error::Result;
use crate::model::ProductQuotientModel;
use crate::singularity::CyclicSingularityType;
use crate::toric::{minimal_basis, negative_rays, stabilization_exponent, MonomialIdeal};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct RayDto {
    pub weights: Vec<i64>,
    pub level: i64,
}

#[derive(Debug, Serialize)]
pub struct IdealReport {
    pub format_version: u32,
    pub singularity: String,
    pub dimension: usize,
    pub k: u32,
    pub rays: Vec<RayDto>,
    pub is_unit: bool,
    pub generator_count: usize,
    pub generators: Vec<Vec<u32>>,
    pub stabilization_exponent: u64,
}

pub fn ideal_report(t: &CyclicSingularityType, k: u32) -> Result<IdealReport> {
    let rays = negative_rays(t);
    let (ideal, s) = if rays.is_empty() {
        (MonomialIdeal::unit(t.dim()), 1)
    } else {
        (minimal_basis(&rays, k)?, stabilization_exponent(&rays)?)
    };
    Ok(IdealReport {
        format_version: FORMAT_VERSION,
        singularity: t.to_string(),
        dimension: t.dim(),
        k,
        rays: rays
            .iter()
            .map(|r| RayDto {
                weights: r.w.clone(),
                level: r.u,
            })
            .collect(),
        is_unit: ideal.is_unit(),
        generator_count: ideal.generators().len(),
        generators: ideal.generators().to_vec(),
        stabilization_exponent: s,
    })
}

pub fn render_ideal(r: &IdealReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("ideal stalk for {}, k = {}\n", r.singularity, r.k));
    if r.rays.is_empty() {
        out.push_str("no negative rays: the stalk is the unit ideal\n");
    } else {
        out.push_str("negative rays (weights; level):\n");
        for ray in &r.rays {
            out.push_str(&format!(
                "  ({}) ; {}\n",
                join_i64(&ray.weights),
                ray.level
            ));
        }
    }
    out.push_str(&format!(
        "minimal basis: {} generator{}\n",
        r.generator_count,
        if r.generator_count == 1 { "" } else { "s" }
    ));
    for g in &r.generators {
        out.push_str(&format!("  ({})\n", join_u32(g)));
    }
    out.push_str(&format!(
        "stabilization exponent: {}\n",
        r.stabilization_exponent
    ));
    out
}

#[derive(Debug, Serialize)]
pub struct K2Dto {
    pub product: i64,
    pub resolution: String,
}

#[derive(Debug, Serialize)]
pub struct InvariantsReport {
    pub format_version: u32,
    pub name: String,
    pub group_orders: Vec<u64>,
    pub dimension: usize,
    pub genera: Vec<u64>,
    pub quotient_genera: Vec<u64>,
    pub pg: u64,
    pub q: Vec<u64>,
    pub chi: Option<i64>,
    pub numerical_cy: Option<bool>,
    pub k_squared: Option<K2Dto>,
}

pub fn invariants_report(model: &ProductQuotientModel) -> Result<InvariantsReport> {
    let h = model.hodge_invariants()?;
    let (numerical_cy, k_squared) = if model.dimension() == 3 {
        (Some(h.numerical_cy()), None)
    } else {
        let k = model.k_squared()?;
        (
            None,
            Some(K2Dto {
                product: k.product,
                resolution: k.resolution.to_string(),
            }),
        )
    };
    Ok(InvariantsReport {
        format_version: FORMAT_VERSION,
        name: model.name().to_string(),
        group_orders: model.group().orders().to_vec(),
        dimension: model.dimension(),
        genera: model
            .factors()
            .iter()
            .map(|f| f.curve.genus())
            .collect(),
        quotient_genera: (0..model.factors().len())
            .map(|i| model.quotient_genus(i))
            .collect(),
        pg: h.pg,
        q: h.q.clone(),
        chi: h.chi,
        numerical_cy,
        k_squared,
    })
}

pub fn render_invariants(r: &InvariantsReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("invariants of {}\n", r.name));
    out.push_str(&format!(
        "  group: cyclic orders ({}), dimension {}\n",
        join_u64(&r.group_orders),
        r.dimension
    ));
    out.push_str(&format!(
        "  factor genera: ({}), quotient genera: ({})\n",
        join_u64(&r.genera),
        join_u64(&r.quotient_genera)
    ));
    out.push_str(&format!("  p_g = {}\n", r.pg));
    for (i, q) in r.q.iter().enumerate() {
        out.push_str(&format!("  q_{} = {}\n", i + 1, q));
    }
    if let Some(chi) = r.chi {
        out.push_str(&format!("  chi(O) = {}\n", chi));
    }
    if let Some(cy) = r.numerical_cy {
        out.push_str(&format!(
            "  numerically Calabi-Yau: {}\n",
            if cy { "yes" } else { "no" }
        ));
    }
    if let Some(k) = &r.k_squared {
        out.push_str(&format!(
            "  K^2 = {} (product quotient), {} (resolution)\n",
            k.product, k.resolution
        ));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct LocusClassDto {
    pub singularity: String,
    pub count: u64,
}

#[derive(Debug, Serialize)]
pub struct LocusPointDto {
    pub orbits: Vec<String>,
    pub raw_singularity: String,
    pub canonical_singularity: String,
    pub reid_tai: String,
    pub count: u64,
}

#[derive(Debug, Serialize)]
pub struct LocusReport {
    pub format_version: u32,
    pub name: String,
    pub total: u64,
    pub classes: Vec<LocusClassDto>,
    pub points: Vec<LocusPointDto>,
}

pub fn locus_report(model: &ProductQuotientModel) -> Result<LocusReport> {
    let locus = model.singular_locus()?;
    let classes = locus
        .by_canonical_type()
        .into_iter()
        .map(|(t, count)| LocusClassDto {
            singularity: t.to_string(),
            count,
        })
        .collect();
    let points = locus
        .points
        .iter()
        .map(|p| {
            let raw = p.raw_type();
            LocusPointDto {
                orbits: p
                    .orbit_indices
                    .iter()
                    .enumerate()
                    .map(|(f, &o)| model.factors()[f].orbits[o].label.clone())
                    .collect(),
                raw_singularity: raw.to_string(),
                canonical_singularity: raw.canonical_form().to_string(),
                reid_tai: format!("{:?}", raw.reid_tai_class()),
                count: p.count,
            }
        })
        .collect();
    Ok(LocusReport {
        format_version: FORMAT_VERSION,
        name: model.name().to_string(),
        total: locus.total(),
        classes,
        points,
    })
}

pub fn render_locus(r: &LocusReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "singular locus of {}: {} point{}\n",
        r.name,
        r.total,
        if r.total == 1 { "" } else { "s" }
    ));
    out.push_str("by canonical type:\n");
    for c in &r.classes {
        out.push_str(&format!("  {} x {}\n", c.count, c.singularity));
    }
    out.push_str("by stabilizer orbit:\n");
    for p in &r.points {
        out.push_str(&format!(
            "  ({}) -> {} x {} [{}]\n",
            p.orbits.join(", "),
            p.count,
            p.raw_singularity,
            p.reid_tai
        ));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct PlurigenusSeriesReport {
    pub format_version: u32,
    pub name: String,
    pub exactness_reason: String,
    pub attested: Vec<u32>,
    pub entries: Vec<PlurigenusReport>,
}

pub fn plurigenus_series_report(
    model: &ProductQuotientModel,
    exactness: &Exactness,
    d_from: u32,
    d_to: u32,
) -> Result<PlurigenusSeriesReport> {
    let entries = (d_from..=d_to)
        .map(|d| engine::plurigenus_monomial(model, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(PlurigenusSeriesReport {
        format_version: FORMAT_VERSION,
        name: model.name().to_string(),
        exactness_reason: exactness.reason.clone(),
        attested: (d_from..=d_to).filter(|&d| exactness.attests(d)).collect(),
        entries,
    })
}

pub fn render_plurigenus(r: &PlurigenusSeriesReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("plurigenus lower bounds for {}\n", r.name));
    for e in &r.entries {
        let exact = if r.attested.contains(&e.d) {
            " (attested exact)"
        } else {
            ""
        };
        out.push_str(&format!(
            "  d = {}: count {} of {} invariant monomials, {} stalk condition{}{}\n",
            e.d,
            e.count,
            e.invariant_dimension,
            e.conditions,
            if e.conditions == 1 { "" } else { "s" },
            exact
        ));
        for w in &e.witnesses {
            out.push_str(&format!("    {}\n", w.display));
        }
        if e.witnesses_truncated {
            out.push_str("    ... (witness list truncated)\n");
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct VerdictReport {
    pub format_version: u32,
    pub name: String,
    pub d_max: u32,
    pub exactness_reason: String,
    pub verdict: CyVerdict,
}

pub fn verdict_report(
    model: &ProductQuotientModel,
    exactness: &Exactness,
    d_max: u32,
) -> Result<VerdictReport> {
    let verdict = engine::cy_verdict(model, exactness, d_max)?;
    Ok(VerdictReport {
        format_version: FORMAT_VERSION,
        name: model.name().to_string(),
        d_max,
        exactness_reason: exactness.reason.clone(),
        verdict,
    })
}

pub fn render_verdict(r: &VerdictReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "Calabi-Yau verdict for {} (degrees up to {})\n",
        r.name, r.d_max
    ));
    match &r.verdict {
        CyVerdict::NotApplicable { reason } => {
            out.push_str(&format!("  NOT_APPLICABLE: {}\n", reason));
        }
        CyVerdict::NotCy {
            d,
            count,
            witnesses,
            kappa_at_least_two,
        } => {
            out.push_str(&format!(
                "  NOT_CY: {} independent sections at degree {}\n",
                count, d
            ));
            for w in witnesses {
                out.push_str(&format!("    {}\n", w.display));
            }
            if *kappa_at_least_two {
                out.push_str("  Kodaira dimension at least 2\n");
            }
        }
        CyVerdict::ConsistentCy { d_max } => {
            out.push_str(&format!(
                "  CONSISTENT_CY({}): every plurigenus up to degree {} equals 1 \
                 (attested exact)\n",
                d_max, d_max
            ));
        }
        CyVerdict::Inconclusive { d, count, reason } => {
            out.push_str(&format!(
                "  INCONCLUSIVE at degree {} (count {}): {}\n",
                d, count, reason
            ));
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct SurfaceReport {
    pub format_version: u32,
    pub name: String,
    pub genera: Vec<u64>,
    pub k2_product: i64,
    pub k2_resolution: String,
    pub pg: u64,
    pub q: u64,
    pub chi: i64,
    pub invariant_dim2: u64,
    pub p2: u64,
    pub volume: i64,
    pub excess: String,
    pub minimal: bool,
    pub p3_checked: bool,
    pub noncanonical_conditions: usize,
}

pub fn surface_report(model: &ProductQuotientModel, check_p3: bool) -> Result<SurfaceReport> {
    let v = engine::volume_and_minimality(model, check_p3)?;
    let h = model.hodge_invariants()?;
    let inv2 = model.invariant_dimension(2)?;
    let conditions = stalk_conditions(model)?.len();
    Ok(SurfaceReport {
        format_version: FORMAT_VERSION,
        name: model.name().to_string(),
        genera: model
            .factors()
            .iter()
            .map(|f| f.curve.genus())
            .collect(),
        k2_product: v.k2_product,
        k2_resolution: v.k2_resolution.to_string(),
        pg: v.pg,
        q: v.q,
        chi: 1 - h.q[0] as i64 + h.pg as i64,
        invariant_dim2: inv2,
        p2: v.p2,
        volume: v.volume,
        excess: v.excess.to_string(),
        minimal: v.minimal,
        p3_checked: check_p3,
        noncanonical_conditions: conditions,
    })
}

pub fn render_surface(r: &SurfaceReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("surface report for {}\n", r.name));
    out.push_str(&format!("  factor genera: ({})\n", join_u64(&r.genera)));
    out.push_str(&format!(
        "  K^2 = {} (product quotient), {} (resolution)\n",
        r.k2_product, r.k2_resolution
    ));
    out.push_str(&format!(
        "  p_g = {}  q = {}  chi(O) = {}\n",
        r.pg, r.q, r.chi
    ));
    out.push_str(&format!(
        "  invariant bicanonical dimension = {}\n",
        r.invariant_dim2
    ));
    out.push_str(&format!(
        "  bicanonical count P_2 = {}  ({} noncanonical condition{})\n",
        r.p2,
        r.noncanonical_conditions,
        if r.noncanonical_conditions == 1 { "" } else { "s" }
    ));
    out.push_str(&format!(
        "  volume = {}{}\n",
        r.volume,
        if r.p3_checked {
            "  (P_3 cross-check passed)"
        } else {
            ""
        }
    ));
    out.push_str(&format!(
        "  excess volume - K^2 = {}  minimal: {}\n",
        r.excess,
        if r.minimal { "yes" } else { "no" }
    ));
    out
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub format_version: u32,
    pub g_max: u64,
    pub r_exact: Option<usize>,
    pub tuple_count: usize,
    pub tuples: Vec<TypeTuple>,
    pub candidates: Option<Vec<CandidateRecord>>,
}

pub fn render_classify(r: &ClassifyReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "admissible branching data for genus <= {}{}: {} tuple{}\n",
        r.g_max,
        match r.r_exact {
            Some(n) => format!(", {} branch points", n),
            None => String::new(),
        },
        r.tuple_count,
        if r.tuple_count == 1 { "" } else { "s" }
    ));
    for t in &r.tuples {
        let parts: Vec<String> = t
            .factors
            .iter()
            .map(|f| format!("g={} [{}]", f.genus, join_u64(&f.branch_indices)))
            .collect();
        out.push_str(&format!("  n = {}: {}\n", t.group_order, parts.join("  ")));
    }
    if let Some(cands) = &r.candidates {
        out.push_str(&format!(
            "realizable with the supplied groups: {} record{}\n",
            cands.len(),
            if cands.len() == 1 { "" } else { "s" }
        ));
        for c in cands {
            let types: Vec<String> = c
                .tuple
                .factors
                .iter()
                .map(|f| format!("[{}]", join_u64(&f.branch_indices)))
                .collect();
            let witnesses: Vec<String> = c
                .witnesses
                .iter()
                .map(|w| {
                    format!(
                        "({})",
                        w.elements
                            .iter()
                            .map(|e| e.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                })
                .collect();
            out.push_str(&format!(
                "  {} (order {}): {}  witnesses {}\n",
                c.group_name,
                c.group_order,
                types.join(" "),
                witnesses.join(" ")
            ));
        }
    }
    out
}

/// Serialize any report as its stable machine view.
pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| {
        crate::error::Error::internal(format!("report serialization failed: {}", e))
    })?;
    s.push('\n');
    Ok(s)
}

fn join_u64(v: &[u64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn join_i64(v: &[i64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn join_u32(v: &[u32]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn ideal_report_round_trip() {
        let t = CyclicSingularityType::new(6, vec![1, 1, 1]).unwrap();
        let r = ideal_report(&t, 1).unwrap();
        assert_eq!(r.generator_count, 10);
        assert!(!r.is_unit);
        assert_eq!(r.stabilization_exponent, 2);
        let text = render_ideal(&r);
        assert!(text.contains("10 generators"));
        let json = to_json(&r).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["generator_count"], 10);
        assert_eq!(value["format_version"], 1);
    }

    #[test]
    fn unit_ideal_report() {
        let t = CyclicSingularityType::new(2, vec![1, 1, 1]).unwrap();
        let r = ideal_report(&t, 5).unwrap();
        assert!(r.is_unit);
        assert!(render_ideal(&r).contains("unit ideal"));
    }

    #[test]
    fn invariants_and_locus_views() {
        let m = fixtures::z6_cy3().unwrap();
        let inv = invariants_report(&m).unwrap();
        assert_eq!(inv.pg, 1);
        assert_eq!(inv.numerical_cy, Some(true));
        assert!(inv.k_squared.is_none());
        assert!(render_invariants(&inv).contains("numerically Calabi-Yau: yes"));
        let loc = locus_report(&m).unwrap();
        assert_eq!(loc.total, 36);
        assert!(render_locus(&loc).contains("8 x 1/6(1,1,1)"));
    }

    #[test]
    fn surface_view_matches_reference_row() {
        let m = fixtures::fermat_surface(3).unwrap();
        let r = surface_report(&m, false).unwrap();
        assert_eq!(
            (
                r.genera[0], r.k2_product, r.k2_resolution.as_str(), r.pg, r.chi,
                r.invariant_dim2, r.p2, r.volume, r.excess.as_str()
            ),
            (28, 72, "71", 9, 10, 81, 81, 71, "0")
        );
        assert!(r.minimal);
        assert!(render_surface(&r).contains("minimal: yes"));
    }

    #[test]
    fn json_is_deterministic() {
        let m = fixtures::z6_cy3().unwrap();
        let a = to_json(&locus_report(&m).unwrap()).unwrap();
        let b = to_json(&locus_report(&m).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
