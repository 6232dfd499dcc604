//! Predicted subsystem types confronted with exhaustive search.
//!
//! Classical families get a pattern predictor keyed on how Θ cuts the chain
//! e_1, …, e_n into blocks. Exceptional families get the negative claims (no
//! G2, no F4, no exceptional irreducible subsystem of rank d apart from E7 in
//! E8 with Θ = {α8}) and soft comparisons against reference tables.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::angle_data;
use crate::catalog::{build, CatalogError, Convention, Family, RootSystemData, SystemLabel};
use crate::dynkin::{TypeFamily, TypeLabel};
use crate::exact::{ComplementProjector, Rational, RootVector};
use crate::projector::{decomposition_violations, project_system, weyl_theta_invariance_check, ProjectedSet, ProjectionError};
use crate::subsystems::{analyze, SearchOptions, SubsystemAnalysis, SubsystemReport};
use crate::theta::ThetaSubset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error("{0} is not a classical family")]
    NotClassical(SystemLabel),
    #[error("{0} is not an exceptional family")]
    NotExceptional(SystemLabel),
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// Outcome of the classical pattern predictor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternVerdict {
    pub applies: bool,
    /// Present iff `applies`; always normalized.
    pub predicted: Option<TypeLabel>,
    pub rule: String,
}

impl PatternVerdict {
    fn fires(predicted: TypeLabel, rule: impl Into<String>) -> Self {
        PatternVerdict { applies: true, predicted: Some(predicted.normalized()), rule: rule.into() }
    }

    fn silent(rule: impl Into<String>) -> Self {
        PatternVerdict { applies: false, predicted: None, rule: rule.into() }
    }
}

/// Which claim a [`Discrepancy`] contradicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "theorem1")]
    Theorem1,
    #[serde(rename = "theorem2")]
    Theorem2,
    #[serde(rename = "lemma_B")]
    LemmaB,
    #[serde(rename = "lemma_C")]
    LemmaC,
    #[serde(rename = "lemma_D")]
    LemmaD,
    #[serde(rename = "lemma_no_G2")]
    LemmaNoG2,
    #[serde(rename = "lemma_no_F4")]
    LemmaNoF4,
    /// Integral one-signed decomposition over Δ_Θ.
    #[serde(rename = "decomposition")]
    Decomposition,
    #[serde(rename = "table_F4")]
    TableF4,
    #[serde(rename = "table_E6")]
    TableE6,
    #[serde(rename = "table_E7")]
    TableE7,
    #[serde(rename = "table_E8")]
    TableE8,
}

impl Source {
    /// Table mismatches are informational; everything else is a failed assertion.
    pub fn is_hard(self) -> bool {
        !matches!(self, Source::TableF4 | Source::TableE6 | Source::TableE7 | Source::TableE8)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Source::Theorem1 => "theorem1",
            Source::Theorem2 => "theorem2",
            Source::LemmaB => "lemma_B",
            Source::LemmaC => "lemma_C",
            Source::LemmaD => "lemma_D",
            Source::LemmaNoG2 => "lemma_no_G2",
            Source::LemmaNoF4 => "lemma_no_F4",
            Source::Decomposition => "decomposition",
            Source::TableF4 => "table_F4",
            Source::TableE6 => "table_E6",
            Source::TableE7 => "table_E7",
            Source::TableE8 => "table_E8",
        }
    }

    fn table_for(label: SystemLabel) -> Option<Source> {
        match (label.family, label.rank) {
            (Family::F, 4) => Some(Source::TableF4),
            (Family::E, 6) => Some(Source::TableE6),
            (Family::E, 7) => Some(Source::TableE7),
            (Family::E, 8) => Some(Source::TableE8),
            _ => None,
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub system: String,
    pub theta: ThetaSubset,
    pub expected: String,
    pub found: String,
    pub source: Source,
}

impl Discrepancy {
    fn new(label: SystemLabel, theta: &ThetaSubset, expected: impl Into<String>, found: impl Into<String>, source: Source) -> Self {
        Discrepancy {
            system: label.to_string(),
            theta: theta.clone(),
            expected: expected.into(),
            found: found.into(),
            source,
        }
    }
}

/// Sizes of the blocks into which the links cut the chain e_1, …, e_len.
/// `link(i)` says whether e_i and e_{i+1} are glued.
fn chain_blocks(len: usize, link: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut blocks = Vec::new();
    let mut size = 0;
    for i in 1..=len {
        size += 1;
        if i == len || !link(i) {
            blocks.push(size);
            size = 0;
        }
    }
    blocks
}

fn uniform(blocks: &[usize]) -> Option<usize> {
    let first = *blocks.first()?;
    blocks.iter().all(|&b| b == first).then_some(first)
}

/// Length of the run of Θ ending at `end` and walking down.
fn tail_run(theta: &ThetaSubset, end: usize) -> usize {
    (1..=end).rev().take_while(|&i| theta.contains(i)).count()
}

fn bc_or_b(d: usize, m: usize) -> TypeLabel {
    if m == 0 {
        TypeLabel::new(TypeFamily::B, d)
    } else {
        TypeLabel::new(TypeFamily::BC, d)
    }
}

/// The maximal-rank type forced by Θ when it matches one of the classical
/// block patterns.
pub fn predict_classical(sys: &RootSystemData, theta: &ThetaSubset) -> Result<PatternVerdict, TheoremError> {
    let label = sys.label;
    if !label.family.is_classical() {
        return Err(TheoremError::NotClassical(label));
    }
    let n = label.rank;
    theta
        .validate_analysis(n)
        .map_err(|e| TheoremError::Projection(ProjectionError::Theta(e)))?;
    let d = n - theta.len();
    let t = |i: usize| theta.contains(i);
    Ok(match label.family {
        Family::A => {
            let blocks = chain_blocks(n + 1, t);
            match uniform(&blocks) {
                Some(s) => PatternVerdict::fires(
                    TypeLabel::new(TypeFamily::A, d),
                    format!("A: n+1=(m+1)(d+1) with m={}, d={d}", s - 1),
                ),
                None => PatternVerdict::silent("A: blocks of unequal size"),
            }
        }
        Family::B => {
            let k = tail_run(theta, n);
            let blocks = chain_blocks(n - k, t);
            match uniform(&blocks) {
                Some(s) => PatternVerdict::fires(
                    bc_or_b(d, s - 1),
                    format!("B: n-k=(m+1)d with k={k}, m={}, d={d}", s - 1),
                ),
                None => PatternVerdict::silent(format!("B: blocks of unequal size (k={k})")),
            }
        }
        Family::C => {
            let k = tail_run(theta, n);
            let blocks = chain_blocks(n - k, t);
            match (uniform(&blocks), blocks.as_slice()) {
                (Some(s), _) => {
                    let ty = if k == 0 {
                        TypeLabel::new(TypeFamily::C, d)
                    } else {
                        TypeLabel::new(TypeFamily::BC, d)
                    };
                    PatternVerdict::fires(ty, format!("C: n-k=(m+1)d with k={k}, m={}, d={d}", s - 1))
                }
                (None, &[a, b]) if a == 3 * b || b == 3 * a => {
                    let (m, p) = (a.min(b) - 1, a.max(b) - 1);
                    PatternVerdict::fires(
                        TypeLabel::new(TypeFamily::A, 2),
                        format!("C: d=2 with p+1=3(m+1), k={k}, m={m}, p={p}"),
                    )
                }
                _ => PatternVerdict::silent(format!("C: blocks of unequal size (k={k})")),
            }
        }
        Family::D => {
            let (lo, hi) = (t(n - 1), t(n));
            if lo && hi {
                // The fork together with the run of Θ leading into it.
                let k = 2 + tail_run(theta, n - 2);
                let blocks = chain_blocks(n - k, t);
                match uniform(&blocks) {
                    Some(s) => PatternVerdict::fires(
                        bc_or_b(d, s - 1),
                        format!("D case 1: D_k tail, n-k=(m+1)d with k={k}, m={}, d={d}", s - 1),
                    ),
                    None => PatternVerdict::silent(format!("D case 1: blocks of unequal size (k={k})")),
                }
            } else if lo || hi {
                // α_n = e_{n-1} + e_n plays the role of α_{n-1} after e_n ↦ −e_n.
                let case = if lo { "2" } else { "2'" };
                let blocks = chain_blocks(n, |i| if i == n - 1 { true } else { t(i) });
                match uniform(&blocks) {
                    Some(s) => PatternVerdict::fires(
                        TypeLabel::new(TypeFamily::C, d),
                        format!("D case {case}: n=(m+1)d with m={}, d={d}", s - 1),
                    ),
                    None => PatternVerdict::silent(format!("D case {case}: blocks of unequal size")),
                }
            } else {
                PatternVerdict::silent("D case 3: no nonempty Θ reaches rank d")
            }
        }
        _ => unreachable!(),
    })
}

fn classical_source(family: Family) -> Source {
    match family {
        Family::B => Source::LemmaB,
        Family::C => Source::LemmaC,
        Family::D => Source::LemmaD,
        _ => Source::Theorem1,
    }
}

fn format_types(types: &BTreeSet<TypeLabel>) -> String {
    if types.is_empty() {
        "None".into()
    } else {
        types.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    }
}

/// Everything recorded about one (system, Θ) pair during a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub system: String,
    pub theta: ThetaSubset,
    pub d: usize,
    pub sigma_size: usize,
    pub max_rank: usize,
    /// Decompositions of the inclusion-maximal subsystems of rank `max_rank`.
    pub max_rank_types: Vec<String>,
    pub irreducible_rank: usize,
    /// Types of the inclusion-maximal irreducible subsystems of top rank ≥ 2.
    pub signature: BTreeSet<TypeLabel>,
    /// All irreducible types realized at the top irreducible rank.
    pub irreducible_types: BTreeSet<TypeLabel>,
    pub prediction: Option<PatternVerdict>,
    pub decomposition_violations: usize,
    pub weyl_invariant: bool,
    pub discrepancies: Vec<Discrepancy>,
}

impl InstanceResult {
    pub fn hard_failures(&self) -> impl Iterator<Item = &Discrepancy> {
        self.discrepancies.iter().filter(|d| d.source.is_hard())
    }
}

fn normalized(types: &BTreeSet<TypeLabel>) -> BTreeSet<TypeLabel> {
    types.iter().map(|t| t.normalized()).collect()
}

fn hard_checks(sys: &RootSystemData, theta: &ThetaSubset, a: &SubsystemAnalysis, prediction: Option<&PatternVerdict>) -> Vec<Discrepancy> {
    let label = sys.label;
    let mut out = Vec::new();

    if label.family.is_classical() {
        let components: BTreeSet<TypeLabel> = a.all_components().map(TypeLabel::normalized).collect();
        if let Some(v) = prediction.filter(|v| v.applies) {
            let want = v.predicted.expect("a firing verdict carries its type");
            let have = normalized(&a.irreducible_types);
            if a.irreducible_rank != a.d || !have.contains(&want) {
                out.push(Discrepancy::new(
                    label,
                    theta,
                    format!("{want} at rank {} ({})", a.d, v.rule),
                    format!("rank {}: {}", a.irreducible_rank, format_types(&have)),
                    classical_source(label.family),
                ));
            }
        }
        let odd: BTreeSet<TypeLabel> = components.iter().copied().filter(|t| t.family.is_exceptional()).collect();
        if !odd.is_empty() {
            out.push(Discrepancy::new(label, theta, "classical components only", format_types(&odd), Source::Theorem1));
        }
        return out;
    }

    // Components of maximal-rank subsystems only; lower-rank irreducible
    // pieces are not covered by the claim.
    for (fam, source) in [(TypeFamily::G, Source::LemmaNoG2), (TypeFamily::F, Source::LemmaNoF4)] {
        let hits: Vec<&SubsystemReport> = a
            .max_rank_reports
            .iter()
            .filter(|r| r.components.iter().any(|t| t.family == fam))
            .collect();
        if hits.is_empty() {
            continue;
        }
        let irreducible_at_d = a.max_rank == a.d && hits.iter().any(|r| r.is_irreducible());
        let mut shapes: Vec<String> = hits.iter().map(|r| r.decomposition()).collect();
        shapes.dedup();
        let found = format!(
            "{} at rank {}{}",
            shapes.join(", "),
            a.max_rank,
            if irreducible_at_d { " (irreducible of rank d)" } else { "" }
        );
        out.push(Discrepancy::new(label, theta, format!("no {} component", fam.as_str()), found, source));
    }

    let e7 = TypeLabel::new(TypeFamily::E, 7);
    let exception = label.family == Family::E && label.rank == 8 && theta.indices() == [8];
    if a.irreducible_rank == a.d && a.d >= 2 {
        let e_types: BTreeSet<TypeLabel> = a
            .irreducible_reports
            .iter()
            .map(|r| r.components[0])
            .filter(|t| t.family == TypeFamily::E)
            .collect();
        let allowed = exception && e_types.iter().all(|&t| t == e7);
        if !e_types.is_empty() && !allowed {
            out.push(Discrepancy::new(
                label,
                theta,
                "only classical irreducible subsystems of rank d",
                format_types(&e_types),
                Source::Theorem2,
            ));
        }
    }
    if exception && !(a.irreducible_rank == a.d && a.irreducible_types.contains(&e7)) {
        out.push(Discrepancy::new(label, theta, "E7 of rank 7", format_types(&a.irreducible_types), Source::Theorem2));
    }
    out
}

fn run_instance(sys: &RootSystemData, theta: &ThetaSubset, inner_parallel: bool) -> Result<InstanceResult, TheoremError> {
    let ps = project_system(sys, theta)?;
    let a = analyze(&ps, SearchOptions { rank_cap: ps.d, parallel: inner_parallel });
    let prediction = if sys.label.family.is_classical() {
        Some(predict_classical(sys, theta)?)
    } else {
        None
    };
    let mut discrepancies = hard_checks(sys, theta, &a, prediction.as_ref());
    let violations = decomposition_violations(&ps);
    if let Some(first) = violations.first() {
        discrepancies.push(Discrepancy::new(
            sys.label,
            theta,
            "integral one-signed coefficients over Δ_Θ",
            format!("{} violations, first: {first}", violations.len()),
            Source::Decomposition,
        ));
    }
    let mut max_rank_types: Vec<String> = a.max_rank_reports.iter().map(|r| r.decomposition()).collect();
    max_rank_types.sort();
    max_rank_types.dedup();
    Ok(InstanceResult {
        system: sys.label.to_string(),
        theta: theta.clone(),
        d: ps.d,
        sigma_size: ps.sigma_theta.len(),
        max_rank: a.max_rank,
        max_rank_types,
        irreducible_rank: a.irreducible_rank,
        signature: a.irreducible_signature(),
        irreducible_types: a.irreducible_types.clone(),
        prediction,
        decomposition_violations: violations.len(),
        weyl_invariant: weyl_theta_invariance_check(sys, theta),
        discrepancies,
    })
}

/// Analyze one Θ with every hard check applied.
pub fn check_instance(sys: &RootSystemData, theta: &ThetaSubset) -> Result<InstanceResult, TheoremError> {
    theta
        .validate_analysis(sys.rank())
        .map_err(|e| TheoremError::Projection(ProjectionError::Theta(e)))?;
    run_instance(sys, theta, true)
}

/// Every proper nonempty Θ of `sys`, in mask order, checked in parallel.
pub fn sweep_system(sys: &RootSystemData) -> Result<Vec<InstanceResult>, TheoremError> {
    ThetaSubset::all_proper_nonempty(sys.rank())
        .par_iter()
        .map(|theta| run_instance(sys, theta, false))
        .collect()
}

/// Sweep ranks 1..=max_n of a classical family.
pub fn classical_sweep(family: Family, max_n: usize) -> Result<Vec<InstanceResult>, TheoremError> {
    if !family.is_classical() {
        return Err(TheoremError::NotClassical(SystemLabel::new(family, 4).or_else(|_| SystemLabel::new(family, 6))?));
    }
    let mut out = Vec::new();
    for n in 1..=max_n {
        let Ok(label) = SystemLabel::new(family, n) else { continue };
        out.extend(sweep_system(&build(label)?)?);
    }
    Ok(out)
}

/// Classical-family discrepancies for ranks up to `max_n`; empty when every
/// prediction is confirmed and no exceptional component turns up.
pub fn verify_classical_sweep(family: Family, max_n: usize) -> Result<Vec<Discrepancy>, TheoremError> {
    Ok(classical_sweep(family, max_n)?
        .into_iter()
        .flat_map(|r| r.discrepancies)
        .collect())
}

/// One row of a reference table for an exceptional system, in Labesse numbering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub thetas: Vec<ThetaSubset>,
    pub squared_lengths: String,
    /// Pairs (i, j) of Δ indices whose ᾱ_i, ᾱ_j the table uses for C and R.
    pub chosen: Vec<(usize, usize)>,
    pub c_and_r: String,
    pub expected_text: String,
    /// Empty for "None".
    pub expected: BTreeSet<TypeLabel>,
}

type RawRow = (&'static [&'static [usize]], &'static str, &'static [(usize, usize)], &'static str, &'static str);

const F4_ROWS: &[RawRow] = &[
    (&[&[1]], "3/2 and 1", &[], "", "B2"),
    (&[&[2]], "3/2,1/2,1", &[], "", "B2"),
    (&[&[3]], "", &[], "", "B3"),
    (&[&[4]], "2 and 3/4", &[], "", "A2,B2"),
    (&[&[3, 4]], "2 and 2/3", &[(1, 2)], "", ""),
    (&[&[1, 2]], "1/3, and 1", &[(3, 4)], "4/3 and 3", ""),
    (&[&[1, 4]], "ᾱ3 has squared length 3/2, ᾱ2 3/4", &[(2, 3)], "C=9/8", ""),
    (&[&[2, 3]], "1 and 1/2", &[(1, 4)], "C=2", "B2"),
    (&[&[2, 4]], "3/2 and 3/4", &[(1, 3)], "C=9/2", ""),
    (&[&[1, 3]], "1 and 3/4", &[(2, 4)], "R=3/2, C=3/2", ""),
];

const E6_ROWS: &[RawRow] = &[
    (&[&[1]], "2 and 3/2", &[(3, 4)], "C=3", "A3,A2"),
    (&[&[2], &[6]], "2 and 3/2", &[], "", "A5"),
    (&[&[6]], "", &[], "", "D3"),
    (&[&[3], &[5]], "2 and 3/2", &[(5, 4)], "C=3/2", "A5"),
    (&[&[4]], "3/2", &[(1, 3), (2, 3)], "C=9; C=3", "A2"),
    (&[&[1, 4]], "51/32 and 2", &[], "", "A2"),
    (&[&[1, 5], &[1, 3]], "2", &[(3, 4)], "C=4", "A3"),
    (&[&[1, 6], &[1, 2]], "", &[(3, 4)], "C=3", "A3"),
    (&[&[2, 6]], "2 and 3/2", &[(1, 4), (5, 4)], "C=4, R=1; C=3", "A3"),
    (&[&[3, 5]], "1, 2, and 3/2", &[(1, 4)], "C=2, R=2", "B2"),
    (&[&[2, 3, 5, 6]], "", &[], "", "A2"),
    (&[&[2, 5], &[3, 6]], "", &[(3, 4), (1, 4)], "C=9/4; C=3", ""),
    (&[&[1, 3, 4, 5]], "", &[], "", ""),
];

const E7_ROWS: &[RawRow] = &[
    (&[&[1]], "2 and 5/2", &[], "", "A6"),
    (&[&[2]], "2 and 3/2", &[], "", "A5"),
    (&[&[3]], "2 and 3/2", &[(5, 4)], "C=3/2", "A4"),
    (&[&[4]], "2 and 3/2", &[(1, 3), (2, 3)], "C=9; C=3", "A2"),
    (&[&[5]], "2 and 3/2", &[(3, 4)], "C=3", "A3"),
    (&[&[6]], "", &[], "", "A5"),
    (&[&[7]], "", &[], "", "A4,D4"),
    (&[&[2, 6, 7]], "4/3,3/2 and 2", &[], "", "A2"),
    (&[&[5, 6, 7]], "2, 5/4", &[], "", "A2"),
    (&[&[2, 3, 5, 6, 7]], "2 and 7/2", &[], "", ""),
    (&[&[3, 5]], "1, 2, and 3/2", &[(1, 4)], "C=2, R=2", "B4"),
    (&[&[1, 4]], "", &[], "", "A3"),
    (&[&[1, 5]], "2 and 3/2", &[(3, 4)], "C=4", "A3"),
    (&[&[1, 2]], "", &[], "", "A4"),
    (&[&[1, 3]], "", &[], "", "A3"),
    (&[&[1, 7]], "", &[], "", "D4"),
    (&[&[2, 7]], "2 and 3/2", &[], "", "A3"),
    (&[&[1, 3, 4, 5]], "", &[], "", ""),
    (&[&[2, 3, 4], &[1, 2, 3, 4]], "", &[], "", "A2"),
];

const E8_ROWS: &[RawRow] = &[
    (&[&[1]], "2 and", &[], "", "A7"),
    (&[&[2]], "2 and 3/2", &[], "", "A7"),
    (&[&[3]], "2 and 3/2", &[(5, 4)], "C=3", "A6"),
    (&[&[4]], "2 and 3/2", &[(5, 6)], "C=3", "A5"),
    (&[&[5]], "2 and 3/2", &[], "", "A6"),
    (&[&[6]], "2 and 3/2", &[], "", "A3"),
    (&[&[7]], "", &[], "", "A6"),
    (&[&[8]], "2 and 3/2", &[], "", "E7"),
    (&[&[1, 4], &[1, 2, 4], &[1, 2, 3, 4]], "", &[], "", "A4"),
    (&[&[1, 5]], "", &[], "", "A5"),
    (&[&[1, 2, 5]], "", &[], "", "A4"),
    (&[&[1, 3, 5], &[1, 3, 4, 5]], "", &[], "", "A3"),
    (
        &[&[2, 5, 6], &[2, 5, 7], &[2, 5, 8], &[2, 5, 6, 7], &[2, 5, 6, 8], &[2, 5, 7, 8], &[2, 5, 6, 7, 8]],
        "",
        &[],
        "",
        "A3",
    ),
    (&[&[1, 2], &[1, 2, 3]], "", &[], "", "A5"),
    (&[&[1, 3]], "", &[], "", "A5"),
    (&[&[5, 6, 7, 8]], "", &[], "", "A3"),
    (&[&[1, 3, 5, 6, 7, 8]], "2 and 7/10", &[], "", ""),
    (&[&[2, 3, 5]], "1, 2, and 3/2", &[(1, 4)], "C=2, R=2", "A3"),
    (&[&[3, 5]], "1, 2, and 3/2", &[], "C=2, R=2", "B5"),
    (&[&[3, 4, 5], &[2, 5]], "", &[], "", "D4"),
    (&[&[1, 6, 7, 8]], "3/2 and 2", &[], "", "A3"),
    (&[&[3, 4]], "", &[], "", "A5"),
    (&[&[2, 3, 4], &[1, 3, 4]], "", &[], "", "A4"),
    (&[&[3, 4, 5]], "", &[], "", "A4"),
    (&[&[2, 5, 6]], "", &[], "", "A4"),
    (&[&[2, 4], &[1, 2, 4], &[1, 2, 3, 4]], "", &[], "", "A4"),
    (&[&[1, 8]], "", &[], "", "A4"),
    (&[&[1, 7]], "", &[], "", "A5"),
    (&[&[1, 6]], "", &[], "", "A4"),
    (&[&[2, 3, 4, 5]], "", &[], "", "A3"),
    (&[&[6, 7, 8]], "", &[], "", "D5"),
    (&[&[1, 3, 5, 8]], "", &[], "", "B2"),
];

/// Reference rows for F4, E6, E7 and E8; `None` for other systems.
pub fn reference_table(label: SystemLabel) -> Option<Vec<TableRow>> {
    let raw = match (label.family, label.rank) {
        (Family::F, 4) => F4_ROWS,
        (Family::E, 6) => E6_ROWS,
        (Family::E, 7) => E7_ROWS,
        (Family::E, 8) => E8_ROWS,
        _ => return None,
    };
    Some(
        raw.iter()
            .map(|&(thetas, lengths, chosen, cr, expected)| TableRow {
                thetas: thetas.iter().map(|t| ThetaSubset::new(t.to_vec())).collect(),
                squared_lengths: lengths.to_string(),
                chosen: chosen.to_vec(),
                c_and_r: cr.to_string(),
                expected_text: if expected.is_empty() { "None".into() } else { expected.replace(',', " or ") },
                expected: expected
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<TypeLabel>().expect("table labels parse").normalized())
                    .collect(),
            })
            .collect(),
    )
}

/// Map Labesse indices to the indices of `convention`: the two models number
/// α1 and α2 the other way round.
pub fn relabel_index(i: usize, family: Family, convention: Convention) -> usize {
    match (family, convention, i) {
        (Family::E, Convention::Bourbaki, 1) => 2,
        (Family::E, Convention::Bourbaki, 2) => 1,
        _ => i,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChosenPair {
    pub i: usize,
    pub j: usize,
    /// `None` when orthogonal.
    pub c: Option<Rational>,
    pub r: Rational,
}

/// One table row for one Θ, next to what exhaustive search finds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableComparison {
    pub row: usize,
    /// Θ in the numbering of the system being checked.
    pub theta: ThetaSubset,
    pub squared_lengths: Vec<Rational>,
    pub reference_lengths: String,
    pub chosen: Vec<ChosenPair>,
    pub reference_c_and_r: String,
    pub expected_text: String,
    pub expected: BTreeSet<TypeLabel>,
    pub d: usize,
    pub irreducible_rank: usize,
    pub found: BTreeSet<TypeLabel>,
    pub matches: bool,
}

impl TableComparison {
    pub fn found_text(&self) -> String {
        format_types(&self.found)
    }
}

fn distinct_lengths(ps: &ProjectedSet) -> Vec<Rational> {
    let set: BTreeSet<Rational> = ps.delta_theta.iter().map(RootVector::norm2).collect();
    set.into_iter().collect()
}

/// Compare every reference row with exhaustive search. Each Θ of a row
/// listing several alternatives is a separate comparison.
pub fn compare_table(sys: &RootSystemData) -> Result<Vec<TableComparison>, TheoremError> {
    let label = sys.label;
    let Some(rows) = reference_table(label) else {
        return Err(TheoremError::NotExceptional(label));
    };
    let map = |i: usize| relabel_index(i, label.family, label.convention);
    let jobs: Vec<(usize, &TableRow, ThetaSubset)> = rows
        .iter()
        .enumerate()
        .flat_map(|(k, row)| row.thetas.iter().map(move |t| (k, row, t.relabel(map))))
        .collect();
    jobs.par_iter()
        .map(|(k, row, theta)| {
            let ps = project_system(sys, theta)?;
            let a = analyze(&ps, SearchOptions { rank_cap: ps.d, parallel: false });
            let found = normalized(&a.irreducible_signature());
            let chosen = row
                .chosen
                .iter()
                .filter_map(|&(i, j)| {
                    let (i, j) = (map(i), map(j));
                    let data = angle_data(ps.bar(i)?, ps.bar(j)?).ok()?;
                    Some(ChosenPair { i, j, c: data.c, r: data.r })
                })
                .collect();
            Ok(TableComparison {
                row: *k,
                theta: theta.clone(),
                squared_lengths: distinct_lengths(&ps),
                reference_lengths: row.squared_lengths.clone(),
                chosen,
                reference_c_and_r: row.c_and_r.clone(),
                expected_text: row.expected_text.clone(),
                expected: row.expected.clone(),
                d: ps.d,
                irreducible_rank: a.irreducible_rank,
                matches: found == row.expected,
                found,
            })
        })
        .collect()
}

/// Hard assertions over every proper nonempty Θ plus soft table differences.
pub fn verify_exceptional(sys: &RootSystemData) -> Result<Vec<Discrepancy>, TheoremError> {
    let label = sys.label;
    if label.family.is_classical() {
        return Err(TheoremError::NotExceptional(label));
    }
    let mut out: Vec<Discrepancy> = sweep_system(sys)?.into_iter().flat_map(|r| r.discrepancies).collect();
    if let Some(source) = Source::table_for(label) {
        for c in compare_table(sys)?.into_iter().filter(|c| !c.matches) {
            out.push(Discrepancy::new(label, &c.theta, c.expected_text.clone(), c.found_text(), source));
        }
    }
    Ok(out)
}

/// A projected simple root of squared length 3/2 next to an untouched simple root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeHalvesPair {
    pub theta: ThetaSubset,
    pub projected: usize,
    pub untouched: usize,
    pub c: Option<Rational>,
}

/// Every such pair over all proper nonempty Θ; the expected C is 3 throughout.
pub fn three_halves_screen(sys: &RootSystemData) -> Result<Vec<ThreeHalvesPair>, TheoremError> {
    let n = sys.rank();
    let three_halves = Rational::new(3, 2);
    let per_theta: Result<Vec<Vec<ThreeHalvesPair>>, TheoremError> = ThetaSubset::all_proper_nonempty(n)
        .par_iter()
        .map(|theta| {
            let ps = project_system(sys, theta)?;
            let mut found = Vec::new();
            for &i in &ps.delta_indices {
                let bi = ps.bar(i).expect("index outside Θ");
                if bi.norm2() != three_halves {
                    continue;
                }
                for &j in &ps.delta_indices {
                    let bj = ps.bar(j).expect("index outside Θ");
                    if j == i || !sys.is_adjacent(i, j) || bj != sys.alpha(j) {
                        continue;
                    }
                    let data = angle_data(bi, bj).expect("projected simple roots are nonzero");
                    found.push(ThreeHalvesPair { theta: theta.clone(), projected: i, untouched: j, c: data.c });
                }
            }
            Ok(found)
        })
        .collect();
    Ok(per_theta?.into_iter().flatten().collect())
}

/// For A_n: ‖ē_r‖² = 1/(m+1) where m+1 is the size of the block holding e_r.
pub fn a_length_formula_holds(sys: &RootSystemData, theta: &ThetaSubset) -> bool {
    if sys.label.family != Family::A || theta.is_empty() {
        return true;
    }
    let n = sys.rank();
    let basis: Vec<RootVector> = theta.indices().iter().map(|&i| sys.alpha(i).clone()).collect();
    let Ok(proj) = ComplementProjector::new(n + 1, &basis) else {
        return false;
    };
    let blocks = chain_blocks(n + 1, |i| theta.contains(i));
    let mut r = 0;
    for size in blocks {
        for _ in 0..size {
            let e = proj.apply(&RootVector::unit(n + 1, r));
            if e.norm2() != Rational::new(1, size as i64) {
                return false;
            }
            r += 1;
        }
    }
    true
}
