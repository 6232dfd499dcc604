//! Deterministic JSON, CSV and Markdown renderings of every result kind.
//!
//! Everything rendered here is already in a canonical order (sorted root
//! sets, Θ in mask order), so identical inputs give identical bytes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::{incompatibility_screen, Verdict};
use crate::catalog::RootSystemData;
use crate::dynkin::TypeLabel;
use crate::exact::{Rational, RootVector};
use crate::projector::ProjectedSet;
use crate::subsystems::{SubsystemAnalysis, SubsystemReport};
use crate::theorems::{Discrepancy, InstanceResult, TableComparison};
use crate::theta::ThetaSubset;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv buffer: {0}")]
    Buffer(String),
    #[error("unknown format {0:?} (expected json, csv or markdown)")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            _ => Err(ReportError::UnknownFormat(s.to_string())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Markdown => "markdown",
        })
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, ReportError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| ReportError::Buffer(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| ReportError::Buffer(e.to_string()))
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn md_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| md_cell(c)).collect();
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    out
}

fn join_types(types: impl IntoIterator<Item = TypeLabel>) -> String {
    let v: Vec<String> = types.into_iter().map(|t| t.to_string()).collect();
    if v.is_empty() {
        "None".into()
    } else {
        v.join(", ")
    }
}

fn join_rationals(v: &[Rational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn theta_alphas(theta: &ThetaSubset) -> String {
    theta.indices().iter().map(|i| format!("α{i}")).collect::<Vec<_>>().join(", ")
}

// ---------------------------------------------------------------- construct

pub fn render_system(sys: &RootSystemData, format: Format) -> Result<String, ReportError> {
    let rows = || {
        let simple = sys.simple.iter().enumerate().map(|(i, r)| (format!("α{}", i + 1), r));
        let roots = sys.roots.iter().map(|r| ("root".to_string(), r));
        simple
            .chain(roots)
            .map(|(kind, r)| vec![kind, r.to_string(), r.norm2().to_string()])
            .collect::<Vec<_>>()
    };
    match format {
        Format::Json => json(sys),
        Format::Csv => csv_table(&["kind", "vector", "norm2"], rows()),
        Format::Markdown => Ok(format!(
            "# {}\n\n{} roots in dimension {}; adjacency {:?}\n\n{}",
            sys.label,
            sys.roots.len(),
            sys.ambient_dim,
            sys.adjacency,
            md_table(&["kind", "vector", "squared length"], rows())
        )),
    }
}

// ---------------------------------------------------------------- project

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectedElement {
    pub vector: RootVector,
    pub norm2: Rational,
    pub fiber_size: usize,
    /// Coordinates over Δ_Θ.
    pub coefficients: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub system: String,
    pub theta: ThetaSubset,
    pub d: usize,
    pub sigma_size: usize,
    pub kernel_size: usize,
    pub delta_indices: Vec<usize>,
    pub delta_theta: Vec<RootVector>,
    pub elements: Vec<ProjectedElement>,
}

impl ProjectionReport {
    pub fn new(ps: &ProjectedSet) -> Self {
        ProjectionReport {
            system: ps.label.to_string(),
            theta: ps.theta.clone(),
            d: ps.d,
            sigma_size: ps.sigma_theta.len(),
            kernel_size: ps.kernel.len(),
            delta_indices: ps.delta_indices.clone(),
            delta_theta: ps.delta_theta.clone(),
            elements: ps
                .sigma_theta
                .iter()
                .map(|v| ProjectedElement {
                    vector: v.clone(),
                    norm2: v.norm2(),
                    fiber_size: ps.fibers[v].len(),
                    coefficients: ps.coefficients(v),
                })
                .collect(),
        }
    }
}

pub fn render_projection(ps: &ProjectedSet, format: Format) -> Result<String, ReportError> {
    let r = ProjectionReport::new(ps);
    let rows = || {
        r.elements
            .iter()
            .map(|e| vec![e.vector.to_string(), e.norm2.to_string(), e.fiber_size.to_string(), join_rationals(&e.coefficients)])
            .collect::<Vec<_>>()
    };
    match format {
        Format::Json => json(&r),
        Format::Csv => csv_table(&["vector", "norm2", "fiber_size", "coefficients"], rows()),
        Format::Markdown => {
            let simple: Vec<String> = r
                .delta_indices
                .iter()
                .zip(&r.delta_theta)
                .map(|(i, v)| format!("- ᾱ{i} = {v}, squared length {}", v.norm2()))
                .collect();
            Ok(format!(
                "# {} projected away from Θ = {}\n\nd = {}, |Σ_Θ| = {}, roots in the kernel: {}\n\n{}\n\n{}",
                r.system,
                r.theta,
                r.d,
                r.sigma_size,
                r.kernel_size,
                simple.join("\n"),
                md_table(&["vector", "squared length", "fiber size", "coefficients over Δ_Θ"], rows())
            ))
        }
    }
}

// ---------------------------------------------------------------- analyze

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemSummary {
    pub decomposition: String,
    pub rank: usize,
    pub root_count: usize,
    pub reduced: bool,
    pub simple_system: Vec<RootVector>,
}

impl From<&SubsystemReport> for SubsystemSummary {
    fn from(r: &SubsystemReport) -> Self {
        SubsystemSummary {
            decomposition: r.decomposition(),
            rank: r.rank,
            root_count: r.roots.len(),
            reduced: r.reduced,
            simple_system: r.simple_system.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSummary {
    pub a: RootVector,
    pub b: RootVector,
    /// `None` when orthogonal.
    pub c: Option<Rational>,
    pub r: Rational,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub system: String,
    pub theta: ThetaSubset,
    pub d: usize,
    pub sigma_size: usize,
    pub max_rank: usize,
    pub achieves_d: bool,
    pub irreducible_rank: usize,
    pub signature: Vec<TypeLabel>,
    pub irreducible_types: Vec<TypeLabel>,
    pub max_rank_subsystems: Vec<SubsystemSummary>,
    pub irreducible_subsystems: Vec<SubsystemSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<PairSummary>>,
}

impl AnalysisReport {
    pub fn new(ps: &ProjectedSet, a: &SubsystemAnalysis, with_pairs: bool) -> Self {
        let pairs = with_pairs.then(|| {
            incompatibility_screen(ps)
                .pairs
                .into_iter()
                .map(|p| PairSummary { a: p.a, b: p.b, c: p.data.c, r: p.data.r, verdict: p.data.verdict })
                .collect()
        });
        AnalysisReport {
            system: ps.label.to_string(),
            theta: ps.theta.clone(),
            d: a.d,
            sigma_size: ps.sigma_theta.len(),
            max_rank: a.max_rank,
            achieves_d: a.achieves_d(),
            irreducible_rank: a.irreducible_rank,
            signature: a.irreducible_signature().into_iter().collect(),
            irreducible_types: a.irreducible_types.iter().copied().collect(),
            max_rank_subsystems: a.max_rank_reports.iter().map(SubsystemSummary::from).collect(),
            irreducible_subsystems: a.irreducible_reports.iter().map(SubsystemSummary::from).collect(),
            pairs,
        }
    }
}

fn subsystem_rows(kind: &str, list: &[SubsystemSummary]) -> Vec<Vec<String>> {
    list.iter()
        .map(|s| {
            let simple: Vec<String> = s.simple_system.iter().map(ToString::to_string).collect();
            vec![
                kind.to_string(),
                s.decomposition.clone(),
                s.rank.to_string(),
                s.root_count.to_string(),
                s.reduced.to_string(),
                simple.join(" "),
            ]
        })
        .collect()
}

pub fn render_analysis(report: &AnalysisReport, format: Format) -> Result<String, ReportError> {
    let header = ["kind", "decomposition", "rank", "roots", "reduced", "simple_system"];
    let rows = || {
        let mut rows = subsystem_rows("max_rank", &report.max_rank_subsystems);
        rows.extend(subsystem_rows("irreducible", &report.irreducible_subsystems));
        rows
    };
    match format {
        Format::Json => json(report),
        Format::Csv => csv_table(&header, rows()),
        Format::Markdown => {
            let mut out = format!(
                "# {} with Θ = {}\n\n- d = {}, |Σ_Θ| = {}\n- maximal rank {} (achieves d: {})\n- irreducible rank {}, signature {}\n- irreducible types at that rank: {}\n\n",
                report.system,
                report.theta,
                report.d,
                report.sigma_size,
                report.max_rank,
                report.achieves_d,
                report.irreducible_rank,
                join_types(report.signature.iter().copied()),
                join_types(report.irreducible_types.iter().copied()),
            );
            out.push_str(&md_table(&header, rows()));
            if let Some(pairs) = &report.pairs {
                out.push('\n');
                out.push_str(&md_table(
                    &["a", "b", "C", "R", "verdict"],
                    pairs.iter().map(|p| {
                        vec![
                            p.a.to_string(),
                            p.b.to_string(),
                            p.c.as_ref().map_or_else(|| "orthogonal".into(), ToString::to_string),
                            p.r.to_string(),
                            p.verdict.to_string(),
                        ]
                    }),
                ));
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------- sweep

fn instance_row(r: &InstanceResult) -> Vec<String> {
    let (predicted, rule) = match &r.prediction {
        Some(p) => (p.predicted.map_or_else(String::new, |t| t.to_string()), p.rule.clone()),
        None => (String::new(), String::new()),
    };
    vec![
        r.system.clone(),
        r.theta.to_string(),
        r.d.to_string(),
        r.sigma_size.to_string(),
        r.max_rank.to_string(),
        r.max_rank_types.join("; "),
        r.irreducible_rank.to_string(),
        join_types(r.signature.iter().copied()),
        predicted,
        rule,
        r.decomposition_violations.to_string(),
        r.weyl_invariant.to_string(),
        r.discrepancies.iter().map(|d| d.source.as_str()).collect::<Vec<_>>().join("; "),
    ]
}

const SWEEP_HEADER: [&str; 13] = [
    "system",
    "theta",
    "d",
    "sigma_size",
    "max_rank",
    "max_rank_types",
    "irreducible_rank",
    "signature",
    "predicted",
    "rule",
    "decomposition_violations",
    "weyl_invariant",
    "discrepancies",
];

pub fn render_sweep(results: &[InstanceResult], format: Format) -> Result<String, ReportError> {
    match format {
        Format::Json => json(&results),
        Format::Csv => csv_table(&SWEEP_HEADER, results.iter().map(instance_row)),
        Format::Markdown => Ok(md_table(&SWEEP_HEADER, results.iter().map(instance_row))),
    }
}

// ---------------------------------------------------------------- verify

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub scope: String,
    pub instances: usize,
    pub hard_failures: usize,
    pub soft_differences: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl VerifyReport {
    pub fn new(scope: impl Into<String>, instances: usize, discrepancies: Vec<Discrepancy>) -> Self {
        let hard_failures = discrepancies.iter().filter(|d| d.source.is_hard()).count();
        VerifyReport {
            scope: scope.into(),
            instances,
            hard_failures,
            soft_differences: discrepancies.len() - hard_failures,
            discrepancies,
        }
    }
}

fn discrepancy_row(d: &Discrepancy) -> Vec<String> {
    vec![
        d.source.as_str().to_string(),
        if d.source.is_hard() { "hard" } else { "soft" }.to_string(),
        d.system.clone(),
        d.theta.to_string(),
        d.expected.clone(),
        d.found.clone(),
    ]
}

pub fn render_verify(report: &VerifyReport, format: Format) -> Result<String, ReportError> {
    let header = ["source", "severity", "system", "theta", "expected", "found"];
    match format {
        Format::Json => json(report),
        Format::Csv => csv_table(&header, report.discrepancies.iter().map(discrepancy_row)),
        Format::Markdown => Ok(format!(
            "# Verification: {}\n\n{} instances, {} hard failures, {} soft differences\n\n{}",
            report.scope,
            report.instances,
            report.hard_failures,
            report.soft_differences,
            md_table(&header, report.discrepancies.iter().map(discrepancy_row))
        )),
    }
}

// ---------------------------------------------------------------- table

fn cr_text(c: &TableComparison) -> (String, String) {
    let pairs: Vec<String> = c.chosen.iter().map(|p| format!("ᾱ{}, ᾱ{}", p.i, p.j)).collect();
    let values: Vec<String> = c
        .chosen
        .iter()
        .map(|p| match &p.c {
            Some(cv) => format!("C={cv}, R={}", p.r),
            None => "orthogonal".into(),
        })
        .collect();
    (pairs.join("; "), values.join("; "))
}

fn table_row(c: &TableComparison) -> Vec<String> {
    let (pairs, values) = cr_text(c);
    vec![
        theta_alphas(&c.theta),
        join_rationals(&c.squared_lengths),
        pairs,
        values,
        c.reference_c_and_r.clone(),
        c.expected_text.clone(),
        c.found_text(),
        if c.matches { String::new() } else { "differs".into() },
    ]
}

const TABLE_HEADER: [&str; 8] = [
    "Θ = {..}",
    "squared lengths of projected roots",
    "chosen roots to calculate C and R",
    "C and R",
    "reference C and R",
    "root system of highest rank obtained (of rank ≥ 2)",
    "found",
    "diff",
];

pub fn render_table(system: &str, rows: &[TableComparison], format: Format) -> Result<String, ReportError> {
    match format {
        Format::Json => json(&rows),
        Format::Csv => csv_table(&TABLE_HEADER, rows.iter().map(table_row)),
        Format::Markdown => Ok(format!(
            "# Root systems occurring in Σ_Θ for Σ of type {system}\n\n{}",
            md_table(&TABLE_HEADER, rows.iter().map(table_row))
        )),
    }
}
