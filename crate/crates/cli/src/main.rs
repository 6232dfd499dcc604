use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use rootproj::catalog::{build, check_axioms, CatalogError, Convention, Family, RootSystemData, SystemLabel};
use rootproj::projector::{project_system, ProjectionError};
use rootproj::report::{
    render_analysis, render_projection, render_sweep, render_system, render_table, render_verify, AnalysisReport,
    Format, ReportError, VerifyReport,
};
use rootproj::subsystems::{analyze, SearchOptions};
use rootproj::theorems::{classical_sweep, compare_table, sweep_system, verify_exceptional, Discrepancy, TheoremError};
use rootproj::theta::{ThetaError, ThetaSubset};

const NUMBERING: &str = "\
Θ is a comma-separated list of 1-based simple-root indices, e.g. --theta 2,3.

Classical families use the chain numbering α_i = e_i − e_{i+1} with the
special root last (α_n = e_n for B, 2e_n for C, e_{n-1} + e_n for D).
F4: α1 = e1 − e2, α2 = e2 − e3, α3 = e3, α4 = −½(e1 + e2 + e3 + e4).

E-series numbering depends on --convention. The default (labesse) works in
coordinates e0..e7 with α1 = ½(e0 + e1 + e2 + e3 − e4 − e5 − e6 − e7),
α_i = e_i − e_{i−1} for 2 ≤ i ≤ 7 and α8 = −e0 − e7, so α1 hangs off α4 and
α2 − α3 − α4 − … − α8 is the long chain. The bourbaki convention uses the
ε-model with α1 and α2 numbered the other way round; the reference tables
are stored in labesse numbering and relabelled automatically.";

#[derive(Parser, Debug)]
#[command(name = "rootproj", version, about = "Exact projections of root systems away from simple roots", after_help = NUMBERING)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format: json, csv or markdown.
    #[arg(long, global = true, default_value = "json")]
    format: String,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Coordinate model for E6, E7, E8: labesse or bourbaki.
    #[arg(long, global = true, default_value = "labesse")]
    convention: String,

    /// Worker threads for the search.
    #[arg(long, global = true, env = "ROOTPROJ_WORKERS")]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct SystemArg {
    /// Root system such as A5, B4, F4 or E8.
    #[arg(long = "type", visible_alias = "system", value_name = "SYSTEM")]
    system: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a root system: roots, simple roots, adjacency.
    Construct(SystemArg),
    /// Project a system away from Θ and list Σ_Θ.
    Project {
        /// Root system such as A5, B4, F4 or E8.
        #[arg(long = "type", visible_alias = "system", value_name = "SYSTEM", required_unless_present = "from", conflicts_with = "from")]
        system: Option<String>,
        /// A system previously written by `construct --format json`.
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(long)]
        theta: String,
    },
    /// Find the root subsystems contained in Σ_Θ.
    Analyze {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        theta: String,
        /// Include C and R for every pair of projected vectors.
        #[arg(long)]
        pairs: bool,
        /// Report only the maximal-rank subsystems.
        #[arg(long)]
        max_rank: bool,
        /// Stop the search at this rank (default d).
        #[arg(long)]
        rank_cap: Option<usize>,
    },
    /// Analyze every proper nonempty Θ of one system or of a classical family.
    Sweep {
        #[arg(long = "type", visible_alias = "system", value_name = "SYSTEM", conflicts_with_all = ["family", "max_n"], required_unless_present = "family")]
        system: Option<String>,
        /// Classical family A, B, C or D.
        #[arg(long, requires = "max_n")]
        family: Option<String>,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Check the classical predictions (1) or the exceptional claims (2).
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        theorem: u8,
        /// Classical family for --theorem 1 (default: all four).
        #[arg(long)]
        family: Option<String>,
        /// Largest rank for --theorem 1.
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        /// F4, E6, E7 or E8 for --theorem 2 (default: all four).
        #[arg(long = "system", visible_alias = "type")]
        system: Option<String>,
    },
    /// Reference table for F4, E6, E7 or E8 next to exhaustive search.
    Table(SystemArg),
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error(transparent)]
    Theorem(#[from] TheoremError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

struct Output {
    text: String,
    hard_failure: bool,
}

fn label(s: &str, convention: Convention) -> Result<SystemLabel, CliError> {
    Ok(SystemLabel::parse(s, convention)?)
}

fn theta_for(s: &str, rank: usize) -> Result<ThetaSubset, CliError> {
    let theta: ThetaSubset = s.parse()?;
    theta.validate_proper(rank)?;
    Ok(theta)
}

fn family(s: &str) -> Result<Family, CliError> {
    let f: Family = s.parse()?;
    if f.is_classical() {
        Ok(f)
    } else {
        Err(CliError::Usage(format!("{s} is not a classical family")))
    }
}

fn load_system(path: &Path) -> Result<RootSystemData, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let raw: RootSystemData =
        serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.display().to_string(), source })?;
    let sys = RootSystemData::from_parts(raw.label, raw.roots, raw.simple)?;
    check_axioms(&sys).map_err(|(a, b)| CliError::Usage(format!("{}: not a root system ({a}, {b})", path.display())))?;
    Ok(sys)
}

fn verify_output(scope: String, instances: usize, discrepancies: Vec<Discrepancy>, format: Format) -> Result<Output, CliError> {
    let report = VerifyReport::new(scope, instances, discrepancies);
    Ok(Output { text: render_verify(&report, format)?, hard_failure: report.hard_failures > 0 })
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let format: Format = cli.format.parse()?;
    let convention: Convention = cli.convention.parse()?;
    let plain = |text: String| Output { text, hard_failure: false };
    match &cli.command {
        Command::Construct(s) => {
            let sys = build(label(&s.system, convention)?)?;
            Ok(plain(render_system(&sys, format)?))
        }
        Command::Project { system, from, theta } => {
            let sys = match (system, from) {
                (Some(s), None) => build(label(s, convention)?)?,
                (None, Some(p)) => load_system(p)?,
                _ => return Err(CliError::Usage("give exactly one of --type or --from".into())),
            };
            let theta = theta_for(theta, sys.rank())?;
            Ok(plain(render_projection(&project_system(&sys, &theta)?, format)?))
        }
        Command::Analyze { system, theta, pairs, max_rank, rank_cap } => {
            let sys = build(label(&system.system, convention)?)?;
            let theta = theta_for(theta, sys.rank())?;
            let ps = project_system(&sys, &theta)?;
            let cap = rank_cap.unwrap_or(ps.d);
            if cap > ps.d {
                return Err(CliError::Usage(format!("--rank-cap {cap} exceeds d = {}", ps.d)));
            }
            let a = analyze(&ps, SearchOptions::new(cap));
            let mut report = AnalysisReport::new(&ps, &a, *pairs);
            if *max_rank {
                report.irreducible_subsystems.clear();
            }
            Ok(plain(render_analysis(&report, format)?))
        }
        Command::Sweep { system, family: fam, max_n } => {
            let results = match (system, fam, max_n) {
                (Some(s), _, _) => sweep_system(&build(label(s, convention)?)?)?,
                (None, Some(f), Some(n)) => classical_sweep(family(f)?, *n)?,
                _ => return Err(CliError::Usage("give --type, or --family with --max-n".into())),
            };
            let hard_failure = results.iter().any(|r| r.hard_failures().next().is_some());
            Ok(Output { text: render_sweep(&results, format)?, hard_failure })
        }
        Command::Verify { theorem: 1, family: fam, max_n, system } => {
            if system.is_some() {
                return Err(CliError::Usage("--system applies to --theorem 2; use --family with --theorem 1".into()));
            }
            let families = match fam {
                Some(f) => vec![family(f)?],
                None => vec![Family::A, Family::B, Family::C, Family::D],
            };
            let mut instances = 0;
            let mut discrepancies = Vec::new();
            for f in &families {
                let results = classical_sweep(*f, *max_n)?;
                instances += results.len();
                discrepancies.extend(results.into_iter().flat_map(|r| r.discrepancies));
            }
            let names: Vec<String> = families.iter().map(ToString::to_string).collect();
            verify_output(format!("theorem 1, families {}, n <= {max_n}", names.join(" ")), instances, discrepancies, format)
        }
        Command::Verify { family: fam, system, .. } => {
            if fam.is_some() {
                return Err(CliError::Usage("--family applies to --theorem 1; use --system with --theorem 2".into()));
            }
            let labels = match system {
                Some(s) => vec![label(s, convention)?],
                None => ["F4", "E6", "E7", "E8"].iter().map(|s| label(s, convention)).collect::<Result<_, _>>()?,
            };
            let mut instances = 0;
            let mut discrepancies = Vec::new();
            for l in &labels {
                if l.family.is_classical() {
                    return Err(CliError::Usage(format!("{l} is classical; use --theorem 1")));
                }
                let sys = build(*l)?;
                instances += (1usize << sys.rank()) - 2;
                discrepancies.extend(verify_exceptional(&sys)?);
            }
            let names: Vec<String> = labels.iter().map(ToString::to_string).collect();
            verify_output(format!("theorem 2, systems {}", names.join(" ")), instances, discrepancies, format)
        }
        Command::Table(s) => {
            let l = label(&s.system, convention)?;
            let rows = compare_table(&build(l)?).map_err(|e| match e {
                TheoremError::NotExceptional(l) => CliError::Usage(format!("no reference table for {l}")),
                other => other.into(),
            })?;
            Ok(plain(render_table(&l.to_string(), &rows, format)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = match execute(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &out.text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", out.text),
    }
    if out.hard_failure {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
