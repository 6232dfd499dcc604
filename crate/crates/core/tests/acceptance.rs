//! End-to-end acceptance criteria. Each test prints one `criterion N: PASS|FAIL`
//! line to stderr (outside the capture) and then asserts the same verdict.
//!
//! Expected values either come from the reference tables or are recomputed
//! here by independent routes (direct enumeration, hand-written projections,
//! the library's own search only where nothing else can decide).

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use rootproj::angle::angle_data;
use rootproj::catalog::{build, check_axioms, check_simple_expansion, Family, RootSystemData, SystemLabel};
use rootproj::dynkin::{TypeFamily, TypeLabel};
use rootproj::exact::{gram_rank, project_complement, ComplementProjector, Rational, RootVector};
use rootproj::projector::{integral_decomposition, project_system, ProjectedSet};
use rootproj::report::{render_analysis, render_table, render_verify, AnalysisReport, Format, VerifyReport};
use rootproj::subsystems::{analyze, audit_root_system, reflection_closure, ClosureError, SearchOptions};
use rootproj::theorems::{classical_sweep, compare_table, verify_exceptional, Discrepancy, InstanceResult, Source};
use rootproj::theta::ThetaSubset;

/// Criteria share one core; running them one at a time keeps wall-clock limits meaningful.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn verdict(n: u32, pass: bool, detail: &str) {
    let line = format!("criterion {n}: {} ({detail})\n", if pass { "PASS" } else { "FAIL" });
    // libtest captures the std handles; the descriptor itself is not captured.
    match std::fs::OpenOptions::new().append(true).open("/dev/stderr") {
        Ok(mut f) => {
            let _ = f.write_all(line.as_bytes());
        }
        Err(_) => eprint!("{line}"),
    }
    assert!(pass, "criterion {n} failed: {detail}");
}

fn sys(f: Family, n: usize) -> RootSystemData {
    build(SystemLabel::new(f, n).unwrap()).unwrap()
}

fn th(v: &[usize]) -> ThetaSubset {
    ThetaSubset::new(v.to_vec())
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn classification_count(label: SystemLabel) -> usize {
    let n = label.rank;
    match label.family {
        Family::A => n * (n + 1),
        Family::B | Family::C => 2 * n * n,
        Family::D => 2 * n * (n - 1),
        Family::E => [72, 126, 240][n - 6],
        Family::F => 48,
        Family::G => 12,
    }
}

/// Every proper nonempty Θ of every system the sweeps cover: classical ranks
/// up to 8, plus G2, F4, E6, E7, E8.
fn swept_systems() -> Vec<RootSystemData> {
    let mut out = Vec::new();
    for f in [Family::A, Family::B, Family::C, Family::D] {
        let lo = if f == Family::D { 2 } else { 1 };
        for n in lo..=8 {
            out.push(sys(f, n));
        }
    }
    out.push(sys(Family::G, 2));
    out.push(sys(Family::F, 4));
    for n in 6..=8 {
        out.push(sys(Family::E, n));
    }
    out
}

fn types_text(types: &BTreeSet<TypeLabel>) -> String {
    if types.is_empty() {
        return "None".into();
    }
    types.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Non-orthogonality graph is connected.
fn is_irreducible(roots: &[RootVector]) -> bool {
    if roots.is_empty() {
        return false;
    }
    let mut seen = vec![false; roots.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..roots.len() {
            if !seen[j] && !rootproj::inner(&roots[i], &roots[j]).unwrap().is_zero() {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

struct ExceptionalRun {
    render: String,
    discrepancies: Vec<Discrepancy>,
    per_system: Vec<(String, usize, Duration)>,
}

fn exceptional_run(threads: usize) -> ExceptionalRun {
    in_pool(threads, || {
        let mut discrepancies = Vec::new();
        let mut per_system = Vec::new();
        let mut instances = 0;
        for (f, n) in [(Family::F, 4), (Family::E, 6), (Family::E, 7), (Family::E, 8)] {
            let s = sys(f, n);
            let start = Instant::now();
            let found = verify_exceptional(&s).unwrap();
            per_system.push((s.label.to_string(), found.iter().filter(|d| d.source.is_hard()).count(), start.elapsed()));
            instances += (1usize << n) - 2;
            discrepancies.extend(found);
        }
        let report = VerifyReport::new("theorem 2, systems F4 E6 E7 E8", instances, discrepancies.clone());
        ExceptionalRun { render: render_verify(&report, Format::Json).unwrap(), discrepancies, per_system }
    })
}

/// The eight-worker run is shared by the exceptional sweep and the determinism check.
fn eight_worker_run() -> &'static ExceptionalRun {
    static RUN: OnceLock<ExceptionalRun> = OnceLock::new();
    RUN.get_or_init(|| exceptional_run(8))
}

fn classical_results() -> &'static (Vec<InstanceResult>, Duration) {
    static RUN: OnceLock<(Vec<InstanceResult>, Duration)> = OnceLock::new();
    RUN.get_or_init(|| {
        let start = Instant::now();
        let mut all = Vec::new();
        for f in [Family::A, Family::B, Family::C, Family::D] {
            all.extend(classical_sweep(f, 8).unwrap());
        }
        (all, start.elapsed())
    })
}

#[test]
fn criterion_01_catalog_axioms() {
    let _g = serial();
    let start = Instant::now();
    let mut bad = Vec::new();
    let labels = SystemLabel::all_buildable(8);
    let mut built = Vec::new();
    for &label in &labels {
        let s = build(label).unwrap();
        if check_axioms(&s).is_err() {
            bad.push(format!("{label}: axioms"));
        }
        if check_simple_expansion(&s).is_err() {
            bad.push(format!("{label}: simple expansion"));
        }
        built.push(s);
    }
    let elapsed = start.elapsed();
    // Oracle side, untimed: classification counts and an independent axiom audit.
    for s in &built {
        let label = s.label;
        if s.roots.len() != classification_count(label) {
            bad.push(format!("{label}: {} roots", s.roots.len()));
        }
        if audit_root_system(&s.roots).is_err() || gram_rank(&s.simple) != label.rank {
            bad.push(format!("{label}: audit"));
        }
    }
    let detail = format!("{} labels, {} problems {:?}, catalog checks {:.1?}", labels.len(), bad.len(), bad, elapsed);
    verdict(1, bad.is_empty() && elapsed < Duration::from_secs(10), &detail);
}

#[test]
fn criterion_02_c_and_r_on_genuine_root_pairs() {
    let _g = serial();
    let start = Instant::now();
    let allowed = [Rational::from_int(4), Rational::from_int(2), Rational::new(4, 3)];
    let mut pairs = 0usize;
    let mut bad = Vec::new();
    for label in SystemLabel::all_buildable(8) {
        let s = build(label).unwrap();
        for (i, a) in s.roots.iter().enumerate() {
            for b in &s.roots[i + 1..] {
                let data = angle_data(a, b).unwrap();
                // Independent: C = |a|²|b|² / <a,b>², R = larger / smaller squared length.
                let ip = rootproj::inner(a, b).unwrap();
                if ip.is_zero() {
                    continue;
                }
                let c = &(&a.norm2() * &b.norm2()) / &(&ip * &ip);
                if c == 1 {
                    continue;
                }
                pairs += 1;
                let (na, nb) = (a.norm2(), b.norm2());
                let r = if na > nb { &na / &nb } else { &nb / &na };
                let ok = allowed.contains(&c) && &c * &r == 4 && data.c.as_ref() == Some(&c) && data.r == r;
                if !ok && bad.len() < 5 {
                    bad.push(format!("{label}: {a} {b} C={c} R={r}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let detail = format!("{pairs} pairs, violations {:?}, {:.1?}", bad, elapsed);
    verdict(2, bad.is_empty() && elapsed < Duration::from_secs(30), &detail);
}

#[test]
fn criterion_03_f4_table_reproduction() {
    let _g = serial();
    let start = Instant::now();
    let f4 = sys(Family::F, 4);
    let t = |s: &str| -> TypeLabel { s.parse().unwrap() };
    // Row order and final column of the reference table.
    let rows: [(&[usize], Vec<TypeLabel>); 10] = [
        (&[1], vec![t("B2")]),
        (&[2], vec![t("B2")]),
        (&[3], vec![t("B3")]),
        (&[4], vec![t("A2"), t("B2")]),
        (&[3, 4], vec![]),
        (&[1, 2], vec![]),
        (&[1, 4], vec![]),
        (&[2, 3], vec![t("B2")]),
        (&[2, 4], vec![]),
        (&[1, 3], vec![]),
    ];
    let table = compare_table(&f4).unwrap();
    let mut mismatches = Vec::new();
    for (theta, want) in &rows {
        let theta = th(theta);
        let want: BTreeSet<TypeLabel> = want.iter().copied().collect();
        let found = &table.iter().find(|c| c.theta == theta).unwrap().found;
        if *found != want {
            mismatches.push(format!("{theta}: expected {} found {}", types_text(&want), types_text(found)));
        }
    }

    let mut evidence = Vec::new();
    // Independent evidence for the G2 rows: Σ_Θ itself is a rank-2 root system
    // with 12 vectors in two lengths of ratio 3.
    for theta in [th(&[3, 4]), th(&[1, 2])] {
        let ps = project_system(&f4, &theta).unwrap();
        let g2: Vec<RootVector> = if theta == th(&[3, 4]) {
            ps.sigma_theta.clone()
        } else {
            // For Θ = {α1, α2} the G2 sits inside Σ_Θ; the search reports it.
            let a = analyze(&ps, SearchOptions::new(ps.d));
            a.irreducible_reports
                .iter()
                .find(|r| r.components.iter().any(|c| c.family == TypeFamily::G))
                .map(|r| r.roots.clone())
                .unwrap_or_default()
        };
        let norms: BTreeSet<Rational> = g2.iter().map(RootVector::norm2).collect();
        let is_g2 = g2.len() == 12
            && audit_root_system(&g2).is_ok()
            && gram_rank(&g2) == 2
            && norms.len() == 2
            && norms.iter().next_back().unwrap() / norms.iter().next().unwrap() == 3
            && g2.iter().all(|v| ps.contains(v));
        if is_g2 {
            evidence.push(format!("{theta}: 12-vector G2 inside Σ_Θ confirmed by direct axiom check"));
        }
    }

    let c_of = |theta: &[usize], i: usize, j: usize| {
        let ps = project_system(&f4, &th(theta)).unwrap();
        let d = angle_data(ps.bar(i).unwrap(), ps.bar(j).unwrap()).unwrap();
        (d.c.unwrap(), d.r)
    };
    let mut spots = Vec::new();
    let (c, r) = c_of(&[1, 2], 3, 4);
    if c != Rational::new(4, 3) || r != 3 {
        spots.push(format!("{{1,2}}: C={c} R={r}"));
    }
    let (c, _) = c_of(&[2, 4], 1, 3);
    if c != Rational::new(9, 2) {
        spots.push(format!("{{2,4}}: C={c}, expected 9/2"));
    }
    let (c, _) = c_of(&[1, 4], 2, 3);
    if c != Rational::new(9, 8) {
        spots.push(format!("{{1,4}}: C={c}, expected 9/8"));
    }
    let elapsed = start.elapsed();
    let pass = mismatches.is_empty() && spots.is_empty() && elapsed < Duration::from_secs(10);
    let detail = format!(
        "table: {}; spot values: {}; {}; {:.1?}",
        mismatches.join("; "),
        spots.join("; "),
        evidence.join("; "),
        elapsed
    );
    verdict(3, pass, &detail);
}

#[test]
fn criterion_04_e8_exception() {
    let _g = serial();
    let start = Instant::now();
    let e8 = sys(Family::E, 8);
    let ps = project_system(&e8, &th(&[8])).unwrap();
    let a = analyze(&ps, SearchOptions::new(ps.d));
    let e7 = TypeLabel::new(TypeFamily::E, 7);
    let report = a.max_rank_reports.iter().find(|r| r.components == vec![e7]);
    let independent = report.is_some_and(|r| {
        // The only irreducible rank-7 root system with 126 roots is E7.
        r.roots.len() == 126
            && gram_rank(&r.roots) == 7
            && audit_root_system(&r.roots).is_ok()
            && is_irreducible(&r.roots)
            && r.roots.iter().all(|v| ps.contains(v))
    });
    let pass = report.is_some_and(|r| r.achieves_d && r.roots.len() == 126) && independent;
    let elapsed = start.elapsed();
    let detail = format!(
        "d = {}, maximal-rank reports {:?}, E7 present: {}, {:.1?}",
        ps.d,
        rootproj::subsystems::decomposition_histogram(&a.max_rank_reports),
        independent,
        elapsed
    );
    verdict(4, pass && elapsed < Duration::from_secs(120), &detail);
}

#[test]
fn criterion_05_exceptional_negatives() {
    let _g = serial();
    let start = Instant::now();
    let run = eight_worker_run();
    let elapsed = start.elapsed();
    let hard: Vec<&Discrepancy> = run
        .discrepancies
        .iter()
        .filter(|d| matches!(d.source, Source::LemmaNoG2 | Source::LemmaNoF4 | Source::Theorem2))
        .collect();
    let mut by_kind: BTreeMap<String, usize> = BTreeMap::new();
    for d in &hard {
        *by_kind.entry(format!("{} {}", d.system, d.source)).or_default() += 1;
    }
    let examples: Vec<String> = hard.iter().take(4).map(|d| format!("{} {}: {}", d.system, d.theta, d.found)).collect();
    let timing: Vec<String> = run.per_system.iter().map(|(s, _, t)| format!("{s} {t:.1?}")).collect();
    let e8_time = run.per_system.iter().find(|(s, _, _)| s == "E8").map(|x| x.2).unwrap();
    let detail = format!("hard hits {by_kind:?}; e.g. {examples:?}; times {timing:?}, total {elapsed:.1?}");
    verdict(5, hard.is_empty() && e8_time < Duration::from_secs(900), &detail);
}

#[test]
fn criterion_06_e6_g2_basis_without_system() {
    let _g = serial();
    let e6 = sys(Family::E, 6);
    let theta = th(&[2, 3, 5, 6]);
    let ps = project_system(&e6, &theta).unwrap();
    let (a1, a4) = (ps.bar(1).unwrap().clone(), ps.bar(4).unwrap().clone());
    let mut notes = Vec::new();

    let data = angle_data(&a1, &a4).unwrap();
    let angle_ok = data.c == Some(Rational::new(4, 3)) && data.r == 3;
    notes.push(format!("C={} R={}", data.c_text(), data.r));

    let sum = &a1 + &a4;
    let closure = reflection_closure(&[a1.clone(), a4.clone()], &ps.sigma_theta);
    let closure_ok = matches!(&closure, Err(ClosureError::Missing(v)) if *v == sum);
    match &closure {
        Ok(set) => notes.push(format!("closure succeeds with {} vectors", set.len())),
        Err(e) => notes.push(format!("closure fails: {e}")),
    }
    // Independent: is ᾱ1 + ᾱ4 the projection of some root?
    let theta_roots: Vec<RootVector> = theta.indices().iter().map(|&i| e6.alpha(i).clone()).collect();
    if let Some(r) = e6.roots.iter().find(|r| project_complement(r, &theta_roots).unwrap() == sum) {
        notes.push(format!("ᾱ1+ᾱ4 = {sum} is the projection of the root {r}"));
    }

    let mut e0_e7 = vec![0i64; 8];
    e0_e7[0] = 1;
    e0_e7[7] = -1;
    let target = RootVector::from_ints(&e0_e7);
    let decomposition = integral_decomposition(&target, &ps);
    let want: Vec<i64> = ps.delta_indices.iter().map(|&i| if i == 1 { 2 } else { 3 }).collect();
    let decomposition_ok = decomposition.as_ref().ok() == Some(&want) && &a1.scale(&2.into()) + &a4.scale(&3.into()) == target;
    notes.push(format!("2ᾱ1+3ᾱ4 = e0−e7 decomposition {:?}", decomposition));

    verdict(6, angle_ok && closure_ok && decomposition_ok, &notes.join("; "));
}

#[test]
fn criterion_07_classical_oracle_equivalence() {
    let _g = serial();
    let (results, elapsed) = classical_results();
    let mut fired = BTreeMap::new();
    let mut problems = Vec::new();
    for r in results {
        if let Some(v) = r.prediction.as_ref().filter(|v| v.applies) {
            *fired.entry(&r.system[..1]).or_insert(0usize) += 1;
            let want = v.predicted.unwrap().normalized();
            let have: BTreeSet<TypeLabel> = r.irreducible_types.iter().map(|t| t.normalized()).collect();
            if r.irreducible_rank != r.d || !have.contains(&want) {
                problems.push(format!("{} {}: predicted {want}, found {have:?}", r.system, r.theta));
            }
        }
        let exceptional = r.irreducible_types.iter().chain(&r.signature).any(|t| t.family.is_exceptional())
            || r.max_rank_types.iter().any(|s| s.contains('E') || s.contains('F') || s.contains('G'));
        if exceptional {
            problems.push(format!("{} {}: exceptional component", r.system, r.theta));
        }
        problems.extend(r.hard_failures().map(|d| format!("{} {}: {}", d.system, d.theta, d.found)));
    }
    let detail = format!(
        "{} instances, predictions fired {:?}, {} discrepancies {:?}, {:.1?}",
        results.len(),
        fired,
        problems.len(),
        problems.iter().take(5).collect::<Vec<_>>(),
        elapsed
    );
    verdict(7, problems.is_empty() && *elapsed < Duration::from_secs(600), &detail);
}

/// Coefficients of σ over Δ_Θ read off from any root in its fiber: the
/// projection kills Θ and fixes nothing else, so they are the Δ∖Θ
/// coefficients of that root.
fn fiber_coefficients(s: &RootSystemData, ps: &ProjectedSet, v: &RootVector) -> Option<Vec<Rational>> {
    let root = ps.fibers.get(v)?.first()?;
    let c = s.simple_coefficients(root)?;
    Some(ps.delta_indices.iter().map(|&i| c[i - 1].clone()).collect())
}

#[test]
fn criterion_08_integral_one_signed_decomposition() {
    let _g = serial();
    let mut instances = 0;
    let mut elements = 0;
    let mut violations = Vec::new();
    for s in swept_systems() {
        for theta in ThetaSubset::all_proper_nonempty(s.rank()) {
            let ps = project_system(&s, &theta).unwrap();
            instances += 1;
            for v in &ps.sigma_theta {
                elements += 1;
                let c = fiber_coefficients(&s, &ps, v).unwrap();
                let mut back = RootVector::zeros(v.dim());
                for (ci, b) in c.iter().zip(&ps.delta_theta) {
                    back = &back + &b.scale(ci);
                }
                let integral = c.iter().all(Rational::is_integer);
                let one_signed = c.iter().all(|x| !x.is_negative()) || c.iter().all(|x| !x.is_positive());
                let library = integral_decomposition(v, &ps).ok();
                let ints: Option<Vec<i64>> = c.iter().map(Rational::to_i64).collect();
                if back != *v || !integral || !one_signed || library != ints {
                    violations.push(format!("{} {} {v}", s.label, theta));
                }
            }
        }
    }
    let detail = format!("{instances} instances, {elements} elements, {} violations {:?}", violations.len(), violations.iter().take(5).collect::<Vec<_>>());
    verdict(8, violations.is_empty(), &detail);
}

#[test]
fn criterion_09_projection_properties() {
    let _g = serial();
    let mut instances = 0;
    let mut problems = Vec::new();
    for s in swept_systems() {
        for theta in ThetaSubset::all_proper_nonempty(s.rank()) {
            instances += 1;
            let ps = project_system(&s, &theta).unwrap();
            let theta_roots: Vec<RootVector> = theta.indices().iter().map(|&i| s.alpha(i).clone()).collect();
            let proj = ComplementProjector::new(s.ambient_dim, &theta_roots).unwrap();
            if ps.sigma_theta.iter().any(|v| proj.apply(v) != *v) {
                problems.push(format!("{} {}: not idempotent", s.label, theta));
            }
            // s_α r = r − <r,α^∨> α for α ∈ Θ has the same projection as r.
            let images: Vec<RootVector> = s.roots.iter().map(|r| proj.apply(r)).collect();
            let invariant = theta_roots.iter().all(|a| {
                s.roots.iter().zip(&images).all(|(r, pr)| {
                    let k = &(&Rational::from_int(2) * &rootproj::inner(r, a).unwrap()) / &a.norm2();
                    proj.apply(&(r - &a.scale(&k))) == *pr
                })
            });
            if !invariant {
                problems.push(format!("{} {}: not W_Θ-invariant", s.label, theta));
            }
            if s.label.family == Family::A {
                // ē_r is the average of its block of consecutive coordinates.
                let n = s.rank();
                let mut start = 0;
                for end in 0..=n {
                    let closes = end == n || !theta.contains(end + 1);
                    if !closes {
                        continue;
                    }
                    let size = end - start + 1;
                    for r in start..=end {
                        let e = project_complement(&RootVector::unit(n + 1, r), &theta_roots).unwrap();
                        if e.norm2() != Rational::new(1, size as i64) {
                            problems.push(format!("{} {}: |ē_{}|² = {}", s.label, theta, r + 1, e.norm2()));
                        }
                    }
                    start = end + 1;
                }
                if !rootproj::theorems::a_length_formula_holds(&s, &theta) {
                    problems.push(format!("{} {}: library length formula", s.label, theta));
                }
            }
        }
    }
    let detail = format!("{instances} instances, {} problems {:?}", problems.len(), problems.iter().take(5).collect::<Vec<_>>());
    verdict(9, problems.is_empty(), &detail);
}

fn f4_table_render(threads: usize) -> String {
    in_pool(threads, || render_table("F4", &compare_table(&sys(Family::F, 4)).unwrap(), Format::Json).unwrap())
}

fn e8_exception_render(threads: usize) -> String {
    in_pool(threads, || {
        let ps = project_system(&sys(Family::E, 8), &th(&[8])).unwrap();
        let a = analyze(&ps, SearchOptions::new(ps.d));
        render_analysis(&AnalysisReport::new(&ps, &a, false), Format::Json).unwrap()
    })
}

#[test]
fn criterion_10_determinism() {
    let _g = serial();
    let mut differ = Vec::new();
    let t1 = f4_table_render(1);
    if t1 != f4_table_render(8) || t1 != f4_table_render(8) {
        differ.push("F4 table");
    }
    let e1 = e8_exception_render(1);
    if e1 != e8_exception_render(8) || e1 != e8_exception_render(8) {
        differ.push("E8 exception");
    }
    let eight = &eight_worker_run().render;
    if *eight != exceptional_run(1).render || *eight != exceptional_run(8).render {
        differ.push("exceptional sweep");
    }
    let detail = if differ.is_empty() {
        "criteria 3 to 5 reports byte-identical across two runs and 1 vs 8 workers".to_string()
    } else {
        format!("reports differ: {differ:?}")
    };
    verdict(10, differ.is_empty(), &detail);
}
