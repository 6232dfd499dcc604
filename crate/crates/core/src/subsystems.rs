//! Root subsystems contained in a finite symmetric set of vectors.
//!
//! Every reduced root system Φ has exactly one simple system made of
//! lexicographically positive vectors, and a set of lexicographically positive
//! vectors with pairwise non-positive inner products is linearly independent.
//! So enumerating pairwise-obtuse sets of canonical representatives, in
//! increasing index order, visits every reduced subsystem exactly once. The
//! reflection closure is monotone in the generating set, so a node whose
//! closure leaves the universe is pruned with its whole subtree.
//!
//! Non-reduced subsystems (type BC) are obtained afterwards by doubling the
//! short roots of B_r and A_1 components when the doubles are present.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynkin::{format_decomposition, Diagram, DynkinError, TypeFamily, TypeLabel};
use crate::exact::{dot, gram_rank, Rational, RootVector};
use crate::projector::ProjectedSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("reflection closure leaves the universe: {0} is missing")]
    Missing(RootVector),
    #[error("non-integral Cartan pairing between {0} and {1}")]
    NonIntegral(RootVector, RootVector),
    #[error("seed vector is zero")]
    ZeroSeed,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizeError {
    #[error("empty root set")]
    Empty,
    #[error("not a root system: {0}")]
    NotRootSystem(String),
    #[error(transparent)]
    Diagram(#[from] DynkinError),
}

fn cartan_coefficient(a: &RootVector, b: &RootVector) -> Rational {
    &(&Rational::from_int(2) * &dot(a, b)) / &a.norm2()
}

/// Smallest set containing ±seed and closed under the reflections in its
/// members, provided it stays inside `universe`.
///
/// The work queue starts with the seed in order, then the negated seed; each
/// dequeued vector is reflected by every seed vector in seed order. The first
/// image outside `universe` is reported.
pub fn reflection_closure(seed: &[RootVector], universe: &[RootVector]) -> Result<Vec<RootVector>, ClosureError> {
    if seed.iter().any(RootVector::is_zero) {
        return Err(ClosureError::ZeroSeed);
    }
    let uni: BTreeSet<&RootVector> = universe.iter().collect();
    let mut members: BTreeSet<RootVector> = BTreeSet::new();
    let mut queue: VecDeque<RootVector> = VecDeque::new();
    for v in seed.iter().cloned().chain(seed.iter().map(|v| -v)) {
        if !uni.contains(&v) {
            return Err(ClosureError::Missing(v));
        }
        if members.insert(v.clone()) {
            queue.push_back(v);
        }
    }
    while let Some(x) = queue.pop_front() {
        for g in seed {
            let k = cartan_coefficient(g, &x);
            if !k.is_integer() {
                return Err(ClosureError::NonIntegral(g.clone(), x.clone()));
            }
            let y = &x - &g.scale(&k);
            if members.contains(&y) {
                continue;
            }
            if !uni.contains(&y) {
                return Err(ClosureError::Missing(y));
            }
            members.insert(y.clone());
            queue.push_back(y);
        }
    }
    let out: Vec<RootVector> = members.into_iter().collect();
    for a in &out {
        for b in &out {
            if !cartan_coefficient(a, b).is_integer() {
                return Err(ClosureError::NonIntegral(a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

/// One irreducible factor of a recognized root system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub label: TypeLabel,
    /// Simple roots of the indivisible part of this factor.
    pub simple: Vec<RootVector>,
    pub roots: Vec<RootVector>,
}

/// Decompose a root system into irreducible factors (BC included).
pub fn recognize_components(roots: &[RootVector]) -> Result<Vec<Component>, RecognizeError> {
    if roots.is_empty() {
        return Err(RecognizeError::Empty);
    }
    let set: BTreeSet<&RootVector> = roots.iter().collect();
    let half = Rational::new(1, 2);
    let two = Rational::from_int(2);
    let core: Vec<&RootVector> = roots.iter().filter(|r| !set.contains(&r.scale(&half))).collect();
    let positive: Vec<&RootVector> = core.iter().copied().filter(|r| r.is_canonical()).collect();
    let pos_set: BTreeSet<&RootVector> = positive.iter().copied().collect();
    let simple: Vec<RootVector> = positive
        .iter()
        .filter(|r| !positive.iter().any(|a| *a != **r && pos_set.contains(&(**r - *a))))
        .map(|r| (*r).clone())
        .collect();
    if gram_rank(&simple) != simple.len() || simple.len() != gram_rank(roots) {
        return Err(RecognizeError::NotRootSystem("indecomposable roots are not a basis".into()));
    }
    let diagram = Diagram::from_simple_roots(&simple)?;
    let mut out = Vec::new();
    let mut used = 0usize;
    for comp in diagram.classify()? {
        let basis: Vec<RootVector> = comp.nodes.iter().map(|&i| simple[i].clone()).collect();
        let mut members: Vec<RootVector> = core
            .iter()
            .filter(|r| basis.iter().any(|b| !dot(r, b).is_zero()))
            .map(|r| (*r).clone())
            .collect();
        let mut label = comp.label;
        let upgradable = matches!((label.family, label.rank), (TypeFamily::B, _) | (TypeFamily::A, 1));
        let min_norm = basis.iter().map(RootVector::norm2).min().unwrap();
        let short: Vec<RootVector> = members.iter().filter(|r| r.norm2() == min_norm).cloned().collect();
        let doubled = short.iter().filter(|r| set.contains(&r.scale(&two))).count();
        if doubled > 0 {
            if !upgradable || doubled != short.len() {
                return Err(RecognizeError::NotRootSystem(format!("partial doubling in {label} factor")));
            }
            label = TypeLabel::new(TypeFamily::BC, label.rank);
            members.extend(short.iter().map(|r| r.scale(&two)));
        }
        members.sort();
        if members.len() != label.root_count() {
            return Err(RecognizeError::NotRootSystem(format!(
                "{label} factor has {} roots, expected {}",
                members.len(),
                label.root_count()
            )));
        }
        used += members.len();
        out.push(Component { label, simple: basis, roots: members });
    }
    if used != roots.len() {
        return Err(RecognizeError::NotRootSystem("roots outside every factor".into()));
    }
    out.sort_by(|a, b| b.label.rank.cmp(&a.label.rank).then(a.label.cmp(&b.label)).then(a.roots.cmp(&b.roots)));
    Ok(out)
}

/// Types of the irreducible factors, largest rank first.
pub fn recognize_type(roots: &[RootVector]) -> Result<Vec<TypeLabel>, RecognizeError> {
    Ok(recognize_components(roots)?.into_iter().map(|c| c.label).collect())
}

/// A root subsystem found inside Σ_Θ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemReport {
    pub roots: Vec<RootVector>,
    pub rank: usize,
    pub components: Vec<TypeLabel>,
    pub reduced: bool,
    pub simple_system: Vec<RootVector>,
    pub achieves_d: bool,
}

impl SubsystemReport {
    pub fn decomposition(&self) -> String {
        format_decomposition(&self.components)
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }
}

/// Everything the search learns about one Σ_Θ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemAnalysis {
    pub d: usize,
    pub max_rank: usize,
    /// Inclusion-maximal subsystems among those of rank `max_rank`.
    pub max_rank_reports: Vec<SubsystemReport>,
    /// Highest rank of an irreducible subsystem.
    pub irreducible_rank: usize,
    /// Inclusion-maximal irreducible subsystems of rank `irreducible_rank`.
    pub irreducible_reports: Vec<SubsystemReport>,
    /// Every irreducible type (maximal or not) realized at `irreducible_rank`.
    pub irreducible_types: BTreeSet<TypeLabel>,
    /// Search tree nodes visited (valid partial bases).
    pub nodes: u64,
}

impl SubsystemAnalysis {
    pub fn achieves_d(&self) -> bool {
        self.max_rank == self.d
    }

    /// Every factor of every reported subsystem.
    pub fn all_components(&self) -> impl Iterator<Item = TypeLabel> + '_ {
        self.max_rank_reports
            .iter()
            .chain(&self.irreducible_reports)
            .flat_map(|r| r.components.iter().copied())
    }

    /// Types of maximal irreducible subsystems at the top irreducible rank,
    /// or empty when that rank is below 2.
    pub fn irreducible_signature(&self) -> BTreeSet<TypeLabel> {
        if self.irreducible_rank < 2 {
            return BTreeSet::new();
        }
        self.irreducible_reports.iter().map(|r| r.components[0]).collect()
    }
}

const NONE: u16 = u16::MAX;

type Bits = Vec<u64>;

fn bit_get(b: &[u64], i: usize) -> bool {
    b[i >> 6] >> (i & 63) & 1 == 1
}

fn bit_set(b: &mut [u64], i: usize) {
    b[i >> 6] |= 1 << (i & 63);
}

fn bits_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn bits_count(a: &[u64]) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

/// Σ_Θ in integer coordinates with reflection tables.
struct Engine {
    n: usize,
    words: usize,
    vecs: Vec<RootVector>,
    norm: Vec<i64>,
    ip: Vec<i64>,
    refl: Vec<u16>,
    double: Vec<u16>,
    neg: Vec<u16>,
    /// Universe indices of canonical representatives, ascending.
    canon: Vec<u16>,
    /// Over canonical positions: non-positive product and the pair spans a
    /// rank-two system inside the universe.
    compat: Vec<bool>,
}

impl Engine {
    fn new(universe: &[RootVector]) -> Self {
        let mut vecs: Vec<RootVector> = universe.to_vec();
        vecs.sort();
        vecs.dedup();
        let n = vecs.len();
        assert!(n < NONE as usize, "universe too large");
        let lcm = vecs
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, v| acc.lcm(&v.denominator_lcm()));
        let scale = Rational::from_big(num_rational::BigRational::from_integer(lcm));
        let ints: Vec<Vec<i64>> = vecs
            .iter()
            .map(|v| {
                v.coords()
                    .iter()
                    .map(|c| (c * &scale).to_i64().expect("coordinate fits in i64"))
                    .collect()
            })
            .collect();
        let index: HashMap<&[i64], u16> = ints.iter().enumerate().map(|(i, v)| (v.as_slice(), i as u16)).collect();
        let dotc = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
        let norm: Vec<i64> = ints.iter().map(|v| dotc(v, v)).collect();
        let mut ip = vec![0i64; n * n];
        for i in 0..n {
            for j in i..n {
                let x = dotc(&ints[i], &ints[j]);
                ip[i * n + j] = x;
                ip[j * n + i] = x;
            }
        }
        let mut refl = vec![NONE; n * n];
        let mut buf = vec![0i64; ints.first().map_or(0, Vec::len)];
        for g in 0..n {
            for x in 0..n {
                let num = 2 * ip[g * n + x];
                if num % norm[g] != 0 {
                    continue;
                }
                let k = num / norm[g];
                for (t, (a, b)) in buf.iter_mut().zip(ints[x].iter().zip(&ints[g])) {
                    *t = a - k * b;
                }
                if let Some(&y) = index.get(buf.as_slice()) {
                    refl[g * n + x] = y;
                }
            }
        }
        let lookup = |v: Vec<i64>| index.get(v.as_slice()).copied().unwrap_or(NONE);
        let neg: Vec<u16> = ints.iter().map(|v| lookup(v.iter().map(|x| -x).collect())).collect();
        let double: Vec<u16> = ints.iter().map(|v| lookup(v.iter().map(|x| 2 * x).collect())).collect();
        let canon: Vec<u16> = (0..n).filter(|&i| vecs[i].is_canonical()).map(|i| i as u16).collect();
        let words = n.div_ceil(64).max(1);
        let mut e = Engine {
            n,
            words,
            vecs,
            norm,
            ip,
            refl,
            double,
            neg,
            canon,
            compat: Vec::new(),
        };
        let m = e.canon.len();
        let mut compat = vec![false; m * m];
        for p in 0..m {
            for q in p + 1..m {
                let ok = e.pair_ok(e.canon[p] as usize, e.canon[q] as usize);
                compat[p * m + q] = ok;
                compat[q * m + p] = ok;
            }
        }
        e.compat = compat;
        e
    }

    fn ipx(&self, a: usize, b: usize) -> i64 {
        self.ip[a * self.n + b]
    }

    fn reflect(&self, g: usize, x: usize) -> u16 {
        self.refl[g * self.n + x]
    }

    fn pair_ok(&self, a: usize, b: usize) -> bool {
        let g = self.ipx(a, b);
        if g > 0 {
            return false;
        }
        if g < 0 {
            let (na, nb) = (self.norm[a], self.norm[b]);
            if (2 * g) % na != 0 || (2 * g) % nb != 0 {
                return false;
            }
            let m = (2 * g / na) * (2 * g / nb);
            if !(1..=3).contains(&m) {
                return false;
            }
        }
        let root = self.root_node();
        self.extend(&root, &[], a)
            .and_then(|node| self.extend(&node, &[a], b))
            .is_some()
    }

    fn root_node(&self) -> Closure {
        Closure { bits: vec![0; self.words], members: Vec::new() }
    }

    /// Closure of `gens ∪ {c}` from the closure of `gens`.
    fn extend(&self, parent: &Closure, gens: &[usize], c: usize) -> Option<Closure> {
        let mut bits = parent.bits.clone();
        let mut members = parent.members.clone();
        let old = members.len();
        for x in [c, self.neg[c] as usize] {
            if x == NONE as usize {
                return None;
            }
            if !bit_get(&bits, x) {
                bit_set(&mut bits, x);
                members.push(x as u16);
            }
        }
        for i in 0..old {
            let y = self.reflect(c, members[i] as usize);
            if y == NONE {
                return None;
            }
            if !bit_get(&bits, y as usize) {
                bit_set(&mut bits, y as usize);
                members.push(y);
            }
        }
        let mut k = old;
        while k < members.len() {
            let x = members[k] as usize;
            for &g in gens.iter().chain(std::iter::once(&c)) {
                let y = self.reflect(g, x);
                if y == NONE {
                    return None;
                }
                if !bit_get(&bits, y as usize) {
                    bit_set(&mut bits, y as usize);
                    members.push(y);
                }
            }
            k += 1;
        }
        Some(Closure { bits, members })
    }

    fn connected(&self, basis: &[usize]) -> bool {
        if basis.len() <= 1 {
            return !basis.is_empty();
        }
        let mut seen = vec![false; basis.len()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for j in 0..basis.len() {
                if !seen[j] && self.ipx(basis[i], basis[j]) != 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    fn dfs(&self, basis: &mut Vec<usize>, node: &Closure, cands: &[usize], cap: usize, acc: &mut Acc) {
        acc.nodes += 1;
        acc.record(self, basis, &node.bits);
        if basis.len() == cap {
            return;
        }
        let m = self.canon.len();
        for (k, &p) in cands.iter().enumerate() {
            let c = self.canon[p] as usize;
            if let Some(child) = self.extend(node, basis, c) {
                let next: Vec<usize> = cands[k + 1..].iter().copied().filter(|&q| self.compat[p * m + q]).collect();
                basis.push(c);
                self.dfs(basis, &child, &next, cap, acc);
                basis.pop();
            }
        }
    }

    fn search(&self, cap: usize, parallel: bool) -> Acc {
        let m = self.canon.len();
        let root = self.root_node();
        let top = |p: usize| {
            let mut acc = Acc::default();
            if cap == 0 {
                return acc;
            }
            let c = self.canon[p] as usize;
            if let Some(child) = self.extend(&root, &[], c) {
                let next: Vec<usize> = (p + 1..m).filter(|&q| self.compat[p * m + q]).collect();
                let mut basis = vec![c];
                self.dfs(&mut basis, &child, &next, cap, &mut acc);
            }
            acc
        };
        let parts: Vec<Acc> = if parallel {
            (0..m).into_par_iter().map(top).collect()
        } else {
            (0..m).map(top).collect()
        };
        parts.into_iter().fold(Acc::default(), Acc::merge)
    }

    fn gram(&self, basis: &[usize]) -> Vec<Vec<i64>> {
        basis.iter().map(|&a| basis.iter().map(|&b| self.ipx(a, b)).collect()).collect()
    }

    /// Classify a basis, double short roots where possible, and report both
    /// the reduced and the upgraded labels.
    fn upgrade(&self, basis: &[usize], bits: &[u64]) -> Upgraded {
        let diagram = Diagram::from_int_gram(&self.gram(basis)).expect("search only admits valid bases");
        let comps = diagram.classify().expect("positive definite diagrams are finite type");
        let mut out_bits = bits.to_vec();
        let mut labels = Vec::new();
        let mut reduced_labels = Vec::new();
        let mut reduced = true;
        for comp in comps {
            reduced_labels.push(comp.label);
            let kb: Vec<usize> = comp.nodes.iter().map(|&i| basis[i]).collect();
            let upgradable = matches!((comp.label.family, comp.label.rank), (TypeFamily::B, _) | (TypeFamily::A, 1));
            if !upgradable {
                labels.push(comp.label);
                continue;
            }
            let min_norm = kb.iter().map(|&b| self.norm[b]).min().unwrap();
            let short: Vec<usize> = (0..self.n)
                .filter(|&x| bit_get(bits, x) && self.norm[x] == min_norm && kb.iter().any(|&b| self.ipx(x, b) != 0))
                .collect();
            if short.iter().all(|&x| self.double[x] != NONE) {
                for &x in &short {
                    bit_set(&mut out_bits, self.double[x] as usize);
                }
                labels.push(TypeLabel::new(TypeFamily::BC, comp.label.rank));
                reduced = false;
            } else {
                labels.push(comp.label);
            }
        }
        Upgraded { bits: out_bits, labels, reduced_labels, reduced }
    }

    fn report(&self, basis: &[usize], up: &Upgraded, d: usize) -> SubsystemReport {
        let roots: Vec<RootVector> = (0..self.n).filter(|&i| bit_get(&up.bits, i)).map(|i| self.vecs[i].clone()).collect();
        let mut components = up.labels.clone();
        components.sort_by(|a, b| b.rank.cmp(&a.rank).then(a.cmp(b)));
        SubsystemReport {
            rank: basis.len(),
            roots,
            components,
            reduced: up.reduced,
            simple_system: basis.iter().map(|&i| self.vecs[i].clone()).collect(),
            achieves_d: basis.len() == d,
        }
    }

    fn maximal_reports(&self, found: &[(Vec<usize>, Bits)], d: usize) -> Vec<SubsystemReport> {
        let mut ups: Vec<(Vec<usize>, Upgraded)> =
            found.iter().map(|(b, bits)| (b.clone(), self.upgrade(b, bits))).collect();
        ups.sort_by(|a, b| bits_count(&b.1.bits).cmp(&bits_count(&a.1.bits)).then(a.1.bits.cmp(&b.1.bits)));
        ups.dedup_by(|a, b| a.1.bits == b.1.bits);
        let mut kept: Vec<(Vec<usize>, Upgraded)> = Vec::new();
        for (b, u) in ups {
            if !kept.iter().any(|(_, k)| bits_subset(&u.bits, &k.bits)) {
                kept.push((b, u));
            }
        }
        let mut reports: Vec<SubsystemReport> = kept.iter().map(|(b, u)| self.report(b, u, d)).collect();
        sort_reports(&mut reports);
        reports
    }

    /// True when the universe is itself closed under its reflections.
    fn is_closed(&self) -> bool {
        self.refl.iter().all(|&y| y != NONE)
    }
}

struct Upgraded {
    bits: Bits,
    labels: Vec<TypeLabel>,
    reduced_labels: Vec<TypeLabel>,
    reduced: bool,
}

#[derive(Clone)]
struct Closure {
    bits: Bits,
    members: Vec<u16>,
}

#[derive(Default)]
struct Acc {
    nodes: u64,
    max_rank: usize,
    at_max: Vec<(Vec<usize>, Bits)>,
    irr_rank: usize,
    irr_at_max: Vec<(Vec<usize>, Bits)>,
}

impl Acc {
    fn record(&mut self, e: &Engine, basis: &[usize], bits: &[u64]) {
        let r = basis.len();
        if r > self.max_rank {
            self.max_rank = r;
            self.at_max.clear();
        }
        if r == self.max_rank && r > 0 {
            self.at_max.push((basis.to_vec(), bits.to_vec()));
        }
        if r >= self.irr_rank && r > 0 && e.connected(basis) {
            if r > self.irr_rank {
                self.irr_rank = r;
                self.irr_at_max.clear();
            }
            self.irr_at_max.push((basis.to_vec(), bits.to_vec()));
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.nodes += other.nodes;
        match self.max_rank.cmp(&other.max_rank) {
            std::cmp::Ordering::Less => {
                self.max_rank = other.max_rank;
                self.at_max = other.at_max;
            }
            std::cmp::Ordering::Equal => self.at_max.extend(other.at_max),
            std::cmp::Ordering::Greater => {}
        }
        match self.irr_rank.cmp(&other.irr_rank) {
            std::cmp::Ordering::Less => {
                self.irr_rank = other.irr_rank;
                self.irr_at_max = other.irr_at_max;
            }
            std::cmp::Ordering::Equal => self.irr_at_max.extend(other.irr_at_max),
            std::cmp::Ordering::Greater => {}
        }
        self
    }
}

fn sort_reports(reports: &mut [SubsystemReport]) {
    reports.sort_by(|a, b| {
        b.rank
            .cmp(&a.rank)
            .then_with(|| a.decomposition().cmp(&b.decomposition()))
            .then_with(|| a.roots.cmp(&b.roots))
    });
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub rank_cap: usize,
    /// Explore first-level subtrees on the rayon pool.
    pub parallel: bool,
}

impl SearchOptions {
    pub fn new(rank_cap: usize) -> Self {
        SearchOptions { rank_cap, parallel: true }
    }
}

/// Exhaustive subsystem analysis of an arbitrary symmetric vector set.
pub fn analyze_universe(universe: &[RootVector], d: usize, opts: SearchOptions) -> SubsystemAnalysis {
    let engine = Engine::new(universe);
    let acc = engine.search(opts.rank_cap, opts.parallel);
    let max_rank_reports = engine.maximal_reports(&acc.at_max, d);
    let irreducible_reports = engine.maximal_reports(&acc.irr_at_max, d);
    let mut irreducible_types = BTreeSet::new();
    for (b, bits) in &acc.irr_at_max {
        let up = engine.upgrade(b, bits);
        irreducible_types.extend(up.labels);
        irreducible_types.extend(up.reduced_labels);
    }
    SubsystemAnalysis {
        d,
        max_rank: acc.max_rank,
        max_rank_reports,
        irreducible_rank: acc.irr_rank,
        irreducible_reports,
        irreducible_types,
        nodes: acc.nodes,
    }
}

/// Exhaustive subsystem analysis of Σ_Θ.
pub fn analyze(ps: &ProjectedSet, opts: SearchOptions) -> SubsystemAnalysis {
    analyze_universe(&ps.sigma_theta, ps.d, opts)
}

/// Inclusion-maximal subsystems of Σ_Θ among those of the highest rank
/// reachable within `rank_cap`.
pub fn max_rank_subsystems(ps: &ProjectedSet, rank_cap: usize) -> Vec<SubsystemReport> {
    max_rank_subsystems_of(&ps.sigma_theta, ps.d, rank_cap)
}

/// As [`max_rank_subsystems`] for an arbitrary symmetric vector set.
pub fn max_rank_subsystems_of(universe: &[RootVector], d: usize, rank_cap: usize) -> Vec<SubsystemReport> {
    let engine = Engine::new(universe);
    let full_rank = gram_rank(universe);
    if rank_cap >= full_rank && engine.is_closed() {
        // The universe is a root system and contains every subsystem.
        if let Ok(comps) = recognize_components(&engine.vecs) {
            let mut components: Vec<TypeLabel> = comps.iter().map(|c| c.label).collect();
            components.sort_by(|a, b| b.rank.cmp(&a.rank).then(a.cmp(b)));
            let mut simple: Vec<RootVector> = comps.iter().flat_map(|c| c.simple.iter().cloned()).collect();
            simple.sort();
            let reduced = components.iter().all(|t| t.family != TypeFamily::BC);
            return vec![SubsystemReport {
                roots: engine.vecs.clone(),
                rank: full_rank,
                components,
                reduced,
                simple_system: simple,
                achieves_d: full_rank == d,
            }];
        }
    }
    analyze_universe(universe, d, SearchOptions::new(rank_cap)).max_rank_reports
}

/// Independent re-check of the root system axioms for a reported set.
pub fn audit_root_system(roots: &[RootVector]) -> Result<(), String> {
    let set: BTreeSet<&RootVector> = roots.iter().collect();
    for a in roots {
        if a.is_zero() {
            return Err("zero vector".into());
        }
        if !set.contains(&-a) {
            return Err(format!("{a} present but its negative is not"));
        }
        for b in roots {
            let k = cartan_coefficient(a, b);
            if !k.is_integer() {
                return Err(format!("non-integral pairing of {a} on {b}"));
            }
            let y = b - &a.scale(&k);
            if !set.contains(&y) {
                return Err(format!("reflection of {b} in {a} missing"));
            }
        }
    }
    Ok(())
}

/// Count of root sets per decomposition string, for quick summaries.
pub fn decomposition_histogram(reports: &[SubsystemReport]) -> BTreeMap<String, usize> {
    let mut h = BTreeMap::new();
    for r in reports {
        *h.entry(r.decomposition()).or_insert(0) += 1;
    }
    h
}
