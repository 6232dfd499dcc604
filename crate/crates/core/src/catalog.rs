//! Root systems in the coordinates used throughout the crate.
//!
//! Classical systems use the standard models on e_1..e_n (A_n on e_1..e_{n+1}).
//! F4 uses Δ = (e1−e2, e2−e3, e3, −½(e1+e2+e3+e4)). G2 lives in the plane
//! x+y+z = 0 of a 3-space. The E-series comes in two models:
//!
//! * `Labesse`: coordinates e0..e7 (stored as indices 0..7), with
//!   α1 = ½[e0+e1+e2+e3−e4−e5−e6−e7], α_{i} = e_i − e_{i−1} for 2 ≤ i ≤ 7,
//!   and for E8 additionally α8 = −e0−e7. In this numbering α1 is the node
//!   attached to α4, so α1 and α2 trade places relative to Bourbaki.
//! * `Bourbaki`: the usual ε1..ε8 model of E8, with E7 and E6 cut out as
//!   orthogonal complements.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynkin::{Diagram, TypeFamily, TypeLabel};
use crate::exact::{dot, linalg, Rational, RootVector};
use crate::theta::ThetaSubset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("invalid system label: {0}")]
    InvalidLabel(String),
    #[error("malformed system definition: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn is_classical(self) -> bool {
        matches!(self, Family::A | Family::B | Family::C | Family::D)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            _ => Err(CatalogError::InvalidLabel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Labesse,
    Bourbaki,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Labesse => "labesse",
            Convention::Bourbaki => "bourbaki",
        })
    }
}

impl FromStr for Convention {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "labesse" => Ok(Convention::Labesse),
            "bourbaki" => Ok(Convention::Bourbaki),
            _ => Err(CatalogError::InvalidLabel(format!("unknown convention {s:?}"))),
        }
    }
}

/// Family, rank and (for E only) coordinate convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SystemLabel {
    pub family: Family,
    pub rank: usize,
    pub convention: Convention,
}

impl SystemLabel {
    pub fn new(family: Family, rank: usize) -> Result<Self, CatalogError> {
        Self::with_convention(family, rank, Convention::Labesse)
    }

    pub fn with_convention(family: Family, rank: usize, convention: Convention) -> Result<Self, CatalogError> {
        let ok = match family {
            Family::A | Family::B | Family::C => rank >= 1,
            Family::D => rank >= 2,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(CatalogError::InvalidLabel(format!("{family}{rank}")));
        }
        // Convention only distinguishes E models.
        let convention = if family == Family::E { convention } else { Convention::Labesse };
        Ok(SystemLabel { family, rank, convention })
    }

    /// Parse `E8`, `F4`, `b5` and so on.
    pub fn parse(s: &str, convention: Convention) -> Result<Self, CatalogError> {
        let t = s.trim();
        let bad = || CatalogError::InvalidLabel(s.to_string());
        let mut chars = t.chars();
        let fam: Family = chars.next().ok_or_else(bad)?.to_string().parse()?;
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        Self::with_convention(fam, rank, convention)
    }

    /// Every label the catalog builds for ranks up to `max_classical`.
    pub fn all_buildable(max_classical: usize) -> Vec<SystemLabel> {
        let mut out = Vec::new();
        for fam in [Family::A, Family::B, Family::C, Family::D] {
            let lo = if fam == Family::D { 2 } else { 1 };
            for n in lo..=max_classical {
                out.push(SystemLabel::new(fam, n).unwrap());
            }
        }
        for conv in [Convention::Labesse, Convention::Bourbaki] {
            for n in 6..=8 {
                out.push(SystemLabel::with_convention(Family::E, n, conv).unwrap());
            }
        }
        out.push(SystemLabel::new(Family::F, 4).unwrap());
        out.push(SystemLabel::new(Family::G, 2).unwrap());
        out
    }

    pub fn type_label(&self) -> TypeLabel {
        let fam = match self.family {
            Family::A => TypeFamily::A,
            Family::B => TypeFamily::B,
            Family::C => TypeFamily::C,
            Family::D => TypeFamily::D,
            Family::E => TypeFamily::E,
            Family::F => TypeFamily::F,
            Family::G => TypeFamily::G,
        };
        TypeLabel::new(fam, self.rank)
    }
}

impl fmt::Display for SystemLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)?;
        if self.family == Family::E && self.convention == Convention::Bourbaki {
            write!(f, " (bourbaki)")?;
        }
        Ok(())
    }
}

/// A named root system with its ordered simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystemData {
    pub label: SystemLabel,
    pub ambient_dim: usize,
    /// All roots, sorted.
    pub roots: Vec<RootVector>,
    /// Δ in diagram order; index `i` is α_{i+1}.
    pub simple: Vec<RootVector>,
    /// Pairs `(i, j)`, 1-based, `i < j`, of adjacent simple roots.
    pub adjacency: Vec<(usize, usize)>,
}

impl RootSystemData {
    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    /// α_i with 1-based `i`.
    pub fn alpha(&self, i: usize) -> &RootVector {
        &self.simple[i - 1]
    }

    pub fn contains(&self, v: &RootVector) -> bool {
        self.roots.binary_search(v).is_ok()
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.adjacency.contains(&(a, b))
    }

    /// Assemble from raw parts, checking the structural invariants.
    pub fn from_parts(
        label: SystemLabel,
        roots: Vec<RootVector>,
        simple: Vec<RootVector>,
    ) -> Result<Self, CatalogError> {
        let dim = simple
            .first()
            .map(RootVector::dim)
            .ok_or_else(|| CatalogError::Malformed("no simple roots".into()))?;
        if roots.iter().chain(&simple).any(|r| r.dim() != dim) {
            return Err(CatalogError::Malformed("inconsistent dimensions".into()));
        }
        let mut roots = roots;
        roots.sort();
        roots.dedup();
        let n = simple.len();
        let mut adjacency = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !dot(&simple[i], &simple[j]).is_zero() {
                    adjacency.push((i + 1, j + 1));
                }
            }
        }
        let sys = RootSystemData { label, ambient_dim: dim, roots, simple, adjacency };
        if sys.rank() != label.rank {
            return Err(CatalogError::Malformed(format!(
                "{} simple roots given for {label}",
                sys.rank()
            )));
        }
        if sys.roots.iter().any(RootVector::is_zero) {
            return Err(CatalogError::Malformed("zero vector among roots".into()));
        }
        if sys.roots.iter().any(|r| !sys.contains(&-r)) {
            return Err(CatalogError::Malformed("root set is not symmetric".into()));
        }
        if sys.simple.iter().any(|a| !sys.contains(a)) {
            return Err(CatalogError::Malformed("simple root missing from root set".into()));
        }
        Ok(sys)
    }

    /// Coefficients of `v` over Δ, or `None` if `v` is outside span(Δ).
    pub fn simple_coefficients(&self, v: &RootVector) -> Option<Vec<Rational>> {
        let g: Vec<Vec<Rational>> = self
            .simple
            .iter()
            .map(|a| self.simple.iter().map(|b| dot(a, b)).collect())
            .collect();
        let rhs: Vec<Rational> = self.simple.iter().map(|a| dot(a, v)).collect();
        let c = linalg::solve(&g, &rhs)?;
        let mut back = RootVector::zeros(v.dim());
        for (ci, a) in c.iter().zip(&self.simple) {
            back = &back + &a.scale(ci);
        }
        (back == *v).then_some(c)
    }

    /// Reflection of `v` in the root `r`.
    pub fn reflect(r: &RootVector, v: &RootVector) -> RootVector {
        let k = &(&Rational::from_int(2) * &dot(r, v)) / &r.norm2();
        v - &r.scale(&k)
    }
}

fn unit(dim: usize, i: usize) -> RootVector {
    RootVector::unit(dim, i)
}

fn pm_pairs(dim: usize, lo: usize, hi: usize, out: &mut Vec<RootVector>) {
    for i in lo..hi {
        for j in i + 1..hi {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut c = vec![0i64; dim];
                c[i] = si;
                c[j] = sj;
                out.push(RootVector::from_ints(&c));
            }
        }
    }
}

fn type_a(n: usize) -> (Vec<RootVector>, Vec<RootVector>) {
    let dim = n + 1;
    let mut roots = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                roots.push(&unit(dim, i) - &unit(dim, j));
            }
        }
    }
    let simple = (0..n).map(|i| &unit(dim, i) - &unit(dim, i + 1)).collect();
    (roots, simple)
}

fn type_bcd(family: Family, n: usize) -> (Vec<RootVector>, Vec<RootVector>) {
    let mut roots = Vec::new();
    pm_pairs(n, 0, n, &mut roots);
    let long_short = match family {
        Family::B => Some(1),
        Family::C => Some(2),
        _ => None,
    };
    if let Some(k) = long_short {
        for i in 0..n {
            let e = unit(n, i).scale(&Rational::from_int(k));
            roots.push(-&e);
            roots.push(e);
        }
    }
    let mut simple: Vec<RootVector> = (0..n - 1).map(|i| &unit(n, i) - &unit(n, i + 1)).collect();
    simple.push(match family {
        Family::B => unit(n, n - 1),
        Family::C => unit(n, n - 1).scale(&Rational::from_int(2)),
        _ => &unit(n, n - 2) + &unit(n, n - 1),
    });
    (roots, simple)
}

fn type_f4() -> (Vec<RootVector>, Vec<RootVector>) {
    let mut roots = Vec::new();
    for i in 0..4 {
        roots.push(unit(4, i));
        roots.push(-&unit(4, i));
    }
    pm_pairs(4, 0, 4, &mut roots);
    for mask in 0..16u32 {
        let c: Vec<i64> = (0..4).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
        roots.push(RootVector::from_ints_over(&c, 2));
    }
    let simple = vec![
        RootVector::from_ints(&[1, -1, 0, 0]),
        RootVector::from_ints(&[0, 1, -1, 0]),
        RootVector::from_ints(&[0, 0, 1, 0]),
        RootVector::from_ints_over(&[-1, -1, -1, -1], 2),
    ];
    (roots, simple)
}

fn type_g2() -> (Vec<RootVector>, Vec<RootVector>) {
    let mut roots = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            roots.push(&unit(3, i) - &unit(3, j));
            let k = 3 - i - j;
            let mut c = vec![-1i64; 3];
            c[k] = 2;
            let long = RootVector::from_ints(&c);
            roots.push(-&long);
            roots.push(long);
        }
    }
    let simple = vec![RootVector::from_ints(&[1, -1, 0]), RootVector::from_ints(&[-2, 1, 1])];
    (roots, simple)
}

/// Half-integer vectors ½(±1,…,±1) over `dim` coordinates filtered by `keep(mask)`,
/// where bit k set means coordinate k is negative.
fn half_vectors(dim: usize, keep: impl Fn(u32) -> bool) -> Vec<RootVector> {
    (0..1u32 << dim)
        .filter(|&m| keep(m))
        .map(|m| {
            let c: Vec<i64> = (0..dim).map(|k| if m >> k & 1 == 1 { -1 } else { 1 }).collect();
            RootVector::from_ints_over(&c, 2)
        })
        .collect()
}

fn labesse_alpha1() -> RootVector {
    RootVector::from_ints_over(&[1, 1, 1, 1, -1, -1, -1, -1], 2)
}

fn type_e_labesse(n: usize) -> (Vec<RootVector>, Vec<RootVector>) {
    let mut roots = Vec::new();
    match n {
        8 => {
            pm_pairs(8, 0, 8, &mut roots);
            roots.extend(half_vectors(8, |m| m.count_ones() % 2 == 0));
        }
        7 => {
            for i in 0..8 {
                for j in 0..8 {
                    if i != j {
                        roots.push(&unit(8, i) - &unit(8, j));
                    }
                }
            }
            roots.extend(half_vectors(8, |m| m.count_ones() == 4));
        }
        6 => {
            for i in 1..7 {
                for j in 1..7 {
                    if i != j {
                        roots.push(&unit(8, i) - &unit(8, j));
                    }
                }
            }
            let d = &unit(8, 0) - &unit(8, 7);
            roots.push(-&d);
            roots.push(d);
            // Four + and four −, with e0 and e7 of opposite sign.
            roots.extend(half_vectors(8, |m| {
                m.count_ones() == 4 && ((m & 1) != 0) != ((m >> 7 & 1) != 0)
            }));
        }
        _ => unreachable!(),
    }
    let mut simple = vec![labesse_alpha1()];
    for i in 2..=n.min(7) {
        simple.push(&unit(8, i) - &unit(8, i - 1));
    }
    if n == 8 {
        simple.push(-(&unit(8, 0) + &unit(8, 7)));
    }
    (roots, simple)
}

fn type_e_bourbaki(n: usize) -> (Vec<RootVector>, Vec<RootVector>) {
    let mut e8 = Vec::new();
    pm_pairs(8, 0, 8, &mut e8);
    e8.extend(half_vectors(8, |m| m.count_ones() % 2 == 0));
    let mut cuts = Vec::new();
    if n <= 7 {
        cuts.push(&unit(8, 6) + &unit(8, 7));
    }
    if n == 6 {
        cuts.push(&unit(8, 5) - &unit(8, 6));
    }
    let roots = e8
        .into_iter()
        .filter(|r| cuts.iter().all(|c| dot(r, c).is_zero()))
        .collect();
    let mut simple = vec![
        RootVector::from_ints_over(&[1, -1, -1, -1, -1, -1, -1, 1], 2),
        &unit(8, 0) + &unit(8, 1),
    ];
    for i in 3..=n {
        simple.push(&unit(8, i - 2) - &unit(8, i - 3));
    }
    (roots, simple)
}

/// Build the root system named by `label`.
pub fn build(label: SystemLabel) -> Result<RootSystemData, CatalogError> {
    let label = SystemLabel::with_convention(label.family, label.rank, label.convention)?;
    let n = label.rank;
    let (roots, simple) = match label.family {
        Family::A => type_a(n),
        Family::B | Family::C | Family::D => type_bcd(label.family, n),
        Family::F => type_f4(),
        Family::G => type_g2(),
        Family::E => match label.convention {
            Convention::Labesse => type_e_labesse(n),
            Convention::Bourbaki => type_e_bourbaki(n),
        },
    };
    RootSystemData::from_parts(label, roots, simple)
}

/// A connected component of Θ in the Dynkin diagram of Δ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaComponent {
    /// 1-based Δ indices, ascending.
    pub indices: Vec<usize>,
    pub label: TypeLabel,
}

impl ThetaComponent {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn start(&self) -> usize {
        self.indices[0]
    }

    pub fn end(&self) -> usize {
        *self.indices.last().unwrap()
    }
}

/// Components of Θ plus the gaps between consecutive ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaDecomposition {
    pub components: Vec<ThetaComponent>,
    /// `gaps[i]` counts the Δ indices strictly between component `i` and `i+1`.
    pub gaps: Vec<usize>,
}

/// Split Θ into connected Dynkin components, ordered by smallest index.
///
/// For classical families the tail component keeps its family letter even at
/// low rank (B1 for {α_n} in B_n, C1, D_k for a fork at the end of D_n), since
/// that is what the classical pattern rules key on. Otherwise labels are the
/// normalized diagram types.
pub fn dynkin_components(theta: &ThetaSubset, sys: &RootSystemData) -> ThetaDecomposition {
    let idx: Vec<usize> = theta.indices().to_vec();
    let roots: Vec<RootVector> = idx.iter().map(|&i| sys.alpha(i).clone()).collect();
    let diagram = Diagram::from_simple_roots(&roots).expect("simple roots form a valid diagram");
    let n = sys.rank();
    let mut components: Vec<ThetaComponent> = diagram
        .classify()
        .expect("subdiagram of a finite-type diagram is finite type")
        .into_iter()
        .map(|c| {
            let indices: Vec<usize> = c.nodes.iter().map(|&k| idx[k]).collect();
            let r = indices.len();
            let holds = |i: usize| indices.contains(&i);
            let label = match sys.label.family {
                Family::B if holds(n) => TypeLabel::new(TypeFamily::B, r),
                Family::C if holds(n) => TypeLabel::new(TypeFamily::C, r),
                Family::D if n >= 3 && holds(n) && holds(n - 1) && holds(n - 2) => {
                    TypeLabel::new(TypeFamily::D, r)
                }
                _ => c.label,
            };
            ThetaComponent { indices, label }
        })
        .collect();
    components.sort_by_key(|c| c.start());
    let gaps = components
        .windows(2)
        .map(|w| w[1].start().saturating_sub(w[0].end() + 1))
        .collect();
    ThetaDecomposition { components, gaps }
}

/// Every root is a one-signed integer combination of Δ.
pub fn check_simple_expansion(sys: &RootSystemData) -> Result<(), RootVector> {
    for r in &sys.roots {
        let c = sys.simple_coefficients(r).ok_or_else(|| r.clone())?;
        let integral = c.iter().all(Rational::is_integer);
        let nonneg = c.iter().all(|x| !x.is_negative());
        let nonpos = c.iter().all(|x| !x.is_positive());
        if !integral || !(nonneg || nonpos) {
            return Err(r.clone());
        }
    }
    Ok(())
}

/// Crystallographic condition and reflection closure over all root pairs.
pub fn check_axioms(sys: &RootSystemData) -> Result<(), (RootVector, RootVector)> {
    let two = Rational::from_int(2);
    let roots: BTreeSet<&RootVector> = sys.roots.iter().collect();
    for r in &sys.roots {
        let rn = r.norm2();
        for s in &sys.roots {
            let k = &(&two * &dot(r, s)) / &rn;
            if !k.is_integer() {
                return Err((r.clone(), s.clone()));
            }
            let refl = s - &r.scale(&k);
            if !roots.contains(&refl) {
                return Err((r.clone(), s.clone()));
            }
        }
    }
    Ok(())
}
