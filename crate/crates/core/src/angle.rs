//! Rank-two compatibility of projected vectors via C (inverse squared cosine)
//! and R (ratio of squared lengths, longer over shorter).
//!
//! Two roots of a root system that are neither orthogonal nor proportional
//! have (C, R) ∈ {(4, 1), (2, 2), (4/3, 3)}, so C·R = 4.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{dot, Rational, RootVector};
use crate::projector::ProjectedSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AngleError {
    #[error("zero vector has no angle")]
    ZeroVector,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    A2,
    B2,
    G2,
    Orthogonal,
    Proportional,
    Incompatible,
}

impl Verdict {
    pub fn is_admissible_pair(self) -> bool {
        matches!(self, Verdict::A2 | Verdict::B2 | Verdict::G2)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::A2 => "A2",
            Verdict::B2 => "B2-like",
            Verdict::G2 => "G2-like",
            Verdict::Orthogonal => "orthogonal",
            Verdict::Proportional => "proportional",
            Verdict::Incompatible => "incompatible",
        })
    }
}

/// Which argument of [`angle_data`] has the larger squared length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Longer {
    First,
    Second,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnglePair {
    pub inner: Rational,
    pub norm_a: Rational,
    pub norm_b: Rational,
    /// `None` when orthogonal.
    pub c: Option<Rational>,
    pub r: Rational,
    pub product_cr: Option<Rational>,
    pub longer: Longer,
    pub verdict: Verdict,
}

impl AnglePair {
    pub fn c_text(&self) -> String {
        self.c.as_ref().map_or_else(|| "orthogonal".into(), ToString::to_string)
    }

    pub fn cr_text(&self) -> String {
        self.product_cr.as_ref().map_or_else(|| "orthogonal".into(), ToString::to_string)
    }
}

pub fn angle_data(a: &RootVector, b: &RootVector) -> Result<AnglePair, AngleError> {
    if a.dim() != b.dim() {
        return Err(AngleError::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.is_zero() || b.is_zero() {
        return Err(AngleError::ZeroVector);
    }
    let ip = dot(a, b);
    let na = a.norm2();
    let nb = b.norm2();
    let (longer, r) = match na.cmp(&nb) {
        std::cmp::Ordering::Greater => (Longer::First, &na / &nb),
        std::cmp::Ordering::Less => (Longer::Second, &nb / &na),
        std::cmp::Ordering::Equal => (Longer::Equal, Rational::one()),
    };
    if ip.is_zero() {
        return Ok(AnglePair {
            inner: ip,
            norm_a: na,
            norm_b: nb,
            c: None,
            r,
            product_cr: None,
            longer,
            verdict: Verdict::Orthogonal,
        });
    }
    let c = &(&na * &nb) / &(&ip * &ip);
    let cr = &c * &r;
    let verdict = if c == 1 {
        Verdict::Proportional
    } else if c == 4 && r == 1 {
        Verdict::A2
    } else if c == 2 && r == 2 {
        Verdict::B2
    } else if c == Rational::new(4, 3) && r == 3 {
        Verdict::G2
    } else {
        Verdict::Incompatible
    };
    Ok(AnglePair {
        inner: ip,
        norm_a: na,
        norm_b: nb,
        c: Some(c),
        r,
        product_cr: Some(cr),
        longer,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEntry {
    pub a: RootVector,
    pub b: RootVector,
    pub data: AnglePair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenReport {
    pub pairs: Vec<PairEntry>,
    /// Rank-two shapes realized by at least one pair.
    pub admissible: BTreeSet<Verdict>,
    pub incompatible_count: usize,
}

impl ScreenReport {
    pub fn incompatible(&self) -> impl Iterator<Item = &PairEntry> {
        self.pairs.iter().filter(|p| p.data.verdict == Verdict::Incompatible)
    }

    pub fn find(&self, a: &RootVector, b: &RootVector) -> Option<&PairEntry> {
        let (a, b) = (a.canonical(), b.canonical());
        self.pairs
            .iter()
            .find(|p| (p.a == a && p.b == b) || (p.a == b && p.b == a))
    }
}

/// Angle data for every unordered pair of canonical representatives of Σ_Θ.
pub fn incompatibility_screen(ps: &ProjectedSet) -> ScreenReport {
    let reps = ps.canonical_reps();
    let pairs: Vec<PairEntry> = (0..reps.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let reps = &reps;
            (i + 1..reps.len()).map(move |j| PairEntry {
                a: reps[i].clone(),
                b: reps[j].clone(),
                data: angle_data(&reps[i], &reps[j]).expect("projected vectors are nonzero"),
            })
        })
        .collect();
    let admissible = pairs
        .iter()
        .map(|p| p.data.verdict)
        .filter(|v| v.is_admissible_pair())
        .collect();
    let incompatible_count = pairs.iter().filter(|p| p.data.verdict == Verdict::Incompatible).count();
    ScreenReport { pairs, admissible, incompatible_count }
}
