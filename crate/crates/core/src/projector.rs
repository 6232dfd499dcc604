//! Σ_Θ: nonzero orthogonal projections of the roots onto span(Θ)^⊥.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::catalog::{RootSystemData, SystemLabel};
use crate::exact::{dot, gram_matrix, linalg, ComplementProjector, ExactError, Rational, RootVector};
use crate::theta::{ThetaError, ThetaSubset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectionError {
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("vector {0} is not an element of the projected set")]
    NotInSet(RootVector),
    #[error("vector {vector} has non-integral coefficients {coefficients:?} over the projected simple roots")]
    NonIntegral { vector: RootVector, coefficients: Vec<Rational> },
    #[error("vector {vector} has mixed-sign coefficients {coefficients:?} over the projected simple roots")]
    MixedSign { vector: RootVector, coefficients: Vec<Rational> },
}

/// Σ_Θ with its fibers and Δ_Θ.
#[derive(Debug, Clone)]
pub struct ProjectedSet {
    pub label: SystemLabel,
    pub theta: ThetaSubset,
    /// Sorted, deduplicated, nonzero; closed under negation.
    pub sigma_theta: Vec<RootVector>,
    /// Projections of Δ∖Θ, in Δ order.
    pub delta_theta: Vec<RootVector>,
    /// 1-based Δ indices of `delta_theta`.
    pub delta_indices: Vec<usize>,
    /// Each element of Σ_Θ mapped to the original roots projecting onto it.
    pub fibers: BTreeMap<RootVector, Vec<RootVector>>,
    /// Roots projecting to zero.
    pub kernel: Vec<RootVector>,
    pub d: usize,
    gram_inverse: Vec<Vec<Rational>>,
}

impl ProjectedSet {
    pub fn contains(&self, v: &RootVector) -> bool {
        self.sigma_theta.binary_search(v).is_ok()
    }

    /// Canonical-sign representatives of Σ_Θ, sorted.
    pub fn canonical_reps(&self) -> Vec<RootVector> {
        self.sigma_theta.iter().filter(|v| v.is_canonical()).cloned().collect()
    }

    /// ᾱ_i for 1-based Δ index `i` outside Θ.
    pub fn bar(&self, i: usize) -> Option<&RootVector> {
        self.delta_indices.iter().position(|&k| k == i).map(|p| &self.delta_theta[p])
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        self.sigma_theta.iter().map(|v| self.fibers[v].len()).collect()
    }

    /// Coefficients of `v` over Δ_Θ, unchecked (any vector in a_Θ).
    pub fn coefficients(&self, v: &RootVector) -> Vec<Rational> {
        let rhs: Vec<Rational> = self.delta_theta.iter().map(|b| dot(v, b)).collect();
        self.gram_inverse
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&rhs)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }
}

/// Project every root of `sys` away from Θ.
pub fn project_system(sys: &RootSystemData, theta: &ThetaSubset) -> Result<ProjectedSet, ProjectionError> {
    theta.validate_proper(sys.rank())?;
    let theta_roots: Vec<RootVector> = theta.indices().iter().map(|&i| sys.alpha(i).clone()).collect();
    let proj = ComplementProjector::new(sys.ambient_dim, &theta_roots)?;
    let mut fibers: BTreeMap<RootVector, Vec<RootVector>> = BTreeMap::new();
    let mut kernel = Vec::new();
    for r in &sys.roots {
        let p = proj.apply(r);
        if p.is_zero() {
            kernel.push(r.clone());
        } else {
            fibers.entry(p).or_default().push(r.clone());
        }
    }
    let delta_indices = theta.complement(sys.rank());
    let delta_theta: Vec<RootVector> = delta_indices.iter().map(|&i| proj.apply(sys.alpha(i))).collect();
    let gram = gram_matrix(&delta_theta)?;
    let gram_inverse = linalg::inverse(&gram).ok_or(ExactError::DependentBasis)?;
    Ok(ProjectedSet {
        label: sys.label,
        theta: theta.clone(),
        sigma_theta: fibers.keys().cloned().collect(),
        d: delta_theta.len(),
        delta_theta,
        delta_indices,
        fibers,
        kernel,
        gram_inverse,
    })
}

/// Integer coefficients of `v` ∈ Σ_Θ over Δ_Θ, all of one sign.
pub fn integral_decomposition(v: &RootVector, ps: &ProjectedSet) -> Result<Vec<i64>, DecompositionError> {
    if !ps.contains(v) {
        return Err(DecompositionError::NotInSet(v.clone()));
    }
    let coefficients = ps.coefficients(v);
    let ints: Option<Vec<i64>> = coefficients.iter().map(Rational::to_i64).collect();
    let Some(ints) = ints else {
        return Err(DecompositionError::NonIntegral { vector: v.clone(), coefficients });
    };
    if ints.iter().any(|&c| c > 0) && ints.iter().any(|&c| c < 0) {
        return Err(DecompositionError::MixedSign { vector: v.clone(), coefficients });
    }
    Ok(ints)
}

/// Every element of Σ_Θ without an integral one-signed expansion over Δ_Θ.
pub fn decomposition_violations(ps: &ProjectedSet) -> Vec<DecompositionError> {
    ps.sigma_theta
        .iter()
        .filter_map(|v| integral_decomposition(v, ps).err())
        .collect()
}

/// Projection is constant along each reflection s_α, α ∈ Θ.
pub fn weyl_theta_invariance_check(sys: &RootSystemData, theta: &ThetaSubset) -> bool {
    let theta_roots: Vec<RootVector> = theta.indices().iter().map(|&i| sys.alpha(i).clone()).collect();
    if theta_roots.is_empty() {
        return true;
    }
    let Ok(proj) = ComplementProjector::new(sys.ambient_dim, &theta_roots) else {
        return false;
    };
    theta_roots.iter().all(|a| {
        sys.roots
            .iter()
            .all(|r| proj.apply(r) == proj.apply(&RootSystemData::reflect(a, r)))
    })
}
