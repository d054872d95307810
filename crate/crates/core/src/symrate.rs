//! Symmetric-rate values of the noisy MAC: the dependence-balance outer
//! bound, the Cover-Leung inner bound and the cut-set bound.

use serde::{Deserialize, Serialize};

use crate::bounds::{cutset_constraints, refine_simplex};
use crate::channel::{CorrelatedJointDistribution, JointInputDistribution};
use crate::error::Result;
use crate::infofn::raw;
use crate::search::{bisect, for_each_simplex_point};

/// Lattice divisions per axis of the cut-set simplex search.
pub const CUTSET_DIVISIONS: usize = 100;
/// Coordinate-wise golden-section rounds after the cut-set lattice.
pub const CUTSET_REFINE_ROUNDS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricRateSolution {
    pub rate: f64,
    pub u1_star: f64,
    pub u2_star: f64,
    pub u_star: f64,
    pub witness: JointInputDistribution,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutSetSolution {
    pub rate: f64,
    pub joint: CorrelatedJointDistribution,
}

/// `min(h(φ(2u₁)), ½h(φ(2u₂)), g(u₁, u₂))`, the weakened symmetric-rate
/// objective of the `Z = X₁` bound over `S`.
pub fn db_symmetric_objective(u1: f64, u2: f64) -> f64 {
    raw::h_phi(2.0 * u1)
        .min(0.5 * raw::h_phi(2.0 * u2))
        .min(raw::g(u1, u2))
}

/// `min(½h(φ(2u₁)), ½h(φ(2u₂)), g(u₁, u₂))`.
pub fn cl_symmetric_objective(u1: f64, u2: f64) -> f64 {
    (0.5 * raw::h_phi(2.0 * u1))
        .min(0.5 * raw::h_phi(2.0 * u2))
        .min(raw::g(u1, u2))
}

/// `h(φ(s)) - ½h((1-φ(s)) / (3-2φ(s)))`; its root in `[0, ½]` is `2ũ₁`.
pub fn db_fixed_point_residual(s: f64) -> f64 {
    let p = raw::phi(s);
    raw::h(p) - 0.5 * raw::h((1.0 - p) / (3.0 - 2.0 * p))
}

/// The point where `h(φ(2u₁)) = ½h(φ(2u₂)) = g(u₁, u₂)`.
pub fn solve_db_symmetric() -> Result<SymmetricRateSolution> {
    let s = bisect(0.0, 0.5, db_fixed_point_residual)?;
    let q10 = raw::phi(s);
    let q20 = (1.0 - q10) / (3.0 - 2.0 * q10);
    let u1_star = 0.5 * s;
    // φ⁻¹(y) = 2y(1-y) on [0, ½], and u₂ = φ⁻¹(q₂₀) / 2
    let u2_star = q20 * (1.0 - q20);
    Ok(SymmetricRateSolution {
        rate: raw::h(q10),
        u1_star,
        u2_star,
        u_star: raw::f2(2.0 * u1_star, 2.0 * u2_star),
        witness: JointInputDistribution::binary_uniform(q10, q20)?,
    })
}

/// Cover-Leung symmetric rate: on the diagonal `u₁ = u₂ = u`, the crossing of
/// `½h(φ(2u))` (increasing) and `g(u, u)` (decreasing).
pub fn solve_cl_symmetric() -> Result<SymmetricRateSolution> {
    let u = bisect(0.0, 0.25, |u| 0.5 * raw::h_phi(2.0 * u) - raw::g(u, u))?;
    let q = raw::phi(2.0 * u);
    Ok(SymmetricRateSolution {
        rate: 0.5 * raw::h(q),
        u1_star: u,
        u2_star: u,
        u_star: raw::f2(2.0 * u, 2.0 * u),
        witness: JointInputDistribution::binary_uniform(q, q)?,
    })
}

/// `min(I(X₁;Y|X₂), I(X₂;Y|X₁), ½I(X₁,X₂;Y))` for a correlated input law.
pub fn cutset_symmetric_objective(d: &CorrelatedJointDistribution) -> f64 {
    cutset_constraints(d).symmetric_rate()
}

/// Cut-set symmetric rate over all correlated input laws.
pub fn solve_cutset_symmetric() -> CutSetSolution {
    solve_cutset_symmetric_with(CUTSET_DIVISIONS, CUTSET_REFINE_ROUNDS)
}

pub fn solve_cutset_symmetric_with(divisions: usize, rounds: usize) -> CutSetSolution {
    let mut best = (f64::NEG_INFINITY, [0.25; 3]);
    for_each_simplex_point(4, divisions.max(1), |p| {
        let v =
            cutset_symmetric_objective(&CorrelatedJointDistribution::from_abc(p[0], p[1], p[2]));
        if v > best.0 {
            best = (v, [p[0], p[1], p[2]]);
        }
    });
    let (x, rate) = refine_simplex(best.1, rounds, cutset_symmetric_objective);
    CutSetSolution {
        rate,
        joint: CorrelatedJointDistribution::from_abc(x[0], x[1], x[2]),
    }
}
