//! Rate-constraint sets for every bound and the sweeps that assemble their
//! boundaries.
//!
//! Each bound is a union over some parameter domain of pentagons
//! `{R₁ ≤ c₁, R₂ ≤ c₂, R₁ + R₂ ≤ s}`. A sweep evaluates the pentagon on a grid,
//! keeps its two Pareto corners and reports the Pareto frontier of the union.
//! Outer bounds are reported as raw frontiers; achievable regions are
//! convexified (time sharing).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{
    correlated_info_quantities, ChannelModel, CorrelatedJointDistribution, JointInputDistribution,
};
use crate::error::{Error, Result};
use crate::feasible::UTriple;
use crate::geometry::{self, lambda_grid, BoundaryCurve, ParetoAccumulator, RatePair};
use crate::infofn::{raw, DOMAIN_SLACK};
use crate::search::{for_each_simplex_point, golden_max};

/// Samples per parameter axis when none is given.
pub const DEFAULT_GRID_N: usize = 201;

/// `{(R₁, R₂) ≥ 0 : R₁ ≤ r1_max, R₂ ≤ r2_max, R₁ + R₂ ≤ sum_max}`; `None` is an
/// absent constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateConstraintSet {
    pub r1_max: Option<f64>,
    pub r2_max: Option<f64>,
    pub sum_max: Option<f64>,
}

impl RateConstraintSet {
    pub fn new(r1_max: Option<f64>, r2_max: Option<f64>, sum_max: Option<f64>) -> Result<Self> {
        for cap in [r1_max, r2_max, sum_max].into_iter().flatten() {
            if !(cap.is_finite() && cap >= 0.0) {
                return Err(Error::InvalidConfig(format!("invalid rate cap {cap}")));
            }
        }
        Ok(Self {
            r1_max,
            r2_max,
            sum_max,
        })
    }

    pub(crate) fn bounded(r1: f64, r2: f64, sum: f64) -> Self {
        Self {
            r1_max: Some(r1.max(0.0)),
            r2_max: Some(r2.max(0.0)),
            sum_max: Some(sum.max(0.0)),
        }
    }

    fn caps(&self) -> (f64, f64, f64) {
        let inf = f64::INFINITY;
        (
            self.r1_max.unwrap_or(inf),
            self.r2_max.unwrap_or(inf),
            self.sum_max.unwrap_or(inf),
        )
    }

    pub fn contains(&self, p: &RatePair, tol: f64) -> bool {
        let (c1, c2, s) = self.caps();
        p.r1 <= c1 + tol && p.r2 <= c2 + tol && p.r1 + p.r2 <= s + tol
    }

    /// The two Pareto corners: the `R₁`-maximal and the `R₂`-maximal vertex.
    /// They coincide when the sum constraint is inactive.
    pub fn corners(&self) -> Result<[RatePair; 2]> {
        let (c1, c2, s) = self.caps();
        let r1_top = c1.min(s);
        let r2_top = c2.min(s);
        if !r1_top.is_finite() || !r2_top.is_finite() {
            return Err(Error::Unbounded);
        }
        Ok([
            RatePair::new_unchecked(r1_top, c2.min(s - r1_top).max(0.0)),
            RatePair::new_unchecked(c1.min(s - r2_top).max(0.0), r2_top),
        ])
    }

    /// Largest `R` with `(R, R)` in the set.
    pub fn symmetric_rate(&self) -> f64 {
        let (c1, c2, s) = self.caps();
        c1.min(c2).min(0.5 * s)
    }

    /// `max λR₁ + (1-λ)R₂` over the set.
    pub fn support(&self, lambda: f64) -> Result<f64> {
        let [a, b] = self.corners()?;
        Ok(a.weighted(lambda).max(b.weighted(lambda)))
    }

    /// Every cap of `self` is at least the matching cap of `other`, less `tol`.
    pub fn dominates(&self, other: &Self, tol: f64) -> bool {
        let (a1, a2, a) = self.caps();
        let (b1, b2, b) = other.caps();
        a1 >= b1 - tol && a2 >= b2 - tol && a >= b - tol
    }
}

fn check_s(u1: f64, u2: f64) -> Result<(f64, f64)> {
    let ok = |v: f64| v.is_finite() && (-DOMAIN_SLACK..=0.25 + DOMAIN_SLACK).contains(&v);
    if ok(u1) && ok(u2) {
        Ok((u1.clamp(0.0, 0.25), u2.clamp(0.0, 0.25)))
    } else {
        Err(Error::Domain {
            name: "S",
            value: if ok(u1) { u2 } else { u1 },
            lo: 0.0,
            hi: 0.25,
        })
    }
}

fn db_pc1_raw(u1: f64, u2: f64, u: f64) -> RateConstraintSet {
    RateConstraintSet::bounded(
        (0.5 * raw::h(u)).min(raw::h_phi(2.0 * u1)),
        0.5 * raw::h_phi(2.0 * u2),
        raw::h(0.5 * (1.0 - u)),
    )
}

fn db_pc2_raw(u1: f64, u2: f64, u: f64) -> RateConstraintSet {
    RateConstraintSet::bounded(
        0.5 * raw::h_phi(2.0 * u1),
        (0.5 * raw::h(u)).min(raw::h_phi(2.0 * u2)),
        raw::h(0.5 * (1.0 - u)),
    )
}

/// Dependence-balance bound with parallel channel `Z = X₁`.
pub fn db_pc1_constraints(t: &UTriple) -> Result<RateConstraintSet> {
    t.ensure_in_p()?;
    Ok(db_pc1_raw(t.u1, t.u2, t.u))
}

/// Dependence-balance bound with parallel channel `Z = X₂`.
pub fn db_pc2_constraints(t: &UTriple) -> Result<RateConstraintSet> {
    t.ensure_in_p()?;
    Ok(db_pc2_raw(t.u1, t.u2, t.u))
}

fn cover_leung_raw(u1: f64, u2: f64) -> RateConstraintSet {
    RateConstraintSet::bounded(
        0.5 * raw::h_phi(2.0 * u1),
        0.5 * raw::h_phi(2.0 * u2),
        raw::h(raw::xi(u1, u2)),
    )
}

/// Cover-Leung pentagon for the noisy channel at `(u₁, u₂) ∈ S`.
pub fn cover_leung_constraints(u1: f64, u2: f64) -> Result<RateConstraintSet> {
    let (u1, u2) = check_s(u1, u2)?;
    Ok(cover_leung_raw(u1, u2))
}

/// Binary uniform `T` with `q₁₀ = 1 - q₁₁ = φ(2u₁)` and `q₂₀ = 1 - q₂₁ = φ(2u₂)`.
///
/// The same law attains the Cover-Leung caps on the noisy channel and the
/// capacity caps on the erasure channel.
pub fn cover_leung_witness(u1: f64, u2: f64) -> Result<JointInputDistribution> {
    let (u1, u2) = check_s(u1, u2)?;
    JointInputDistribution::binary_uniform(raw::phi(2.0 * u1), raw::phi(2.0 * u2))
}

/// Same law as [`cover_leung_witness`].
pub fn erasure_fb_witness(u1: f64, u2: f64) -> Result<JointInputDistribution> {
    cover_leung_witness(u1, u2)
}

fn erasure_fb_raw(u1: f64, u2: f64) -> RateConstraintSet {
    RateConstraintSet::bounded(
        raw::h_phi(2.0 * u1),
        raw::h_phi(2.0 * u2),
        raw::mu(raw::f2(2.0 * u1, 2.0 * u2)),
    )
}

/// Erasure MAC feedback-capacity pentagon at `(u₁, u₂) ∈ S`.
pub fn erasure_fb_constraints(u1: f64, u2: f64) -> Result<RateConstraintSet> {
    let (u1, u2) = check_s(u1, u2)?;
    Ok(erasure_fb_raw(u1, u2))
}

/// Erasure outer pentagon over the full triple: sum cap `μ(u)` rather than
/// `μ(f(2u₁, 2u₂))`.
pub fn erasure_triple_constraints(t: &UTriple) -> Result<RateConstraintSet> {
    t.ensure_in_p()?;
    Ok(RateConstraintSet::bounded(
        raw::h_phi(2.0 * t.u1),
        raw::h_phi(2.0 * t.u2),
        raw::mu(t.u),
    ))
}

/// Erasure MAC without feedback.
pub fn erasure_no_fb_constraints() -> RateConstraintSet {
    RateConstraintSet::bounded(1.0, 1.0, 1.5)
}

/// Cut-set pentagon of a correlated input law on the noisy channel.
pub fn cutset_constraints(d: &CorrelatedJointDistribution) -> RateConstraintSet {
    let q = correlated_info_quantities(ChannelModel::NOISY, d);
    RateConstraintSet::bounded(q.i_x1_y_given_x2, q.i_x2_y_given_x1, q.i_x1x2_y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionKind {
    CutSet,
    DbPc1,
    DbPc2,
    DbPcIntersection,
    CoverLeung,
    ErasureFb,
    ErasureNoFb,
}

impl RegionKind {
    pub const ALL: [RegionKind; 7] = [
        RegionKind::CutSet,
        RegionKind::DbPc1,
        RegionKind::DbPc2,
        RegionKind::DbPcIntersection,
        RegionKind::CoverLeung,
        RegionKind::ErasureFb,
        RegionKind::ErasureNoFb,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RegionKind::CutSet => "cutset",
            RegionKind::DbPc1 => "dbpc1",
            RegionKind::DbPc2 => "dbpc2",
            RegionKind::DbPcIntersection => "dbpc",
            RegionKind::CoverLeung => "cover-leung",
            RegionKind::ErasureFb => "erasure-fb",
            RegionKind::ErasureNoFb => "erasure-nofb",
        }
    }

    /// Whether the region is an outer bound (reported without convexification).
    pub fn is_outer(&self) -> bool {
        matches!(
            self,
            RegionKind::CutSet
                | RegionKind::DbPc1
                | RegionKind::DbPc2
                | RegionKind::DbPcIntersection
        )
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown region {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub which: RegionKind,
    pub grid_n: usize,
}

impl RegionSpec {
    pub fn new(which: RegionKind, grid_n: usize) -> Result<Self> {
        if grid_n < 2 {
            return Err(Error::InvalidConfig(format!("grid_n = {grid_n} < 2")));
        }
        Ok(Self { which, grid_n })
    }
}

fn axis(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| {
        if k + 1 == n {
            hi
        } else {
            lo + (hi - lo) * k as f64 / (n - 1) as f64
        }
    })
}

fn push_corners(acc: &mut ParetoAccumulator, set: &RateConstraintSet) {
    if let Ok(corners) = set.corners() {
        acc.extend(corners);
    }
}

/// Union over `P` of the pentagons produced by `cell`.
fn sweep_p(grid_n: usize, cell: impl Fn(f64, f64, f64) -> RateConstraintSet) -> ParetoAccumulator {
    let mut acc = ParetoAccumulator::new();
    for u1 in axis(grid_n, 0.0, 0.25) {
        for u2 in axis(grid_n, 0.0, 0.25) {
            let t = UTriple::new(u1, u2, 0.0);
            let (lo, hi) = (t.lower_limit(), t.upper_limit());
            for u in axis(grid_n, lo, hi.max(lo)) {
                push_corners(&mut acc, &cell(u1, u2, u));
            }
        }
    }
    acc
}

fn sweep_s(grid_n: usize, cell: impl Fn(f64, f64) -> RateConstraintSet) -> ParetoAccumulator {
    let mut acc = ParetoAccumulator::new();
    for u1 in axis(grid_n, 0.0, 0.25) {
        for u2 in axis(grid_n, 0.0, 0.25) {
            push_corners(&mut acc, &cell(u1, u2));
        }
    }
    acc
}

/// Maximizes `objective` over correlated input laws from `start` by
/// golden-section moves of probability mass between each pair of atoms.
/// `start` holds `(a, b, c)`; `d` takes up the slack.
pub(crate) fn refine_simplex(
    start: [f64; 3],
    rounds: usize,
    objective: impl Fn(&CorrelatedJointDistribution) -> f64,
) -> ([f64; 3], f64) {
    let eval = |x: &[f64; 4]| objective(&CorrelatedJointDistribution::from_abc(x[0], x[1], x[2]));
    let mut x = [
        start[0],
        start[1],
        start[2],
        (1.0 - start[0] - start[1] - start[2]).max(0.0),
    ];
    let mut best = eval(&x);
    for _ in 0..rounds {
        for i in 0..4 {
            for j in i + 1..4 {
                // shift v from atom j to atom i, v ∈ [-x_i, x_j]
                let (lo, hi) = (-x[i], x[j]);
                let moved = |v: f64| {
                    let mut y = x;
                    y[i] += v;
                    y[j] -= v;
                    y
                };
                let (arg, val) = golden_max(lo, hi, 1e-13, |v| eval(&moved(v)));
                if val > best {
                    best = val;
                    x = moved(arg);
                }
            }
        }
    }
    ([x[0], x[1], x[2]], best)
}

fn cutset_boundary(grid_n: usize) -> Result<ParetoAccumulator> {
    let directions = lambda_grid(geometry::DEFAULT_DIRECTIONS);
    let mut best: Vec<(f64, [f64; 3])> = vec![(f64::NEG_INFINITY, [0.25; 3]); directions.len()];
    let mut acc = ParetoAccumulator::new();
    for_each_simplex_point(4, grid_n - 1, |p| {
        let d = CorrelatedJointDistribution::from_abc(p[0], p[1], p[2]);
        let set = cutset_constraints(&d);
        let Ok(corners) = set.corners() else { return };
        for (slot, &lambda) in best.iter_mut().zip(&directions) {
            let v = corners[0].weighted(lambda).max(corners[1].weighted(lambda));
            if v > slot.0 {
                *slot = (v, [p[0], p[1], p[2]]);
            }
        }
        acc.extend(corners);
    });
    // one local refinement per sweep direction
    for (&(_, start), &lambda) in best.iter().zip(&directions) {
        let (x, _) = refine_simplex(start, 3, |d| {
            cutset_constraints(d)
                .support(lambda)
                .unwrap_or(f64::NEG_INFINITY)
        });
        let d = CorrelatedJointDistribution::from_abc(x[0], x[1], x[2]);
        push_corners(&mut acc, &cutset_constraints(&d));
    }
    Ok(acc)
}

/// Boundary of the region named by `spec`, sorted by `R₁`.
pub fn region_boundary(spec: &RegionSpec) -> Result<BoundaryCurve> {
    let n = spec.grid_n;
    if n < 2 {
        return Err(Error::InvalidConfig(format!("grid_n = {n} < 2")));
    }
    let label = spec.which.name();
    let curve = match spec.which {
        RegionKind::CutSet => cutset_boundary(n)?.finish(label)?,
        RegionKind::DbPc1 => sweep_p(n, db_pc1_raw).finish(label)?,
        RegionKind::DbPc2 => sweep_p(n, db_pc2_raw).finish(label)?,
        RegionKind::DbPcIntersection => {
            let a = sweep_p(n, db_pc1_raw).finish("dbpc1")?;
            let b = sweep_p(n, db_pc2_raw).finish("dbpc2")?;
            geometry::intersect(&a, &b)?.with_label(label)
        }
        RegionKind::CoverLeung => geometry::convexify(&sweep_s(n, cover_leung_raw).finish(label)?),
        RegionKind::ErasureFb => geometry::convexify(&sweep_s(n, erasure_fb_raw).finish(label)?),
        RegionKind::ErasureNoFb => {
            let mut acc = ParetoAccumulator::new();
            push_corners(&mut acc, &erasure_no_fb_constraints());
            acc.finish(label)?
        }
    };
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasible::u_triple_of;
    use crate::geometry::support_value;

    const H_QUARTER: f64 = 0.811_278_124_459_132_8;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn db_pc1_examples() {
        let c = db_pc1_constraints(&UTriple::new(0.25, 0.25, 0.5)).unwrap();
        assert!(close(c.r1_max.unwrap(), 0.5, 1e-15));
        assert!(close(c.r2_max.unwrap(), 0.5, 1e-15));
        assert!(close(c.sum_max.unwrap(), H_QUARTER, 1e-12));

        let c = db_pc1_constraints(&UTriple::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(
            (c.r1_max, c.r2_max, c.sum_max),
            (Some(0.0), Some(0.0), Some(1.0))
        );
        assert_eq!(c.corners().unwrap(), [RatePair::new_unchecked(0.0, 0.0); 2]);

        let c = db_pc1_constraints(&UTriple::new(0.086063, 0.218333, 0.355899)).unwrap();
        assert!(c.r1_max.unwrap() >= 0.45330 - 1e-5);
        assert!(close(c.r2_max.unwrap(), 0.45330, 1e-5));
        assert!(c.sum_max.unwrap() >= 0.90660 - 2e-5);

        assert!(db_pc1_constraints(&UTriple::new(0.1, 0.1, 0.05)).is_err());
    }

    #[test]
    fn db_pc2_mirrors_db_pc1() {
        for t in [
            UTriple::new(0.25, 0.25, 0.5),
            UTriple::new(0.0, 0.0, 0.0),
            UTriple::new(0.086063, 0.218333, 0.355899),
            UTriple::new(0.05, 0.2, 0.6),
        ] {
            let a = db_pc1_constraints(&t).unwrap();
            let b = db_pc2_constraints(&UTriple::new(t.u2, t.u1, t.u)).unwrap();
            assert_eq!(
                (a.r1_max, a.r2_max, a.sum_max),
                (b.r2_max, b.r1_max, b.sum_max)
            );
        }
        let c = db_pc2_constraints(&UTriple::new(0.218333, 0.086063, 0.355899)).unwrap();
        assert!(close(c.r1_max.unwrap(), 0.45330, 1e-5));
        assert!(c.r2_max.unwrap() >= 0.45330 - 1e-5);
    }

    #[test]
    fn cover_leung_examples() {
        let c = cover_leung_constraints(0.0, 0.0).unwrap();
        assert_eq!(
            (c.r1_max, c.r2_max, c.sum_max),
            (Some(0.0), Some(0.0), Some(1.0))
        );
        let c = cover_leung_constraints(0.25, 0.25).unwrap();
        assert!(close(c.r1_max.unwrap(), 0.5, 1e-15));
        assert!(close(c.sum_max.unwrap(), H_QUARTER, 1e-12));
        assert!(cover_leung_constraints(0.3, 0.1).is_err());
    }

    #[test]
    fn witness_examples() {
        let w = cover_leung_witness(0.0, 0.0).unwrap();
        assert_eq!(w.q1(), &[0.0, 1.0]);
        assert_eq!(w.q2(), &[0.0, 1.0]);

        let w = cover_leung_witness(0.086063, 0.218333).unwrap();
        assert_eq!(w.p_t(), &[0.5, 0.5]);
        assert!(close(w.q1()[0], 0.095109, 2e-6));
        assert!(close(w.q2()[0], 0.322050, 5e-6));

        for (u1, u2) in [(0.01, 0.2), (0.25, 0.1), (0.13, 0.13)] {
            let t = u_triple_of(&cover_leung_witness(u1, u2).unwrap());
            assert!(close(t.u1, u1, 1e-14) && close(t.u2, u2, 1e-14));
            assert!(close(t.u, raw::f2(2.0 * u1, 2.0 * u2), 1e-14));
        }
    }

    #[test]
    fn erasure_examples() {
        let c = erasure_fb_constraints(0.25, 0.25).unwrap();
        assert_eq!((c.r1_max, c.r2_max), (Some(1.0), Some(1.0)));
        assert!(close(c.sum_max.unwrap(), 1.5, 1e-15));
        let c = erasure_fb_constraints(0.0, 0.0).unwrap();
        assert_eq!(
            (c.r1_max, c.r2_max, c.sum_max),
            (Some(0.0), Some(0.0), Some(1.0))
        );

        // f(2u, 2u) = 2p(1-p) with p = φ(2u); f = 1/3 at p = (1 - 1/√3)/2
        let p = 0.5 * (1.0 - 1.0 / 3f64.sqrt());
        let u = p * (1.0 - p);
        let c = erasure_fb_constraints(u, u).unwrap();
        assert!(close(raw::f2(2.0 * u, 2.0 * u), 1.0 / 3.0, 1e-12));
        assert!(close(c.sum_max.unwrap(), 3f64.log2(), 1e-12));
    }

    #[test]
    fn corners_and_supports() {
        let c = erasure_no_fb_constraints();
        let [a, b] = c.corners().unwrap();
        assert_eq!((a.r1, a.r2, b.r1, b.r2), (1.0, 0.5, 0.5, 1.0));
        assert_eq!(c.symmetric_rate(), 0.75);
        assert_eq!(c.support(0.5).unwrap(), 0.75);
        let open = RateConstraintSet::new(None, Some(1.0), None).unwrap();
        assert_eq!(open.corners(), Err(Error::Unbounded));
        assert!(RateConstraintSet::new(Some(-1.0), None, None).is_err());
    }

    #[test]
    fn region_names_round_trip() {
        for k in RegionKind::ALL {
            assert_eq!(k.name().parse::<RegionKind>().unwrap(), k);
        }
        assert!("bogus".parse::<RegionKind>().is_err());
        assert!(RegionSpec::new(RegionKind::CutSet, 1).is_err());
    }

    #[test]
    fn erasure_no_fb_region_is_the_fixed_pentagon() {
        let c = region_boundary(&RegionSpec::new(RegionKind::ErasureNoFb, 2).unwrap()).unwrap();
        assert_eq!(c.points.len(), 2);
        assert_eq!(c.symmetric_rate(), 0.75);
        assert_eq!(support_value(&c, 0.5), 0.75);
    }

    #[test]
    fn coarse_noisy_regions_are_ordered() {
        let get = |k| region_boundary(&RegionSpec::new(k, 41).unwrap()).unwrap();
        let cl = get(RegionKind::CoverLeung);
        let db = get(RegionKind::DbPcIntersection);
        let cs = get(RegionKind::CutSet);
        assert!(close(cl.symmetric_rate(), 0.43621, 2e-3));
        assert!(close(db.symmetric_rate(), 0.45330, 2e-3));
        assert!(close(cs.symmetric_rate(), 0.45915, 2e-3));
        assert!(geometry::curve_gap(&db, &cl).min_gap >= -2e-3);
        assert!(geometry::curve_gap(&cs, &db).min_gap >= -2e-3);
    }
}
