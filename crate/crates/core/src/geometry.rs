//! Rate-region geometry: Pareto frontiers, support values, containment gaps.
//!
//! A [`BoundaryCurve`] describes the down-closed region under the
//! piecewise-linear interpolation of its points, extended flat to the left of
//! the first point and dropping vertically after the last one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of sweep directions `λ ∈ {0, 1/180, …, 1}` used by default.
pub const DEFAULT_DIRECTIONS: usize = 181;

/// A rate pair `(R₁, R₂)` in bits per transmission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if r1.is_finite() && r2.is_finite() && r1 >= 0.0 && r2 >= 0.0 {
            Ok(Self { r1, r2 })
        } else {
            Err(Error::InvalidConfig(format!(
                "invalid rate pair ({r1}, {r2})"
            )))
        }
    }

    /// Caller guarantees finite, nonnegative coordinates.
    pub(crate) const fn new_unchecked(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    pub fn dominates(&self, other: &RatePair) -> bool {
        self.r1 >= other.r1 && self.r2 >= other.r2 && self != other
    }

    #[inline]
    pub fn weighted(&self, lambda: f64) -> f64 {
        lambda * self.r1 + (1.0 - lambda) * self.r2
    }
}

/// Pareto-ordered boundary samples: `r1` strictly increasing, `r2` strictly
/// decreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub label: String,
    pub points: Vec<RatePair>,
}

impl BoundaryCurve {
    pub fn points(&self) -> &[RatePair] {
        &self.points
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Largest `r2` in the region at abscissa `r1`; `None` past the last point.
    pub fn upper_r2(&self, r1: f64) -> Option<f64> {
        let pts = &self.points;
        let first = pts.first()?;
        if r1 <= first.r1 {
            return Some(first.r2);
        }
        let last = pts.last()?;
        if r1 > last.r1 {
            return None;
        }
        let k = pts.partition_point(|p| p.r1 < r1);
        let (a, b) = (pts[k - 1], pts[k]);
        let w = (r1 - a.r1) / (b.r1 - a.r1);
        Some(a.r2 + w * (b.r2 - a.r2))
    }

    /// Largest `R` with `(R, R)` in the region.
    pub fn symmetric_rate(&self) -> f64 {
        let pts = &self.points;
        let Some(first) = pts.first() else {
            return 0.0;
        };
        if first.r2 <= first.r1 {
            return first.r2;
        }
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b.r2 <= b.r1 {
                // a.r2 - a.r1 > 0 >= b.r2 - b.r1 on this segment
                let ga = a.r2 - a.r1;
                let gb = b.r2 - b.r1;
                let s = ga / (ga - gb);
                return a.r1 + s * (b.r1 - a.r1);
            }
        }
        pts[pts.len() - 1].r1
    }
}

fn pareto_points(mut points: Vec<RatePair>) -> Vec<RatePair> {
    points.sort_by(|a, b| b.r1.total_cmp(&a.r1).then(b.r2.total_cmp(&a.r2)));
    let mut kept: Vec<RatePair> = Vec::new();
    let mut best_r2 = f64::NEG_INFINITY;
    for p in points {
        if p.r2 > best_r2 {
            best_r2 = p.r2;
            kept.push(p);
        }
    }
    kept.reverse();
    kept
}

/// Keeps exactly the non-dominated points, sorted by `r1`.
pub fn pareto_filter(points: Vec<RatePair>) -> Result<BoundaryCurve> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(BoundaryCurve {
        label: String::new(),
        points: pareto_points(points),
    })
}

/// Streaming Pareto union; the merge is commutative, so the result does not
/// depend on the order points arrive in.
#[derive(Debug, Default)]
pub struct ParetoAccumulator {
    frontier: Vec<RatePair>,
    pending: Vec<RatePair>,
}

impl ParetoAccumulator {
    const COMPACT_AT: usize = 1 << 16;

    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, p: RatePair) {
        self.pending.push(p);
        if self.pending.len() >= Self::COMPACT_AT {
            self.compact();
        }
    }

    pub fn extend(&mut self, it: impl IntoIterator<Item = RatePair>) {
        for p in it {
            self.push(p);
        }
    }

    fn compact(&mut self) {
        let mut all = std::mem::take(&mut self.frontier);
        all.append(&mut self.pending);
        self.frontier = pareto_points(all);
    }

    pub fn finish(mut self, label: impl Into<String>) -> Result<BoundaryCurve> {
        self.compact();
        if self.frontier.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(BoundaryCurve {
            label: label.into(),
            points: self.frontier,
        })
    }
}

/// `max λ·r1 + (1-λ)·r2` over the region.
///
/// The objective is linear, so its maximum over the interpolated boundary is
/// attained at a sample point.
pub fn support_value(c: &BoundaryCurve, lambda: f64) -> f64 {
    c.points
        .iter()
        .map(|p| p.weighted(lambda))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `{0, 1/(n-1), …, 1}`.
pub fn lambda_grid(n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
}

/// Support-value differences `outer - inner` over a direction sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub min_gap: f64,
    pub min_at: f64,
    pub max_gap: f64,
    /// Direction of the largest gap.
    pub at_lambda: f64,
}

pub fn curve_gap(outer: &BoundaryCurve, inner: &BoundaryCurve) -> GapReport {
    curve_gap_with(outer, inner, DEFAULT_DIRECTIONS)
}

pub fn curve_gap_with(
    outer: &BoundaryCurve,
    inner: &BoundaryCurve,
    directions: usize,
) -> GapReport {
    let mut report = GapReport {
        min_gap: f64::INFINITY,
        min_at: 0.0,
        max_gap: f64::NEG_INFINITY,
        at_lambda: 0.0,
    };
    for lambda in lambda_grid(directions) {
        let gap = support_value(outer, lambda) - support_value(inner, lambda);
        if gap < report.min_gap {
            report.min_gap = gap;
            report.min_at = lambda;
        }
        if gap > report.max_gap {
            report.max_gap = gap;
            report.at_lambda = lambda;
        }
    }
    report
}

/// The region `{(R₁, R₂) : R₂ ≤ min(Bₐ(R₁), B_b(R₁))}` lying under both curves.
pub fn intersect(a: &BoundaryCurve, b: &BoundaryCurve) -> Result<BoundaryCurve> {
    let (Some(la), Some(lb)) = (a.points.last(), b.points.last()) else {
        return Err(Error::EmptyInput);
    };
    let end = la.r1.min(lb.r1);
    let mut xs: Vec<f64> = a
        .points
        .iter()
        .chain(&b.points)
        .map(|p| p.r1)
        .filter(|&x| x <= end)
        .chain([0.0, end])
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let lower = |x: f64| -> Option<f64> { Some(a.upper_r2(x)?.min(b.upper_r2(x)?)) };
    let mut out = Vec::with_capacity(2 * xs.len());
    for (i, &x) in xs.iter().enumerate() {
        if let Some(y) = lower(x) {
            out.push(RatePair::new_unchecked(x, y.max(0.0)));
        }
        // Both curves are linear between consecutive knots, so they cross at
        // most once there.
        if let Some(&next) = xs.get(i + 1) {
            let d0 = a.upper_r2(x).zip(b.upper_r2(x)).map(|(p, q)| p - q);
            let d1 = a.upper_r2(next).zip(b.upper_r2(next)).map(|(p, q)| p - q);
            if let (Some(d0), Some(d1)) = (d0, d1) {
                if d0 * d1 < 0.0 {
                    let xc = x + (next - x) * d0 / (d0 - d1);
                    if let Some(y) = lower(xc) {
                        out.push(RatePair::new_unchecked(xc, y.max(0.0)));
                    }
                }
            }
        }
    }
    Ok(pareto_filter(out)?.with_label(format!("{}&{}", a.label, b.label)))
}

/// Upper concave envelope of the region (time sharing between boundary
/// points).
pub fn convexify(c: &BoundaryCurve) -> BoundaryCurve {
    let (Some(first), Some(last)) = (c.points.first(), c.points.last()) else {
        return c.clone();
    };
    let mut pts = Vec::with_capacity(c.points.len() + 2);
    pts.push(RatePair::new_unchecked(0.0, first.r2));
    pts.extend_from_slice(&c.points);
    pts.push(RatePair::new_unchecked(last.r1, 0.0));

    // Monotone chain over points sorted by r1: keep right turns only.
    let mut hull: Vec<RatePair> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.r1 - o.r1) * (p.r2 - o.r2) - (a.r2 - o.r2) * (p.r1 - o.r1);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    BoundaryCurve {
        label: c.label.clone(),
        points: pareto_points(hull),
    }
}
