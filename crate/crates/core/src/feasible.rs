//! The `(u₁, u₂, u)` summary of a conditionally independent input law and
//! the feasible set `P` it always lands in.
//!
//! With `u₁ₜ = q₁ₜ(1-q₁ₜ)`, `u₂ₜ = q₂ₜ(1-q₂ₜ)` and `uₜ = q₁ₜ + q₂ₜ - 2q₁ₜq₂ₜ`,
//! the triple is the `p(t)`-average of `(u₁ₜ, u₂ₜ, uₜ)`, and
//!
//! ```text
//! P = { 0 ≤ u₁, u₂ ≤ ¼,  f(2u₁, 2u₂) ≤ u ≤ 1 - (u₁ + u₂) }.
//! ```
//!
//! `P` need not be the smallest set containing every realizable triple; the
//! bounds maximize over it, so a superset is enough.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::JointInputDistribution;
use crate::error::{Error, Result};
use crate::infofn::raw;

/// Slack on every membership test for `P`.
pub const P_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UTriple {
    pub u1: f64,
    pub u2: f64,
    pub u: f64,
}

impl UTriple {
    pub fn new(u1: f64, u2: f64, u: f64) -> Self {
        Self { u1, u2, u }
    }

    /// Lower face of `P` above `(u₁, u₂)`: `f(2u₁, 2u₂)`.
    pub fn lower_limit(&self) -> f64 {
        raw::f2(2.0 * self.u1, 2.0 * self.u2)
    }

    /// Upper face of `P` above `(u₁, u₂)`: `1 - (u₁ + u₂)`.
    pub fn upper_limit(&self) -> f64 {
        1.0 - (self.u1 + self.u2)
    }

    pub fn ensure_in_p(&self) -> Result<()> {
        if in_p(self) {
            Ok(())
        } else {
            Err(Error::InvalidTriple {
                u1: self.u1,
                u2: self.u2,
                u: self.u,
            })
        }
    }
}

pub fn u_triple_of(d: &JointInputDistribution) -> UTriple {
    let mut t = UTriple::new(0.0, 0.0, 0.0);
    for ((&p, &q1), &q2) in d.p_t().iter().zip(d.q1()).zip(d.q2()) {
        t.u1 += p * q1 * (1.0 - q1);
        t.u2 += p * q2 * (1.0 - q2);
        t.u += p * (q1 + q2 - 2.0 * q1 * q2);
    }
    t
}

/// Membership in `P`, with [`P_SLACK`] on every face.
pub fn in_p(t: &UTriple) -> bool {
    let in_box = |v: f64| v.is_finite() && (-P_SLACK..=0.25 + P_SLACK).contains(&v);
    in_box(t.u1)
        && in_box(t.u2)
        && t.u.is_finite()
        && t.lower_limit() - P_SLACK <= t.u
        && t.u <= t.upper_limit() + P_SLACK
}

/// Maps a triple of `P` to `(ū₁, ū₂)` with `ūᵢ ≥ uᵢ`.
///
/// For `u ≤ ½` this keeps `ū₁ = u₁` and solves `f(2u₁, 2ū₂) = u`, giving
/// `ū₂ = ¼ (1 - (1-2u)² / (1-4u₁))`. For `u > ½` it returns `(¼, ¼)`.
pub fn project_to_lower_face(t: &UTriple) -> Result<(f64, f64)> {
    t.ensure_in_p()?;
    if t.u > 0.5 {
        return Ok((0.25, 0.25));
    }
    let u1 = t.u1.clamp(0.0, 0.25);
    let denom = 1.0 - 4.0 * u1;
    if denom <= 0.0 {
        // f(1/2, ·) = 1/2 pins u = 1/2
        return Ok((u1, 0.25));
    }
    let u2bar = 0.25 * (1.0 - (1.0 - 2.0 * t.u).powi(2) / denom);
    Ok((u1, u2bar.clamp(t.u2.clamp(0.0, 0.25), 0.25)))
}

/// A uniform draw of `(u₁, u₂)` from `S = [0, ¼]²` and `u` uniform between
/// the faces of `P`.
pub fn sample_p<R: Rng + ?Sized>(rng: &mut R) -> UTriple {
    let u1 = rng.gen_range(0.0..=0.25);
    let u2 = rng.gen_range(0.0..=0.25);
    let mut t = UTriple::new(u1, u2, 0.0);
    let (lo, hi) = (t.lower_limit(), t.upper_limit());
    t.u = lo + (hi - lo) * rng.gen::<f64>();
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn u_triple_examples() {
        let d = JointInputDistribution::new(vec![1.0], vec![0.5], vec![0.5]).unwrap();
        assert_eq!(u_triple_of(&d), UTriple::new(0.25, 0.25, 0.5));

        let d = JointInputDistribution::binary_uniform(0.095109, 0.322050).unwrap();
        let t = u_triple_of(&d);
        assert!((t.u1 - 0.086063).abs() < 2e-6);
        assert!((t.u2 - 0.218333).abs() < 2e-6);
        assert!((t.u - 0.355899).abs() < 2e-6);

        let d = JointInputDistribution::new(vec![1.0], vec![0.0], vec![1.0]).unwrap();
        assert_eq!(u_triple_of(&d), UTriple::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn membership_examples() {
        assert!(in_p(&UTriple::new(0.25, 0.25, 0.5)));
        assert!(in_p(&UTriple::new(0.0, 0.0, 0.5)));
        assert!(!in_p(&UTriple::new(0.3, 0.0, 0.0)));
        assert!(!in_p(&UTriple::new(0.1, 0.1, 0.1)));
        assert!(!in_p(&UTriple::new(0.1, 0.1, 0.9)));
        assert!(!in_p(&UTriple::new(f64::NAN, 0.1, 0.5)));
        let t = UTriple::new(0.086063, 0.218333, 0.355899);
        assert!(in_p(&t));
        assert!((t.u - t.lower_limit()).abs() < 5e-6);
    }

    #[test]
    fn projection_examples() {
        let (u1, u2) = (0.07, 0.19);
        let on_face = UTriple::new(u1, u2, raw::f2(2.0 * u1, 2.0 * u2));
        let (a, b) = project_to_lower_face(&on_face).unwrap();
        assert_eq!(a, u1);
        assert!((b - u2).abs() < 1e-12);

        // ū₁ stays at u₁ = 0 and (1 - (1-1)²) / 4 = 1/4
        assert_eq!(
            project_to_lower_face(&UTriple::new(0.0, 0.0, 0.5)).unwrap(),
            (0.0, 0.25)
        );
        assert_eq!(
            project_to_lower_face(&UTriple::new(0.1, 0.1, 0.7)).unwrap(),
            (0.25, 0.25)
        );
        assert_eq!(
            project_to_lower_face(&UTriple::new(0.25, 0.1, 0.5)).unwrap(),
            (0.25, 0.25)
        );
        assert!(matches!(
            project_to_lower_face(&UTriple::new(0.3, 0.1, 0.5)),
            Err(Error::InvalidTriple { .. })
        ));
    }

    #[test]
    fn projection_hits_the_lower_face() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let t = sample_p(&mut rng);
            assert!(in_p(&t));
            if t.u > 0.5 {
                continue;
            }
            let (a, b) = project_to_lower_face(&t).unwrap();
            assert!(a >= t.u1 && a <= 0.25);
            assert!(b >= t.u2 - 1e-12 && b <= 0.25);
            assert!((raw::f2(2.0 * a, 2.0 * b) - t.u).abs() <= 1e-10);
        }
    }
}
