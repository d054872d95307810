//! Entropy and the composite functions built on it.
//!
//! All logarithms are base 2 and `0 log 0 = 0`. The checked functions accept
//! arguments up to [`DOMAIN_SLACK`] outside their domain (clamping them) and
//! reject anything further out. The [`raw`] module holds unchecked versions
//! for inner loops whose arguments are in-domain by construction.
//!
//! | Function | Definition | Domain |
//! |----------|------------|--------|
//! | [`entropy`] | `-Σ sᵢ log sᵢ` | probability vectors |
//! | [`binary_entropy`] | `h(s) = entropy((s, 1-s))` | `[0, 1]` |
//! | [`phi`] | lower-branch inverse of `s ↦ 2s(1-s)` | `[0, 1]` |
//! | [`f2`] | `φ(x) + φ(y) - 2φ(x)φ(y)` | `[0, ½]²` |
//! | [`xi`] | `(1 - f2(2u₁, 2u₂)) / 2` | `[0, ¼]²` |
//! | [`g_fn`] | `½ h(ξ(u₁, u₂))` | `[0, ¼]²` |
//! | [`mu_fn`] | `h(s) + 1 - s` | `[0, 1]` |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for arguments slightly outside a function's domain.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// Tolerance on the total mass of a [`ProbabilityVector`].
pub const SUM_TOLERANCE: f64 = 1e-12;

/// A finite probability distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Validates `entries`, clamping values within [`DOMAIN_SLACK`] of `[0, 1]`.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDistribution("no entries".into()));
        }
        let mut entries = entries;
        for (i, p) in entries.iter_mut().enumerate() {
            if !p.is_finite() || *p < -DOMAIN_SLACK || *p > 1.0 + DOMAIN_SLACK {
                return Err(Error::InvalidDistribution(format!(
                    "entry {i} = {p} outside [0, 1]"
                )));
            }
            *p = p.clamp(0.0, 1.0);
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}"
            )));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for ProbabilityVector {
    type Error = Error;

    fn try_from(entries: Vec<f64>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<ProbabilityVector> for Vec<f64> {
    fn from(p: ProbabilityVector) -> Self {
        p.0
    }
}

fn check(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    if value.is_finite() && value >= lo - DOMAIN_SLACK && value <= hi + DOMAIN_SLACK {
        Ok(value.clamp(lo, hi))
    } else {
        Err(Error::Domain {
            name,
            value,
            lo,
            hi,
        })
    }
}

/// Shannon entropy in bits, `h^(k)(s₁, …, s_k)`.
pub fn entropy(p: &ProbabilityVector) -> f64 {
    raw::entropy(p.entries())
}

/// Binary entropy `h(s)` in bits.
pub fn binary_entropy(s: f64) -> Result<f64> {
    Ok(raw::h(check("binary_entropy", s, 0.0, 1.0)?))
}

/// `φ(s)`: the value in `[0, ½]` whose image under `s ↦ 2s(1-s)` is `s`
/// (first branch), mirrored about `½` for `s > ½`.
pub fn phi(s: f64) -> Result<f64> {
    Ok(raw::phi(check("phi", s, 0.0, 1.0)?))
}

/// Inverse of [`phi`] on `[0, ½]`: `y ↦ 2y(1-y)`.
pub fn phi_inverse(y: f64) -> Result<f64> {
    let y = check("phi_inverse", y, 0.0, 0.5)?;
    Ok(2.0 * y * (1.0 - y))
}

/// `f(x, y) = φ(x) + φ(y) - 2φ(x)φ(y) = (1 - √((1-2x)(1-2y))) / 2`.
pub fn f2(x: f64, y: f64) -> Result<f64> {
    let x = check("f2", x, 0.0, 0.5)?;
    let y = check("f2", y, 0.0, 0.5)?;
    Ok(raw::f2(x, y))
}

/// `ξ(u₁, u₂) = (1 - f(2u₁, 2u₂)) / 2`.
pub fn xi(u1: f64, u2: f64) -> Result<f64> {
    let u1 = check("xi", u1, 0.0, 0.25)?;
    let u2 = check("xi", u2, 0.0, 0.25)?;
    Ok(raw::xi(u1, u2))
}

/// `g(u₁, u₂) = ½ h((1 - f(2u₁, 2u₂)) / 2)`.
pub fn g_fn(u1: f64, u2: f64) -> Result<f64> {
    let u1 = check("g", u1, 0.0, 0.25)?;
    let u2 = check("g", u2, 0.0, 0.25)?;
    Ok(raw::g(u1, u2))
}

/// `μ(s) = h(s) + 1 - s`.
pub fn mu_fn(s: f64) -> Result<f64> {
    Ok(raw::mu(check("mu", s, 0.0, 1.0)?))
}

/// Closed-form Hessian of `f2` on the open square `[0, ½)²`.
pub fn f2_hessian(x: f64, y: f64) -> Result<[[f64; 2]; 2]> {
    let x = check("f2_hessian", x, 0.0, 0.5)?;
    let y = check("f2_hessian", y, 0.0, 0.5)?;
    let a = 1.0 - 2.0 * x;
    let b = 1.0 - 2.0 * y;
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::Domain {
            name: "f2_hessian",
            value: x.max(y),
            lo: 0.0,
            hi: 0.5,
        });
    }
    let off = -1.0 / (2.0 * (a * b).sqrt());
    Ok([
        [b.sqrt() / (2.0 * a.powf(1.5)), off],
        [off, a.sqrt() / (2.0 * b.powf(1.5))],
    ])
}

/// Eigenvalues `(λ_min, λ_max)` of [`f2_hessian`].
pub fn f2_hessian_eigenvalues(x: f64, y: f64) -> Result<(f64, f64)> {
    let [[p, q], [_, r]] = f2_hessian(x, y)?;
    let mean = 0.5 * (p + r);
    let radius = (0.25 * (p - r) * (p - r) + q * q).sqrt();
    Ok((mean - radius, mean + radius))
}

/// Unchecked versions of the composite functions.
///
/// Arguments are clamped into the domain rather than validated.
pub mod raw {
    /// Entropy of a slice of probabilities, skipping zero entries.
    #[inline]
    pub fn entropy(p: &[f64]) -> f64 {
        p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
    }

    #[inline]
    pub fn h(s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        if s == 0.0 || s == 1.0 {
            return 0.0;
        }
        -(s * s.log2() + (1.0 - s) * (1.0 - s).log2())
    }

    #[inline]
    pub fn phi(s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        if s <= 0.5 {
            // (1 - √(1-2s)) / 2 without the cancellation near s = 0
            s / (1.0 + (1.0 - 2.0 * s).sqrt())
        } else {
            0.5 * (1.0 - (2.0 * s - 1.0).sqrt())
        }
    }

    #[inline]
    pub fn f2(x: f64, y: f64) -> f64 {
        let x = x.clamp(0.0, 0.5);
        let y = y.clamp(0.0, 0.5);
        let root = ((1.0 - 2.0 * x) * (1.0 - 2.0 * y)).sqrt();
        (x + y - 2.0 * x * y) / (1.0 + root)
    }

    #[inline]
    pub fn xi(u1: f64, u2: f64) -> f64 {
        0.5 * (1.0 - f2(2.0 * u1, 2.0 * u2))
    }

    #[inline]
    pub fn g(u1: f64, u2: f64) -> f64 {
        0.5 * h(xi(u1, u2))
    }

    #[inline]
    pub fn mu(s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        h(s) + 1.0 - s
    }

    /// `h(φ(s))`.
    #[inline]
    pub fn h_phi(s: f64) -> f64 {
        h(phi(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn entropy_examples() {
        let p = |v: Vec<f64>| ProbabilityVector::new(v).unwrap();
        assert_eq!(entropy(&p(vec![0.5, 0.5])), 1.0);
        assert_eq!(entropy(&p(vec![1.0, 0.0, 0.0])), 0.0);
        let third = 1.0 / 3.0;
        assert!(close(
            entropy(&p(vec![third, third, third])),
            3f64.log2(),
            1e-12
        ));
    }

    #[test]
    fn probability_vector_rejects_bad_input() {
        assert!(ProbabilityVector::new(vec![]).is_err());
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![-0.1, 1.1]).is_err());
        assert!(ProbabilityVector::new(vec![f64::NAN, 1.0]).is_err());
        // slack is clamped
        let p = ProbabilityVector::new(vec![-1e-13, 1.0 + 1e-13]).unwrap();
        assert_eq!(p.entries(), &[0.0, 1.0]);
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert!(close(binary_entropy(1.0 / 3.0).unwrap(), 0.918296, 1e-6));
        assert_eq!(binary_entropy(1.0 + 5e-13).unwrap(), 0.0);
        assert!(binary_entropy(1.01).is_err());
        assert!(binary_entropy(-1e-9).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(0.0).unwrap(), 0.0);
        assert_eq!(phi(0.5).unwrap(), 0.5);
        assert_eq!(phi(1.0).unwrap(), 0.0);
        // q20 = φ(2u₂*) with u₂* = 0.218333
        assert!(close(phi(2.0 * 0.218333).unwrap(), 0.322050, 5e-6));
        // q10 = φ(2u₁*) with u₁* = 0.086063
        assert!(close(phi(2.0 * 0.086063).unwrap(), 0.095109, 2e-6));
        assert!(phi(1.5).is_err());
    }

    #[test]
    fn phi_inverse_round_trip() {
        for k in 0..=100 {
            let y = 0.5 * k as f64 / 100.0;
            assert!(close(phi(phi_inverse(y).unwrap()).unwrap(), y, 1e-12));
        }
        assert!(phi_inverse(0.6).is_err());
    }

    #[test]
    fn f2_examples() {
        assert_eq!(f2(0.0, 0.0).unwrap(), 0.0);
        for y in [0.0, 0.1, 0.3, 0.5] {
            assert!(close(f2(0.5, y).unwrap(), 0.5, 1e-15));
        }
        assert!(close(
            f2(2.0 * 0.086063, 2.0 * 0.218333).unwrap(),
            0.355899,
            5e-6
        ));
        assert!(f2(0.6, 0.1).is_err());
    }

    #[test]
    fn f2_matches_product_form() {
        for i in 0..=20 {
            for j in 0..=20 {
                let (x, y) = (i as f64 / 40.0, j as f64 / 40.0);
                let (px, py) = (phi(x).unwrap(), phi(y).unwrap());
                let product_form = px + py - 2.0 * px * py;
                let radical = (1.0 - ((1.0 - 2.0 * x) * (1.0 - 2.0 * y)).sqrt()) / 2.0;
                let v = f2(x, y).unwrap();
                assert!(close(v, product_form, 1e-14));
                assert!(close(v, radical, 1e-14));
            }
        }
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_fn(0.0, 0.0).unwrap(), 0.5);
        assert!(close(g_fn(0.086063, 0.218333).unwrap(), 0.45330, 1e-5));
        assert!(close(
            g_fn(0.25, 0.25).unwrap(),
            0.5 * binary_entropy(0.25).unwrap(),
            1e-15
        ));
        assert!(close(g_fn(0.25, 0.25).unwrap(), 0.405639, 1e-6));
        assert!(g_fn(0.3, 0.0).is_err());
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_fn(0.0).unwrap(), 1.0);
        assert_eq!(mu_fn(1.0).unwrap(), 0.0);
        assert!(close(mu_fn(1.0 / 3.0).unwrap(), 3f64.log2(), 1e-12));
    }

    #[test]
    fn hessian_has_zero_and_trace_eigenvalues() {
        let (lo, hi) = f2_hessian_eigenvalues(0.1, 0.3).unwrap();
        let [[p, _], [_, r]] = f2_hessian(0.1, 0.3).unwrap();
        assert!(lo.abs() <= 1e-12 * hi);
        assert!(close(hi, p + r, 1e-12 * hi));
        assert!(f2_hessian(0.5, 0.1).is_err());
    }
}
