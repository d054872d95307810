//! Exact information quantities for the two binary-input MACs.
//!
//! Every quantity is a difference of joint entropies of explicitly
//! materialized marginals of the finite law of `(T, X₁, X₂, Y)`. Nothing is
//! sampled and no conditional probability is ever formed, so degenerate
//! distributions need no special casing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infofn::{raw, ProbabilityVector, DOMAIN_SLACK};

/// `p(t) p(x₁|t) p(x₂|t)` over binary inputs.
///
/// `q1[t] = Pr(X₁ = 0 | T = t)` and `q2[t] = Pr(X₂ = 0 | T = t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointInputDistribution {
    p_t: ProbabilityVector,
    q1: Vec<f64>,
    q2: Vec<f64>,
}

impl JointInputDistribution {
    pub fn new(p_t: Vec<f64>, q1: Vec<f64>, q2: Vec<f64>) -> Result<Self> {
        let p_t = ProbabilityVector::new(p_t)?;
        if q1.len() != p_t.len() || q2.len() != p_t.len() {
            return Err(Error::InvalidDistribution(format!(
                "|T| = {} but q1 has {} entries and q2 has {}",
                p_t.len(),
                q1.len(),
                q2.len()
            )));
        }
        let clamp = |v: Vec<f64>, name: &str| -> Result<Vec<f64>> {
            v.into_iter()
                .enumerate()
                .map(|(t, q)| {
                    if q.is_finite() && (-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&q) {
                        Ok(q.clamp(0.0, 1.0))
                    } else {
                        Err(Error::InvalidDistribution(format!(
                            "{name}[{t}] = {q} outside [0, 1]"
                        )))
                    }
                })
                .collect()
        };
        Ok(Self {
            q1: clamp(q1, "q1")?,
            q2: clamp(q2, "q2")?,
            p_t,
        })
    }

    /// Binary uniform `T` with `q1 = (q10, 1 - q10)` and `q2 = (q20, 1 - q20)`.
    pub fn binary_uniform(q10: f64, q20: f64) -> Result<Self> {
        Self::new(vec![0.5, 0.5], vec![q10, 1.0 - q10], vec![q20, 1.0 - q20])
    }

    pub fn p_t(&self) -> &[f64] {
        self.p_t.entries()
    }

    pub fn q1(&self) -> &[f64] {
        &self.q1
    }

    pub fn q2(&self) -> &[f64] {
        &self.q2
    }

    pub fn t_card(&self) -> usize {
        self.p_t.len()
    }

    /// The induced input law `p(x₁, x₂)` as `(a, b, c, d)` for
    /// `(0,0), (0,1), (1,0), (1,1)`.
    pub fn input_marginal(&self) -> CorrelatedJointDistribution {
        let mut m = [0.0; 4];
        for t in 0..self.t_card() {
            let (p, q1, q2) = (self.p_t()[t], self.q1[t], self.q2[t]);
            m[0] += p * q1 * q2;
            m[1] += p * q1 * (1.0 - q2);
            m[2] += p * (1.0 - q1) * q2;
            m[3] += p * (1.0 - q1) * (1.0 - q2);
        }
        CorrelatedJointDistribution { p: m }
    }
}

/// An arbitrary joint input law `p(x₁, x₂)`, stored as
/// `(a, b, c, d) = P(0,0), P(0,1), P(1,0), P(1,1)`.
///
/// Only the cut-set bound uses this: it is the one bound that lets the
/// inputs be correlated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelatedJointDistribution {
    p: [f64; 4],
}

impl CorrelatedJointDistribution {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let v = ProbabilityVector::new(vec![a, b, c, d])?;
        let e = v.entries();
        Ok(Self {
            p: [e[0], e[1], e[2], e[3]],
        })
    }

    /// `(a, b, c)` with `d = 1 - a - b - c` clamped at zero.
    pub(crate) fn from_abc(a: f64, b: f64, c: f64) -> Self {
        Self {
            p: [a, b, c, (1.0 - a - b - c).max(0.0)],
        }
    }

    pub fn atoms(&self) -> [f64; 4] {
        self.p
    }

    /// `Pr(X₁ ≠ X₂) = b + c`.
    pub fn disagreement(&self) -> f64 {
        self.p[1] + self.p[2]
    }
}

/// The two channels studied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelKind {
    /// `Y = X₁ + X₂ + N`, `N` uniform on `{0, 1}`.
    NoisyAdditive,
    /// `Y = X₁ + X₂`.
    Erasure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChannelModel {
    pub kind: ChannelKind,
}

impl ChannelModel {
    pub const NOISY: Self = Self {
        kind: ChannelKind::NoisyAdditive,
    };
    pub const ERASURE: Self = Self {
        kind: ChannelKind::Erasure,
    };

    pub fn output_alphabet_size(&self) -> usize {
        match self.kind {
            ChannelKind::NoisyAdditive => 4,
            ChannelKind::Erasure => 3,
        }
    }

    /// `p(y | x₁, x₂)` as a list of `(y, prob)` atoms.
    fn transitions(&self, x1: usize, x2: usize) -> &'static [(usize, f64)] {
        const NOISY: [[(usize, f64); 2]; 3] = [
            [(0, 0.5), (1, 0.5)],
            [(1, 0.5), (2, 0.5)],
            [(2, 0.5), (3, 0.5)],
        ];
        const CLEAN: [[(usize, f64); 1]; 3] = [[(0, 1.0)], [(1, 1.0)], [(2, 1.0)]];
        match self.kind {
            ChannelKind::NoisyAdditive => &NOISY[x1 + x2],
            ChannelKind::Erasure => &CLEAN[x1 + x2],
        }
    }
}

/// Every information quantity the bounds are built from, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoQuantities {
    pub h_x1_given_t: f64,
    pub h_x2_given_t: f64,
    pub i_x1_y_given_x2: f64,
    pub i_x2_y_given_x1: f64,
    pub i_x1_y_given_x2_t: f64,
    pub i_x2_y_given_x1_t: f64,
    pub i_x1x2_y: f64,
    pub h_y: f64,
    pub h_x1_given_y_x2_t: f64,
    pub h_x2_given_y_x1_t: f64,
}

const VAR_T: u8 = 1;
const VAR_X1: u8 = 2;
const VAR_X2: u8 = 4;
const VAR_Y: u8 = 8;

/// The finite law of `(T, X₁, X₂, Y)`; atom `(t, x₁, x₂, y)` sits at
/// `16t + 8x₁ + 4x₂ + y`.
struct JointLaw {
    mass: Vec<f64>,
}

impl JointLaw {
    fn from_parts(
        ch: ChannelModel,
        t_card: usize,
        input: impl Fn(usize, usize, usize) -> f64,
    ) -> Self {
        let mut mass = vec![0.0; 16 * t_card];
        for t in 0..t_card {
            for x1 in 0..2 {
                for x2 in 0..2 {
                    let p = input(t, x1, x2);
                    if p == 0.0 {
                        continue;
                    }
                    for &(y, w) in ch.transitions(x1, x2) {
                        mass[16 * t + 8 * x1 + 4 * x2 + y] += p * w;
                    }
                }
            }
        }
        Self { mass }
    }

    fn of_input(ch: ChannelModel, d: &JointInputDistribution) -> Self {
        Self::from_parts(ch, d.t_card(), |t, x1, x2| {
            let a = if x1 == 0 { d.q1[t] } else { 1.0 - d.q1[t] };
            let b = if x2 == 0 { d.q2[t] } else { 1.0 - d.q2[t] };
            d.p_t()[t] * a * b
        })
    }

    fn of_correlated(ch: ChannelModel, d: &CorrelatedJointDistribution) -> Self {
        Self::from_parts(ch, 1, |_, x1, x2| d.p[2 * x1 + x2])
    }

    /// Joint entropy of the variables in `vars`.
    fn entropy(&self, vars: u8) -> f64 {
        let mut key_mask = 0usize;
        if vars & VAR_X1 != 0 {
            key_mask |= 8;
        }
        if vars & VAR_X2 != 0 {
            key_mask |= 4;
        }
        if vars & VAR_Y != 0 {
            key_mask |= 3;
        }
        let accumulate = |slice: &[f64], acc: &mut [f64; 16]| {
            for (i, &m) in slice.iter().enumerate() {
                acc[i & key_mask] += m;
            }
        };
        if vars & VAR_T != 0 {
            // T-slices are disjoint, so the joint entropy is the sum over slices.
            self.mass
                .chunks_exact(16)
                .map(|slice| {
                    let mut acc = [0.0; 16];
                    accumulate(slice, &mut acc);
                    raw::entropy(&acc)
                })
                .sum()
        } else {
            let mut acc = [0.0; 16];
            for slice in self.mass.chunks_exact(16) {
                accumulate(slice, &mut acc);
            }
            raw::entropy(&acc)
        }
    }

    fn output_marginal(&self, size: usize) -> Vec<f64> {
        let mut py = vec![0.0; size];
        for slice in self.mass.chunks_exact(16) {
            for (i, &m) in slice.iter().enumerate() {
                if m > 0.0 {
                    py[i & 3] += m;
                }
            }
        }
        py
    }

    fn quantities(&self) -> InfoQuantities {
        let h = |v| self.entropy(v);
        let h_t = h(VAR_T);
        let h_tx1 = h(VAR_T | VAR_X1);
        let h_tx2 = h(VAR_T | VAR_X2);
        let h_tx1x2 = h(VAR_T | VAR_X1 | VAR_X2);
        let h_x1 = h(VAR_X1);
        let h_x2 = h(VAR_X2);
        let h_x1x2 = h(VAR_X1 | VAR_X2);
        let h_y = h(VAR_Y);
        let h_yx1 = h(VAR_Y | VAR_X1);
        let h_yx2 = h(VAR_Y | VAR_X2);
        let h_yx1x2 = h(VAR_Y | VAR_X1 | VAR_X2);
        let h_tx1y = h(VAR_T | VAR_X1 | VAR_Y);
        let h_tx2y = h(VAR_T | VAR_X2 | VAR_Y);
        let h_tx1x2y = h(VAR_T | VAR_X1 | VAR_X2 | VAR_Y);

        let h_y_given_x1x2 = h_yx1x2 - h_x1x2;
        let h_y_given_x1x2t = h_tx1x2y - h_tx1x2;
        let nonneg = |v: f64| v.max(0.0);
        InfoQuantities {
            h_x1_given_t: nonneg(h_tx1 - h_t),
            h_x2_given_t: nonneg(h_tx2 - h_t),
            i_x1_y_given_x2: nonneg(h_yx2 - h_x2 - h_y_given_x1x2),
            i_x2_y_given_x1: nonneg(h_yx1 - h_x1 - h_y_given_x1x2),
            i_x1_y_given_x2_t: nonneg(h_tx2y - h_tx2 - h_y_given_x1x2t),
            i_x2_y_given_x1_t: nonneg(h_tx1y - h_tx1 - h_y_given_x1x2t),
            i_x1x2_y: nonneg(h_y - h_y_given_x1x2),
            h_y,
            h_x1_given_y_x2_t: nonneg(h_tx1x2y - h_tx2y),
            h_x2_given_y_x1_t: nonneg(h_tx1x2y - h_tx1y),
        }
    }
}

/// Exact output law `P_Y`.
pub fn output_distribution(ch: ChannelModel, d: &JointInputDistribution) -> ProbabilityVector {
    let py = JointLaw::of_input(ch, d).output_marginal(ch.output_alphabet_size());
    ProbabilityVector::new(py).expect("output law of a valid input law is a distribution")
}

/// All information quantities of `d` through channel `ch`.
pub fn info_quantities(ch: ChannelModel, d: &JointInputDistribution) -> InfoQuantities {
    JointLaw::of_input(ch, d).quantities()
}

/// Information quantities for a correlated input law (trivial `T`).
pub fn correlated_info_quantities(
    ch: ChannelModel,
    d: &CorrelatedJointDistribution,
) -> InfoQuantities {
    JointLaw::of_correlated(ch, d).quantities()
}

/// Both sides of `H(Xᵢ | Y, X_j, T) = ½ H(Xᵢ | T)` for the noisy channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfEntropyCheck {
    pub lhs1: f64,
    pub rhs1: f64,
    pub lhs2: f64,
    pub rhs2: f64,
}

impl HalfEntropyCheck {
    pub fn max_error(&self) -> f64 {
        (self.lhs1 - self.rhs1)
            .abs()
            .max((self.lhs2 - self.rhs2).abs())
    }
}

pub fn verify_half_entropy_identity(d: &JointInputDistribution) -> HalfEntropyCheck {
    let q = info_quantities(ChannelModel::NOISY, d);
    HalfEntropyCheck {
        lhs1: q.h_x1_given_y_x2_t,
        rhs1: 0.5 * q.h_x1_given_t,
        lhs2: q.h_x2_given_y_x1_t,
        rhs2: 0.5 * q.h_x2_given_t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(q1: f64, q2: f64) -> JointInputDistribution {
        JointInputDistribution::new(vec![1.0], vec![q1], vec![q2]).unwrap()
    }

    fn paper_witness() -> JointInputDistribution {
        JointInputDistribution::binary_uniform(0.095109, 0.322050).unwrap()
    }

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(JointInputDistribution::new(vec![0.5, 0.5], vec![0.1], vec![0.2, 0.3]).is_err());
        assert!(JointInputDistribution::new(vec![1.0], vec![1.2], vec![0.3]).is_err());
        assert!(
            JointInputDistribution::new(vec![0.7, 0.7], vec![0.1, 0.1], vec![0.2, 0.3]).is_err()
        );
    }

    #[test]
    fn output_distribution_examples() {
        let py = output_distribution(ChannelModel::NOISY, &single(1.0, 1.0));
        assert_eq!(py.entries(), &[0.5, 0.5, 0.0, 0.0]);

        let py = output_distribution(ChannelModel::ERASURE, &single(0.5, 0.5));
        assert_eq!(py.entries(), &[0.25, 0.5, 0.25]);

        let py = output_distribution(ChannelModel::NOISY, &paper_witness());
        let e = py.entries();
        assert!((e[1] + e[2] - (1.0 + 0.355899) / 2.0).abs() < 5e-6);
    }

    #[test]
    fn info_quantities_examples() {
        // Y is the sum of three fair bits: (1/8, 3/8, 3/8, 1/8), minus H(N) = 1.
        let q = info_quantities(ChannelModel::NOISY, &single(0.5, 0.5));
        let expected = raw::entropy(&[0.125, 0.375, 0.375, 0.125]) - 1.0;
        assert!((q.i_x1x2_y - expected).abs() < 1e-12);
        assert!((q.i_x1x2_y - 0.811278).abs() < 1e-6);

        let q = info_quantities(ChannelModel::ERASURE, &single(0.5, 0.5));
        assert!((q.h_y - 1.5).abs() < 1e-12);

        for (a, b) in [(0.3, 0.9), (0.0, 0.5), (1.0, 1.0)] {
            let q = info_quantities(ChannelModel::NOISY, &single(a, b));
            assert!((q.h_x1_given_t - raw::h(a)).abs() < 1e-12);
            assert!((q.h_x2_given_t - raw::h(b)).abs() < 1e-12);
        }
    }

    #[test]
    fn noisy_channel_conditional_output_entropy_is_one_bit() {
        let d = paper_witness();
        let q = info_quantities(ChannelModel::NOISY, &d);
        let py = output_distribution(ChannelModel::NOISY, &d);
        assert!((q.i_x1x2_y - (raw::entropy(py.entries()) - 1.0)).abs() < 1e-12);
        assert!(q.i_x1x2_y <= q.h_y);
    }

    #[test]
    fn half_entropy_examples() {
        let c = verify_half_entropy_identity(&single(0.5, 0.5));
        assert!((c.lhs1 - 0.5).abs() < 1e-12 && (c.rhs1 - 0.5).abs() < 1e-12);

        let c = verify_half_entropy_identity(&paper_witness());
        assert!(c.max_error() < 1e-12);
        assert!((c.rhs1 - 0.5 * raw::h(0.095109)).abs() < 1e-12);

        for q2 in [0.0, 0.3, 1.0] {
            let c = verify_half_entropy_identity(&single(1.0, q2));
            assert_eq!((c.lhs1, c.rhs1), (0.0, 0.0));
        }
    }

    #[test]
    fn correlated_quantities_match_independent_ones() {
        let d = single(0.3, 0.8);
        let q = info_quantities(ChannelModel::NOISY, &d);
        let c = correlated_info_quantities(ChannelModel::NOISY, &d.input_marginal());
        assert!((q.i_x1_y_given_x2 - c.i_x1_y_given_x2).abs() < 1e-12);
        assert!((q.i_x1x2_y - c.i_x1x2_y).abs() < 1e-12);
    }

    #[test]
    fn fully_correlated_inputs_carry_no_conditional_information() {
        let d = CorrelatedJointDistribution::new(0.5, 0.0, 0.0, 0.5).unwrap();
        let q = correlated_info_quantities(ChannelModel::NOISY, &d);
        assert!(q.i_x1_y_given_x2.abs() < 1e-12 && q.i_x2_y_given_x1.abs() < 1e-12);
    }
}
