//! Brute-force checks of the closed-form characterizations.
//!
//! Objectives here are the original information-theoretic rate expressions,
//! evaluated exactly on enumerated input laws. None of them goes through the
//! `(u₁, u₂, u)` parameterization they are used to check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    cover_leung_constraints, cover_leung_witness, cutset_constraints, db_pc1_constraints,
    db_pc2_constraints, erasure_fb_constraints, erasure_fb_witness, erasure_triple_constraints,
    RateConstraintSet,
};
use crate::channel::{
    info_quantities, output_distribution, verify_half_entropy_identity, ChannelModel,
    CorrelatedJointDistribution, InfoQuantities, JointInputDistribution,
};
use crate::error::{Error, Result};
use crate::feasible::{in_p, project_to_lower_face, u_triple_of, UTriple};
use crate::geometry::RatePair;
use crate::infofn::raw;
use crate::search::{for_each_simplex_point, simplex_lattice_size};
use crate::symrate::solve_db_symmetric;

/// Default cap on the number of objective evaluations in one run.
pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "MACFB_EVAL_BUDGET";

/// Largest tolerated excess in any inequality of the characterization.
pub const VIOLATION_TOL: f64 = 1e-10;
/// Distance at which an inequality counts as attained with equality.
pub const EQUALITY_TOL: f64 = 1e-9;
/// Tolerance on the half-entropy identities of the noisy channel.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GridMode {
    /// Simplex lattice for `p(t)`, uniform lattice for every `q`.
    Lattice,
    /// Seeded Latin-hypercube samples of `(p(t), q₁, q₂)`.
    LatinHypercube { samples: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub t_card: usize,
    pub steps: usize,
    pub seed: u64,
    pub budget: u64,
    pub mode: GridMode,
}

impl OracleConfig {
    pub fn new(t_card: usize, steps: usize) -> Self {
        Self {
            t_card,
            steps,
            seed: 0,
            budget: budget_from_env(),
            mode: GridMode::Lattice,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn latin_hypercube(mut self, samples: u64) -> Self {
        self.mode = GridMode::LatinHypercube { samples };
        self
    }

    /// Number of input laws the configuration enumerates.
    pub fn grid_size(&self) -> u128 {
        match self.mode {
            GridMode::Lattice => {
                let q = (self.steps as u128).pow(2 * self.t_card as u32);
                simplex_lattice_size(self.t_card, self.steps - 1) * q
            }
            GridMode::LatinHypercube { samples } => samples as u128,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.t_card) {
            return Err(Error::InvalidConfig(format!(
                "t_card = {} not in {{1, 2, 3}}",
                self.t_card
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidConfig(format!("steps = {} < 2", self.steps)));
        }
        let required = self.grid_size();
        if required > self.budget as u128 {
            return Err(Error::BudgetExceeded {
                required,
                budget: self.budget,
            });
        }
        Ok(())
    }
}

pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Visits every input law of `cfg` in lexicographic order of
/// `(p(t), q₁, q₂)` (lattice mode) or in draw order (sampling mode).
pub fn for_each_distribution(
    cfg: &OracleConfig,
    mut visit: impl FnMut(&JointInputDistribution),
) -> Result<()> {
    cfg.validate()?;
    let t = cfg.t_card;
    match cfg.mode {
        GridMode::Lattice => {
            let levels: Vec<f64> = (0..cfg.steps)
                .map(|k| k as f64 / (cfg.steps - 1) as f64)
                .collect();
            let n_q = cfg.steps.pow(t as u32);
            let q_vec = |mut idx: usize| -> Vec<f64> {
                let mut v = vec![0.0; t];
                for slot in v.iter_mut().rev() {
                    *slot = levels[idx % cfg.steps];
                    idx /= cfg.steps;
                }
                v
            };
            let qs: Vec<Vec<f64>> = (0..n_q).map(q_vec).collect();
            for_each_simplex_point(t, cfg.steps - 1, |p| {
                for q1 in &qs {
                    for q2 in &qs {
                        let d = JointInputDistribution::new(p.to_vec(), q1.clone(), q2.clone())
                            .expect("lattice points are valid laws");
                        visit(&d);
                    }
                }
            });
        }
        GridMode::LatinHypercube { samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let n = samples as usize;
            let dims = 3 * t;
            // one stratified permutation per coordinate
            let columns: Vec<Vec<f64>> = (0..dims)
                .map(|_| {
                    let mut perm: Vec<usize> = (0..n).collect();
                    for i in (1..n).rev() {
                        perm.swap(i, rng.gen_range(0..=i));
                    }
                    perm.into_iter()
                        .map(|k| (k as f64 + rng.gen::<f64>()) / n as f64)
                        .collect()
                })
                .collect();
            for i in 0..n {
                let row: Vec<f64> = columns.iter().map(|c| c[i]).collect();
                // exponential spacings give a uniform point on the simplex
                let w: Vec<f64> = row[..t].iter().map(|x| -(1.0 - x).ln()).collect();
                let p = if w.iter().sum::<f64>() > 0.0 {
                    normalize(w)
                } else {
                    vec![1.0 / t as f64; t]
                };
                let d =
                    JointInputDistribution::new(p, row[t..2 * t].to_vec(), row[2 * t..].to_vec())?;
                visit(&d);
            }
        }
    }
    Ok(())
}

fn normalize(mut p: Vec<f64>) -> Vec<f64> {
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleObjective {
    /// Symmetric rate of the `Z = X₁` dependence-balance pentagon, written
    /// with the leak term and conditional rates of the original bound.
    Db1SymmetricDirect,
    /// `min(I(X₁;Y|X₂,T), I(X₂;Y|X₁,T), ½I(X₁,X₂;Y))` on the noisy channel.
    ClSymmetricDirect,
    /// `H(Y)` on the erasure channel.
    ErasureSumDirect,
    /// `min(H(X₁|T), H(X₂|T), ½H(Y))` on the erasure channel.
    ErasureSymmetricDirect,
    /// `min(I(X₁;Y|X₂), I(X₂;Y|X₁), ½I(X₁,X₂;Y))` over correlated inputs.
    CutsetSymmetricDirect,
}

impl OracleObjective {
    pub const ALL: [OracleObjective; 5] = [
        OracleObjective::Db1SymmetricDirect,
        OracleObjective::ClSymmetricDirect,
        OracleObjective::ErasureSumDirect,
        OracleObjective::ErasureSymmetricDirect,
        OracleObjective::CutsetSymmetricDirect,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OracleObjective::Db1SymmetricDirect => "db1_symmetric_direct",
            OracleObjective::ClSymmetricDirect => "cl_symmetric_direct",
            OracleObjective::ErasureSumDirect => "erasure_sum_direct",
            OracleObjective::ErasureSymmetricDirect => "erasure_symmetric_direct",
            OracleObjective::CutsetSymmetricDirect => "cutset_symmetric_direct",
        }
    }

    fn evaluate(&self, d: &JointInputDistribution) -> f64 {
        match self {
            OracleObjective::Db1SymmetricDirect => {
                db1_direct(&info_quantities(ChannelModel::NOISY, d)).symmetric_rate()
            }
            OracleObjective::ClSymmetricDirect => {
                cl_direct(&info_quantities(ChannelModel::NOISY, d)).symmetric_rate()
            }
            OracleObjective::ErasureSumDirect => {
                raw::entropy(output_distribution(ChannelModel::ERASURE, d).entries())
            }
            OracleObjective::ErasureSymmetricDirect => {
                erasure_direct(&info_quantities(ChannelModel::ERASURE, d)).symmetric_rate()
            }
            OracleObjective::CutsetSymmetricDirect => {
                cutset_constraints(&d.input_marginal()).symmetric_rate()
            }
        }
    }
}

/// Pentagon of the `Z = X₁` bound from exact quantities:
/// `R₁ ≤ I(X₁;Y|X₂,T) + H(X₁|Y,X₂,T)`, `R₁ ≤ I(X₁;Y|X₂)`,
/// `R₂ ≤ I(X₂;Y|X₁,T)`, `R₁ + R₂ ≤ I(X₁,X₂;Y)`.
pub fn db1_direct(q: &InfoQuantities) -> RateConstraintSet {
    RateConstraintSet::bounded(
        (q.i_x1_y_given_x2_t + q.h_x1_given_y_x2_t).min(q.i_x1_y_given_x2),
        q.i_x2_y_given_x1_t,
        q.i_x1x2_y,
    )
}

/// Mirror image of [`db1_direct`] for `Z = X₂`.
pub fn db2_direct(q: &InfoQuantities) -> RateConstraintSet {
    RateConstraintSet::bounded(
        q.i_x1_y_given_x2_t,
        (q.i_x2_y_given_x1_t + q.h_x2_given_y_x1_t).min(q.i_x2_y_given_x1),
        q.i_x1x2_y,
    )
}

/// Cover-Leung pentagon from exact quantities.
pub fn cl_direct(q: &InfoQuantities) -> RateConstraintSet {
    RateConstraintSet::bounded(q.i_x1_y_given_x2_t, q.i_x2_y_given_x1_t, q.i_x1x2_y)
}

/// Erasure feedback-capacity pentagon from exact quantities.
pub fn erasure_direct(q: &InfoQuantities) -> RateConstraintSet {
    RateConstraintSet::bounded(q.h_x1_given_t, q.h_x2_given_t, q.h_y)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "law")]
pub enum Argmax {
    Independent(JointInputDistribution),
    Correlated(CorrelatedJointDistribution),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub objective: OracleObjective,
    pub value: f64,
    pub argmax: Argmax,
    pub evaluated: u64,
}

/// Maximum of `objective` over the grid of `cfg`. Ties go to the first law
/// visited, i.e. the lexicographically smallest.
pub fn oracle_max(objective: OracleObjective, cfg: &OracleConfig) -> Result<OracleResult> {
    if objective == OracleObjective::CutsetSymmetricDirect {
        return cutset_oracle(cfg);
    }
    let mut best: Option<(f64, JointInputDistribution)> = None;
    let mut evaluated = 0u64;
    for_each_distribution(cfg, |d| {
        evaluated += 1;
        let v = objective.evaluate(d);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, d.clone()));
        }
    })?;
    let (value, argmax) = best.ok_or(Error::EmptyInput)?;
    Ok(OracleResult {
        objective,
        value,
        argmax: Argmax::Independent(argmax),
        evaluated,
    })
}

/// The cut-set objective ranges over correlated laws, so it gets the simplex
/// lattice on `p(x₁, x₂)` with `steps - 1` divisions instead.
fn cutset_oracle(cfg: &OracleConfig) -> Result<OracleResult> {
    if cfg.steps < 2 {
        return Err(Error::InvalidConfig(format!("steps = {} < 2", cfg.steps)));
    }
    let required = simplex_lattice_size(4, cfg.steps - 1);
    if required > cfg.budget as u128 {
        return Err(Error::BudgetExceeded {
            required,
            budget: cfg.budget,
        });
    }
    let mut best: Option<(f64, CorrelatedJointDistribution)> = None;
    let mut evaluated = 0u64;
    for_each_simplex_point(4, cfg.steps - 1, |p| {
        evaluated += 1;
        let d = CorrelatedJointDistribution::new(p[0], p[1], p[2], p[3])
            .expect("lattice points are valid laws");
        let v = cutset_constraints(&d).symmetric_rate();
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, d));
        }
    });
    let (value, argmax) = best.ok_or(Error::EmptyInput)?;
    Ok(OracleResult {
        objective: OracleObjective::CutsetSymmetricDirect,
        value,
        argmax: Argmax::Correlated(argmax),
        evaluated,
    })
}

/// Running statistics of one inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityStat {
    pub name: String,
    pub evaluated: u64,
    /// `max(lhs - rhs)`; nonpositive when the inequality always holds.
    pub max_excess: f64,
    pub equality_count: u64,
    pub worst_case: Option<JointInputDistribution>,
}

impl InequalityStat {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            evaluated: 0,
            max_excess: f64::NEG_INFINITY,
            equality_count: 0,
            worst_case: None,
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64, d: &JointInputDistribution) {
        self.evaluated += 1;
        let excess = lhs - rhs;
        if excess.abs() <= EQUALITY_TOL {
            self.equality_count += 1;
        }
        if excess > self.max_excess {
            self.max_excess = excess;
            if excess > VIOLATION_TOL {
                self.worst_case = Some(d.clone());
            }
        }
    }

    pub fn max_violation(&self) -> f64 {
        self.max_excess.max(0.0)
    }

    pub fn passed(&self) -> bool {
        self.max_excess <= VIOLATION_TOL
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub t_card: usize,
    pub steps: usize,
    pub distributions: u64,
    pub inequalities: Vec<InequalityStat>,
    /// `max |H(Xᵢ|Y,Xⱼ,T) - ½H(Xᵢ|T)|` over the grid.
    pub max_identity_error: f64,
}

impl CharacterizationReport {
    pub fn passed(&self) -> bool {
        self.inequalities.iter().all(InequalityStat::passed)
            && self.max_identity_error <= IDENTITY_TOL
    }

    pub fn max_violation(&self) -> f64 {
        self.inequalities
            .iter()
            .map(InequalityStat::max_violation)
            .fold(0.0, f64::max)
    }
}

fn corner_excess(direct: &RateConstraintSet, closed: &RateConstraintSet) -> f64 {
    // a pentagon lies inside another iff both its Pareto corners do
    let Ok(corners) = direct.corners() else {
        return f64::INFINITY;
    };
    let Ok(_) = closed.corners() else {
        return f64::INFINITY;
    };
    let caps = |s: &RateConstraintSet| {
        (
            s.r1_max.unwrap_or(f64::INFINITY),
            s.r2_max.unwrap_or(f64::INFINITY),
            s.sum_max.unwrap_or(f64::INFINITY),
        )
    };
    let (c1, c2, cs) = caps(closed);
    corners
        .iter()
        .map(|p: &RatePair| (p.r1 - c1).max(p.r2 - c2).max(p.r1 + p.r2 - cs))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Checks every upper bound of the `(u₁, u₂, u)` characterization against
/// exact quantities on every law of the grid.
pub fn verify_characterization(cfg: &OracleConfig) -> Result<CharacterizationReport> {
    let mut stats = [
        InequalityStat::new("H(X1|T) <= h(phi(2u1))"),
        InequalityStat::new("H(X2|T) <= h(phi(2u2))"),
        InequalityStat::new("I(X1;Y|X2) <= h(u)/2"),
        InequalityStat::new("I(X2;Y|X1) <= h(u)/2"),
        InequalityStat::new("I(X1,X2;Y) <= h((1-u)/2)"),
        InequalityStat::new("erasure H(Y) <= h(u)+1-u"),
        InequalityStat::new("(u1,u2,u) in P"),
        InequalityStat::new("DB(Z=X1) pentagon inside closed form"),
        InequalityStat::new("DB(Z=X2) pentagon inside closed form"),
        InequalityStat::new("Cover-Leung pentagon inside closed form"),
        InequalityStat::new("erasure pentagon inside closed form over P"),
        InequalityStat::new("erasure pentagon inside projected closed form"),
    ];
    let mut max_identity_error = 0.0f64;
    let mut distributions = 0u64;
    for_each_distribution(cfg, |d| {
        distributions += 1;
        let t = u_triple_of(d);
        let q = info_quantities(ChannelModel::NOISY, d);
        let e = info_quantities(ChannelModel::ERASURE, d);

        stats[0].record(q.h_x1_given_t, raw::h_phi(2.0 * t.u1), d);
        stats[1].record(q.h_x2_given_t, raw::h_phi(2.0 * t.u2), d);
        stats[2].record(q.i_x1_y_given_x2, 0.5 * raw::h(t.u), d);
        stats[3].record(q.i_x2_y_given_x1, 0.5 * raw::h(t.u), d);
        stats[4].record(q.i_x1x2_y, raw::h(0.5 * (1.0 - t.u)), d);
        stats[5].record(e.h_y, raw::mu(t.u), d);
        stats[6].record(p_excess(&t), 0.0, d);

        let t_in = clamp_into_p(&t);
        let closed = [
            db_pc1_constraints(&t_in),
            db_pc2_constraints(&t_in),
            cover_leung_constraints(t_in.u1, t_in.u2),
            erasure_triple_constraints(&t_in),
            project_to_lower_face(&t_in).and_then(|(a, b)| erasure_fb_constraints(a, b)),
        ];
        let direct = [
            db1_direct(&q),
            db2_direct(&q),
            cl_direct(&q),
            erasure_direct(&e),
            erasure_direct(&e),
        ];
        for (k, (dir, cl)) in direct.iter().zip(closed).enumerate() {
            let excess = cl.map_or(f64::INFINITY, |c| corner_excess(dir, &c));
            stats[7 + k].record(excess, 0.0, d);
        }

        let check = verify_half_entropy_identity(d);
        max_identity_error = max_identity_error.max(check.max_error());
    })?;
    Ok(CharacterizationReport {
        t_card: cfg.t_card,
        steps: cfg.steps,
        distributions,
        inequalities: stats.to_vec(),
        max_identity_error,
    })
}

/// How far a triple sits outside `P` (nonpositive inside).
fn p_excess(t: &UTriple) -> f64 {
    let box_excess = |v: f64| (-v).max(v - 0.25);
    box_excess(t.u1)
        .max(box_excess(t.u2))
        .max(t.lower_limit() - t.u)
        .max(t.u - t.upper_limit())
}

/// Rounding can put a realized triple a few ulps outside `P`.
fn clamp_into_p(t: &UTriple) -> UTriple {
    let mut c = UTriple::new(t.u1.clamp(0.0, 0.25), t.u2.clamp(0.0, 0.25), t.u);
    c.u =
        c.u.clamp(c.lower_limit(), c.upper_limit().max(c.lower_limit()));
    if in_p(&c) {
        c
    } else {
        *t
    }
}

/// Equality gaps at the constructed binary-uniform witnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub samples: u64,
    /// `(name, max |exact - closed form|)`.
    pub gaps: Vec<(String, f64)>,
}

impl WitnessReport {
    pub fn max_gap(&self) -> f64 {
        self.gaps.iter().map(|(_, g)| *g).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_gap() <= EQUALITY_TOL
    }
}

/// Evaluates the witness laws at `samples` seeded points of `S` plus the
/// dependence-balance symmetric-rate witness.
pub fn verify_witnesses(seed: u64, samples: u64) -> Result<WitnessReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = [
        "Cover-Leung: H(X1|T) = h(phi(2u1))",
        "Cover-Leung: H(X2|T) = h(phi(2u2))",
        "Cover-Leung: I(X1,X2;Y) = h((1-f)/2)",
        "erasure: H(X1|T) = h(phi(2u1))",
        "erasure: H(X2|T) = h(phi(2u2))",
        "erasure: H(Y) = mu(f)",
        "symmetric DB witness: H(X1|T) = rate",
        "symmetric DB witness: H(X2|T)/2 = rate",
        "symmetric DB witness: I(X1,X2;Y)/2 = rate",
    ];
    let mut gaps = [0.0f64; 9];
    let mut bump = |k: usize, a: f64, b: f64| gaps[k] = gaps[k].max((a - b).abs());
    for _ in 0..samples {
        let u1 = rng.gen_range(0.0..=0.25);
        let u2 = rng.gen_range(0.0..=0.25);
        let cl = cover_leung_constraints(u1, u2)?;
        let q = info_quantities(ChannelModel::NOISY, &cover_leung_witness(u1, u2)?);
        bump(0, q.h_x1_given_t, 2.0 * cl.r1_max.unwrap_or(0.0));
        bump(1, q.h_x2_given_t, 2.0 * cl.r2_max.unwrap_or(0.0));
        bump(2, q.i_x1x2_y, cl.sum_max.unwrap_or(0.0));

        let er = erasure_fb_constraints(u1, u2)?;
        let e = info_quantities(ChannelModel::ERASURE, &erasure_fb_witness(u1, u2)?);
        bump(3, e.h_x1_given_t, er.r1_max.unwrap_or(0.0));
        bump(4, e.h_x2_given_t, er.r2_max.unwrap_or(0.0));
        bump(5, e.h_y, er.sum_max.unwrap_or(0.0));
    }
    let s = solve_db_symmetric()?;
    let q = info_quantities(ChannelModel::NOISY, &s.witness);
    bump(6, q.h_x1_given_t, s.rate);
    bump(7, 0.5 * q.h_x2_given_t, s.rate);
    bump(8, 0.5 * q.i_x1x2_y, s.rate);
    Ok(WitnessReport {
        samples,
        gaps: names.iter().map(|n| n.to_string()).zip(gaps).collect(),
    })
}
