//! Property suites behind `macfb verify`.

use std::collections::BTreeMap;

use macfb::bounds::{
    erasure_fb_constraints, erasure_triple_constraints, region_boundary, RegionKind, RegionSpec,
};
use macfb::feasible::{project_to_lower_face, sample_p};
use macfb::geometry::{curve_gap, support_value};
use macfb::infofn::{self, raw};
use macfb::oracle::{self, OracleConfig};
use macfb::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const LEMMA_TOL: f64 = 1e-12;
pub const EQUIVALENCE_TOL: f64 = 1e-9;
pub const ORDERING_SLACK: f64 = 1e-3;
pub const SYMMETRIC_GAP: f64 = 4e-3;
pub const MU_GRID: usize = 1_000_000;
pub const MU_ARGMAX_TOL: f64 = 1e-5;
pub const WITNESS_SAMPLES: u64 = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub samples: u64,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub equality_count: Option<u64>,
    /// Input at which the largest violation occurred, when it exceeds the tolerance.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub violating_input: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub properties: Vec<PropertyReport>,
    pub values: BTreeMap<String, f64>,
}

impl SuiteReport {
    fn new(suite: &str, properties: Vec<PropertyReport>, values: BTreeMap<String, f64>) -> Self {
        Self {
            suite: suite.to_string(),
            passed: properties.iter().all(|p| p.passed),
            properties,
            values,
        }
    }
}

/// Tracks the largest excess of a property over its samples.
struct Tracker {
    name: String,
    tolerance: f64,
    samples: u64,
    worst: f64,
    worst_input: Vec<f64>,
}

impl Tracker {
    fn new(name: &str, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            tolerance,
            samples: 0,
            worst: f64::NEG_INFINITY,
            worst_input: Vec::new(),
        }
    }

    fn record(&mut self, excess: f64, input: &[f64]) {
        self.samples += 1;
        if excess > self.worst || excess.is_nan() {
            self.worst = if excess.is_nan() {
                f64::INFINITY
            } else {
                excess
            };
            self.worst_input = input.to_vec();
        }
    }

    fn finish(self) -> PropertyReport {
        let max_violation = self.worst.max(0.0);
        let passed = max_violation <= self.tolerance;
        PropertyReport {
            name: self.name,
            samples: self.samples,
            max_violation,
            tolerance: self.tolerance,
            passed,
            equality_count: None,
            violating_input: (!passed).then(|| serde_json::json!(self.worst_input)),
        }
    }
}

pub fn lemmas(seed: u64, samples: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lemma1 = Tracker::new("lemma 1: s1+s2-2s1s2 >= f(2s1(1-s1), 2s2(1-s2))", LEMMA_TOL);
    let mut convex = Tracker::new("lemma 2: f midpoint convexity", LEMMA_TOL);
    let mut hessian = Tracker::new(
        "lemma 2: f Hessian eigenvalues are 0 and its trace",
        LEMMA_TOL,
    );
    let mut g_mono = Tracker::new("lemma 3: g non-increasing in each argument", LEMMA_TOL);
    let mut g_conc = Tracker::new("lemma 3: g midpoint concavity", LEMMA_TOL);
    let mut mu_conc = Tracker::new("lemma 4: mu midpoint concavity", LEMMA_TOL);
    let mut hphi = Tracker::new("h(phi) midpoint concavity", LEMMA_TOL);
    let mut f_sum = Tracker::new("f(2u1, 2u2) >= u1 + u2", LEMMA_TOL);
    for _ in 0..samples {
        let (s1, s2): (f64, f64) = (rng.gen(), rng.gen());
        let rhs = raw::f2(2.0 * s1 * (1.0 - s1), 2.0 * s2 * (1.0 - s2));
        lemma1.record(rhs - (s1 + s2 - 2.0 * s1 * s2), &[s1, s2]);

        let x: [f64; 4] = [0.0; 4].map(|_| rng.gen_range(0.0..=0.5));
        let mid = raw::f2(0.5 * (x[0] + x[2]), 0.5 * (x[1] + x[3]));
        convex.record(mid - 0.5 * (raw::f2(x[0], x[1]) + raw::f2(x[2], x[3])), &x);

        let (hx, hy) = (rng.gen_range(0.0..0.49), rng.gen_range(0.0..0.49));
        let (lo, hi) = infofn::f2_hessian_eigenvalues(hx, hy).unwrap_or((f64::NAN, f64::NAN));
        let trace = infofn::f2_hessian(hx, hy).map_or(f64::NAN, |m| m[0][0] + m[1][1]);
        let scale = hi.abs().max(1.0);
        let excess = (lo.abs() / scale).max((hi - trace).abs() / scale).max(-hi);
        // relative to the entries, which grow like (1-2x)^{-3/2}
        hessian.record(excess, &[hx, hy]);

        let u: [f64; 4] = [0.0; 4].map(|_| rng.gen_range(0.0..=0.25));
        let (a, b) = (u[0].min(u[2]), u[0].max(u[2]));
        g_mono.record(
            (raw::g(b, u[1]) - raw::g(a, u[1])).max(raw::g(u[1], b) - raw::g(u[1], a)),
            &u,
        );
        let gmid = raw::g(0.5 * (u[0] + u[2]), 0.5 * (u[1] + u[3]));
        g_conc.record(0.5 * (raw::g(u[0], u[1]) + raw::g(u[2], u[3])) - gmid, &u);
        f_sum.record(u[0] + u[1] - raw::f2(2.0 * u[0], 2.0 * u[1]), &u[..2]);

        let (m1, m2): (f64, f64) = (rng.gen(), rng.gen());
        mu_conc.record(
            0.5 * (raw::mu(m1) + raw::mu(m2)) - raw::mu(0.5 * (m1 + m2)),
            &[m1, m2],
        );
        hphi.record(
            0.5 * (raw::h_phi(m1) + raw::h_phi(m2)) - raw::h_phi(0.5 * (m1 + m2)),
            &[m1, m2],
        );
    }

    let mut argmax = Tracker::new("lemma 4: argmax of mu on a 10^6 grid is 1/3", MU_ARGMAX_TOL);
    let (arg, peak) = (0..=MU_GRID)
        .map(|k| k as f64 / MU_GRID as f64)
        .map(|s| (s, raw::mu(s)))
        .fold(
            (0.0, f64::NEG_INFINITY),
            |b, c| if c.1 > b.1 { c } else { b },
        );
    argmax.record((arg - 1.0 / 3.0).abs(), &[arg]);
    argmax.samples = MU_GRID as u64 + 1;

    let mut values = BTreeMap::new();
    values.insert("mu_argmax".to_string(), arg);
    values.insert("mu_max".to_string(), peak);
    let props = [
        lemma1, convex, hessian, g_mono, g_conc, mu_conc, argmax, hphi, f_sum,
    ]
    .into_iter()
    .map(Tracker::finish)
    .collect();
    SuiteReport::new("lemmas", props, values)
}

pub fn equivalence(seed: u64, samples: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut caps = [
        Tracker::new("projected R1 cap >= R1 cap", EQUIVALENCE_TOL),
        Tracker::new("projected R2 cap >= R2 cap", EQUIVALENCE_TOL),
        Tracker::new("projected sum cap >= sum cap", EQUIVALENCE_TOL),
    ];
    let mut face = Tracker::new("projection lies on the lower face of P", 1e-10);
    let mut r2_slack = 0.0f64;
    for _ in 0..samples {
        let t = sample_p(&mut rng);
        let input = [t.u1, t.u2, t.u];
        let before = erasure_triple_constraints(&t)?;
        let (a, b) = project_to_lower_face(&t)?;
        let after = erasure_fb_constraints(a, b)?;
        let pairs = [
            (before.r1_max, after.r1_max),
            (before.r2_max, after.r2_max),
            (before.sum_max, after.sum_max),
        ];
        for (tracker, (x, y)) in caps.iter_mut().zip(pairs) {
            let (x, y) = (x.unwrap_or(f64::INFINITY), y.unwrap_or(f64::INFINITY));
            tracker.record(x - y, &input);
        }
        r2_slack = r2_slack.max(after.r2_max.unwrap_or(0.0) - before.r2_max.unwrap_or(0.0));
        if t.u <= 0.5 {
            face.record((raw::f2(2.0 * a, 2.0 * b) - t.u).abs(), &input);
        }
    }
    let mut values = BTreeMap::new();
    values.insert("max_r2_cap_slack".to_string(), r2_slack);
    let mut props: Vec<_> = caps.into_iter().map(Tracker::finish).collect();
    props.push(face.finish());
    Ok(SuiteReport::new("equivalence", props, values))
}

pub fn characterization(seed: u64, t_cards: &[usize], steps: usize) -> Result<SuiteReport> {
    let mut props = Vec::new();
    let mut values = BTreeMap::new();
    for &t in t_cards {
        let cfg = OracleConfig::new(t, steps).with_seed(seed);
        let r = oracle::verify_characterization(&cfg)?;
        values.insert(format!("t{t}_distributions"), r.distributions as f64);
        for s in &r.inequalities {
            let passed = s.passed();
            props.push(PropertyReport {
                name: format!("|T|={t}: {}", s.name),
                samples: s.evaluated,
                max_violation: s.max_violation(),
                tolerance: oracle::VIOLATION_TOL,
                passed,
                equality_count: Some(s.equality_count),
                violating_input: if passed {
                    None
                } else {
                    s.worst_case
                        .as_ref()
                        .and_then(|d| serde_json::to_value(d).ok())
                },
            });
        }
        props.push(PropertyReport {
            name: format!("|T|={t}: H(Xi|Y,Xj,T) = H(Xi|T)/2"),
            samples: r.distributions,
            max_violation: r.max_identity_error,
            tolerance: oracle::IDENTITY_TOL,
            passed: r.max_identity_error <= oracle::IDENTITY_TOL,
            equality_count: None,
            violating_input: None,
        });
    }
    let w = oracle::verify_witnesses(seed, WITNESS_SAMPLES)?;
    for (name, gap) in &w.gaps {
        let samples = if name.starts_with("symmetric") {
            1
        } else {
            w.samples
        };
        props.push(PropertyReport {
            name: format!("witness equality, {name}"),
            samples,
            max_violation: *gap,
            tolerance: oracle::EQUALITY_TOL,
            passed: *gap <= oracle::EQUALITY_TOL,
            equality_count: None,
            violating_input: None,
        });
    }
    Ok(SuiteReport::new("characterization", props, values))
}

pub fn dominance(grid_n: usize) -> Result<SuiteReport> {
    let get = |k| region_boundary(&RegionSpec::new(k, grid_n)?);
    let cl = get(RegionKind::CoverLeung)?;
    let db = get(RegionKind::DbPcIntersection)?;
    let cs = get(RegionKind::CutSet)?;
    let ef = get(RegionKind::ErasureFb)?;
    let en = get(RegionKind::ErasureNoFb)?;

    let mut values = BTreeMap::new();
    for c in [&cl, &db, &cs, &ef, &en] {
        values.insert(format!("{}_support_half", c.label), support_value(c, 0.5));
    }
    let ordering = |name: &str, outer, inner, tol: f64| {
        let g = curve_gap(outer, inner);
        let v = (-g.min_gap).max(0.0);
        PropertyReport {
            name: name.to_string(),
            samples: macfb::geometry::DEFAULT_DIRECTIONS as u64,
            max_violation: v,
            tolerance: tol,
            passed: v <= tol,
            equality_count: None,
            violating_input: (v > tol).then(|| serde_json::json!({ "lambda": g.min_at })),
        }
    };
    let half = support_value(&cs, 0.5) - support_value(&db, 0.5);
    values.insert("cutset_minus_dbpc_half".to_string(), half);
    let shortfall = (SYMMETRIC_GAP - half).max(0.0);
    let props = vec![
        ordering("cover-leung inside dbpc", &db, &cl, ORDERING_SLACK),
        ordering("dbpc inside cutset", &cs, &db, ORDERING_SLACK),
        ordering("erasure-nofb inside erasure-fb", &ef, &en, 1e-9),
        PropertyReport {
            name: "cutset exceeds dbpc by 4e-3 at lambda 1/2".to_string(),
            samples: 1,
            max_violation: shortfall,
            tolerance: 0.0,
            passed: shortfall == 0.0,
            equality_count: None,
            violating_input: None,
        },
    ];
    Ok(SuiteReport::new("dominance", props, values))
}
