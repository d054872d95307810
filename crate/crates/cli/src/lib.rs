//! `macfb` command-line front end.
//!
//! [`run`] parses arguments, executes one command and returns the process
//! exit code: 0 on success, 1 on a failed verification or internal error,
//! 2 on a usage error.

use std::collections::BTreeMap;
use std::io::Write;

use clap::builder::TypedValueParser;
use clap::{Parser, Subcommand, ValueEnum};
use macfb::bounds::{region_boundary, RegionKind, RegionSpec, DEFAULT_GRID_N};
use macfb::geometry::{support_value, BoundaryCurve};
use macfb::symrate::{
    solve_cl_symmetric, solve_cutset_symmetric, solve_db_symmetric, CutSetSolution,
    SymmetricRateSolution,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub mod suites;

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
}

impl OutputRecord {
    fn new(command: &str, parameters: BTreeMap<String, Value>, results: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            parameters,
            results,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "macfb",
    version,
    about = "Feedback-capacity bounds for binary two-user MACs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Boundary of a rate region.
    Region {
        /// cutset, dbpc1, dbpc2, dbpc, cover-leung, erasure-fb or erasure-nofb
        #[arg(value_parser = parse_region)]
        which: RegionKind,
        /// Samples per parameter axis.
        #[arg(long, default_value_t = DEFAULT_GRID_N, value_parser = clap::value_parser!(u32).range(2..).map(|v| v as usize))]
        grid_n: usize,
        #[arg(long, value_enum, default_value_t = RegionFormat::Csv)]
        format: RegionFormat,
    },
    /// Symmetric-rate points.
    Symrate {
        #[arg(value_enum)]
        which: SymrateKind,
        #[arg(long, value_enum, default_value_t = TextFormat::Json)]
        format: TextFormat,
    },
    /// Property suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples (lemmas: 100000, equivalence: 1000).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: Option<u64>,
        /// Cardinality of T for the characterization suite (default: 1 and 2).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3).map(|v| v as usize))]
        t_card: Option<usize>,
        /// Lattice points per probability axis for the characterization suite.
        #[arg(long, default_value_t = 21, value_parser = clap::value_parser!(u32).range(2..).map(|v| v as usize))]
        steps: usize,
        /// Region grid for the dominance suite.
        #[arg(long, default_value_t = DEFAULT_GRID_N, value_parser = clap::value_parser!(u32).range(2..).map(|v| v as usize))]
        grid_n: usize,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
}

fn parse_region(s: &str) -> Result<RegionKind, String> {
    s.parse().map_err(|e: macfb::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegionFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SymrateKind {
    Dbpc,
    CoverLeung,
    Cutset,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Lemmas,
    Characterization,
    Dominance,
    Equivalence,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Lemmas => "lemmas",
            Suite::Characterization => "characterization",
            Suite::Dominance => "dominance",
            Suite::Equivalence => "equivalence",
            Suite::All => "all",
        }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Region {
            which,
            grid_n,
            format,
        } => cmd_region(which, grid_n, format, out),
        Command::Symrate { which, format } => cmd_symrate(which, format, out),
        Command::Verify {
            suite,
            seed,
            samples,
            t_card,
            steps,
            grid_n,
            format,
        } => {
            let opts = VerifyOptions {
                seed,
                samples,
                t_card,
                steps,
                grid_n,
            };
            cmd_verify(suite, &opts, format, out)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

type CmdResult = Result<i32, Box<dyn std::error::Error>>;

fn curve_points(c: &BoundaryCurve) -> Value {
    Value::Array(
        c.points()
            .iter()
            .map(|p| json!({ "r1": p.r1, "r2": p.r2 }))
            .collect(),
    )
}

fn cmd_region(
    which: RegionKind,
    grid_n: usize,
    format: RegionFormat,
    out: &mut dyn Write,
) -> CmdResult {
    let curve = region_boundary(&RegionSpec::new(which, grid_n)?)?;
    match format {
        RegionFormat::Csv => {
            let mut s = String::from("r1,r2\n");
            for p in curve.points() {
                s.push_str(&format!("{},{}\n", p.r1, p.r2));
            }
            out.write_all(s.as_bytes())?;
        }
        RegionFormat::Json => {
            let params = BTreeMap::from([
                ("which".to_string(), json!(which.name())),
                ("grid_n".to_string(), json!(grid_n)),
            ]);
            let results = json!({
                "label": curve.label,
                "symmetric_rate": curve.symmetric_rate(),
                "support_half": support_value(&curve, 0.5),
                "points": curve_points(&curve),
            });
            write_json(out, &OutputRecord::new("region", params, results))?;
        }
    }
    Ok(EXIT_OK)
}

fn symmetric_json(s: &SymmetricRateSolution) -> Value {
    json!({
        "rate": s.rate,
        "u1": s.u1_star,
        "u2": s.u2_star,
        "u": s.u_star,
        "q10": s.witness.q1()[0],
        "q20": s.witness.q2()[0],
        "witness": s.witness,
    })
}

fn cutset_json(s: &CutSetSolution) -> Value {
    let [a, b, c, d] = s.joint.atoms();
    json!({ "rate": s.rate, "joint": { "a": a, "b": b, "c": c, "d": d } })
}

fn cmd_symrate(which: SymrateKind, format: TextFormat, out: &mut dyn Write) -> CmdResult {
    let wants = |k| which == k || which == SymrateKind::All;
    let mut results = serde_json::Map::new();
    let mut text = String::new();
    if wants(SymrateKind::Dbpc) {
        let s = solve_db_symmetric()?;
        text.push_str(&format!(
            "dbpc rate={:.6} u1={:.6} u2={:.6} u={:.6} q10={:.6} q20={:.6}\n",
            s.rate,
            s.u1_star,
            s.u2_star,
            s.u_star,
            s.witness.q1()[0],
            s.witness.q2()[0]
        ));
        results.insert("dbpc".to_string(), symmetric_json(&s));
    }
    if wants(SymrateKind::CoverLeung) {
        let s = solve_cl_symmetric()?;
        text.push_str(&format!(
            "cover-leung rate={:.6} u1={:.6} u2={:.6} u={:.6} q10={:.6} q20={:.6}\n",
            s.rate,
            s.u1_star,
            s.u2_star,
            s.u_star,
            s.witness.q1()[0],
            s.witness.q2()[0]
        ));
        results.insert("cover-leung".to_string(), symmetric_json(&s));
    }
    if wants(SymrateKind::Cutset) {
        let s = solve_cutset_symmetric();
        let [a, b, c, d] = s.joint.atoms();
        text.push_str(&format!(
            "cutset rate={:.6} a={a:.6} b={b:.6} c={c:.6} d={d:.6}\n",
            s.rate
        ));
        results.insert("cutset".to_string(), cutset_json(&s));
    }
    match format {
        TextFormat::Text => out.write_all(text.as_bytes())?,
        TextFormat::Json => {
            let name = SymrateKind::value_variants()
                .iter()
                .find(|v| **v == which)
                .and_then(|v| v.to_possible_value())
                .map(|p| p.get_name().to_string())
                .unwrap_or_default();
            let params = BTreeMap::from([("which".to_string(), json!(name))]);
            write_json(
                out,
                &OutputRecord::new("symrate", params, Value::Object(results)),
            )?;
        }
    }
    Ok(EXIT_OK)
}

struct VerifyOptions {
    seed: u64,
    samples: Option<u64>,
    t_card: Option<usize>,
    steps: usize,
    grid_n: usize,
}

fn run_suite(suite: Suite, o: &VerifyOptions) -> macfb::Result<suites::SuiteReport> {
    match suite {
        Suite::Lemmas => Ok(suites::lemmas(o.seed, o.samples.unwrap_or(100_000))),
        Suite::Equivalence => suites::equivalence(o.seed, o.samples.unwrap_or(1000)),
        Suite::Characterization => {
            let t_cards = o.t_card.map_or(vec![1, 2], |t| vec![t]);
            suites::characterization(o.seed, &t_cards, o.steps)
        }
        Suite::Dominance => suites::dominance(o.grid_n),
        Suite::All => unreachable!(),
    }
}

fn cmd_verify(
    suite: Suite,
    o: &VerifyOptions,
    format: TextFormat,
    out: &mut dyn Write,
) -> CmdResult {
    let selected: Vec<Suite> = if suite == Suite::All {
        vec![
            Suite::Lemmas,
            Suite::Characterization,
            Suite::Dominance,
            Suite::Equivalence,
        ]
    } else {
        vec![suite]
    };
    let mut reports = Vec::new();
    for s in selected {
        reports.push(run_suite(s, o)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    match format {
        TextFormat::Text => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&format!("suite {} {}\n", r.suite, verdict(r.passed)));
                for p in &r.properties {
                    s.push_str(&format!(
                        "  {} {}  samples={} max_violation={:.6e} tolerance={:.1e}",
                        verdict(p.passed),
                        p.name,
                        p.samples,
                        p.max_violation,
                        p.tolerance
                    ));
                    if let Some(n) = p.equality_count {
                        s.push_str(&format!(" equalities={n}"));
                    }
                    if let Some(v) = &p.violating_input {
                        s.push_str(&format!(" input={v}"));
                    }
                    s.push('\n');
                }
                for (k, v) in &r.values {
                    s.push_str(&format!("  {k}={v:.6}\n"));
                }
            }
            out.write_all(s.as_bytes())?;
        }
        TextFormat::Json => {
            let mut params = BTreeMap::from([
                ("suite".to_string(), json!(suite.name())),
                ("seed".to_string(), json!(o.seed)),
                ("steps".to_string(), json!(o.steps)),
                ("grid_n".to_string(), json!(o.grid_n)),
            ]);
            if let Some(n) = o.samples {
                params.insert("samples".to_string(), json!(n));
            }
            if let Some(t) = o.t_card {
                params.insert("t_card".to_string(), json!(t));
            }
            let results = json!({ "passed": passed, "suites": reports });
            write_json(out, &OutputRecord::new("verify", params, results))?;
        }
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILURE })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn write_json(out: &mut dyn Write, record: &OutputRecord) -> std::io::Result<()> {
    let s = serde_json::to_string_pretty(record).map_err(std::io::Error::other)?;
    out.write_all(s.as_bytes())?;
    out.write_all(b"\n")
}
