//! Command-line driver.
//!
//! Exit status: 0 when every check passes, 1 when a property violation was
//! found, 2 for usage or input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::Operator;
use crate::error::{Error, Result};
use crate::extreal::Finite;
use crate::flags;
use crate::norms::{self, SymmetricNormSpec};
use crate::svalues;
use crate::sweeps::{self, ScanRow, SweepOutcome};
use crate::young;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "snumlab", version, about = "Singular-value functions and Young-inequality audits")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Young exponent, p > 1.
    #[arg(long, global = true, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, env = "SNUMLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Number of random cases for scans and sweeps.
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Singular-value function of an operator, as segments.
    Mu { input: PathBuf },
    /// Gap between μ(ab*) and μ(|a|^p/p + |b|^q/q), with equality detection.
    YoungCheck { a: PathBuf, b: PathBuf },
    /// Seeded scan of equality detection over constructed instances.
    EqualityScan,
    /// Complete flag of the diffuse embedding of an operator.
    FlagsDemo { input: PathBuf },
    /// Four-way equivalence suite under symmetric norms.
    NormsCheck {
        a: PathBuf,
        b: PathBuf,
        /// Norm specs: `lp:P`, `kyfan:T` or `uniform` (default: lp:2 and lp:1).
        #[arg(long = "norm")]
        norms: Vec<String>,
    },
    /// All randomized property sweeps.
    Suite,
}

/// Report text plus exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub status: i32,
    /// Human-readable summary for standard error.
    pub notes: Vec<String>,
}

impl Outcome {
    fn new(report: String, violation: bool) -> Self {
        Self {
            report,
            status: if violation { EXIT_VIOLATION } else { EXIT_PASS },
            notes: Vec::new(),
        }
    }
}

fn load(path: &Path) -> Result<Operator> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    Operator::from_json(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

pub fn parse_norm(spec: &str) -> Result<SymmetricNormSpec> {
    let (kind, param) = spec.split_once(':').unwrap_or((spec, ""));
    let num = || {
        param
            .parse::<f64>()
            .map_err(|_| Error::InvalidInput(format!("bad norm parameter in {spec:?}")))
    };
    match kind.to_ascii_lowercase().as_str() {
        "lp" | "l" => SymmetricNormSpec::lp(num()?),
        "kyfan" => SymmetricNormSpec::ky_fan(num()?),
        "uniform" => Ok(SymmetricNormSpec::uniform()),
        _ => Err(Error::InvalidInput(format!("unknown norm spec {spec:?}"))),
    }
}

/// Runs one command and returns its report without touching the filesystem
/// beyond reading inputs.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.command {
        Command::Mu { input } => {
            let m = svalues::mu(&load(input)?)?;
            let report = match cfg.format {
                Format::Csv => m.to_csv(),
                Format::Json => pretty(&m.to_json()),
            };
            Ok(Outcome::new(report, false))
        }
        Command::YoungCheck { a, b } => young_check(cfg, &load(a)?, &load(b)?),
        Command::EqualityScan => {
            let rows = sweeps::equality_scan(cfg.seed, cfg.trials, cfg.tol)?;
            let report = match cfg.format {
                Format::Csv => {
                    let mut s = format!("{}\n", ScanRow::CSV_HEADER);
                    for r in &rows {
                        let _ = writeln!(s, "{}", r.to_csv());
                    }
                    s
                }
                Format::Json => pretty(&json!({"seed": cfg.seed, "rows": rows})),
            };
            let bad: Vec<_> = rows.iter().filter(|r| r.violation()).collect();
            let mut out = Outcome::new(report, !bad.is_empty());
            for r in bad {
                out.notes
                    .push(format!("violation in case {} (seed {}): {}", r.case, cfg.seed, r.to_csv()));
            }
            Ok(out)
        }
        Command::FlagsDemo { input } => flags_demo(cfg, &load(input)?),
        Command::NormsCheck { a, b, norms } => {
            let specs = if norms.is_empty() {
                vec![SymmetricNormSpec::lp(2.0)?, SymmetricNormSpec::lp(1.0)?]
            } else {
                norms.iter().map(|s| parse_norm(s)).collect::<Result<_>>()?
            };
            norms_check(cfg, &load(a)?, &load(b)?, &specs)
        }
        Command::Suite => Ok(suite(cfg)),
    }
}

fn young_check(cfg: &RunConfig, a: &Operator, b: &Operator) -> Result<Outcome> {
    let gap = young::young_gap_tol(a, b, cfg.p, cfg.tol)?;
    let verdict = match young::equality_detect(a, b, cfg.p, cfg.tol) {
        Ok(v) => Some(v),
        Err(Error::NotTauCompact { .. }) => None,
        Err(e) => return Err(e),
    };
    let consistent = verdict.as_ref().is_none_or(|v| v.theorem_consistent);
    let report = match cfg.format {
        Format::Csv => gap.to_csv(),
        Format::Json => {
            let mut v = serde_json::to_value(&gap).expect("serializes");
            v["verdict"] = serde_json::to_value(&verdict).expect("serializes");
            pretty(&v)
        }
    };
    let mut out = Outcome::new(report, gap.violation || !consistent);
    out.notes.push(format!("equality: {}", gap.equality));
    if gap.violation {
        out.notes.push(format!("inequality violated: min gap {:e}", gap.min_gap));
    }
    if verdict.is_none() {
        out.notes.push("equality analysis skipped: input is not tau-compact".into());
    } else if !consistent {
        out.notes.push("mu-equality without |a|^p = |b|^q".into());
    }
    Ok(out)
}

fn flags_demo(cfg: &RunConfig, x: &Operator) -> Result<Outcome> {
    let x = flags::embed_diffuse(x);
    let flag = flags::build_flag(&x)?;
    let m = svalues::mu(&x)?;
    let mut ts = m.breakpoints();
    ts.extend(flag.entries().iter().filter_map(|e| e.end().finite()));
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut checks = Vec::new();
    let mut violation = false;
    for t in ts {
        let alloc = flag.tau_x_e(t);
        let kf = m.integral_to(Finite(t)).finite().unwrap_or(f64::INFINITY);
        let ok = (alloc - kf).abs() <= cfg.tol * (1.0 + kf.abs());
        violation |= !ok;
        checks.push(json!({"t": t, "tau_x_e": alloc, "integral": kf, "ok": ok}));
    }
    let report = match cfg.format {
        Format::Csv => format!("t_start,t_end,block,eigenindex,portion\n{}", flag.to_csv()),
        Format::Json => pretty(&json!({"entries": flag.entries(), "checks": checks})),
    };
    Ok(Outcome::new(report, violation))
}

fn norms_check(cfg: &RunConfig, a: &Operator, b: &Operator, specs: &[SymmetricNormSpec]) -> Result<Outcome> {
    let mut reports = Vec::new();
    for spec in specs {
        reports.push(norms::equivalence_suite(a, b, cfg.p, spec, cfg.tol)?);
    }
    let report = match cfg.format {
        Format::Csv => {
            let mut s = String::from("spec,item1,item2,item3,item4,agree\n");
            for r in &reports {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    r.spec.name(),
                    r.item1.holds,
                    r.item2.holds,
                    r.item3.holds,
                    r.item4.holds,
                    r.agree
                );
            }
            s
        }
        Format::Json => pretty(&reports),
    };
    let disagree = reports.iter().any(|r| !r.agree);
    let mut out = Outcome::new(report, disagree);
    if disagree {
        out.notes.push("equivalent statements disagree".into());
    }
    Ok(out)
}

/// Sweep sizes used by `suite`; `trials` scales the random sweeps.
pub fn suite_outcomes(seed: u64, trials: usize, tol: f64) -> Vec<SweepOutcome> {
    vec![
        sweeps::young_soundness(seed, trials),
        sweeps::equality_forward(seed, trials, tol, 1e-8),
        sweeps::equality_rigidity(seed, trials, tol),
        sweeps::s_number_suite(seed, trials),
        sweeps::ky_fan_oracle(seed, 3, 20, 1e-8),
        sweeps::flags_suite(seed, trials),
        sweeps::saturation_suite(seed, trials, tol),
        sweeps::douglas_suite(seed, trials, 1e-8),
        sweeps::equivalence_sweep(seed, trials, tol),
        sweeps::worked_examples(),
    ]
}

fn suite(cfg: &RunConfig) -> Outcome {
    let outcomes = suite_outcomes(cfg.seed, cfg.trials, cfg.tol);
    let report = match cfg.format {
        Format::Csv => {
            let mut s = String::from("name,cases,failures,worst,passed\n");
            for o in &outcomes {
                let _ = writeln!(s, "{},{},{},{:e},{}", o.name, o.cases, o.failures, o.worst, o.passed());
            }
            s
        }
        Format::Json => pretty(&outcomes),
    };
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed()).collect();
    let mut out = Outcome::new(report, !failed.is_empty());
    for o in failed {
        if let Some(f) = &o.first_failure {
            out.notes
                .push(format!("{}: case {} (seed {}) failed: {}", o.name, f.case, f.seed, f.detail));
        }
    }
    out
}

/// Executes `cfg`, writes the report and returns the process exit status.
pub fn run(cfg: &RunConfig) -> i32 {
    let outcome = match execute(cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.report) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{}", outcome.report),
    }
    outcome.status
}
