//! Command-line front end: `check` runs one condition, `experiment` one
//! scripted experiment. Exit codes: 0 holds, 1 fails, 2 inconclusive (or a
//! failed experiment gate), 3 input error.

mod params;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::Value;

use crate::conditions::{
    cor_nec2_condition, exponent_ranges, heinig_condition, necessary_condition_general, necessary_condition_radial,
    new_pitt_condition, power_weight_admissible, prop_nec1_condition, subspace_admissible, theorem31_condition,
    Admissibility, ConditionReport, ExponentConfig, ScaleGrid, TestSet, Verdict,
};
use crate::error::{Error, Result};
use crate::experiments::{
    run_bessel_table, run_dilation_sweep, run_extremal, run_riemann_lebesgue, run_section4, run_uncertainty,
    write_artifacts, ExperimentId, ExperimentReport, RiemannLebesgueSetup, UncertaintySetup, VERSION,
};
use crate::geometry::ConvexBody;
pub use params::{parse_profile, parse_weight, Params};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

pub const CONDITION_IDS: [&str; 10] = [
    "heinig",
    "nec-general",
    "nec-radial",
    "power-box",
    "subspace",
    "new-pitt",
    "thm31",
    "prop-nec1",
    "cor-nec2",
    "ranges",
];

#[derive(Debug, Parser)]
#[command(name = "pitt-lab", version, about = "Checks and experiments for weighted Fourier inequalities")]
pub struct Cli {
    /// Worker threads; falls back to PITT_LAB_THREADS.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// key=value file supplying parameters not given as flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report file for `check`, artifact directory for `experiment`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one weight condition.
    Check {
        /// heinig, nec-general, nec-radial, power-box, subspace, new-pitt, thm31, prop-nec1, cor-nec2, ranges
        id: String,
        #[command(flatten)]
        params: Params,
    },
    /// Run one experiment and write its artifacts.
    Experiment {
        /// section4 (alias separation), uncertainty, riemann-lebesgue, extremal, dilation-sweep, bessel-table
        id: String,
        #[command(flatten)]
        params: Params,
    },
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Holds => EXIT_HOLDS,
        Verdict::Fails => EXIT_FAILS,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Domain(_) | Error::Io(_) => EXIT_INPUT,
        _ => EXIT_INCONCLUSIVE,
    }
}

fn with_version(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("version".into(), VERSION.into());
    }
    v
}

fn admissibility_report(name: &str, tag: &str, a: Admissibility) -> ConditionReport {
    let verdict = if a.admissible { Verdict::Holds } else { Verdict::Fails };
    a.failed.into_iter().fold(ConditionReport::new(name, tag, verdict, f64::NAN), |r, c| r.note(format!("fails: {c}")))
}

fn body_family(kind: &str, n: usize) -> Result<Vec<(f64, TestSet)>> {
    (-10..=10)
        .map(|k| {
            let s = 2f64.powi(k);
            let body = match kind {
                "ball" => ConvexBody::ball(n, s)?,
                "cube" => ConvexBody::cube(n, s)?,
                "cross" | "cross-polytope" => ConvexBody::cross_polytope(vec![1.0 / s; n])?,
                other => return Err(Error::InvalidInput(format!("unknown body '{other}' (ball, cube, cross)"))),
            };
            Ok((s, TestSet::Body(body)))
        })
        .collect()
}

/// Run one condition; returns the JSON document and the exit code.
pub fn run_check(id: &str, p: &Params) -> Result<(Value, i32)> {
    let n = p.n.unwrap_or(1);
    let cfg = ExponentConfig::new(n, p.p.unwrap_or(2.0), p.q.unwrap_or(2.0))?;
    let weight = |s: &Option<String>| parse_weight(s.as_deref().unwrap_or("constant"), &cfg);
    let grid = ScaleGrid {
        stability: p.stability.unwrap_or(ScaleGrid::default().stability),
        ..ScaleGrid::default()
    };
    let report = match id {
        "heinig" => heinig_condition(&weight(&p.weight)?, &weight(&p.v)?, &cfg, &grid)?,
        "nec-general" => {
            let family = body_family(p.body.as_deref().unwrap_or("ball"), n)?;
            necessary_condition_general(&weight(&p.weight)?, &weight(&p.v)?, &family, p.c.unwrap_or(1.0), &cfg)?
        }
        "nec-radial" => necessary_condition_radial(&weight(&p.weight)?, &weight(&p.v)?, &cfg, p.c, &grid)?,
        "power-box" => admissibility_report(
            "power-box",
            "power-weight-range",
            power_weight_admissible(p.a.unwrap_or(0.0), p.b.unwrap_or(0.0), &cfg),
        ),
        "subspace" => admissibility_report(
            "subspace",
            "harmonic-subspace-range",
            subspace_admissible(p.b.unwrap_or(0.0), p.a.unwrap_or(0.0), &cfg, p.k.unwrap_or(0)),
        ),
        "new-pitt" => new_pitt_condition(&weight(&p.weight)?, &cfg)?,
        "thm31" => theorem31_condition(&weight(&p.weight)?, &weight(&p.w)?, &cfg)?,
        "prop-nec1" => prop_nec1_condition(&weight(&p.v)?, &cfg)?,
        "cor-nec2" => cor_nec2_condition(&weight(&p.v)?, &cfg)?,
        "ranges" => {
            let v = serde_json::to_value(exponent_ranges(&cfg)).map_err(|e| Error::Io(e.to_string()))?;
            return Ok((with_version(v), EXIT_HOLDS));
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown condition '{other}'; expected one of {}",
                CONDITION_IDS.join(", ")
            )))
        }
    };
    let code = verdict_code(report.verdict);
    let v = serde_json::to_value(&report).map_err(|e| Error::Io(e.to_string()))?;
    Ok((with_version(v), code))
}

/// Run one experiment; the report's gates decide between exit 0 and 2.
pub fn run_experiment(id: &str, p: &Params) -> Result<ExperimentReport> {
    let id: ExperimentId = if id == "separation" { ExperimentId::Section4 } else { id.parse()? };
    let n = p.n.unwrap_or(match id {
        ExperimentId::Section4 | ExperimentId::Uncertainty => 2,
        ExperimentId::RiemannLebesgue => 3,
        _ => 1,
    });
    let (dp, dq) = match id {
        ExperimentId::Section4 | ExperimentId::Uncertainty => (1.25, 1.5),
        _ => (2.0, 2.0),
    };
    let cfg = ExponentConfig::new(n, p.p.unwrap_or(dp), p.q.unwrap_or(dq))?;
    let weight = |s: &Option<String>, d: &str| parse_weight(s.as_deref().unwrap_or(d), &cfg);
    let lambdas = p.lambdas.clone().unwrap_or_else(|| vec![0.25, 0.5, 1.0, 2.0, 4.0]);
    match id {
        ExperimentId::Section4 => {
            let ns: Vec<u64> = match &p.big_n {
                Some(v) => v.iter().map(|&x| x.round() as u64).collect(),
                None => vec![10, 100, 1000, 10_000, 100_000],
            };
            let mut ns = ns;
            if ns.len() == 1 && ns[0] > 10 {
                // a single N expands to the decades up to it
                let top = ns[0];
                ns = (1..).map(|k| 10u64.pow(k)).take_while(|&x| x < top).chain([top]).collect();
            }
            run_section4(&cfg, &ns)
        }
        ExperimentId::Uncertainty => run_uncertainty(&UncertaintySetup {
            cfg,
            s0: weight(&p.s0, "decay:0.5:0.5")?,
            v: weight(&p.v, "constant")?,
            base: parse_profile(p.profile.as_deref().unwrap_or("gaussian"))?,
            lambdas,
        }),
        ExperimentId::RiemannLebesgue => {
            let mut s = RiemannLebesgueSetup::new(cfg, parse_profile(p.profile.as_deref().unwrap_or("gaussian"))?, p.l.unwrap_or(1));
            s.t_min_exp = p.t_min.unwrap_or(s.t_min_exp);
            s.t_max_exp = p.t_max.unwrap_or(s.t_max_exp);
            s.per_octave = p.per_octave.unwrap_or(s.per_octave);
            s.u = p.weight.as_ref().map(|w| parse_weight(w, &cfg)).transpose()?;
            run_riemann_lebesgue(&s)
        }
        ExperimentId::Extremal => run_extremal(
            &weight(&p.weight, "constant")?,
            &weight(&p.v, "constant")?,
            &cfg,
            &lambdas,
            p.iterations.unwrap_or(40),
        ),
        ExperimentId::DilationSweep => run_dilation_sweep(
            p.a.unwrap_or(0.0),
            p.b.unwrap_or(0.0),
            &cfg,
            &p.lambdas.clone().unwrap_or_else(|| vec![0.5, 1.0, 2.0, 4.0]),
        ),
        ExperimentId::BesselTable => run_bessel_table(p.alpha.unwrap_or(0.0), p.zeros.unwrap_or(5)),
    }
}

fn configure_threads(threads: Option<usize>) -> Result<()> {
    let from_env = std::env::var("PITT_LAB_THREADS").ok();
    let count = match (threads, from_env) {
        (Some(t), _) => Some(t),
        (None, Some(s)) => Some(
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("PITT_LAB_THREADS must be a count, got '{s}'")))?,
        ),
        _ => None,
    };
    if let Some(t) = count {
        if t == 0 {
            return Err(Error::InvalidInput("thread count must be positive".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    Ok(())
}

fn dispatch(mut cli: Cli) -> Result<i32> {
    let (params, is_check) = match &mut cli.command {
        Command::Check { params, .. } => (params, true),
        Command::Experiment { params, .. } => (params, false),
    };
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)?;
        let extra = params.apply_config(&text)?;
        cli.threads = cli.threads.or(extra.threads);
        cli.out = cli.out.clone().or(extra.out);
    }
    configure_threads(cli.threads)?;
    let params = params.clone();
    if is_check {
        let Command::Check { id, .. } = &cli.command else { unreachable!() };
        let (json, code) = run_check(id, &params)?;
        let text = serde_json::to_string_pretty(&json).map_err(|e| Error::Io(e.to_string()))? + "\n";
        match &cli.out {
            Some(path) => std::fs::write(path, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(code)
    } else {
        let Command::Experiment { id, .. } = &cli.command else { unreachable!() };
        let report = run_experiment(id, &params)?;
        let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("pitt-lab-out"));
        write_artifacts(&report, &dir)?;
        std::io::stdout().write_all((report.to_json() + "\n").as_bytes())?;
        Ok(if report.gates_pass { EXIT_HOLDS } else { EXIT_INCONCLUSIVE })
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_HOLDS };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}
