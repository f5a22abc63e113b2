use std::path::PathBuf;

use clap::Args;

use crate::conditions::ExponentConfig;
use crate::error::{Error, Result};
use crate::experiments::decay_example_weight;
use crate::transforms::RadialProfile;
use crate::weights::{load_grid_weight, load_radial_weight, Weight};

/// Parameters shared by all commands. Each can also come from a config
/// file under the same name as the long flag.
#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Fourier-side weight `u`.
    #[arg(long)]
    pub weight: Option<String>,
    /// Weight on `f`.
    #[arg(long)]
    pub v: Option<String>,
    /// Majorant weight for thm31.
    #[arg(long)]
    pub w: Option<String>,
    /// Fourier-side weight of the uncertainty experiment.
    #[arg(long)]
    pub s0: Option<String>,
    /// Exponent of `v = |x|^a` (power-box, subspace, dilation-sweep).
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Exponent of `u = |xi|^b`.
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Spherical harmonic degree.
    #[arg(long)]
    pub k: Option<u32>,
    /// Bessel order.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub zeros: Option<usize>,
    /// Polar dilation constant.
    #[arg(long)]
    pub c: Option<f64>,
    /// Body family for nec-general: ball, cube or cross.
    #[arg(long)]
    pub body: Option<String>,
    /// Shell counts; a single value expands to the decades below it.
    #[arg(long = "N", value_delimiter = ',')]
    pub big_n: Option<Vec<f64>>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_min: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_max: Option<i32>,
    #[arg(long)]
    pub per_octave: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Test profile: gaussian, ball:R, hat:R or exp:RATE.
    #[arg(long)]
    pub profile: Option<String>,
    /// Relative change at which a scale sweep counts as settled.
    #[arg(long)]
    pub stability: Option<f64>,
}

/// Top-level settings that may also come from a config file.
#[derive(Debug, Default)]
pub struct Extra {
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

fn value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::InvalidInput(format!("config key '{key}': cannot parse '{raw}'")))
}

fn list(key: &str, raw: &str) -> Result<Vec<f64>> {
    raw.split(',').map(|x| value(key, x.trim())).collect()
}

impl Params {
    /// Fill unset fields from `key = value` lines; `#` starts a comment.
    /// Unknown keys are rejected.
    pub fn apply_config(&mut self, text: &str) -> Result<Extra> {
        let mut extra = Extra::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::InvalidInput(format!("config line {}: expected key = value", i + 1)));
            };
            let key = k.trim().replace('_', "-");
            let raw = v.trim().trim_matches('"');
            macro_rules! fill {
                ($field:expr, $parsed:expr) => {
                    if $field.is_none() {
                        $field = Some($parsed);
                    }
                };
            }
            match key.as_str() {
                "n" => fill!(self.n, value(&key, raw)?),
                "p" => fill!(self.p, value(&key, raw)?),
                "q" => fill!(self.q, value(&key, raw)?),
                "weight" | "u" => fill!(self.weight, raw.to_string()),
                "v" => fill!(self.v, raw.to_string()),
                "w" => fill!(self.w, raw.to_string()),
                "s0" => fill!(self.s0, raw.to_string()),
                "a" => fill!(self.a, value(&key, raw)?),
                "b" => fill!(self.b, value(&key, raw)?),
                "k" => fill!(self.k, value(&key, raw)?),
                "alpha" => fill!(self.alpha, value(&key, raw)?),
                "zeros" => fill!(self.zeros, value(&key, raw)?),
                "c" => fill!(self.c, value(&key, raw)?),
                "body" => fill!(self.body, raw.to_string()),
                "N" => fill!(self.big_n, list(&key, raw)?),
                "l" => fill!(self.l, value(&key, raw)?),
                "t-min" => fill!(self.t_min, value(&key, raw)?),
                "t-max" => fill!(self.t_max, value(&key, raw)?),
                "per-octave" => fill!(self.per_octave, value(&key, raw)?),
                "lambdas" => fill!(self.lambdas, list(&key, raw)?),
                "iterations" => fill!(self.iterations, value(&key, raw)?),
                "profile" => fill!(self.profile, raw.to_string()),
                "stability" => fill!(self.stability, value(&key, raw)?),
                "threads" => extra.threads = Some(value(&key, raw)?),
                "out" => extra.out = Some(PathBuf::from(raw)),
                other => return Err(Error::InvalidInput(format!("unknown config key '{other}'"))),
            }
        }
        Ok(extra)
    }
}

fn numbers(spec: &str, parts: &[&str], count: usize) -> Result<Vec<f64>> {
    if parts.len() != count {
        return Err(Error::InvalidInput(format!("weight '{spec}' needs {count} numeric argument(s)")));
    }
    parts
        .iter()
        .map(|x| x.trim().parse().map_err(|_| Error::InvalidInput(format!("weight '{spec}': '{x}' is not a number"))))
        .collect()
}

/// `constant`, `counterexample`, `power:A`, `piecewise:ALPHA:BETA`,
/// `shifted:G` for `(1+|x|)^G`, `decay:M:EPS`, `radial-csv:PATH` or
/// `grid-csv:PATH`.
pub fn parse_weight(spec: &str, cfg: &ExponentConfig) -> Result<Weight> {
    let mut it = spec.splitn(2, ':');
    let head = it.next().unwrap_or("").trim();
    let rest = it.next();
    let args: Vec<&str> = rest.map(|r| r.split(':').collect()).unwrap_or_default();
    match head {
        "constant" | "one" if rest.is_none() => Ok(Weight::constant()),
        "counterexample" | "shell" if rest.is_none() => Ok(Weight::counterexample(cfg.n)),
        "power" => Ok(Weight::power(numbers(spec, &args, 1)?[0])),
        "piecewise" => {
            let x = numbers(spec, &args, 2)?;
            Ok(Weight::piecewise(x[0], x[1]))
        }
        "shifted" => Ok(Weight::shifted_power(numbers(spec, &args, 1)?[0])),
        "decay" => {
            let x = numbers(spec, &args, 2)?;
            Ok(decay_example_weight(cfg, x[0], x[1]))
        }
        "radial-csv" if rest.is_some() => load_radial_weight(rest.unwrap()),
        "grid-csv" if rest.is_some() => load_grid_weight(rest.unwrap()),
        _ => Err(Error::InvalidInput(format!("malformed weight spec '{spec}'"))),
    }
}

/// `gaussian`, `ball:R`, `hat:R` or `exp:RATE`.
pub fn parse_profile(spec: &str) -> Result<RadialProfile> {
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    let x = arg
        .map(|a| a.parse::<f64>().map_err(|_| Error::InvalidInput(format!("profile '{spec}': bad number"))))
        .transpose()?;
    let positive = |x: Option<f64>| match x {
        Some(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(Error::InvalidInput(format!("profile '{spec}' needs a positive parameter"))),
    };
    match head {
        "gaussian" if x.is_none() => Ok(RadialProfile::gaussian()),
        "ball" => Ok(RadialProfile::indicator(positive(x)?)),
        "hat" => Ok(RadialProfile::hat(positive(x)?)),
        "exp" => Ok(RadialProfile::exponential(positive(x)?)),
        _ => Err(Error::InvalidInput(format!("malformed profile spec '{spec}'"))),
    }
}
