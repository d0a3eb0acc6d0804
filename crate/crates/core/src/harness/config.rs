use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::presets::{Preset, TABLE_TARGETS};
use crate::error::{Error, Result};
use crate::pngd::{DEFAULT_INIT_MEAN, DEFAULT_RADIUS};
use crate::privacy::Regime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Langevin,
    D2dThm9,
    D2dThm28,
    Retrain,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Langevin => "langevin",
            Method::D2dThm9 => "d2d_thm9",
            Method::D2dThm28 => "d2d_thm28",
            Method::Retrain => "retrain",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Method::Langevin,
            Method::D2dThm9,
            Method::D2dThm28,
            Method::Retrain,
        ]
        .into_iter()
        .find(|m| m.name() == s)
        .ok_or_else(|| {
            Error::invalid(format!(
                "unknown method {s:?}; expected langevin, d2d_thm9, d2d_thm28 or retrain"
            ))
        })
    }
}

/// Gaussian clusters: class `k` is centred at `separation·noise·e_k` (binary:
/// `±separation·noise·e₀`) with isotropic noise, then rows are scaled to
/// unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub n: usize,
    pub dim: usize,
    pub classes: u32,
    pub separation: f64,
    pub noise: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n: 2000,
            dim: 20,
            classes: 2,
            separation: 3.0,
            noise: 1.0,
        }
    }
}

/// Everything an experiment needs. Built from defaults, then a config file,
/// then command-line flags, all through [`ExperimentConfig::set`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub regime: Regime,
    /// Fixed noise level for sequential runs; calibrated when absent.
    pub sigma: Option<f64>,
    /// Noise grid of the trade-off sweep.
    pub sigma_grid: Vec<f64>,
    pub eps_targets: Vec<f64>,
    /// Defaults to the preset's (or the dataset's `1/n`).
    pub delta: Option<f64>,
    /// Unlearning step budget `K̂` per request.
    pub k_budget: u64,
    pub k_max: u64,
    pub batch: u32,
    pub total_removals: u32,
    pub trials: u32,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub learn_iters: u64,
    pub radius: f64,
    pub init_mean: f64,
    pub renormalize: bool,
    pub reg: Option<f64>,
    pub data: Option<PathBuf>,
    pub test_data: Option<PathBuf>,
    pub synthetic: SyntheticSpec,
    pub test_n: usize,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub trial_log: Option<PathBuf>,
    /// Write measured wall-clock into results; off keeps output
    /// byte-reproducible.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            preset: Preset::Synthetic,
            regime: Regime::StronglyConvex,
            sigma: None,
            sigma_grid: vec![0.01, 0.02, 0.03, 0.05, 0.1, 0.2, 0.5, 1.0],
            eps_targets: TABLE_TARGETS.to_vec(),
            delta: None,
            k_budget: 1,
            k_max: crate::privacy::DEFAULT_K_MAX,
            batch: 1,
            total_removals: 1,
            trials: 100,
            seed: 0,
            methods: vec![Method::Langevin],
            learn_iters: 10_000,
            radius: DEFAULT_RADIUS,
            init_mean: DEFAULT_INIT_MEAN,
            renormalize: true,
            reg: None,
            data: None,
            test_data: None,
            synthetic: SyntheticSpec::default(),
            test_n: 1000,
            out: None,
            plot: None,
            trial_log: None,
            timing: false,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| Error::invalid(format!("{key} = {value:?}: {e}")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    let items: Vec<T> = value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse(key, s))
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::invalid(format!("{key} needs at least one value")));
    }
    Ok(items)
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        other => Err(Error::invalid(format!(
            "{key} = {other:?}: expected a boolean"
        ))),
    }
}

impl ExperimentConfig {
    /// Set one option by its flag name (without leading dashes).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "preset" => self.preset = parse(key, v)?,
            "regime" => self.regime = parse(key, v)?,
            "sigma" => self.sigma = Some(parse(key, v)?),
            "sigma-grid" => self.sigma_grid = parse_list(key, v)?,
            "eps" => self.eps_targets = parse_list(key, v)?,
            "delta" => self.delta = Some(parse(key, v)?),
            "k-budget" => self.k_budget = parse(key, v)?,
            "k-max" => self.k_max = parse(key, v)?,
            "batch" => self.batch = parse(key, v)?,
            "total-removals" => self.total_removals = parse(key, v)?,
            "trials" => self.trials = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "method" => self.methods = parse_list(key, v)?,
            "learn-iters" => self.learn_iters = parse(key, v)?,
            "radius" => self.radius = parse(key, v)?,
            "init-mean" => self.init_mean = parse(key, v)?,
            "renormalize" => self.renormalize = parse_bool(key, v)?,
            "reg" => self.reg = Some(parse(key, v)?),
            "data" => self.data = Some(PathBuf::from(v)),
            "test-data" => self.test_data = Some(PathBuf::from(v)),
            "synthetic-n" => self.synthetic.n = parse(key, v)?,
            "synthetic-d" => self.synthetic.dim = parse(key, v)?,
            "synthetic-classes" => self.synthetic.classes = parse(key, v)?,
            "separation" => self.synthetic.separation = parse(key, v)?,
            "cluster-noise" => self.synthetic.noise = parse(key, v)?,
            "test-n" => self.test_n = parse(key, v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            "plot" => self.plot = Some(PathBuf::from(v)),
            "trial-log" => self.trial_log = Some(PathBuf::from(v)),
            "timing" => self.timing = parse_bool(key, v)?,
            _ => return Err(Error::invalid(format!("unknown option {key:?}"))),
        }
        Ok(())
    }

    /// Apply `key = value` lines. `#` starts a comment; blank lines are
    /// ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected key = value, found {raw:?}"),
            })?;
            self.set(key.trim(), value).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_text(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if self.eps_targets.iter().any(|&e| !positive(e)) {
            return Err(Error::invalid("epsilon targets must be positive"));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::invalid("delta must lie in (0, 1)"));
            }
        }
        if self.sigma.is_some_and(|s| !positive(s)) || self.sigma_grid.iter().any(|&s| !positive(s))
        {
            return Err(Error::invalid("noise levels must be positive"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.batch == 0 || self.total_removals == 0 {
            return Err(Error::invalid(
                "batch and total removals must be at least 1",
            ));
        }
        if !positive(self.radius) {
            return Err(Error::invalid("radius must be positive"));
        }
        if self.methods.is_empty() {
            return Err(Error::invalid("need at least one method"));
        }
        if self.preset == Preset::Synthetic && self.data.is_none() {
            let s = &self.synthetic;
            if s.n == 0
                || s.dim == 0
                || s.classes < 2
                || (s.classes > 2 && s.classes as usize > s.dim)
            {
                return Err(Error::invalid(
                    "synthetic data needs n ≥ 1, d ≥ 1 and 2 ≤ c ≤ d",
                ));
            }
        }
        Ok(())
    }
}
