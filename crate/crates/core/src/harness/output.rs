use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::config::Method;
use crate::error::{Error, Result};

pub const RESULTS_HEADER: &str =
    "method,sigma,epsilon_target,epsilon_achieved,K_total,acc_mean,acc_std,wall_ms,seed";

/// Outcome of one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub trial: u32,
    pub accuracy: f64,
    pub loss: f64,
}

/// One aggregated row of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub method: Method,
    pub sigma: Option<f64>,
    pub epsilon_target: f64,
    /// `(ε, δ)` guarantee at the row's noise and step counts.
    pub epsilon_achieved: Option<f64>,
    /// Learning-only guarantee, reported by the trade-off sweep.
    pub epsilon0: Option<f64>,
    /// Steps per request; `K_total` is the sum.
    pub k_schedule: Vec<u64>,
    /// Points removed per request.
    pub group: u32,
    pub acc_mean: Option<f64>,
    pub acc_std: Option<f64>,
    pub wall_ms: u64,
    pub seed: u64,
    pub trials: Vec<TrialRecord>,
    /// Why the row could not be computed.
    pub error: Option<String>,
}

impl TrialResult {
    pub fn new(method: Method, epsilon_target: f64, seed: u64) -> Self {
        Self {
            method,
            sigma: None,
            epsilon_target,
            epsilon_achieved: None,
            epsilon0: None,
            k_schedule: Vec::new(),
            group: 1,
            acc_mean: None,
            acc_std: None,
            wall_ms: 0,
            seed,
            trials: Vec::new(),
            error: None,
        }
    }

    pub fn k_total(&self) -> Option<u64> {
        (!self.k_schedule.is_empty()).then(|| self.k_schedule.iter().sum())
    }

    /// Fill mean and sample standard deviation from `trials`.
    pub fn set_trials(&mut self, trials: Vec<TrialRecord>) {
        let (mean, std) = mean_std(trials.iter().map(|t| t.accuracy));
        self.acc_mean = mean;
        self.acc_std = std;
        self.trials = trials;
    }
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(values: impl Iterator<Item = f64>) -> (Option<f64>, Option<f64>) {
    let v: Vec<f64> = values.collect();
    if v.is_empty() {
        return (None, None);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let std = if v.len() < 2 {
        0.0
    } else {
        (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    (Some(mean), Some(std))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_results<W: Write>(rows: &[TrialResult], writer: W) -> io::Result<()> {
    let mut w = BufWriter::new(writer);
    writeln!(w, "{RESULTS_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.method,
            opt(r.sigma),
            r.epsilon_target,
            opt(r.epsilon_achieved),
            opt(r.k_total()),
            opt(r.acc_mean),
            opt(r.acc_std),
            r.wall_ms,
            r.seed
        )?;
    }
    w.flush()
}

fn write_file(path: &Path, f: impl FnOnce(fs::File) -> io::Result<()>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f(file).map_err(|e| Error::io(path, e))
}

/// Results table as CSV with a fixed column order.
pub fn emit_results(rows: &[TrialResult], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::invalid("nothing to emit"));
    }
    write_file(path, |f| write_results(rows, f))
}

/// Raw per-trial outcomes: `method,row,trial,accuracy,loss`.
pub fn emit_trial_log(rows: &[TrialResult], path: &Path) -> Result<()> {
    write_file(path, |f| {
        let mut w = BufWriter::new(f);
        writeln!(w, "method,row,trial,accuracy,loss")?;
        for (i, r) in rows.iter().enumerate() {
            for t in &r.trials {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    r.method, i, t.trial, t.accuracy, t.loss
                )?;
            }
        }
        w.flush()
    })
}

/// One `(x, y, yerr)` point of a named plot series.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub series: String,
    pub x: f64,
    pub y: f64,
    pub yerr: f64,
}

pub fn emit_plot(points: &[PlotPoint], path: &Path) -> Result<()> {
    write_file(path, |f| {
        let mut w = BufWriter::new(f);
        writeln!(w, "series,x,y,yerr")?;
        for p in points {
            writeln!(w, "{},{},{},{}", p.series, p.x, p.y, p.yerr)?;
        }
        w.flush()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row_is_two_lines() {
        let mut r = TrialResult::new(Method::Langevin, 1.0, 7);
        r.sigma = Some(0.25);
        r.k_schedule = vec![2, 3];
        let mut buf = Vec::new();
        write_results(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            format!("{RESULTS_HEADER}\nlangevin,0.25,1,,5,,,0,7\n")
        );
    }

    #[test]
    fn sample_std() {
        let (m, s) = mean_std([1.0, 2.0, 3.0, 4.0].into_iter());
        assert_eq!(m, Some(2.5));
        assert!((s.unwrap() - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std([0.5].into_iter()), (Some(0.5), Some(0.0)));
        assert_eq!(mean_std(std::iter::empty()), (None, None));
    }
}
