use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, Method};
use super::data::load_dataset;
use super::output::{PlotPoint, TrialRecord, TrialResult};
use super::presets::Preset;
use crate::d2d::{d2d_sigma_thm28, d2d_sigma_thm9, d2d_train, d2d_unlearn, D2DConfig, D2DState};
use crate::error::{Error, Result};
use crate::models::{
    apply_request, default_reg, evaluate, Dataset, LogisticObjective, MulticlassObjective,
    Objective, UnlearningRequest,
};
use crate::pngd::{train, unlearn, Init, InitSpec, ModelParams};
use crate::privacy::{
    binary_search_sigma, default_init_lsi, find_min_k, learn_epsilon0, rdp_to_dp, sequential_bound,
    sequential_k_schedule, split_batches, unlearn_epsilon, LearnIters, NoiseSchedule,
    ProblemConstants, Regime, SigmaSearch,
};
use crate::rng::{purpose, RngState};

/// Data, objective and constants shared by every trial of an experiment.
pub struct Context {
    pub objective: Box<dyn Objective>,
    pub train: Dataset,
    pub test: Dataset,
    pub pc: ProblemConstants,
    pub delta: f64,
}

fn default_reg_for(cfg: &ExperimentConfig, n: usize) -> f64 {
    match (cfg.reg, cfg.preset) {
        (Some(r), _) => r,
        (None, Preset::Synthetic) => default_reg(n),
        (None, p) => p.spec().reg,
    }
}

fn default_delta(cfg: &ExperimentConfig, n: usize) -> f64 {
    match (cfg.delta, cfg.preset) {
        (Some(d), _) => d,
        (None, Preset::Synthetic) => 1.0 / n as f64,
        (None, p) => p.spec().delta,
    }
}

/// Load data and build the objective for `cfg`.
pub fn prepare(cfg: &ExperimentConfig) -> Result<Context> {
    cfg.validate()?;
    let (train, test) = load_dataset(cfg)?;
    let n = train.len();
    let reg = default_reg_for(cfg, n);
    let objective: Box<dyn Objective> = if train.classes() == 2 {
        let mut o = LogisticObjective::new(train.dim(), reg);
        o.allow_unnormalized = !cfg.renormalize;
        Box::new(o)
    } else {
        let mut o = MulticlassObjective::new(train.dim(), train.classes() as usize, reg);
        o.allow_unnormalized = !cfg.renormalize;
        Box::new(o)
    };
    objective.check(&train)?;
    let pc = objective.constants(n, cfg.radius)?;
    Ok(Context {
        objective,
        pc,
        delta: default_delta(cfg, n),
        train,
        test,
    })
}

/// Constants for accountant-only commands: from the data when a file is
/// given, otherwise from the preset.
pub fn accountant_constants(cfg: &ExperimentConfig) -> Result<(ProblemConstants, f64)> {
    cfg.validate()?;
    if cfg.data.is_some() {
        let ctx = prepare(cfg)?;
        return Ok((ctx.pc, ctx.delta));
    }
    let (n, dim, classes) = match cfg.preset {
        Preset::Synthetic => (cfg.synthetic.n, cfg.synthetic.dim, cfg.synthetic.classes),
        p => {
            let s = p.spec();
            (s.n, s.dim, s.classes)
        }
    };
    let reg = default_reg_for(cfg, n);
    let pc = if classes == 2 {
        ProblemConstants::binary_logistic(n, dim, reg, cfg.radius)?
    } else {
        ProblemConstants::multiclass_logistic(n, dim, reg, cfg.radius)?
    };
    Ok((pc, default_delta(cfg, n)))
}

fn schedule(cfg: &ExperimentConfig, pc: &ProblemConstants, sigma: f64) -> NoiseSchedule {
    NoiseSchedule::new(
        1.0 / pc.smoothness,
        sigma,
        LearnIters::Finite(cfg.learn_iters),
        0,
    )
}

/// `(ε, δ)` guarantee after `k` steps for a group of `group` points.
pub fn certified_epsilon(
    pc: &ProblemConstants,
    ns: &NoiseSchedule,
    regime: Regime,
    group: u32,
    k: u64,
    delta: f64,
) -> Result<f64> {
    let c0 = default_init_lsi(pc, ns, regime);
    let e0 = learn_epsilon0(pc, ns, regime, group, ns.learn_iters, c0)?;
    Ok(rdp_to_dp(&unlearn_epsilon(&e0, pc, ns, regime, c0, k)?, delta)?.epsilon)
}

/// Calibrated Langevin setting for one target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub sigma: f64,
    pub k: u64,
    pub epsilon: f64,
}

/// Smallest noise meeting `target` within the step budget, and the least
/// step count at that noise.
pub fn calibrate_langevin(
    cfg: &ExperimentConfig,
    pc: &ProblemConstants,
    delta: f64,
    target: f64,
    group: u32,
) -> Result<Calibration> {
    let base = schedule(cfg, pc, 1.0);
    let sigma = binary_search_sigma(
        target,
        delta,
        cfg.k_budget,
        pc,
        &base,
        cfg.regime,
        group,
        SigmaSearch::default(),
    )?;
    let ns = base.with_sigma(sigma);
    let k = find_min_k(
        target,
        delta,
        pc,
        &ns,
        cfg.regime,
        group,
        cfg.k_budget.max(1),
    )?;
    let epsilon = certified_epsilon(pc, &ns, cfg.regime, group, k, delta)?;
    Ok(Calibration { sigma, k, epsilon })
}

fn d2d_row(
    cfg: &ExperimentConfig,
    method: Method,
    pc: &ProblemConstants,
    delta: f64,
    target: f64,
) -> Result<TrialResult> {
    let mut row = TrialResult::new(method, target, cfg.seed);
    match method {
        Method::D2dThm9 => {
            let sigma = d2d_sigma_thm9(
                target,
                delta,
                cfg.k_budget,
                pc.lipschitz,
                pc.strong_convexity,
                pc.n,
                pc.smoothness,
            )?;
            row.sigma = Some(sigma);
            row.k_schedule = vec![cfg.k_budget];
        }
        Method::D2dThm28 => {
            let cal = d2d_sigma_thm28(
                target,
                delta,
                pc.lipschitz,
                pc.strong_convexity,
                pc.n,
                pc.smoothness,
                pc.dim,
            )?;
            row.sigma = Some(cal.sigma);
            row.k_schedule = vec![cal.request_iterations(1)];
        }
        _ => unreachable!("not a D2D method"),
    }
    row.epsilon_achieved = Some(target);
    Ok(row)
}

fn failed(method: Method, target: f64, seed: u64, err: &Error) -> TrialResult {
    log::warn!("{method} at epsilon {target}: {err}");
    let mut row = TrialResult::new(method, target, seed);
    row.error = Some(err.to_string());
    row
}

/// Accountant-only calibration rows for every target and method.
pub fn calibrate_sigma(cfg: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    let (pc, delta) = accountant_constants(cfg)?;
    let mut rows = Vec::new();
    for &target in &cfg.eps_targets {
        for &method in &cfg.methods {
            let row = match method {
                Method::Langevin => calibrate_langevin(cfg, &pc, delta, target, 1).map(|c| {
                    let mut r = TrialResult::new(method, target, cfg.seed);
                    r.sigma = Some(c.sigma);
                    r.k_schedule = vec![c.k];
                    r.epsilon_achieved = Some(c.epsilon);
                    r
                }),
                Method::D2dThm9 | Method::D2dThm28 => d2d_row(cfg, method, &pc, delta, target),
                Method::Retrain => continue,
            };
            rows.push(row.unwrap_or_else(|e| failed(method, target, cfg.seed, &e)));
        }
    }
    Ok(rows)
}

/// Rows plus plot series of one experiment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub rows: Vec<TrialResult>,
    pub plot: Vec<PlotPoint>,
}

fn run_trials(
    cfg: &ExperimentConfig,
    f: impl Fn(u32) -> Result<TrialRecord> + Sync + Send,
) -> Result<Vec<TrialRecord>> {
    (0..cfg.trials).into_par_iter().map(&f).collect()
}

fn stream(cfg: &ExperimentConfig, trial: u32, p: u64) -> rand_chacha::ChaCha20Rng {
    RngState::for_trial(cfg.seed, trial as u64, p).rng()
}

fn record(ctx: &Context, trial: u32, w: &ModelParams) -> Result<TrialRecord> {
    let e = evaluate(ctx.objective.as_ref(), &w.weights, &ctx.test)?;
    Ok(TrialRecord {
        trial,
        accuracy: e.accuracy,
        loss: e.loss,
    })
}

fn init_spec(cfg: &ExperimentConfig, ctx: &Context, ns: &NoiseSchedule) -> Init {
    Init::Gaussian(InitSpec {
        mean: cfg.init_mean,
        variance: default_init_lsi(&ctx.pc, ns, cfg.regime),
    })
}

/// Removal plan of one trial: distinct rows split into requests, each with
/// its own replacement seed.
fn removal_plan(
    cfg: &ExperimentConfig,
    ctx: &Context,
    trial: u32,
    batches: &[u32],
) -> Result<Vec<UnlearningRequest>> {
    let total: usize = batches.iter().map(|&b| b as usize).sum();
    if total > ctx.train.len() {
        return Err(Error::invalid(format!(
            "cannot remove {total} of {} rows",
            ctx.train.len()
        )));
    }
    let mut rng = stream(cfg, trial, purpose::REQUEST);
    let order = rand::seq::index::sample(&mut rng, ctx.train.len(), total).into_vec();
    let mut start = 0;
    batches
        .iter()
        .map(|&b| {
            let req =
                UnlearningRequest::new(order[start..start + b as usize].iter().copied(), rng.gen());
            start += b as usize;
            req
        })
        .collect()
}

/// Dataset after each request of `plan`, in order.
fn updated_datasets(
    cfg: &ExperimentConfig,
    ctx: &Context,
    plan: &[UnlearningRequest],
) -> Result<Vec<Dataset>> {
    let mut out = Vec::with_capacity(plan.len());
    let mut current = ctx.train.clone();
    for req in plan {
        current = apply_request(&current, req, cfg.renormalize)?;
        out.push(current.clone());
    }
    Ok(out)
}

/// Train on the original data, then serve `batches` requests with the given
/// step counts.
fn langevin_trial(
    cfg: &ExperimentConfig,
    ctx: &Context,
    ns: &NoiseSchedule,
    batches: &[u32],
    ks: &[u64],
    trial: u32,
) -> Result<TrialRecord> {
    let obj = ctx.objective.as_ref();
    let mut w = train(
        &ctx.train,
        obj,
        ns,
        cfg.radius,
        &init_spec(cfg, ctx, ns),
        &mut stream(cfg, trial, purpose::LEARN),
    )?;
    let plan = removal_plan(cfg, ctx, trial, batches)?;
    let mut rng = stream(cfg, trial, purpose::UNLEARN);
    for (data, &k) in updated_datasets(cfg, ctx, &plan)?.iter().zip(ks) {
        w = unlearn(&w, data, obj, k, ns, cfg.radius, &mut rng)?;
    }
    record(ctx, trial, &w)
}

/// Train from scratch on the data after all of `batches`.
fn retrain_trial(
    cfg: &ExperimentConfig,
    ctx: &Context,
    ns: &NoiseSchedule,
    batches: &[u32],
    trial: u32,
) -> Result<TrialRecord> {
    let plan = removal_plan(cfg, ctx, trial, batches)?;
    let last = updated_datasets(cfg, ctx, &plan)?
        .pop()
        .unwrap_or_else(|| ctx.train.clone());
    let w = train(
        &last,
        ctx.objective.as_ref(),
        ns,
        cfg.radius,
        &init_spec(cfg, ctx, ns),
        &mut stream(cfg, trial, purpose::RETRAIN),
    )?;
    record(ctx, trial, &w)
}

/// Deterministic D2D training followed by one noisy request per entry of
/// `iters`, each removing one point.
fn d2d_trial(
    cfg: &ExperimentConfig,
    ctx: &Context,
    d2d: &D2DConfig,
    trained: &ModelParams,
    iters: &[u64],
    sigma: f64,
    trial: u32,
) -> Result<TrialRecord> {
    let plan = removal_plan(cfg, ctx, trial, &vec![1; iters.len()])?;
    let mut state = D2DState::trained(trained.clone(), d2d);
    let mut rng = stream(cfg, trial, purpose::UNLEARN);
    for (data, &i) in updated_datasets(cfg, ctx, &plan)?.iter().zip(iters) {
        state = d2d_unlearn(
            &state,
            data,
            ctx.objective.as_ref(),
            d2d,
            i,
            sigma,
            cfg.radius,
            &mut rng,
        )?;
    }
    record(ctx, trial, state.published())
}

fn d2d_trained(cfg: &ExperimentConfig, ctx: &Context, d2d: &D2DConfig) -> Result<ModelParams> {
    let init = ModelParams::zeros(ctx.objective.shape());
    d2d_train(
        &ctx.train,
        ctx.objective.as_ref(),
        d2d,
        cfg.learn_iters,
        cfg.radius,
        &init,
    )
}

fn finish(cfg: &ExperimentConfig, mut row: TrialResult, started: Instant) -> TrialResult {
    let ms = started.elapsed().as_millis() as u64;
    log::info!(
        "{} epsilon={} sigma={:?}: {ms} ms",
        row.method,
        row.epsilon_target,
        row.sigma
    );
    row.wall_ms = if cfg.timing { ms } else { 0 };
    row
}

fn accuracy_points(rows: &[TrialResult], x: impl Fn(&TrialResult) -> f64) -> Vec<PlotPoint> {
    rows.iter()
        .filter_map(|r| {
            Some(PlotPoint {
                series: format!("{}_accuracy", r.method),
                x: x(r),
                y: r.acc_mean?,
                yerr: r.acc_std?,
            })
        })
        .collect()
}

/// Single-point removal: calibrate per target, train, remove, fine-tune,
/// evaluate. Retraining uses the Langevin noise level of the same target.
pub fn run_unlearn_one(cfg: &ExperimentConfig) -> Result<Report> {
    let ctx = prepare(cfg)?;
    let mut rows = Vec::new();
    for &target in &cfg.eps_targets {
        for &method in &cfg.methods {
            let started = Instant::now();
            let row = unlearn_one_row(cfg, &ctx, method, target);
            let row = row.unwrap_or_else(|e| failed(method, target, cfg.seed, &e));
            rows.push(finish(cfg, row, started));
        }
    }
    let plot = accuracy_points(&rows, |r| r.epsilon_target);
    Ok(Report { rows, plot })
}

fn unlearn_one_row(
    cfg: &ExperimentConfig,
    ctx: &Context,
    method: Method,
    target: f64,
) -> Result<TrialResult> {
    let mut row = TrialResult::new(method, target, cfg.seed);
    match method {
        Method::Langevin | Method::Retrain => {
            let cal = calibrate_langevin(cfg, &ctx.pc, ctx.delta, target, 1)?;
            let ns = schedule(cfg, &ctx.pc, cal.sigma);
            row.sigma = Some(cal.sigma);
            let trials = if method == Method::Langevin {
                row.k_schedule = vec![cal.k];
                row.epsilon_achieved = Some(cal.epsilon);
                run_trials(cfg, |t| langevin_trial(cfg, ctx, &ns, &[1], &[cal.k], t))?
            } else {
                row.epsilon_achieved = Some(0.0);
                run_trials(cfg, |t| retrain_trial(cfg, ctx, &ns, &[1], t))?
            };
            row.set_trials(trials);
        }
        Method::D2dThm9 | Method::D2dThm28 => {
            row = d2d_row(cfg, method, &ctx.pc, ctx.delta, target)?;
            let d2d =
                D2DConfig::for_constants(&ctx.pc, row.k_schedule[0], method == Method::D2dThm9)?;
            let trained = d2d_trained(cfg, ctx, &d2d)?;
            let sigma = row.sigma.unwrap_or_default();
            let iters = row.k_schedule.clone();
            row.set_trials(run_trials(cfg, |t| {
                d2d_trial(cfg, ctx, &d2d, &trained, &iters, sigma, t)
            })?);
        }
    }
    Ok(row)
}

/// A stream of `total_removals` removals in requests of `batch` points
/// (one point per request for D2D), reporting cumulative steps.
pub fn run_sequential(cfg: &ExperimentConfig) -> Result<Report> {
    let ctx = prepare(cfg)?;
    let batches = split_batches(cfg.total_removals, cfg.batch)?;
    let mut report = Report::default();
    for &target in &cfg.eps_targets {
        for &method in &cfg.methods {
            let started = Instant::now();
            let row = sequential_row(cfg, &ctx, &batches, method, target);
            let row = row.unwrap_or_else(|e| failed(method, target, cfg.seed, &e));
            let sizes: Vec<u32> = if method == Method::Langevin {
                batches.clone()
            } else {
                vec![1; row.k_schedule.len()]
            };
            let mut removed = 0u32;
            let mut total = 0u64;
            for (k, b) in row.k_schedule.iter().zip(sizes) {
                removed += b;
                total += k;
                report.plot.push(PlotPoint {
                    series: format!("{}_eps{}_b{}_cumulative_K", method, target, cfg.batch),
                    x: removed as f64,
                    y: total as f64,
                    yerr: 0.0,
                });
            }
            report.rows.push(finish(cfg, row, started));
        }
    }
    report
        .plot
        .extend(accuracy_points(&report.rows, |r| r.epsilon_target));
    Ok(report)
}

fn sequential_row(
    cfg: &ExperimentConfig,
    ctx: &Context,
    batches: &[u32],
    method: Method,
    target: f64,
) -> Result<TrialResult> {
    let mut row = TrialResult::new(method, target, cfg.seed);
    match method {
        Method::Langevin | Method::Retrain => {
            let sigma = cfg
                .sigma
                .ok_or_else(|| Error::invalid("sequential runs need a fixed sigma"))?;
            let ns = schedule(cfg, &ctx.pc, sigma);
            row.sigma = Some(sigma);
            let trials = if method == Method::Langevin {
                let ks = sequential_k_schedule(
                    target,
                    ctx.delta,
                    &ns,
                    cfg.total_removals,
                    cfg.batch,
                    &ctx.pc,
                    cfg.regime,
                    cfg.k_max,
                )?;
                let bound = sequential_bound(&ns, batches, &ks, &ctx.pc, cfg.regime)?;
                row.epsilon_achieved = Some(rdp_to_dp(&bound, ctx.delta)?.epsilon);
                row.k_schedule = ks.clone();
                row.group = cfg.batch;
                run_trials(cfg, |t| langevin_trial(cfg, ctx, &ns, batches, &ks, t))?
            } else {
                row.epsilon_achieved = Some(0.0);
                run_trials(cfg, |t| retrain_trial(cfg, ctx, &ns, batches, t))?
            };
            row.set_trials(trials);
        }
        Method::D2dThm9 | Method::D2dThm28 => {
            let pc = &ctx.pc;
            let requests = cfg.total_removals as u64;
            let (sigma, iters) = if method == Method::D2dThm9 {
                let s = d2d_sigma_thm9(
                    target,
                    ctx.delta,
                    cfg.k_budget,
                    pc.lipschitz,
                    pc.strong_convexity,
                    pc.n,
                    pc.smoothness,
                )?;
                (s, vec![cfg.k_budget; requests as usize])
            } else {
                let cal = d2d_sigma_thm28(
                    target,
                    ctx.delta,
                    pc.lipschitz,
                    pc.strong_convexity,
                    pc.n,
                    pc.smoothness,
                    pc.dim,
                )?;
                (
                    cal.sigma,
                    (1..=requests).map(|i| cal.request_iterations(i)).collect(),
                )
            };
            row.sigma = Some(sigma);
            row.epsilon_achieved = Some(target);
            row.k_schedule = iters.clone();
            let d2d = D2DConfig::for_constants(pc, iters[0], method == Method::D2dThm9)?;
            let trained = d2d_trained(cfg, ctx, &d2d)?;
            row.set_trials(run_trials(cfg, |t| {
                d2d_trial(cfg, ctx, &d2d, &trained, &iters, sigma, t)
            })?);
        }
    }
    Ok(row)
}

/// Noise sweep: for each σ in the grid and each target, the learning-only
/// guarantee, the least step count after removing `total_removals` points
/// at once, and the accuracy after those steps.
pub fn run_tradeoff_sweep(cfg: &ExperimentConfig) -> Result<Report> {
    if cfg.sigma_grid.is_empty() {
        return Err(Error::invalid("sigma grid is empty"));
    }
    let ctx = prepare(cfg)?;
    let group = cfg.total_removals;
    let mut report = Report::default();
    for &target in &cfg.eps_targets {
        for &sigma in &cfg.sigma_grid {
            let started = Instant::now();
            let row = sweep_row(cfg, &ctx, sigma, target, group).unwrap_or_else(|e| {
                let mut r = failed(Method::Langevin, target, cfg.seed, &e);
                r.sigma = Some(sigma);
                r
            });
            if let Some(e0) = row.epsilon0 {
                report.plot.push(PlotPoint {
                    series: format!("eps{target}_epsilon0"),
                    x: sigma,
                    y: e0,
                    yerr: 0.0,
                });
            }
            if let Some(k) = row.k_total() {
                report.plot.push(PlotPoint {
                    series: format!("eps{target}_K"),
                    x: sigma,
                    y: k as f64,
                    yerr: 0.0,
                });
            }
            if let (Some(m), Some(s)) = (row.acc_mean, row.acc_std) {
                report.plot.push(PlotPoint {
                    series: format!("eps{target}_accuracy"),
                    x: sigma,
                    y: m,
                    yerr: s,
                });
            }
            report.rows.push(finish(cfg, row, started));
        }
    }
    Ok(report)
}

fn sweep_row(
    cfg: &ExperimentConfig,
    ctx: &Context,
    sigma: f64,
    target: f64,
    group: u32,
) -> Result<TrialResult> {
    let ns = schedule(cfg, &ctx.pc, sigma);
    let mut row = TrialResult::new(Method::Langevin, target, cfg.seed);
    row.sigma = Some(sigma);
    row.group = group;
    let c0 = default_init_lsi(&ctx.pc, &ns, cfg.regime);
    let e0 = learn_epsilon0(&ctx.pc, &ns, cfg.regime, group, ns.learn_iters, c0)?;
    row.epsilon0 = Some(rdp_to_dp(&e0, ctx.delta)?.epsilon);
    let k = find_min_k(
        target, ctx.delta, &ctx.pc, &ns, cfg.regime, group, cfg.k_max,
    )?;
    row.k_schedule = vec![k];
    row.epsilon_achieved = Some(certified_epsilon(
        &ctx.pc, &ns, cfg.regime, group, k, ctx.delta,
    )?);
    row.set_trials(run_trials(cfg, |t| {
        langevin_trial(cfg, ctx, &ns, &[group], &[k], t)
    })?);
    Ok(row)
}

/// Accuracy of freshly trained models at `cfg.sigma`, with the learning-only
/// guarantee for a single point.
pub fn run_evaluate(cfg: &ExperimentConfig) -> Result<Report> {
    let ctx = prepare(cfg)?;
    let sigma = cfg
        .sigma
        .ok_or_else(|| Error::invalid("evaluate needs sigma"))?;
    let ns = schedule(cfg, &ctx.pc, sigma);
    let started = Instant::now();
    let mut row = TrialResult::new(Method::Langevin, cfg.eps_targets[0], cfg.seed);
    row.sigma = Some(sigma);
    row.k_schedule = vec![0];
    row.epsilon_achieved = Some(certified_epsilon(
        &ctx.pc, &ns, cfg.regime, 1, 0, ctx.delta,
    )?);
    let init = init_spec(cfg, &ctx, &ns);
    row.set_trials(run_trials(cfg, |t| {
        let w = train(
            &ctx.train,
            ctx.objective.as_ref(),
            &ns,
            cfg.radius,
            &init,
            &mut stream(cfg, t, purpose::LEARN),
        )?;
        record(&ctx, t, &w)
    })?);
    let rows = vec![finish(cfg, row, started)];
    Ok(Report {
        plot: accuracy_points(&rows, |r| r.sigma.unwrap_or_default()),
        rows,
    })
}

/// Diagnostic comparison of the internal-state D2D noise formula with the
/// published reference table of `preset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct D2dTableEntry {
    pub iters: u64,
    pub epsilon: f64,
    pub reference: f64,
    pub computed: f64,
}

impl D2dTableEntry {
    pub fn relative_difference(&self) -> f64 {
        self.computed / self.reference - 1.0
    }
}

pub fn d2d_table_report(preset: Preset, radius: f64) -> Result<Vec<D2dTableEntry>> {
    let Some(table) = super::presets::reference_d2d_table(preset) else {
        return Ok(Vec::new());
    };
    let pc = preset.constants(radius)?;
    let delta = preset.spec().delta;
    let mut out = Vec::new();
    for (iters, values) in table {
        for (&epsilon, &reference) in super::presets::TABLE_TARGETS.iter().zip(&values) {
            let computed = d2d_sigma_thm9(
                epsilon,
                delta,
                iters,
                pc.lipschitz,
                pc.strong_convexity,
                pc.n,
                pc.smoothness,
            )?;
            out.push(D2dTableEntry {
                iters,
                epsilon,
                reference,
                computed,
            });
        }
    }
    Ok(out)
}
