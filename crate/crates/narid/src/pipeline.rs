//! End-to-end identification pipeline and synthetic data generation.
//!
//! [`run_pipeline`] executes the full workflow behind the `narid` binary:
//! load → split → autocovariance → decimate → candidates → ERR → AIC →
//! fit → predict → residuals → RMSE → interval analysis → neural
//! comparison → reports. Artifacts are written to the output directory:
//! `report.json` (machine-parseable, schema-versioned, deterministic for
//! a fixed config and seed), per-horizon prediction-band CSVs, residual
//! curves, the ERR/AIC table, the neural sweep table and `timing.txt`
//! (the only non-deterministic artifact). Every interval quantity in the
//! report is checked to contain its point counterpart before writing.

use crate::error::{Error, Result};
use crate::estimation::{
    aic_select, err_rank, interval_ls_estimate, ls_estimate, SelectionOptions,
};
use crate::interval::Interval;
use crate::neural::{sweep_hidden, Sweep};
use crate::signal::{decimation_factor, Signal};
use crate::terms::{generate_candidates, IntervalRegressors, Regressors, Term};
use crate::validation::{
    predict_k_steps, predict_k_steps_interval, residual_diagnostics, residuals, rmse,
    rmse_interval, Horizon,
};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Specification of a synthetic NAR system: terms with coefficients,
/// equation-noise level, length and seed.
#[derive(Clone, Debug)]
pub struct SyntheticSpec {
    pub terms: Vec<(Term, f64)>,
    pub noise_sigma: f64,
    pub n: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    /// Benchmark system used across tests and examples: a resonant linear
    /// pair with modulus pinned by the y(k−2) coefficient, a constant
    /// offset, and a weak cubic that bounds large excursions and broadens
    /// the spectrum. Identifiable from the degree-4, lag-4 candidate set
    /// at roughly 17 dB signal-to-noise ratio.
    pub fn demo(n: usize, seed: u64) -> Self {
        SyntheticSpec {
            terms: vec![
                (Term::constant(), 25.0),
                (Term::from_lags(&[1]).unwrap(), 1.6786),
                (Term::from_lags(&[2]).unwrap(), -0.975),
                (Term::from_lags(&[1, 1, 1]).unwrap(), -1.0e-5),
            ],
            noise_sigma: 10.0,
            n,
            seed,
        }
    }
}

const SIM_BURN_IN: usize = 500;
const SIM_GUARD: f64 = 1e9;

/// Simulate the NAR recursion with seeded Gaussian equation noise. The
/// first 500 burn-in samples are discarded; divergence past the guard
/// is an error.
pub fn simulate(spec: &SyntheticSpec) -> Result<Signal> {
    if spec.noise_sigma < 0.0 || !spec.noise_sigma.is_finite() {
        return Err(Error::Config(format!(
            "invalid noise sigma {}",
            spec.noise_sigma
        )));
    }
    if spec.n < 2 {
        return Err(Error::TooFewSamples {
            got: spec.n,
            need: 2,
        });
    }
    let ny = spec
        .terms
        .iter()
        .map(|(t, _)| t.max_lag() as usize)
        .max()
        .unwrap_or(0)
        .max(1);
    let mut rng = StdRng::seed_from_u64(spec.seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let total = spec.n + SIM_BURN_IN + ny;
    let mut y = vec![0.0f64; total];
    for k in ny..total {
        let mut v = 0.0;
        for (t, c) in &spec.terms {
            v += c * t.evaluate(&y, k);
        }
        v += spec.noise_sigma * normal.sample(&mut rng);
        if !v.is_finite() || v.abs() > SIM_GUARD {
            return Err(Error::SimulationDiverged(k - ny));
        }
        y[k] = v;
    }
    Signal::new(y[total - spec.n..].to_vec())
}

/// Ground-truth sidecar written next to a generated signal.
#[derive(Serialize)]
struct TruthFile<'a> {
    terms: Vec<String>,
    lags: Vec<&'a [u32]>,
    theta: Vec<f64>,
    noise_sigma: f64,
    n: usize,
    seed: u64,
}

/// Simulate and write the signal CSV plus a ground-truth JSON sidecar.
/// Byte-identical outputs for identical specs.
pub fn generate_synthetic(spec: &SyntheticSpec, csv: &Path, truth: &Path) -> Result<Signal> {
    let y = simulate(spec)?;
    y.write_csv(csv)?;
    let truth_data = TruthFile {
        terms: spec.terms.iter().map(|(t, _)| t.to_string()).collect(),
        lags: spec.terms.iter().map(|(t, _)| t.lags()).collect(),
        theta: spec.terms.iter().map(|(_, c)| *c).collect(),
        noise_sigma: spec.noise_sigma,
        n: spec.n,
        seed: spec.seed,
    };
    let mut f = std::fs::File::create(truth)?;
    f.write_all(
        serde_json::to_string_pretty(&truth_data)
            .unwrap()
            .as_bytes(),
    )?;
    f.write_all(b"\n")?;
    Ok(y)
}

/// Pipeline configuration; every field is mirrored by a CLI flag.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub decimal_separator: char,
    pub split_fraction: f64,
    /// Polynomial degree l of the candidate set.
    pub degree: usize,
    /// Maximum output lag ny of the candidate set.
    pub max_lag: usize,
    /// Autocovariance lag range; default min(500, N/2 − 1).
    pub tau_max: Option<usize>,
    /// Prediction horizon k (1-step predictions are always reported too).
    pub horizon: usize,
    /// Interval radius in signal units (instrument sensitivity).
    pub radius: f64,
    pub neural: bool,
    pub delays: usize,
    pub hidden_range: (usize, usize),
    pub neural_max_epochs: usize,
    pub seed: u64,
    pub aic_max_terms: usize,
    pub output_dir: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input: PathBuf::new(),
            decimal_separator: '.',
            split_fraction: 0.5,
            degree: 4,
            max_lag: 4,
            tau_max: None,
            horizon: 2,
            radius: 1e-6,
            neural: true,
            delays: 5,
            hidden_range: (10, 30),
            neural_max_epochs: 200,
            seed: 0,
            aic_max_terms: 30,
            output_dir: PathBuf::from("narid-out"),
        }
    }
}

impl PipelineConfig {
    fn validate(&self) -> Result<()> {
        if self.radius < 0.0 {
            return Err(Error::Config(format!("radius {} < 0", self.radius)));
        }
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return Err(Error::BadSplitFraction(self.split_fraction));
        }
        if self.degree < 1 || self.max_lag < 1 || self.horizon < 1 {
            return Err(Error::Config(
                "degree, max-lag and horizon must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Parse a key=value configuration file; unknown keys are rejected.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "{}:{}: expected key=value",
                    path.display(),
                    idx + 1
                ))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: String| Error::Config(format!("{}:{}: {e}", path.display(), idx + 1));
            match key {
                "input" => self.input = PathBuf::from(value),
                "decimal-separator" => {
                    let mut chars = value.chars();
                    self.decimal_separator = chars
                        .next()
                        .filter(|_| chars.next().is_none())
                        .ok_or_else(|| bad("single character expected".into()))?;
                }
                "split" => self.split_fraction = value.parse().map_err(|e| bad(format!("{e}")))?,
                "degree" => self.degree = value.parse().map_err(|e| bad(format!("{e}")))?,
                "max-lag" => self.max_lag = value.parse().map_err(|e| bad(format!("{e}")))?,
                "tau-max" => self.tau_max = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "horizon" => self.horizon = value.parse().map_err(|e| bad(format!("{e}")))?,
                "radius" => self.radius = value.parse().map_err(|e| bad(format!("{e}")))?,
                "neural" => self.neural = value.parse().map_err(|e| bad(format!("{e}")))?,
                "delays" => self.delays = value.parse().map_err(|e| bad(format!("{e}")))?,
                "hidden-min" => {
                    self.hidden_range.0 = value.parse().map_err(|e| bad(format!("{e}")))?
                }
                "hidden-max" => {
                    self.hidden_range.1 = value.parse().map_err(|e| bad(format!("{e}")))?
                }
                "neural-max-epochs" => {
                    self.neural_max_epochs = value.parse().map_err(|e| bad(format!("{e}")))?
                }
                "seed" => self.seed = value.parse().map_err(|e| bad(format!("{e}")))?,
                "aic-max-terms" => {
                    self.aic_max_terms = value.parse().map_err(|e| bad(format!("{e}")))?
                }
                "output" => self.output_dir = PathBuf::from(value),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(())
    }
}

/// Serialized interval: [lower, upper].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Bounds(pub f64, pub f64);

impl From<&Interval> for Bounds {
    fn from(v: &Interval) -> Self {
        Bounds(v.lo(), v.hi())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecimationSummary {
    pub tau_max: usize,
    pub first_minimum_linear: usize,
    pub first_minimum_nonlinear: usize,
    pub linear_fallback: bool,
    pub nonlinear_fallback: bool,
    /// Working lag: the smaller of the two first minima.
    pub tau_m: usize,
    pub step: usize,
    pub identification_len: usize,
    pub validation_len: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrRow {
    pub rank: usize,
    pub term: String,
    pub err: f64,
    pub cumulative_err: f64,
    pub selection_stat: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelSummary {
    pub selected_size: usize,
    pub terms: Vec<String>,
    pub theta: Vec<f64>,
    pub theta_interval: Vec<Bounds>,
    pub aic_trace: Vec<f64>,
    pub aic_trace_extended: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HorizonRmse {
    pub horizon: usize,
    pub rmse: f64,
    pub rmse_interval: Bounds,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualSummary {
    pub band: f64,
    pub inside_fraction_autocorr: f64,
    pub inside_fraction_cross_squared: f64,
    pub inside_fraction_squared_autocorr: f64,
    pub short_series: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NeuralSummary {
    pub delays: usize,
    pub best_hidden: usize,
    pub validation_mse: f64,
    pub rmse_one_step: f64,
    pub sweep: Vec<NeuralSweepRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NeuralSweepRow {
    pub hidden: usize,
    pub val_mse: f64,
    pub test_mse: f64,
    pub epochs: usize,
    pub stop: String,
}

/// Full machine-parseable run report (schema-versioned). Everything in
/// here is deterministic for a fixed config and seed; wall-clock timing
/// goes to `timing.txt` instead.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub status: String,
    pub stages: Vec<String>,
    pub input: String,
    pub seed: u64,
    pub radius: f64,
    pub decimation: DecimationSummary,
    pub err_table: Vec<ErrRow>,
    pub skipped_terms: Vec<String>,
    pub model: ModelSummary,
    pub rmse: Vec<HorizonRmse>,
    pub residuals: ResidualSummary,
    pub neural: Option<NeuralSummary>,
}

const STAGES: [&str; 14] = [
    "load",
    "split",
    "autocovariance",
    "decimate",
    "candidates",
    "err",
    "aic",
    "fit",
    "predict",
    "residuals",
    "rmse",
    "interval",
    "neural",
    "reports",
];

struct StageClock {
    names: Vec<&'static str>,
    elapsed: Vec<f64>,
    current: Instant,
}

impl StageClock {
    fn new() -> Self {
        StageClock {
            names: Vec::new(),
            elapsed: Vec::new(),
            current: Instant::now(),
        }
    }

    fn finish(&mut self, name: &'static str) {
        self.names.push(name);
        self.elapsed.push(self.current.elapsed().as_secs_f64());
        self.current = Instant::now();
    }
}

/// Run the full identification pipeline and write all artifacts.
///
/// On a stage error the partial artifacts already written stay in place
/// and a `FAILED.txt` marker names the stage; the error itself is also
/// tagged with the stage name.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunReport> {
    std::fs::create_dir_all(&cfg.output_dir)?;
    match run_pipeline_inner(cfg) {
        Ok(report) => Ok(report),
        Err(e) => {
            let marker = cfg.output_dir.join("FAILED.txt");
            let _ = std::fs::write(
                &marker,
                format!(
                    "FAILED at stage {}: {e}\n",
                    e.stage().unwrap_or("<unknown>")
                ),
            );
            Err(e)
        }
    }
}

fn run_pipeline_inner(cfg: &PipelineConfig) -> Result<RunReport> {
    cfg.validate().map_err(|e| e.at_stage("load"))?;
    let mut clock = StageClock::new();

    // 1. load
    let y = Signal::read_csv(&cfg.input, cfg.decimal_separator).map_err(|e| e.at_stage("load"))?;
    clock.finish("load");

    // 2. split (identification prefix, validation remainder); both parts
    // must support regressor construction and k-step prediction
    let min_part = cfg.max_lag + cfg.horizon + 1;
    let (id_raw, val_raw) = y
        .split(cfg.split_fraction, min_part)
        .map_err(|e| e.at_stage("split"))?;
    clock.finish("split");

    // 3. autocovariance of the identification series
    let tau_max = cfg
        .tau_max
        .unwrap_or_else(|| 500.min(id_raw.len() / 2).max(3).min(id_raw.len() - 1));
    let lin = id_raw
        .autocovariance(tau_max)
        .map_err(|e| e.at_stage("autocovariance"))?;
    let nonlin = id_raw
        .squared_autocovariance(tau_max)
        .map_err(|e| e.at_stage("autocovariance"))?;
    let m_lin = lin.first_minimum();
    let m_nonlin = nonlin.first_minimum();
    // the smaller first minimum is the conservative working lag
    let tau_m = m_lin.lag.min(m_nonlin.lag);
    clock.finish("autocovariance");

    // 4. decimate both parts with the same step
    let step = decimation_factor(tau_m);
    let id = id_raw.decimate(step).map_err(|e| e.at_stage("decimate"))?;
    let val = val_raw.decimate(step).map_err(|e| e.at_stage("decimate"))?;
    if id.len() < 200 || val.len() < 200 {
        eprintln!(
            "warning: {} identification / {} validation samples after decimation (fewer than 200)",
            id.len(),
            val.len()
        );
    }
    let decimation = DecimationSummary {
        tau_max,
        first_minimum_linear: m_lin.lag,
        first_minimum_nonlinear: m_nonlin.lag,
        linear_fallback: m_lin.fallback,
        nonlinear_fallback: m_nonlin.fallback,
        tau_m,
        step,
        identification_len: id.len(),
        validation_len: val.len(),
    };
    clock.finish("decimate");

    // 5. candidate terms
    let candidates = generate_candidates(cfg.degree, cfg.max_lag);
    let reg =
        Regressors::build(&candidates, &id, cfg.max_lag).map_err(|e| e.at_stage("candidates"))?;
    clock.finish("candidates");

    // 6. ERR ranking
    let ranking = err_rank(&reg).map_err(|e| e.at_stage("err"))?;
    clock.finish("err");

    // 7. AIC structure selection
    let options = SelectionOptions {
        max_terms: cfg.aic_max_terms,
        ..SelectionOptions::default()
    };
    let mut model = aic_select(&ranking, &reg, options).map_err(|e| e.at_stage("aic"))?;
    clock.finish("aic");

    // 8. final point fit (already embedded in the selected model)
    let sel_indices: Vec<usize> = model
        .terms
        .iter()
        .map(|t| candidates.iter().position(|c| c == t).unwrap())
        .collect();
    let sel_reg = reg.subset(&sel_indices);
    model.theta = ls_estimate(&sel_reg).map_err(|e| e.at_stage("fit"))?;
    clock.finish("fit");

    // 9. point predictions at 1 step and the configured horizon
    let mut horizons = vec![1usize];
    if cfg.horizon != 1 {
        horizons.push(cfg.horizon);
    }
    let mut point_preds = Vec::new();
    for &k in &horizons {
        point_preds.push(predict_k_steps(&model, &val, k).map_err(|e| e.at_stage("predict"))?);
    }
    clock.finish("predict");

    // 10. residual analysis on the identification fit
    let xi = residuals(&model, &reg).map_err(|e| e.at_stage("residuals"))?;
    let res_tau = 25.min(xi.len().saturating_sub(2));
    let diag = residual_diagnostics(&xi, res_tau).map_err(|e| e.at_stage("residuals"))?;
    clock.finish("residuals");

    // 11. point RMSE per horizon
    let mean_id = id.mean();
    let mut point_rmse = Vec::new();
    for pred in &point_preds {
        point_rmse.push(rmse(pred, &val, mean_id).map_err(|e| e.at_stage("rmse"))?);
    }
    clock.finish("rmse");

    // 12. interval analysis: midrad data, interval parameters, interval
    //     predictions and interval RMSE
    let id_int = id
        .to_intervals(cfg.radius)
        .map_err(|e| e.at_stage("interval"))?;
    let val_int = val
        .to_intervals(cfg.radius)
        .map_err(|e| e.at_stage("interval"))?;
    let sel_terms = model.terms.clone();
    let ireg = IntervalRegressors::build(&sel_terms, &id_int, cfg.max_lag)
        .map_err(|e| e.at_stage("interval"))?;
    let theta_int = interval_ls_estimate(&ireg).map_err(|e| e.at_stage("interval"))?;
    model.theta_interval = Some(theta_int.clone());
    let mean_id_int = id_int.mean().map_err(|e| e.at_stage("interval"))?;
    let mut interval_rmse = Vec::new();
    for &k in &horizons {
        let ipred =
            predict_k_steps_interval(&model, &val_int, k).map_err(|e| e.at_stage("interval"))?;
        interval_rmse.push(
            rmse_interval(&ipred, &val_int, &mean_id_int).map_err(|e| e.at_stage("interval"))?,
        );
    }
    clock.finish("interval");

    // 13. neural comparison on the identification series
    let neural = if cfg.neural {
        let sweep = sweep_hidden(
            &id,
            cfg.delays,
            cfg.hidden_range,
            cfg.seed,
            cfg.neural_max_epochs,
        )
        .map_err(|e| e.at_stage("neural"))?;
        let pred = sweep
            .best
            .predict(&val, Horizon::Steps(1))
            .map_err(|e| e.at_stage("neural"))?;
        let nn_rmse = rmse(&pred, &val, mean_id).map_err(|e| e.at_stage("neural"))?;
        Some((sweep, nn_rmse))
    } else {
        None
    };
    clock.finish("neural");

    // 14. reports
    let report = build_report(
        cfg,
        decimation,
        &ranking,
        &model,
        &theta_int,
        &horizons,
        &point_rmse,
        &interval_rmse,
        &diag,
        neural.as_ref(),
    )
    .map_err(|e| e.at_stage("reports"))?;
    write_artifacts(
        cfg,
        &report,
        &model,
        &point_preds,
        &val,
        &val_int,
        &diag,
        res_tau,
        neural.as_ref().map(|(s, _)| s),
    )
    .map_err(|e| e.at_stage("reports"))?;
    clock.finish("reports");

    let mut timing = String::new();
    for (name, secs) in clock.names.iter().zip(&clock.elapsed) {
        timing.push_str(&format!("{name} {secs:.6}\n"));
    }
    std::fs::write(cfg.output_dir.join("timing.txt"), timing)?;

    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn build_report(
    cfg: &PipelineConfig,
    decimation: DecimationSummary,
    ranking: &crate::estimation::ErrRanking,
    model: &crate::estimation::Model,
    theta_int: &[Interval],
    horizons: &[usize],
    point_rmse: &[f64],
    interval_rmse: &[Interval],
    diag: &crate::validation::ResidualDiagnostics,
    neural: Option<&(Sweep, f64)>,
) -> Result<RunReport> {
    // Containment invariant: every reported interval quantity must
    // contain its point counterpart.
    for (i, (p, iv)) in model.theta.iter().zip(theta_int).enumerate() {
        if !iv.contains(*p) {
            return Err(Error::ReportInvariant(format!(
                "theta[{i}] = {p} outside its interval {iv}"
            )));
        }
    }
    for ((k, p), iv) in horizons.iter().zip(point_rmse).zip(interval_rmse) {
        if !iv.contains(*p) {
            return Err(Error::ReportInvariant(format!(
                "{k}-step RMSE {p} outside its interval {iv}"
            )));
        }
    }

    let cumulative = ranking.cumulative_err();
    let err_table: Vec<ErrRow> = ranking
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| ErrRow {
            rank: i + 1,
            term: e.term.to_string(),
            err: e.err,
            cumulative_err: cumulative[i],
            selection_stat: e.selection_stat,
        })
        .collect();

    Ok(RunReport {
        schema_version: 1,
        status: "ok".into(),
        stages: STAGES.iter().map(|s| s.to_string()).collect(),
        input: cfg.input.display().to_string(),
        seed: cfg.seed,
        radius: cfg.radius,
        decimation,
        err_table,
        skipped_terms: ranking.skipped.iter().map(|t| t.to_string()).collect(),
        model: ModelSummary {
            selected_size: model.selected_size,
            terms: model.terms.iter().map(|t| t.to_string()).collect(),
            theta: model.theta.clone(),
            theta_interval: theta_int.iter().map(Bounds::from).collect(),
            aic_trace: model.aic_trace.clone(),
            aic_trace_extended: model.aic_trace_extended.clone(),
        },
        rmse: horizons
            .iter()
            .zip(point_rmse)
            .zip(interval_rmse)
            .map(|((&k, &p), iv)| HorizonRmse {
                horizon: k,
                rmse: p,
                rmse_interval: Bounds::from(iv),
            })
            .collect(),
        residuals: ResidualSummary {
            band: diag.band,
            inside_fraction_autocorr: diag.inside_fraction[0],
            inside_fraction_cross_squared: diag.inside_fraction[1],
            inside_fraction_squared_autocorr: diag.inside_fraction[2],
            short_series: diag.short_series,
        },
        neural: neural.map(|(sweep, nn_rmse)| NeuralSummary {
            delays: sweep.best.delays,
            best_hidden: sweep.best_hidden,
            validation_mse: sweep.best_report.val_mse[sweep.best_report.best_epoch],
            rmse_one_step: *nn_rmse,
            sweep: sweep
                .rows
                .iter()
                .map(|r| NeuralSweepRow {
                    hidden: r.hidden,
                    val_mse: r.val_mse,
                    test_mse: r.test_mse,
                    epochs: r.epochs,
                    stop: r.stop.to_string(),
                })
                .collect(),
        }),
    })
}

#[allow(clippy::too_many_arguments)]
fn write_artifacts(
    cfg: &PipelineConfig,
    report: &RunReport,
    model: &crate::estimation::Model,
    point_preds: &[crate::validation::Prediction],
    val: &Signal,
    val_int: &crate::signal::IntervalSignal,
    diag: &crate::validation::ResidualDiagnostics,
    res_tau: usize,
    sweep: Option<&Sweep>,
) -> Result<()> {
    let dir = &cfg.output_dir;

    let json = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Config(format!("report serialization: {e}")))?;
    std::fs::write(dir.join("report.json"), json + "\n")?;

    // prediction bands, one file per horizon: instant, measured, point,
    // lower, upper (instants are 1-based indices into the decimated
    // validation series)
    for pred in point_preds {
        let k = match pred.horizon {
            Horizon::Steps(k) => k,
            Horizon::FreeRun => continue,
        };
        let ipred = predict_k_steps_interval(model, val_int, k)?;
        let mut out = String::from("instant,measured,point,lower,upper\n");
        for (i, &p) in pred.values.iter().enumerate() {
            let t = pred.start + i;
            let iv = &ipred.values[i];
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                t + 1,
                val.samples()[t],
                p,
                iv.lo(),
                iv.hi()
            ));
        }
        std::fs::write(dir.join(format!("predictions_k{k}.csv")), out)?;
    }

    // residual autocorrelation curves
    let mut out = String::from("lag,autocorr,cross_squared,squared_autocorr,band\n");
    for lag in 0..=res_tau {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            lag, diag.autocorr[lag], diag.cross_squared[lag], diag.squared_autocorr[lag], diag.band
        ));
    }
    std::fs::write(dir.join("residuals.csv"), out)?;

    // ERR ranking and the AIC curve
    let mut out = String::from("rank,term,err,cumulative_err,selection_stat,aic,in_search_range\n");
    for row in &report.err_table {
        let aic = report
            .model
            .aic_trace_extended
            .get(row.rank - 1)
            .map(|v| v.to_string())
            .unwrap_or_default();
        let searched = row.rank <= report.model.aic_trace.len();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.rank, row.term, row.err, row.cumulative_err, row.selection_stat, aic, searched
        ));
    }
    std::fs::write(dir.join("structure.csv"), out)?;

    if let Some(sweep) = sweep {
        let mut out = String::from("hidden,val_mse,test_mse,epochs,best_epoch,stop\n");
        for r in &sweep.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.hidden, r.val_mse, r.test_mse, r.epochs, r.best_epoch, r.stop
            ));
        }
        std::fs::write(dir.join("neural_sweep.csv"), out)?;
    }

    Ok(())
}
