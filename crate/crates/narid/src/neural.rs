//! NAR multilayer perceptron trained with Levenberg–Marquardt, used as a
//! comparison model against the polynomial estimator.
//!
//! One hidden tanh layer, identity output, delayed outputs as inputs.
//! Inputs and targets are normalized to [−1, 1] before training. Training
//! is full-batch LM: step (JᵀJ + λI)⁻¹Jᵀe with the analytic Jacobian, λ
//! divided by 10 on improvement and multiplied by 10 on failure, early
//! stopping on six consecutive validation increases, and the weights of
//! the best validation epoch retained.

use crate::error::{Error, Result};
use crate::signal::Signal;
use crate::validation::{Horizon, Prediction};
use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

const LAMBDA_INIT: f64 = 1e-3;
const LAMBDA_MAX: f64 = 1e10;
const LAMBDA_MIN: f64 = 1e-12;
const PATIENCE: usize = 6;

/// Affine map to the normalized training range and back.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Normalization {
    pub offset: f64,
    pub scale: f64,
}

impl Normalization {
    /// Map [min, max] onto [−1, 1]; a degenerate range keeps unit scale.
    pub fn from_range(min: f64, max: f64) -> Self {
        let offset = 0.5 * (min + max);
        let half = 0.5 * (max - min);
        Normalization {
            offset,
            scale: if half > 0.0 { half } else { 1.0 },
        }
    }

    pub fn from_signal(y: &Signal) -> Self {
        let min = y.samples().iter().cloned().fold(f64::INFINITY, f64::min);
        let max = y
            .samples()
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        Self::from_range(min, max)
    }

    pub fn identity() -> Self {
        Normalization {
            offset: 0.0,
            scale: 1.0,
        }
    }

    pub fn normalize(&self, x: f64) -> f64 {
        (x - self.offset) / self.scale
    }

    pub fn denormalize(&self, z: f64) -> f64 {
        z * self.scale + self.offset
    }
}

/// NAR multilayer perceptron: output regressed on its own `delays` most
/// recent values.
#[derive(Clone, Debug)]
pub struct MlpNar {
    pub delays: usize,
    pub hidden: usize,
    w1: DMatrix<f64>,
    b1: DVector<f64>,
    w2: DVector<f64>,
    b2: f64,
    pub norm: Normalization,
}

/// Why training stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    MaxEpochs,
    EarlyStop,
    LambdaOverflow,
    NonFiniteLoss,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StopReason::MaxEpochs => "max_epochs",
            StopReason::EarlyStop => "early_stop",
            StopReason::LambdaOverflow => "lambda_max",
            StopReason::NonFiniteLoss => "non_finite_loss",
        };
        write!(f, "{s}")
    }
}

/// Per-epoch training record.
#[derive(Clone, Debug)]
pub struct TrainReport {
    /// Training MSE after each accepted epoch (normalized scale).
    pub train_mse: Vec<f64>,
    /// One-step validation MSE after each accepted epoch.
    pub val_mse: Vec<f64>,
    /// Damping parameter after each accepted epoch.
    pub lambda: Vec<f64>,
    pub stop: StopReason,
    /// Epoch whose weights were retained (argmin of `val_mse`).
    pub best_epoch: usize,
}

impl MlpNar {
    /// Seeded random network, weights uniform in ±1/√fan_in, identity
    /// normalization.
    pub fn random(delays: usize, hidden: usize, seed: u64) -> Self {
        assert!(delays >= 1 && hidden >= 1);
        let mut rng = StdRng::seed_from_u64(seed);
        let lim1 = 1.0 / (delays as f64).sqrt();
        let lim2 = 1.0 / (hidden as f64).sqrt();
        let w1 = DMatrix::from_fn(hidden, delays, |_, _| rng.random_range(-lim1..lim1));
        let b1 = DVector::from_fn(hidden, |_, _| rng.random_range(-lim1..lim1));
        let w2 = DVector::from_fn(hidden, |_, _| rng.random_range(-lim2..lim2));
        let b2 = rng.random_range(-lim2..lim2);
        MlpNar {
            delays,
            hidden,
            w1,
            b1,
            w2,
            b2,
            norm: Normalization::identity(),
        }
    }

    fn param_count(&self) -> usize {
        self.hidden * self.delays + 2 * self.hidden + 1
    }

    fn pack(&self) -> DVector<f64> {
        let mut v = Vec::with_capacity(self.param_count());
        for i in 0..self.hidden {
            for j in 0..self.delays {
                v.push(self.w1[(i, j)]);
            }
        }
        v.extend(self.b1.iter());
        v.extend(self.w2.iter());
        v.push(self.b2);
        DVector::from_vec(v)
    }

    fn unpack(&mut self, p: &DVector<f64>) {
        let mut idx = 0;
        for i in 0..self.hidden {
            for j in 0..self.delays {
                self.w1[(i, j)] = p[idx];
                idx += 1;
            }
        }
        for i in 0..self.hidden {
            self.b1[i] = p[idx];
            idx += 1;
        }
        for i in 0..self.hidden {
            self.w2[i] = p[idx];
            idx += 1;
        }
        self.b2 = p[idx];
    }

    /// Forward pass on a normalized input window (newest value first).
    fn forward_normalized(&self, x: &[f64]) -> f64 {
        let mut out = self.b2;
        for i in 0..self.hidden {
            let mut z = self.b1[i];
            for (j, &xj) in x.iter().enumerate().take(self.delays) {
                z += self.w1[(i, j)] * xj;
            }
            out += self.w2[i] * z.tanh();
        }
        out
    }

    /// Output and Jacobian row with respect to the packed parameters.
    fn forward_with_jacobian(&self, x: &[f64], row: &mut [f64]) -> f64 {
        let mut out = self.b2;
        let d = self.delays;
        let h = self.hidden;
        for i in 0..h {
            let mut z = self.b1[i];
            for (j, &xj) in x.iter().enumerate().take(d) {
                z += self.w1[(i, j)] * xj;
            }
            let a = z.tanh();
            let da = 1.0 - a * a;
            out += self.w2[i] * a;
            let g = self.w2[i] * da;
            for (j, &xj) in x.iter().enumerate().take(d) {
                row[i * d + j] = g * xj;
            }
            row[h * d + i] = g;
            row[h * d + h + i] = a;
        }
        row[h * d + 2 * h] = 1.0;
        out
    }

    /// Packed parameter vector: hidden weights row-major, hidden biases,
    /// output weights, output bias.
    pub fn parameters(&self) -> Vec<f64> {
        self.pack().as_slice().to_vec()
    }

    /// Copy of the network with replaced packed parameters.
    pub fn with_parameters(&self, params: &[f64]) -> Result<MlpNar> {
        if params.len() != self.param_count() {
            return Err(Error::Config(format!(
                "expected {} parameters, got {}",
                self.param_count(),
                params.len()
            )));
        }
        if params.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("non-finite parameter".into()));
        }
        let mut out = self.clone();
        out.unpack(&DVector::from_row_slice(params));
        Ok(out)
    }

    /// Network output and its analytic gradient with respect to the packed
    /// parameters, on a normalized input window (newest value first).
    pub fn output_and_gradient(&self, window: &[f64]) -> (f64, Vec<f64>) {
        assert_eq!(window.len(), self.delays);
        let mut grad = vec![0.0; self.param_count()];
        let out = self.forward_with_jacobian(window, &mut grad);
        (out, grad)
    }

    /// One-step or free-run prediction on a series, denormalized.
    pub fn predict(&self, y: &Signal, mode: Horizon) -> Result<Prediction> {
        let d = self.delays;
        let n = y.len();
        if n <= d {
            return Err(Error::InsufficientHistory {
                need: d + 1,
                got: n,
            });
        }
        let samples = y.samples();
        let mut values = Vec::with_capacity(n - d);
        match mode {
            Horizon::Steps(k) if k != 1 => {
                return Err(Error::Config(
                    "neural predictions support one-step or free-run mode".into(),
                ))
            }
            Horizon::Steps(_) => {
                let mut window = vec![0.0; d];
                for t in d..n {
                    for j in 0..d {
                        window[j] = self.norm.normalize(samples[t - 1 - j]);
                    }
                    values.push(self.norm.denormalize(self.forward_normalized(&window)));
                }
            }
            Horizon::FreeRun => {
                let mut history: Vec<f64> = samples[..d]
                    .iter()
                    .map(|&v| self.norm.normalize(v))
                    .collect();
                for _ in d..n {
                    let mut window = vec![0.0; d];
                    for j in 0..d {
                        window[j] = history[history.len() - 1 - j];
                    }
                    let z = self.forward_normalized(&window);
                    history.push(z);
                    values.push(self.norm.denormalize(z));
                }
            }
        }
        Ok(Prediction {
            horizon: mode,
            start: d,
            values,
            diverged: false,
        })
    }

    /// Versioned flat text format: header with dimensions and the
    /// normalization constants, then the packed weights.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        writeln!(f, "mlpnar 1")?;
        writeln!(f, "delays {}", self.delays)?;
        writeln!(f, "hidden {}", self.hidden)?;
        writeln!(f, "offset {:e}", self.norm.offset)?;
        writeln!(f, "scale {:e}", self.norm.scale)?;
        for v in self.pack().iter() {
            writeln!(f, "{v:e}")?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        let mut lines = BufReader::new(f).lines();
        let mut next = |what: &str| -> Result<String> {
            lines
                .next()
                .transpose()?
                .ok_or_else(|| Error::ModelFormat(format!("missing {what}")))
        };
        let header = next("header")?;
        if header.trim() != "mlpnar 1" {
            return Err(Error::ModelFormat(format!("unknown header {header:?}")));
        }
        let field = |line: String, key: &str| -> Result<f64> {
            let rest = line
                .strip_prefix(key)
                .ok_or_else(|| Error::ModelFormat(format!("expected {key}, got {line:?}")))?;
            rest.trim()
                .parse::<f64>()
                .map_err(|e| Error::ModelFormat(format!("{key}: {e}")))
        };
        let delays = field(next("delays")?, "delays")? as usize;
        let hidden = field(next("hidden")?, "hidden")? as usize;
        let offset = field(next("offset")?, "offset")?;
        let scale = field(next("scale")?, "scale")?;
        if delays < 1 || hidden < 1 || !offset.is_finite() || !(scale.is_finite() && scale != 0.0) {
            return Err(Error::ModelFormat("invalid header fields".into()));
        }
        let mut model = MlpNar::random(delays, hidden, 0);
        model.norm = Normalization { offset, scale };
        let count = model.param_count();
        let mut params = Vec::with_capacity(count);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let v: f64 = line
                .trim()
                .parse()
                .map_err(|e| Error::ModelFormat(format!("weight: {e}")))?;
            if !v.is_finite() {
                return Err(Error::ModelFormat("non-finite weight".into()));
            }
            params.push(v);
        }
        if params.len() != count {
            return Err(Error::ModelFormat(format!(
                "expected {count} weights, found {}",
                params.len()
            )));
        }
        model.unpack(&DVector::from_vec(params));
        Ok(model)
    }
}

/// Normalized training data: rows of delayed inputs and the target.
fn design(y: &Signal, delays: usize, norm: &Normalization) -> (DMatrix<f64>, DVector<f64>) {
    let samples = y.samples();
    let rows = samples.len() - delays;
    let x = DMatrix::from_fn(rows, delays, |i, j| {
        norm.normalize(samples[delays + i - 1 - j])
    });
    let t = DVector::from_fn(rows, |i, _| norm.normalize(samples[delays + i]));
    (x, t)
}

fn batch_outputs(model: &MlpNar, x: &DMatrix<f64>) -> DVector<f64> {
    let rows = x.nrows();
    let mut out = DVector::zeros(rows);
    let mut window = vec![0.0; model.delays];
    for i in 0..rows {
        for j in 0..model.delays {
            window[j] = x[(i, j)];
        }
        out[i] = model.forward_normalized(&window);
    }
    out
}

fn mse_of(model: &MlpNar, x: &DMatrix<f64>, t: &DVector<f64>) -> f64 {
    let out = batch_outputs(model, x);
    let e = t - out;
    e.dot(&e) / x.nrows() as f64
}

/// Full-batch Levenberg–Marquardt training of an MLP NAR model.
///
/// `train` drives the weight updates; `val` is the early-stopping series
/// (one-step MSE, patience of six increases). Weights from the best validation
/// epoch are retained. A non-finite loss aborts with the best weights so
/// far and the report flags the reason.
pub fn train_lm(
    train: &Signal,
    val: &Signal,
    hidden: usize,
    seed: u64,
    max_epochs: usize,
) -> Result<(MlpNar, TrainReport)> {
    let delays = 5;
    train_lm_with_delays(train, val, delays, hidden, seed, max_epochs)
}

pub fn train_lm_with_delays(
    train: &Signal,
    val: &Signal,
    delays: usize,
    hidden: usize,
    seed: u64,
    max_epochs: usize,
) -> Result<(MlpNar, TrainReport)> {
    if hidden < 1 {
        return Err(Error::Config("hidden size must be at least 1".into()));
    }
    if train.len() <= delays + 10 {
        return Err(Error::TooFewSamples {
            got: train.len(),
            need: delays + 11,
        });
    }
    if val.len() <= delays {
        return Err(Error::TooFewSamples {
            got: val.len(),
            need: delays + 1,
        });
    }

    let mut model = MlpNar::random(delays, hidden, seed);
    model.norm = Normalization::from_signal(train);
    let (x, t) = design(train, delays, &model.norm);
    let (xv, tv) = design(val, delays, &model.norm);
    let rows = x.nrows();
    let p = model.param_count();

    let mut lambda = LAMBDA_INIT;
    let mut report = TrainReport {
        train_mse: Vec::new(),
        val_mse: Vec::new(),
        lambda: Vec::new(),
        stop: StopReason::MaxEpochs,
        best_epoch: 0,
    };
    let mut best_params = model.pack();
    let mut best_val = f64::INFINITY;
    let mut val_increases = 0usize;
    let mut prev_val = f64::INFINITY;

    let mut sse = {
        let out = batch_outputs(&model, &x);
        let e = &t - out;
        e.dot(&e)
    };

    'outer: for _epoch in 0..max_epochs {
        if !sse.is_finite() {
            report.stop = StopReason::NonFiniteLoss;
            break;
        }
        // Jacobian of the model output wrt parameters, residual e = t − out.
        let mut jac = DMatrix::zeros(rows, p);
        let mut errs = DVector::zeros(rows);
        let mut window = vec![0.0; delays];
        for i in 0..rows {
            for j in 0..delays {
                window[j] = x[(i, j)];
            }
            let mut row = vec![0.0; p];
            let out = model.forward_with_jacobian(&window, &mut row);
            errs[i] = t[i] - out;
            for (c, v) in row.into_iter().enumerate() {
                jac[(i, c)] = v;
            }
        }
        let h = jac.transpose() * &jac;
        let g = jac.transpose() * &errs;

        // Damped step: raise lambda until the step reduces the SSE.
        loop {
            let mut damped = h.clone();
            for i in 0..p {
                damped[(i, i)] += lambda;
            }
            let step = damped.cholesky().map(|c| c.solve(&g));
            if let Some(step) = step {
                let params = model.pack() + &step;
                let mut trial = model.clone();
                trial.unpack(&params);
                let out = batch_outputs(&trial, &x);
                let e = &t - out;
                let sse_trial = e.dot(&e);
                if sse_trial.is_finite() && sse_trial < sse {
                    model = trial;
                    sse = sse_trial;
                    lambda = (lambda * 0.1).max(LAMBDA_MIN);
                    break;
                }
            }
            lambda *= 10.0;
            if lambda > LAMBDA_MAX {
                report.stop = StopReason::LambdaOverflow;
                break 'outer;
            }
        }

        let train_mse = sse / rows as f64;
        let val_mse = mse_of(&model, &xv, &tv);
        report.train_mse.push(train_mse);
        report.val_mse.push(val_mse);
        report.lambda.push(lambda);

        if !val_mse.is_finite() {
            report.stop = StopReason::NonFiniteLoss;
            break;
        }
        if val_mse < best_val {
            best_val = val_mse;
            best_params = model.pack();
            report.best_epoch = report.val_mse.len() - 1;
        }
        if val_mse > prev_val {
            val_increases += 1;
            if val_increases >= PATIENCE {
                report.stop = StopReason::EarlyStop;
                break;
            }
        } else {
            val_increases = 0;
        }
        prev_val = val_mse;
    }

    model.unpack(&best_params);
    if report.train_mse.is_empty() {
        return Err(Error::Training(format!(
            "no epoch completed (stop: {})",
            report.stop
        )));
    }
    Ok((model, report))
}

/// One row of a hidden-size sweep.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub hidden: usize,
    pub val_mse: f64,
    pub test_mse: f64,
    pub epochs: usize,
    pub best_epoch: usize,
    pub stop: StopReason,
}

/// Result of [`sweep_hidden`].
#[derive(Debug)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    pub best: MlpNar,
    pub best_report: TrainReport,
    pub best_hidden: usize,
}

/// Train one network per hidden size over `hidden_range` on a 60/20/20
/// train/validation/test split of `y` and return the model with the
/// smallest validation MSE, with the full sweep table.
pub fn sweep_hidden(
    y: &Signal,
    delays: usize,
    hidden_range: (usize, usize),
    seed: u64,
    max_epochs: usize,
) -> Result<Sweep> {
    let (lo, hi) = hidden_range;
    if lo < 1 || hi < lo {
        return Err(Error::Config(format!("invalid hidden range {lo}..={hi}")));
    }
    let (train, rest) = y.split(0.6, delays + 1)?;
    let (val, test) = rest.split(0.5, delays + 1)?;

    let mut rows = Vec::new();
    let mut best: Option<(usize, MlpNar, TrainReport)> = None;
    for hidden in lo..=hi {
        // one derived seed per size keeps the sweep deterministic
        let net_seed = seed
            .wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(hidden as u64);
        match train_lm_with_delays(&train, &val, delays, hidden, net_seed, max_epochs) {
            Ok((model, report)) => {
                let val_mse = report.val_mse[report.best_epoch];
                let (xt, tt) = design(&test, delays, &model.norm);
                let test_mse = mse_of(&model, &xt, &tt);
                rows.push(SweepRow {
                    hidden,
                    val_mse,
                    test_mse,
                    epochs: report.train_mse.len(),
                    best_epoch: report.best_epoch,
                    stop: report.stop,
                });
                let better = best
                    .as_ref()
                    .map(|(_, _, r)| val_mse < r.val_mse[r.best_epoch])
                    .unwrap_or(true);
                if better {
                    best = Some((hidden, model, report));
                }
            }
            Err(_) => continue,
        }
    }
    let (best_hidden, best_model, best_report) =
        best.ok_or_else(|| Error::Training("every hidden size failed to train".into()))?;
    Ok(Sweep {
        rows,
        best: best_model,
        best_report,
        best_hidden,
    })
}

/// MSE of a model's one-step predictions on a series (original units).
pub fn one_step_mse(model: &MlpNar, y: &Signal) -> Result<f64> {
    let pred = model.predict(y, Horizon::Steps(1))?;
    let samples = y.samples();
    let mut acc = 0.0;
    for (i, &p) in pred.values.iter().enumerate() {
        let e = samples[pred.start + i] - p;
        acc += e * e;
    }
    Ok(acc / pred.values.len() as f64)
}
