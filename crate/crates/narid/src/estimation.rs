//! Term ranking, structure selection and parameter estimation.
//!
//! Candidate terms are ranked by their error reduction ratio (ERR) with a
//! greedy forward orthogonal least-squares pass (modified Gram–Schmidt).
//! Model size is then chosen by the Akaike information criterion
//! AIC(n) = N·ln(σ²(n)) + 2n, minimized over a search range whose upper
//! bound is the point where ranked terms stop being statistically
//! distinguishable from the best of the remaining candidates (a
//! Bonferroni chi-square gate); greedy selection over a large candidate
//! pool otherwise keeps decreasing the raw AIC on pure noise.
//!
//! Point parameters come from an orthogonal factorization of the
//! regressor matrix; interval parameters come from the interval normal
//! equations solved with the verified enclosure solver, and are
//! guaranteed to contain the point estimate of the midpoint data.

use crate::error::{Error, Result};
use crate::interval::{solve_enclosure, Interval};
use crate::terms::{IntervalRegressors, Regressors, Term};
use nalgebra::{DMatrix, DVector};

/// Relative column-norm threshold below which a column is treated as zero.
const RANK_TOL: f64 = 1e-12;

/// One ranked term with its error reduction ratio and the chi-square-like
/// statistic of its selection step (explained sum of squares over the
/// residual mean square at that step).
#[derive(Clone, Debug)]
pub struct ErrEntry {
    pub term: Term,
    pub err: f64,
    pub selection_stat: f64,
}

/// Full greedy ERR ordering of a candidate set.
#[derive(Clone, Debug)]
pub struct ErrRanking {
    pub entries: Vec<ErrEntry>,
    /// Candidates dropped because orthogonalization left them with
    /// numerically zero norm.
    pub skipped: Vec<Term>,
    /// ⟨y, y⟩ of the target.
    pub target_energy: f64,
}

impl ErrRanking {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn cumulative_err(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.entries
            .iter()
            .map(|e| {
                acc += e.err;
                acc
            })
            .collect()
    }
}

/// Greedy forward orthogonal least squares: at each step the remaining
/// candidates are orthogonalized against the chosen ones (modified
/// Gram–Schmidt) and the one with the largest ERR_i = g_i²⟨w_i,w_i⟩/⟨y,y⟩
/// is selected. Returns the full ordering with per-step ERR.
pub fn err_rank(reg: &Regressors) -> Result<ErrRanking> {
    let y = reg.target();
    let yy = y.dot(y);
    if yy == 0.0 {
        return Err(Error::ZeroEnergyTarget);
    }
    let m = reg.cols();
    let rows = reg.rows();
    let mut work: Vec<DVector<f64>> = (0..m).map(|j| reg.matrix().column(j).into()).collect();
    let init_norm: Vec<f64> = work.iter().map(|c| c.dot(c)).collect();
    let max_init = init_norm.iter().cloned().fold(0.0, f64::max);

    let mut remaining: Vec<usize> = (0..m).collect();
    let mut entries = Vec::with_capacity(m);
    let mut skipped = Vec::new();
    let mut residual: DVector<f64> = y.clone();

    while !remaining.is_empty() {
        let mut best: Option<(usize, f64)> = None;
        let mut newly_skipped = Vec::new();
        for &j in &remaining {
            let ww = work[j].dot(&work[j]);
            // zero-norm candidates (numerically dependent on chosen terms)
            if ww <= RANK_TOL * RANK_TOL * init_norm[j].max(RANK_TOL * max_init) {
                newly_skipped.push(j);
                continue;
            }
            let wy = work[j].dot(y);
            let err = wy * wy / (ww * yy);
            if best.map(|(_, e)| err > e).unwrap_or(true) {
                best = Some((j, err));
            }
        }
        for j in &newly_skipped {
            skipped.push(reg.terms()[*j].clone());
        }
        remaining.retain(|j| !newly_skipped.contains(j));

        let Some((pick, err)) = best else { break };
        let w = work[pick].clone();
        let ww = w.dot(&w);
        let wr = w.dot(&residual);
        let explained = wr * wr / ww;
        let sse_before = residual.dot(&residual);
        let sse_after = (sse_before - explained).max(0.0);
        let df = (rows.saturating_sub(entries.len() + 1)).max(1) as f64;
        let selection_stat = if sse_after <= 0.0 {
            f64::INFINITY
        } else {
            explained / (sse_after / df)
        };
        residual -= &w * (wr / ww);
        entries.push(ErrEntry {
            term: reg.terms()[pick].clone(),
            err,
            selection_stat,
        });
        remaining.retain(|&j| j != pick);
        for &j in &remaining {
            let c = w.dot(&work[j]) / ww;
            work[j] -= &w * c;
        }
    }

    Ok(ErrRanking {
        entries,
        skipped,
        target_energy: yy,
    })
}

/// Options for [`aic_select`].
#[derive(Clone, Copy, Debug)]
pub struct SelectionOptions {
    /// Upper cap on the AIC search range (and on the reported trace).
    pub max_terms: usize,
    /// Family-wise significance level of the search-range gate. A ranked
    /// term only extends the search range if its selection statistic
    /// exceeds the Bonferroni chi-square threshold at this level for the
    /// candidate-pool size.
    pub gate_alpha: f64,
}

impl Default for SelectionOptions {
    fn default() -> Self {
        SelectionOptions {
            max_terms: 30,
            gate_alpha: 0.01,
        }
    }
}

/// A fitted NAR polynomial model.
#[derive(Clone, Debug)]
pub struct Model {
    /// Selected terms, in ranked order.
    pub terms: Vec<Term>,
    /// Point least-squares coefficients, one per term.
    pub theta: Vec<f64>,
    /// Interval coefficients, when interval estimation has been run.
    pub theta_interval: Option<Vec<Interval>>,
    /// AIC value per model size over the searched range 1..=n; the
    /// selected size is the argmin of this trace.
    pub aic_trace: Vec<f64>,
    /// AIC values continued past the search range up to the cap, kept for
    /// reporting (the classical AIC-versus-size curve).
    pub aic_trace_extended: Vec<f64>,
    pub selected_size: usize,
    /// Maximum output lag of the candidate set the model was built from.
    pub ny: usize,
}

impl Model {
    /// Point one-step evaluation of the model on a history window.
    pub fn evaluate(&self, history: &[f64], k: usize) -> f64 {
        self.terms
            .iter()
            .zip(&self.theta)
            .map(|(t, &c)| c * t.evaluate(history, k))
            .sum()
    }

    /// Interval one-step evaluation using the interval coefficients
    /// (degenerate point coefficients when none are attached).
    pub fn evaluate_interval(&self, history: &[Interval], k: usize) -> Result<Interval> {
        let mut acc = Interval::point(0.0)?;
        for (i, t) in self.terms.iter().enumerate() {
            let coeff = match &self.theta_interval {
                Some(ti) => ti[i],
                None => Interval::point(self.theta[i])?,
            };
            acc = acc.add(&coeff.mul(&t.evaluate_interval(history, k)?)?)?;
        }
        Ok(acc)
    }
}

/// Structure selection by AIC over the gated search range: for each size
/// n fit the first n ranked terms by least squares, compute
/// AIC(n) = N·ln(σ²(n)) + 2n, and keep the global argmin (ties toward
/// smaller n). Sizes with singular fits are skipped.
pub fn aic_select(
    ranking: &ErrRanking,
    reg: &Regressors,
    options: SelectionOptions,
) -> Result<Model> {
    if ranking.is_empty() {
        return Err(Error::EmptyRanking);
    }
    let pool = ranking.len() + ranking.skipped.len();
    let gate = bonferroni_chi2_gate(options.gate_alpha, pool);
    let cap = ranking.len().min(options.max_terms).max(1);

    // Search range: longest ranked prefix whose every term clears the gate.
    let mut n_gate = 0;
    for entry in ranking.entries.iter().take(cap) {
        if entry.selection_stat >= gate {
            n_gate += 1;
        } else {
            break;
        }
    }
    let n_gate = n_gate.max(1);

    let term_index = |t: &Term| reg.terms().iter().position(|rt| rt == t).unwrap();
    let indices: Vec<usize> = ranking
        .entries
        .iter()
        .take(cap)
        .map(|e| term_index(&e.term))
        .collect();

    let rows = reg.rows() as f64;
    let mut trace_ext = Vec::with_capacity(cap);
    let mut fits: Vec<Option<Vec<f64>>> = Vec::with_capacity(cap);
    for n in 1..=cap {
        let sub = reg.subset(&indices[..n]);
        match ls_estimate(&sub) {
            Ok(theta) => {
                let theta_v = DVector::from_vec(theta.clone());
                let resid = sub.target() - sub.matrix() * &theta_v;
                let sigma2 = resid.dot(&resid) / rows;
                trace_ext.push(rows * sigma2.ln() + 2.0 * n as f64);
                fits.push(Some(theta));
            }
            Err(Error::RankDeficient(_)) => {
                trace_ext.push(f64::NAN);
                fits.push(None);
            }
            Err(e) => return Err(e),
        }
    }

    let searched = &trace_ext[..n_gate];
    let mut best: Option<(usize, f64)> = None;
    for (i, &aic) in searched.iter().enumerate() {
        if aic.is_nan() || fits[i].is_none() {
            continue;
        }
        if best.map(|(_, b)| aic < b).unwrap_or(true) {
            best = Some((i + 1, aic));
        }
    }
    let (selected_size, _) = best.ok_or(Error::NoFittableSize)?;

    Ok(Model {
        terms: ranking
            .entries
            .iter()
            .take(selected_size)
            .map(|e| e.term.clone())
            .collect(),
        theta: fits[selected_size - 1].clone().unwrap(),
        theta_interval: None,
        aic_trace: searched.to_vec(),
        aic_trace_extended: trace_ext,
        selected_size,
        ny: reg.ny(),
    })
}

/// Least-squares estimate minimizing ‖y − Ψθ‖², solved via an orthogonal
/// factorization of Ψ rather than the explicit normal-equation inverse.
/// Rank-deficient inputs are rejected with the offending columns named.
pub fn ls_estimate(reg: &Regressors) -> Result<Vec<f64>> {
    let a = reg.matrix();
    let cols = reg.cols();
    if reg.rows() < cols {
        return Err(Error::TooFewSamples {
            got: reg.rows(),
            need: cols,
        });
    }

    // Columns with numerically zero norm relative to the largest.
    let norms: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    let max_norm = norms.iter().cloned().fold(0.0, f64::max);
    let dead: Vec<String> = (0..cols)
        .filter(|&j| norms[j] < RANK_TOL * max_norm)
        .map(|j| reg.terms()[j].to_string())
        .collect();
    if !dead.is_empty() {
        return Err(Error::RankDeficient(dead));
    }

    // Rank detection on the column-pivoted factorization.
    let piv = a.clone().col_piv_qr();
    let r = piv.r();
    let rmax = (0..cols).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    let deficient: Vec<usize> = (0..cols)
        .filter(|&i| r[(i, i)].abs() < RANK_TOL * rmax)
        .collect();
    if !deficient.is_empty() {
        // Map pivot positions back to original column identities.
        let mut order = DMatrix::<f64>::from_fn(1, cols, |_, j| j as f64);
        piv.p().permute_columns(&mut order);
        let names = deficient
            .iter()
            .map(|&i| reg.terms()[order[(0, i)] as usize].to_string())
            .collect();
        return Err(Error::RankDeficient(names));
    }

    let qr = a.clone().qr();
    let qty = qr.q().transpose() * reg.target();
    let theta = qr
        .r()
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::RankDeficient(vec!["<upper-triangular solve failed>".into()]))?;
    Ok(theta.as_slice().to_vec())
}

/// Interval parameter estimate: forms the interval normal equations
/// A = ΨᵀΨ, b = Ψᵀy in interval arithmetic and solves them with the
/// verified enclosure solver. The result contains the point least-squares
/// estimate computed from the midpoint data.
pub fn interval_ls_estimate(ireg: &IntervalRegressors) -> Result<Vec<Interval>> {
    let a = ireg.matrix().transpose_mul_self()?;
    let b = ireg.matrix().transpose_mul_vector(ireg.target())?;
    let x = solve_enclosure(&a, &b)?;
    Ok(x.as_slice().to_vec())
}

/// Bonferroni chi-square(1) gate: the 1−alpha/pool quantile.
fn bonferroni_chi2_gate(alpha: f64, pool: usize) -> f64 {
    let tail = (alpha / pool.max(1) as f64).clamp(1e-300, 0.5);
    let z = normal_quantile(1.0 - tail / 2.0);
    z * z
}

/// Acklam's rational approximation to the standard normal quantile
/// (absolute error below 1.2e-9 over (0, 1)).
fn normal_quantile(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383_577_518_672_69e2,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -normal_quantile(1.0 - p)
    }
}
