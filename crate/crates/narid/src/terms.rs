//! Candidate monomial terms for NAR models and regressor construction.
//!
//! A term is a monomial in lagged outputs y(k−1)..y(k−ny), represented as
//! a sorted multiset of lags; the empty multiset is the constant term.
//! `generate_candidates(l, ny)` enumerates all C(ny+l, l) monomials of
//! degree 0..=l in a deterministic order (by degree, then lexicographic).

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalMatrix, IntervalVector};
use crate::signal::{IntervalSignal, Signal};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Monomial in lagged outputs: a sorted multiset of positive lags.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    lags: Vec<u32>,
}

impl Term {
    /// The constant term (degree 0).
    pub fn constant() -> Self {
        Term { lags: Vec::new() }
    }

    /// Term from a multiset of lags; zero lags are rejected, order is
    /// canonicalized so that equal terms compare equal.
    pub fn from_lags(lags: &[u32]) -> Result<Self> {
        if lags.contains(&0) {
            return Err(Error::BadTerm("lag 0 is not a valid output lag".into()));
        }
        let mut lags = lags.to_vec();
        lags.sort_unstable();
        Ok(Term { lags })
    }

    pub fn lags(&self) -> &[u32] {
        &self.lags
    }

    pub fn degree(&self) -> usize {
        self.lags.len()
    }

    pub fn is_constant(&self) -> bool {
        self.lags.is_empty()
    }

    pub fn max_lag(&self) -> u32 {
        self.lags.last().copied().unwrap_or(0)
    }

    /// Product over lags τ of history[k − τ]; the constant term is 1.
    /// `k` is a 0-based index into `history` and must be ≥ max_lag.
    pub fn evaluate(&self, history: &[f64], k: usize) -> f64 {
        self.lags
            .iter()
            .map(|&lag| history[k - lag as usize])
            .product()
    }

    /// Interval evaluation, dependency-aware: repeated lags are raised to
    /// their power with `pow_int` instead of repeated multiplication.
    pub fn evaluate_interval(&self, history: &[Interval], k: usize) -> Result<Interval> {
        let mut acc = Interval::point(1.0)?;
        let mut i = 0;
        while i < self.lags.len() {
            let lag = self.lags[i];
            let mut count = 0u32;
            while i < self.lags.len() && self.lags[i] == lag {
                count += 1;
                i += 1;
            }
            let factor = history[k - lag as usize].pow_int(count)?;
            acc = acc.mul(&factor)?;
        }
        Ok(acc)
    }

    /// Lags grouped as (lag, multiplicity), highest lag first (the order
    /// used by the canonical rendering).
    pub fn grouped_lags(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &lag in self.lags.iter().rev() {
            match out.last_mut() {
                Some((l, c)) if *l == lag => *c += 1,
                _ => out.push((lag, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Term {
    /// Canonical text form, e.g. `y(k-4)^3*y(k-1)`; the constant is `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return write!(f, "1");
        }
        let mut first = true;
        for (lag, count) in self.grouped_lags() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if count == 1 {
                write!(f, "y(k-{lag})")?;
            } else {
                write!(f, "y(k-{lag})^{count}")?;
            }
        }
        Ok(())
    }
}

/// All distinct monomials of degree 0..=l over lags 1..=ny, ordered by
/// degree then lexicographically on the sorted lag vector. The count is
/// C(ny + l, l).
pub fn generate_candidates(degree: usize, max_lag: usize) -> Vec<Term> {
    assert!(degree >= 1 && max_lag >= 1);
    let mut out = Vec::new();
    let mut current = Vec::new();
    for d in 0..=degree {
        extend_candidates(d, 1, max_lag as u32, &mut current, &mut out);
    }
    out
}

fn extend_candidates(
    remaining: usize,
    min_lag: u32,
    max_lag: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<Term>,
) {
    if remaining == 0 {
        out.push(Term {
            lags: current.clone(),
        });
        return;
    }
    for lag in min_lag..=max_lag {
        current.push(lag);
        extend_candidates(remaining - 1, lag, max_lag, current, out);
        current.pop();
    }
}

/// Point-valued regressor matrix: one column per term, one row per usable
/// instant k = ny+1..N, and the target y(k) for those instants.
#[derive(Clone, Debug)]
pub struct Regressors {
    pub(crate) matrix: DMatrix<f64>,
    pub(crate) target: DVector<f64>,
    pub(crate) terms: Vec<Term>,
    pub(crate) ny: usize,
}

impl Regressors {
    /// Rows start at k = ny+1 regardless of which lags each term uses, so
    /// every candidate subset sees the same instants.
    pub fn build(terms: &[Term], y: &Signal, ny: usize) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::BadTerm("empty term list".into()));
        }
        let n = y.len();
        if n <= ny {
            return Err(Error::TooFewSamples {
                got: n,
                need: ny + 1,
            });
        }
        if let Some(t) = terms.iter().find(|t| t.max_lag() as usize > ny) {
            return Err(Error::BadTerm(format!("term {t} exceeds max lag {ny}")));
        }
        let rows = n - ny;
        let samples = y.samples();
        let matrix = DMatrix::from_fn(rows, terms.len(), |i, j| terms[j].evaluate(samples, ny + i));
        let target = DVector::from_fn(rows, |i, _| samples[ny + i]);
        Ok(Regressors {
            matrix,
            target,
            terms: terms.to_vec(),
            ny,
        })
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn target(&self) -> &DVector<f64> {
        &self.target
    }

    /// New regressor set restricted to the given column indices.
    pub fn subset(&self, indices: &[usize]) -> Regressors {
        let matrix = DMatrix::from_fn(self.rows(), indices.len(), |i, j| {
            self.matrix[(i, indices[j])]
        });
        Regressors {
            matrix,
            target: self.target.clone(),
            terms: indices.iter().map(|&j| self.terms[j].clone()).collect(),
            ny: self.ny,
        }
    }
}

/// Interval-valued regressors built from an interval signal.
#[derive(Clone, Debug)]
pub struct IntervalRegressors {
    pub(crate) matrix: IntervalMatrix,
    pub(crate) target: IntervalVector,
    pub(crate) terms: Vec<Term>,
    pub(crate) ny: usize,
}

impl IntervalRegressors {
    pub fn build(terms: &[Term], y: &IntervalSignal, ny: usize) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::BadTerm("empty term list".into()));
        }
        let n = y.len();
        if n <= ny {
            return Err(Error::TooFewSamples {
                got: n,
                need: ny + 1,
            });
        }
        if let Some(t) = terms.iter().find(|t| t.max_lag() as usize > ny) {
            return Err(Error::BadTerm(format!("term {t} exceeds max lag {ny}")));
        }
        let rows = n - ny;
        let values = y.values();
        let mut cells = Vec::with_capacity(rows * terms.len());
        for i in 0..rows {
            for t in terms {
                cells.push(t.evaluate_interval(values, ny + i)?);
            }
        }
        let mut idx = 0;
        let matrix = IntervalMatrix::from_fn(rows, terms.len(), |_, _| {
            let v = cells[idx];
            idx += 1;
            v
        });
        let target = IntervalVector::new(values[ny..n].to_vec());
        Ok(IntervalRegressors {
            matrix,
            target,
            terms: terms.to_vec(),
            ny,
        })
    }

    pub fn matrix(&self) -> &IntervalMatrix {
        &self.matrix
    }

    pub fn target(&self) -> &IntervalVector {
        &self.target
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn ny(&self) -> usize {
        self.ny
    }
}
