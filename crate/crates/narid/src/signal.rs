//! Sampled signals: ingestion, autocovariance, decimation and splitting.
//!
//! The decimation workflow follows the classical oversampling check: the
//! working lag τ_m is the first minimum of the linear and nonlinear
//! autocovariance of the output, and the decimation step Δ is chosen so
//! that 10Δ ≤ τ_m ≤ 20Δ.

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalVector};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// Uniformly sampled scalar time series. Sample k = 1 is the first entry.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
}

impl Signal {
    /// Ingest a series; requires at least 2 finite samples.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::TooFewSamples {
                got: samples.len(),
                need: 2,
            });
        }
        if let Some(pos) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample(pos + 1));
        }
        Ok(Signal { samples })
    }

    /// Internal constructor for derived series that may shrink below the
    /// ingestion minimum (e.g. extreme decimation keeps a single sample).
    pub(crate) fn from_derived(samples: Vec<f64>) -> Self {
        debug_assert!(!samples.is_empty());
        Signal { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.samples.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / self.samples.len() as f64
    }

    /// One numeric column, optional single header line. `decimal_separator`
    /// may be ',' for data written in a comma-decimal locale.
    pub fn read_csv(path: &Path, decimal_separator: char) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let reader = BufReader::new(file);
        let mut samples = Vec::new();
        let mut header_allowed = true;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let normalized = if decimal_separator == ',' {
                trimmed.replace(',', ".")
            } else {
                trimmed.to_string()
            };
            match normalized.parse::<f64>() {
                Ok(v) => {
                    header_allowed = false;
                    if !v.is_finite() {
                        return Err(Error::CsvParse {
                            line: idx + 1,
                            msg: "non-finite value".into(),
                        });
                    }
                    samples.push(v);
                }
                Err(_) if header_allowed => {
                    header_allowed = false; // single header line skipped
                }
                Err(_) => {
                    return Err(Error::CsvParse {
                        line: idx + 1,
                        msg: format!("cannot parse {trimmed:?} as a number"),
                    });
                }
            }
        }
        Signal::new(samples)
    }

    /// Write one sample per line with '.' decimals.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        for v in &self.samples {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }

    /// Autocovariance of the series for lags 0..=tau_max, normalized by
    /// 1/(N−τ), with the mean taken over the full series.
    pub fn autocovariance(&self, tau_max: usize) -> Result<AutocovarianceCurve> {
        autocov(&self.samples, tau_max)
    }

    /// Autocovariance of the squared series (mean-removed squares), the
    /// nonlinear counterpart used by the oversampling check.
    pub fn squared_autocovariance(&self, tau_max: usize) -> Result<AutocovarianceCurve> {
        let squared: Vec<f64> = self.samples.iter().map(|v| v * v).collect();
        autocov(&squared, tau_max)
    }

    /// Keep samples 1, 1+Δ, 1+2Δ, … (plain subsampling, no prefilter).
    pub fn decimate(&self, step: usize) -> Result<Signal> {
        if step == 0 {
            return Err(Error::ZeroDecimation);
        }
        Ok(Signal::from_derived(
            self.samples.iter().step_by(step).cloned().collect(),
        ))
    }

    /// Contiguous split: the first ⌊N·frac_id⌋ samples for identification,
    /// the remainder for validation. Temporal order is preserved; each part
    /// must keep at least `min_part` samples (typically ny + 1).
    pub fn split(&self, frac_id: f64, min_part: usize) -> Result<(Signal, Signal)> {
        if !(frac_id > 0.0 && frac_id < 1.0) {
            return Err(Error::BadSplitFraction(frac_id));
        }
        let n_id = (self.samples.len() as f64 * frac_id).floor() as usize;
        let n_val = self.samples.len() - n_id;
        let need = min_part.max(1);
        if n_id < need || n_val < need {
            return Err(Error::TooFewSamples {
                got: n_id.min(n_val),
                need,
            });
        }
        Ok((
            Signal::from_derived(self.samples[..n_id].to_vec()),
            Signal::from_derived(self.samples[n_id..].to_vec()),
        ))
    }

    /// Midrad interval signal with a common radius (instrument sensitivity).
    pub fn to_intervals(&self, radius: f64) -> Result<IntervalSignal> {
        let values = self
            .samples
            .iter()
            .map(|&v| Interval::from_midrad(v, radius))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntervalSignal { values })
    }
}

/// Interval-valued counterpart of [`Signal`].
#[derive(Clone, Debug)]
pub struct IntervalSignal {
    values: Vec<Interval>,
}

impl IntervalSignal {
    pub fn new(values: Vec<Interval>) -> Self {
        IntervalSignal { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Interval] {
        &self.values
    }

    pub fn midpoints(&self) -> Signal {
        Signal::from_derived(self.values.iter().map(|v| v.mid()).collect())
    }

    /// Interval mean of the series.
    pub fn mean(&self) -> Result<Interval> {
        let mut acc = Interval::point(0.0)?;
        for v in &self.values {
            acc = acc.add(v)?;
        }
        acc.div(&Interval::point(self.values.len() as f64)?)
    }

    pub fn to_vector(&self) -> IntervalVector {
        IntervalVector::new(self.values.clone())
    }
}

fn autocov(y: &[f64], tau_max: usize) -> Result<AutocovarianceCurve> {
    let n = y.len();
    if n < 2 || tau_max >= n {
        return Err(Error::LagOutOfRange { tau_max, len: n });
    }
    let mean = y.iter().sum::<f64>() / n as f64;
    let mut values = Vec::with_capacity(tau_max + 1);
    for tau in 0..=tau_max {
        let mut acc = 0.0;
        for k in tau..n {
            acc += (y[k] - mean) * (y[k - tau] - mean);
        }
        values.push(acc / (n - tau) as f64);
    }
    Ok(AutocovarianceCurve { values })
}

/// Autocovariance values for lags 0..=tau_max.
#[derive(Clone, Debug)]
pub struct AutocovarianceCurve {
    values: Vec<f64>,
}

/// First local minimum of an autocovariance curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FirstMinimum {
    /// Lag of the minimum; τ_max when no local minimum exists.
    pub lag: usize,
    /// True when no local minimum was found and the fallback applied.
    pub fallback: bool,
}

impl AutocovarianceCurve {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    /// Smallest lag τ ≥ 1 whose value is at most both neighbors; falls back
    /// largest lag (flagged) when the curve has no local minimum.
    pub fn first_minimum(&self) -> FirstMinimum {
        let v = &self.values;
        for tau in 1..v.len().saturating_sub(1) {
            if v[tau] <= v[tau - 1] && v[tau] <= v[tau + 1] {
                return FirstMinimum {
                    lag: tau,
                    fallback: false,
                };
            }
        }
        FirstMinimum {
            lag: self.max_lag(),
            fallback: true,
        }
    }
}

/// Decimation step from the working lag: Δ = max(1, ⌊τ_m/10⌋), the largest
/// integer with 10Δ ≤ τ_m whenever τ_m ≥ 10.
pub fn decimation_factor(tau_m: usize) -> usize {
    (tau_m / 10).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn constant_signal_has_zero_autocovariance() {
        let y = Signal::new(vec![3.5; 32]).unwrap();
        let c = y.autocovariance(8).unwrap();
        assert!(c.values().iter().all(|&v| v == 0.0));
        let cn = y.squared_autocovariance(8).unwrap();
        assert!(cn.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn alternating_signal_lag_one_negative() {
        let y: Vec<f64> = (0..16)
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let y = Signal::new(y).unwrap();
        let c = y.autocovariance(2).unwrap();
        // direct summation oracle: mean 0, products at lag 1 all -1
        assert!((c.values()[0] - 1.0).abs() < 1e-12);
        assert!((c.values()[1] + 1.0).abs() < 1e-12);
        // squaring kills the alternation
        let cn = y.squared_autocovariance(2).unwrap();
        assert!(cn.values().iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn white_noise_decorrelates() {
        let mut rng = StdRng::seed_from_u64(1);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let y: Vec<f64> = (0..10_000).map(|_| normal.sample(&mut rng)).collect();
        let c = Signal::new(y).unwrap().autocovariance(20).unwrap();
        let c0 = c.values()[0];
        for tau in 5..=20 {
            assert!(
                (c.values()[tau] / c0).abs() < 0.2,
                "lag {tau} too correlated"
            );
        }
    }

    #[test]
    fn zero_mean_symmetric_matches_squared_series_autocov() {
        let mut rng = StdRng::seed_from_u64(2);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let y: Vec<f64> = (0..128).map(|_| normal.sample(&mut rng)).collect();
        let s = Signal::new(y.clone()).unwrap();
        let nonlinear = s.squared_autocovariance(10).unwrap();
        let squared = Signal::new(y.iter().map(|v| v * v).collect()).unwrap();
        let direct = squared.autocovariance(10).unwrap();
        for (a, b) in nonlinear.values().iter().zip(direct.values()) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn autocov_matches_naive_double_loop() {
        let mut rng = StdRng::seed_from_u64(3);
        let normal = Normal::new(0.0, 2.0).unwrap();
        let y: Vec<f64> = (0..128).map(|_| normal.sample(&mut rng)).collect();
        let c = Signal::new(y.clone()).unwrap().autocovariance(16).unwrap();
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        for tau in 0..=16 {
            let mut acc = 0.0;
            for k in tau..y.len() {
                acc += (y[k] - mean) * (y[k - tau] - mean);
            }
            let expected = acc / (y.len() - tau) as f64;
            let rel = (c.values()[tau] - expected).abs() / expected.abs().max(1e-30);
            assert!(rel < 1e-12);
        }
    }

    #[test]
    fn lag_zero_invariant_under_reversal() {
        let y = vec![1.0, -2.0, 0.5, 3.0, -1.5, 2.5, 0.0, 1.0];
        let fwd = Signal::new(y.clone()).unwrap().autocovariance(3).unwrap();
        let rev = Signal::new(y.into_iter().rev().collect())
            .unwrap()
            .autocovariance(3)
            .unwrap();
        assert_eq!(fwd.values()[0], rev.values()[0]);
    }

    #[test]
    fn first_minimum_finds_dip() {
        let curve = AutocovarianceCurve {
            values: vec![10.0, 8.0, 6.0, 4.0, 2.0, 1.0, 2.0, 3.0],
        };
        assert_eq!(
            curve.first_minimum(),
            FirstMinimum {
                lag: 5,
                fallback: false
            }
        );
    }

    #[test]
    fn first_minimum_monotone_falls_back() {
        let curve = AutocovarianceCurve {
            values: (0..10).map(|k| 10.0 - k as f64).collect(),
        };
        let m = curve.first_minimum();
        assert!(m.fallback);
        assert_eq!(m.lag, 9);
    }

    #[test]
    fn decimation_factor_examples() {
        assert_eq!(decimation_factor(43), 4);
        assert_eq!(decimation_factor(9), 1);
        assert_eq!(decimation_factor(200), 20);
        // 10Δ ≤ τm whenever τm ≥ 10
        for tau in 10..10_000 {
            assert!(10 * decimation_factor(tau) <= tau);
        }
    }

    #[test]
    fn decimate_examples() {
        let y = Signal::new((1..=10).map(|v| v as f64).collect()).unwrap();
        assert_eq!(y.decimate(1).unwrap().samples(), y.samples());
        assert_eq!(y.decimate(4).unwrap().samples(), &[1.0, 5.0, 9.0]);
        assert_eq!(y.decimate(100).unwrap().samples(), &[1.0]);
        assert!(matches!(y.decimate(0), Err(Error::ZeroDecimation)));
    }

    #[test]
    fn split_examples() {
        let y = Signal::new((0..100).map(|v| v as f64).collect()).unwrap();
        let (id, val) = y.split(0.5, 5).unwrap();
        assert_eq!((id.len(), val.len()), (50, 50));
        let (id, val) = y.split(0.6, 5).unwrap();
        assert_eq!((id.len(), val.len()), (60, 40));

        let y = Signal::new((0..101).map(|v| v as f64).collect()).unwrap();
        let (id, val) = y.split(0.5, 5).unwrap();
        assert_eq!((id.len(), val.len()), (50, 51));

        let tiny = Signal::new(vec![1.0; 8]).unwrap();
        assert!(tiny.split(0.5, 5).is_err());
        assert!(tiny.split(0.0, 1).is_err());
        assert!(tiny.split(1.0, 1).is_err());
    }

    #[test]
    fn csv_round_trip_with_header_and_commas() {
        let dir = std::env::temp_dir().join("narid_sig_test");
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("commas.csv");
        std::fs::write(&p, "amplitude\n1,5\n-2,25\n3,0\n").unwrap();
        let y = Signal::read_csv(&p, ',').unwrap();
        assert_eq!(y.samples(), &[1.5, -2.25, 3.0]);

        let p2 = dir.join("plain.csv");
        std::fs::write(&p2, "1.5\n-2.25\n\n3.0\n").unwrap();
        let y2 = Signal::read_csv(&p2, '.').unwrap();
        assert_eq!(y2.samples(), y.samples());

        let p3 = dir.join("bad.csv");
        std::fs::write(&p3, "1.0\nnot_a_number\n2.0\n").unwrap();
        match Signal::read_csv(&p3, '.') {
            Err(Error::CsvParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn interval_signal_contains_midpoints() {
        let y = Signal::new(vec![1.0, -2.0, 3.0]).unwrap();
        let iy = y.to_intervals(0.5).unwrap();
        for (iv, &v) in iy.values().iter().zip(y.samples()) {
            assert!(iv.contains(v));
            assert!(iv.rad() >= 0.5);
        }
        let degenerate = y.to_intervals(0.0).unwrap();
        assert!(degenerate.values().iter().all(|v| v.is_point()));
    }
}
