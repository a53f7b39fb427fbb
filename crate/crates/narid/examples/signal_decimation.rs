//! Oversampling check and decimation: autocovariance first minimum,
//! step selection with 10Δ ≤ τ_m, and the identification/validation
//! split.
//!
//! ```bash
//! cargo run --example signal_decimation
//! ```

use narid::pipeline::{simulate, SyntheticSpec};
use narid::signal::decimation_factor;
use narid::terms::Term;

fn main() -> narid::Result<()> {
    // a slow resonance (period ~90 samples) makes a heavily oversampled
    // signal; its autocovariance dips around half the period
    let spec = SyntheticSpec {
        terms: vec![
            (Term::from_lags(&[1])?, 1.98513),
            (Term::from_lags(&[2])?, -0.990025),
        ],
        noise_sigma: 1.0,
        n: 6000,
        seed: 42,
    };
    let y = simulate(&spec)?;
    println!(
        "simulated {} samples, variance {:.1}",
        y.len(),
        y.variance()
    );

    let linear = y.autocovariance(120)?;
    let nonlinear = y.squared_autocovariance(120)?;
    let m_lin = linear.first_minimum();
    let m_nonlin = nonlinear.first_minimum();
    println!(
        "first autocovariance minima: linear at lag {}, squared-series at lag {}",
        m_lin.lag, m_nonlin.lag
    );

    // the working lag is the smaller of the two
    let tau_m = m_lin.lag.min(m_nonlin.lag);
    let step = decimation_factor(tau_m);
    println!("working lag tau_m = {tau_m} -> decimation step {step} (10*{step} <= {tau_m})");

    let decimated = y.decimate(step)?;
    println!("decimated {} -> {} samples", y.len(), decimated.len());

    // recheck: after decimation the first minimum should sit in the
    // 10..=20 band, i.e. the signal is no longer oversampled
    let recheck = decimated.autocovariance(60)?.first_minimum();
    println!("first minimum after decimation: lag {}", recheck.lag);

    let (id, val) = decimated.split(0.5, 5)?;
    println!(
        "50/50 split: {} identification + {} validation samples",
        id.len(),
        val.len()
    );
    Ok(())
}
