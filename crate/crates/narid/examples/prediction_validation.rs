//! Validating a fitted model: k-step-ahead prediction with a rolling
//! origin, free-run simulation, normalized RMSE (point and interval) and
//! residual whiteness diagnostics.
//!
//! ```bash
//! cargo run --example prediction_validation
//! ```

use narid::estimation::{aic_select, err_rank, interval_ls_estimate, SelectionOptions};
use narid::pipeline::{simulate, SyntheticSpec};
use narid::terms::{generate_candidates, IntervalRegressors, Regressors};
use narid::validation::{
    free_run, predict_k_steps, predict_k_steps_interval, residual_diagnostics, residuals, rmse,
    rmse_interval,
};

fn main() -> narid::Result<()> {
    let spec = SyntheticSpec::demo(2400, 29);
    let y = simulate(&spec)?;
    let (id, val) = y.split(0.5, 7)?;

    // identify the model on the first half
    let candidates = generate_candidates(4, 4);
    let reg = Regressors::build(&candidates, &id, 4)?;
    let ranking = err_rank(&reg)?;
    let mut model = aic_select(&ranking, &reg, SelectionOptions::default())?;
    println!("identified {} terms", model.selected_size);

    // attach interval parameters (radius = instrument sensitivity)
    let radius = 1e-3;
    let id_int = id.to_intervals(radius)?;
    let ireg = IntervalRegressors::build(&model.terms, &id_int, 4)?;
    model.theta_interval = Some(interval_ls_estimate(&ireg)?);

    // point and interval RMSE at one and two steps ahead
    let mean_id = id.mean();
    let val_int = val.to_intervals(radius)?;
    let mean_id_int = id_int.mean()?;
    for k in [1usize, 2] {
        let pred = predict_k_steps(&model, &val, k)?;
        let score = rmse(&pred, &val, mean_id)?;
        let ipred = predict_k_steps_interval(&model, &val_int, k)?;
        let iscore = rmse_interval(&ipred, &val_int, &mean_id_int)?;
        println!(
            "{k}-step RMSE: {score:.4}   interval {iscore}   contains point: {}",
            iscore.contains(score)
        );
    }

    // free-run simulation from the first samples of the validation set
    let fr = free_run(&model, &val.samples()[..4], 30)?;
    println!(
        "\nfree run, first 6 values: {:?}  (diverged: {})",
        fr.values[..6.min(fr.values.len())]
            .iter()
            .map(|v| (v * 10.0).round() / 10.0)
            .collect::<Vec<_>>(),
        fr.diverged
    );

    // residual whiteness: a model that explains the data leaves white
    // residuals, with all three correlation curves inside the band
    let xi = residuals(&model, &reg)?;
    let diag = residual_diagnostics(&xi, 25)?;
    println!("\nresidual diagnostics (band +-{:.4}):", diag.band);
    println!(
        "  autocorrelation        : {:.0}% of lags inside",
        100.0 * diag.inside_fraction[0]
    );
    println!(
        "  cross with squares     : {:.0}% of lags inside",
        100.0 * diag.inside_fraction[1]
    );
    println!(
        "  squared autocorrelation: {:.0}% of lags inside",
        100.0 * diag.inside_fraction[2]
    );
    Ok(())
}
