//! The neural comparison model: a one-hidden-layer NAR perceptron
//! trained with Levenberg–Marquardt, swept over hidden sizes, scored on
//! the same validation protocol as the polynomial model.
//!
//! ```bash
//! cargo run --release --example neural_comparison
//! ```

use narid::estimation::{aic_select, err_rank, SelectionOptions};
use narid::neural::sweep_hidden;
use narid::pipeline::{simulate, SyntheticSpec};
use narid::terms::{generate_candidates, Regressors};
use narid::validation::{predict_k_steps, rmse, Horizon};

fn main() -> narid::Result<()> {
    let spec = SyntheticSpec::demo(2400, 5);
    let y = simulate(&spec)?;
    let (id, val) = y.split(0.5, 7)?;
    let mean_id = id.mean();

    // polynomial reference model
    let candidates = generate_candidates(4, 4);
    let reg = Regressors::build(&candidates, &id, 4)?;
    let ranking = err_rank(&reg)?;
    let model = aic_select(&ranking, &reg, SelectionOptions::default())?;
    let poly_pred = predict_k_steps(&model, &val, 1)?;
    let poly_rmse = rmse(&poly_pred, &val, mean_id)?;

    // sweep hidden sizes; each size trains on a 60/20/20 split of the
    // identification series with early stopping
    let delays = 4;
    let sweep = sweep_hidden(&id, delays, (4, 10), 1, 60)?;
    println!("hidden-size sweep ({} delays):", delays);
    println!(
        "{:>6} {:>14} {:>14} {:>7}  stop",
        "hidden", "val MSE", "test MSE", "epochs"
    );
    for row in &sweep.rows {
        let marker = if row.hidden == sweep.best_hidden {
            "  <- best"
        } else {
            ""
        };
        println!(
            "{:>6} {:>14.6e} {:>14.6e} {:>7}  {}{marker}",
            row.hidden, row.val_mse, row.test_mse, row.epochs, row.stop
        );
    }

    let nn_pred = sweep.best.predict(&val, Horizon::Steps(1))?;
    let nn_rmse = rmse(&nn_pred, &val, mean_id)?;

    println!("\none-step normalized RMSE on held-out validation data:");
    println!(
        "  polynomial model ({} terms): {poly_rmse:.4}",
        model.selected_size
    );
    println!(
        "  neural model ({} hidden)   : {nn_rmse:.4}",
        sweep.best_hidden
    );
    println!("  (1.0 would be the trivial mean predictor)");
    Ok(())
}
