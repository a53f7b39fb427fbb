//! The whole workflow end to end through the library API: generate a
//! synthetic signal, run the pipeline (load → split → autocovariance →
//! decimate → candidates → ERR → AIC → fit → predict → residuals → RMSE
//! → interval analysis → neural comparison → reports) and read back the
//! artifacts. The `narid` binary wraps exactly this.
//!
//! ```bash
//! cargo run --release --example full_pipeline
//! ```

use narid::pipeline::{generate_synthetic, run_pipeline, PipelineConfig, SyntheticSpec};

fn main() -> narid::Result<()> {
    let dir = std::env::temp_dir().join("narid_full_pipeline_example");
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join("signal.csv");
    let truth = dir.join("truth.json");

    // synthetic benchmark data with known ground truth
    let spec = SyntheticSpec::demo(2400, 7);
    let y = generate_synthetic(&spec, &csv, &truth)?;
    println!("generated {} samples -> {}", y.len(), csv.display());

    let cfg = PipelineConfig {
        input: csv,
        output_dir: dir.join("out"),
        radius: 1e-3,
        seed: 7,
        delays: 4,
        hidden_range: (4, 8),
        neural_max_epochs: 60,
        ..PipelineConfig::default()
    };
    let report = run_pipeline(&cfg)?;

    println!("\nstages: {}", report.stages.join(" -> "));
    println!(
        "\ndecimation: tau_m = {} -> step {}",
        report.decimation.tau_m, report.decimation.step
    );
    println!("selected model ({} terms):", report.model.selected_size);
    for ((term, theta), b) in report
        .model
        .terms
        .iter()
        .zip(&report.model.theta)
        .zip(&report.model.theta_interval)
    {
        println!("  {term:<14} {theta:+.8e}  in [{:+.8e}, {:+.8e}]", b.0, b.1);
    }
    for r in &report.rmse {
        println!(
            "{}-step RMSE {:.4}, interval [{:.4}, {:.4}]",
            r.horizon, r.rmse, r.rmse_interval.0, r.rmse_interval.1
        );
    }
    println!(
        "residual autocorrelation: {:.0}% of lags inside the 95% band",
        100.0 * report.residuals.inside_fraction_autocorr
    );
    if let Some(nn) = &report.neural {
        println!(
            "neural comparison: {} hidden units, one-step RMSE {:.4}",
            nn.best_hidden, nn.rmse_one_step
        );
    }

    println!("\nartifacts in {}:", cfg.output_dir.display());
    let mut names: Vec<_> = std::fs::read_dir(&cfg.output_dir)?
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    for n in names {
        println!("  {n}");
    }
    Ok(())
}
