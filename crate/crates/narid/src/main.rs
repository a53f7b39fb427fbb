//! Thin command-line front end for the identification pipeline.

use clap::{Args, Parser, Subcommand};
use narid::pipeline::{generate_synthetic, run_pipeline, PipelineConfig, SyntheticSpec};
use narid::terms::Term;
use narid::{Error, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "narid",
    version,
    about = "NAR polynomial identification with interval uncertainty"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full identification pipeline on a signal CSV.
    Run(RunArgs),
    /// Generate a synthetic NAR signal with a ground-truth sidecar.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file (key=value); explicit flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input CSV with one numeric column (optional header line).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Decimal separator of the input data ('.' or ',').
    #[arg(long)]
    decimal_separator: Option<char>,
    /// Identification fraction of the split (0 < f < 1).
    #[arg(long)]
    split: Option<f64>,
    /// Polynomial degree of the candidate terms.
    #[arg(long)]
    degree: Option<usize>,
    /// Maximum output lag of the candidate terms.
    #[arg(long)]
    max_lag: Option<usize>,
    /// Autocovariance lag range for the oversampling check.
    #[arg(long)]
    tau_max: Option<usize>,
    /// Prediction horizon (1-step results are always reported too).
    #[arg(long)]
    horizon: Option<usize>,
    /// Interval radius in signal units (instrument sensitivity).
    #[arg(long)]
    radius: Option<f64>,
    /// Disable the neural comparison stage.
    #[arg(long)]
    no_neural: bool,
    /// Output delays of the neural model.
    #[arg(long)]
    delays: Option<usize>,
    /// Smallest hidden size of the neural sweep.
    #[arg(long)]
    hidden_min: Option<usize>,
    /// Largest hidden size of the neural sweep.
    #[arg(long)]
    hidden_max: Option<usize>,
    /// Epoch cap per neural training run.
    #[arg(long)]
    neural_max_epochs: Option<usize>,
    /// Seed for all randomness (neural initialization).
    #[arg(long)]
    seed: Option<u64>,
    /// Cap on the AIC search range.
    #[arg(long)]
    aic_max_terms: Option<usize>,
    /// Output directory for report and CSV artifacts.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Use the built-in benchmark system instead of explicit --term flags.
    #[arg(long, conflicts_with = "term")]
    preset_demo: bool,
    /// Term with coefficient, e.g. 'const=25', 'y1=1.68', 'y1^3=-1e-5',
    /// 'y3*y4=0.01'. Repeat per term.
    #[arg(long)]
    term: Vec<String>,
    /// Number of samples to emit.
    #[arg(long, default_value_t = 2000)]
    n: usize,
    /// Standard deviation of the equation noise.
    #[arg(long, default_value_t = 10.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Signal CSV path.
    #[arg(long)]
    output: PathBuf,
    /// Ground-truth JSON path (defaults to the CSV path with .json).
    #[arg(long)]
    truth: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Generate(args) => cmd_generate(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let mut cfg = PipelineConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    if let Some(v) = args.input {
        cfg.input = v;
    }
    if let Some(v) = args.decimal_separator {
        cfg.decimal_separator = v;
    }
    if let Some(v) = args.split {
        cfg.split_fraction = v;
    }
    if let Some(v) = args.degree {
        cfg.degree = v;
    }
    if let Some(v) = args.max_lag {
        cfg.max_lag = v;
    }
    if let Some(v) = args.tau_max {
        cfg.tau_max = Some(v);
    }
    if let Some(v) = args.horizon {
        cfg.horizon = v;
    }
    if let Some(v) = args.radius {
        cfg.radius = v;
    }
    if args.no_neural {
        cfg.neural = false;
    }
    if let Some(v) = args.delays {
        cfg.delays = v;
    }
    if let Some(v) = args.hidden_min {
        cfg.hidden_range.0 = v;
    }
    if let Some(v) = args.hidden_max {
        cfg.hidden_range.1 = v;
    }
    if let Some(v) = args.neural_max_epochs {
        cfg.neural_max_epochs = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.aic_max_terms {
        cfg.aic_max_terms = v;
    }
    if let Some(v) = args.output {
        cfg.output_dir = v;
    }
    if cfg.input.as_os_str().is_empty() {
        return Err(Error::Config(
            "no input file (use --input or a config file)".into(),
        ));
    }

    let report = run_pipeline(&cfg)?;
    println!(
        "decimation: first minimum at lag {}, step {}",
        report.decimation.tau_m, report.decimation.step
    );
    println!(
        "model: {} terms selected by AIC",
        report.model.selected_size
    );
    for ((term, theta), bounds) in report
        .model
        .terms
        .iter()
        .zip(&report.model.theta)
        .zip(&report.model.theta_interval)
    {
        println!("  {term}: {theta}  in [{}, {}]", bounds.0, bounds.1);
    }
    for r in &report.rmse {
        println!(
            "rmse {}-step: {}  interval [{}, {}]",
            r.horizon, r.rmse, r.rmse_interval.0, r.rmse_interval.1
        );
    }
    if let Some(nn) = &report.neural {
        println!(
            "neural: {} hidden units, one-step rmse {}",
            nn.best_hidden, nn.rmse_one_step
        );
    }
    println!("artifacts written to {}", cfg.output_dir.display());
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let spec = if args.preset_demo || args.term.is_empty() {
        let mut spec = SyntheticSpec::demo(args.n, args.seed);
        if !args.preset_demo {
            eprintln!("note: no --term given, using the built-in benchmark system");
        }
        spec.n = args.n;
        spec.seed = args.seed;
        spec
    } else {
        let terms = args
            .term
            .iter()
            .map(|s| parse_term_spec(s))
            .collect::<Result<Vec<_>>>()?;
        SyntheticSpec {
            terms,
            noise_sigma: args.sigma,
            n: args.n,
            seed: args.seed,
        }
    };
    let truth = args
        .truth
        .unwrap_or_else(|| args.output.with_extension("json"));
    let y = generate_synthetic(&spec, &args.output, &truth)?;
    println!(
        "wrote {} samples to {} (truth: {})",
        y.len(),
        args.output.display(),
        truth.display()
    );
    Ok(())
}

/// Parse 'const=25', 'y1=0.5' or 'y3*y4^2=-1e-4' into a term with its
/// coefficient.
fn parse_term_spec(spec: &str) -> Result<(Term, f64)> {
    let (lhs, rhs) = spec
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("term {spec:?}: expected <term>=<coefficient>")))?;
    let coeff: f64 = rhs
        .trim()
        .parse()
        .map_err(|e| Error::Config(format!("term {spec:?}: bad coefficient: {e}")))?;
    let lhs = lhs.trim();
    if lhs.eq_ignore_ascii_case("const") || lhs == "1" {
        return Ok((Term::constant(), coeff));
    }
    let mut lags = Vec::new();
    for factor in lhs.split('*') {
        let factor = factor.trim();
        let (base, power) = match factor.split_once('^') {
            Some((b, p)) => (
                b,
                p.parse::<u32>()
                    .map_err(|e| Error::Config(format!("term {spec:?}: bad power: {e}")))?,
            ),
            None => (factor, 1),
        };
        let lag_str = base.strip_prefix('y').ok_or_else(|| {
            Error::Config(format!(
                "term {spec:?}: factor {factor:?} must look like y<lag>"
            ))
        })?;
        let lag: u32 = lag_str
            .parse()
            .map_err(|e| Error::Config(format!("term {spec:?}: bad lag: {e}")))?;
        for _ in 0..power {
            lags.push(lag);
        }
    }
    Ok((Term::from_lags(&lags)?, coeff))
}
