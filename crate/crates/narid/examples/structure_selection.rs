//! Structure selection: ERR ranking of 70 candidate monomials by forward
//! orthogonal least squares, then model size by the Akaike criterion.
//!
//! ```bash
//! cargo run --example structure_selection
//! ```

use narid::estimation::{aic_select, err_rank, SelectionOptions};
use narid::pipeline::{simulate, SyntheticSpec};
use narid::terms::{generate_candidates, Regressors};

fn main() -> narid::Result<()> {
    // benchmark system: 4 known terms hidden in the degree-4, lag-4
    // candidate set
    let spec = SyntheticSpec::demo(2000, 3);
    let y = simulate(&spec)?;
    let (id, _val) = y.split(0.5, 5)?;

    let candidates = generate_candidates(4, 4);
    println!(
        "candidate terms of degree <= 4, lags <= 4: {}",
        candidates.len()
    );

    let reg = Regressors::build(&candidates, &id, 4)?;
    let ranking = err_rank(&reg)?;

    println!("\ntop of the ERR ranking:");
    println!("{:<4} {:<22} {:>10} {:>12}", "rank", "term", "ERR %", "chi");
    for (i, e) in ranking.entries.iter().take(8).enumerate() {
        println!(
            "{:<4} {:<22} {:>10.4} {:>12.1}",
            i + 1,
            e.term.to_string(),
            100.0 * e.err,
            e.selection_stat
        );
    }

    let model = aic_select(&ranking, &reg, SelectionOptions::default())?;
    println!("\nAIC trace over the searched sizes:");
    for (n, aic) in model.aic_trace.iter().enumerate() {
        let marker = if n + 1 == model.selected_size {
            "  <- selected"
        } else {
            ""
        };
        println!("  {} terms: AIC = {aic:.1}{marker}", n + 1);
    }

    println!("\nselected model ({} terms):", model.selected_size);
    for (t, c) in model.terms.iter().zip(&model.theta) {
        println!("  {c:+.8e} * {t}");
    }
    println!("\ngenerating system for comparison:");
    for (t, c) in &spec.terms {
        println!("  {c:+.8e} * {t}");
    }
    Ok(())
}
