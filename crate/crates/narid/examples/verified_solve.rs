//! Verified enclosure of an interval linear system: the returned box is
//! certified to contain the solution of every member system.
//!
//! ```bash
//! cargo run --example verified_solve
//! ```

use nalgebra::{DMatrix, DVector};
use narid::interval::{solve_enclosure, Interval, IntervalMatrix, IntervalVector};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

fn main() -> narid::Result<()> {
    // a well-conditioned 3x3 system with uncertain entries (radius 1e-3)
    let mid = DMatrix::from_row_slice(3, 3, &[5.0, 1.0, -0.5, 0.8, 4.0, 0.3, -0.2, 0.7, 6.0]);
    let rhs = DVector::from_row_slice(&[1.0, -2.0, 0.5]);
    let rad = 1e-3;

    let a = IntervalMatrix::from_fn(3, 3, |i, j| {
        Interval::from_midrad(mid[(i, j)], rad).unwrap()
    });
    let b: IntervalVector = (0..3)
        .map(|i| Interval::from_midrad(rhs[i], rad).unwrap())
        .collect();

    let enclosure = solve_enclosure(&a, &b)?;
    println!("certified enclosure of the solution set:");
    for (i, x) in enclosure.iter().enumerate() {
        println!("  x[{i}] = {x}");
    }

    // sample member systems and verify their point solutions land inside
    let mut rng = StdRng::seed_from_u64(7);
    let mut inside = 0;
    let samples = 1000;
    for _ in 0..samples {
        let m = DMatrix::from_fn(3, 3, |i, j| mid[(i, j)] + rng.random_range(-rad..rad));
        let v = DVector::from_fn(3, |i, _| rhs[i] + rng.random_range(-rad..rad));
        let sol = m.lu().solve(&v).expect("member system solvable");
        if enclosure.contains_point(sol.as_slice()) {
            inside += 1;
        }
    }
    println!("\n{inside}/{samples} sampled member solutions inside the box");

    // the solver refuses to certify what it cannot: a matrix whose
    // interval entries admit singular members
    let wide = IntervalMatrix::from_fn(1, 1, |_, _| Interval::new(-0.5, 2.5).unwrap());
    let one = IntervalVector::from_points(&[1.0])?;
    println!(
        "\nsystem with singular members -> {}",
        solve_enclosure(&wide, &one).unwrap_err()
    );
    Ok(())
}
