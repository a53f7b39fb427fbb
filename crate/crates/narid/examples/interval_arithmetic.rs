//! Interval arithmetic basics: construction, the elementary operations,
//! and the containment guarantee under outward rounding.
//!
//! ```bash
//! cargo run --example interval_arithmetic
//! ```

use narid::Interval;

fn main() -> narid::Result<()> {
    // midpoint/radius construction, the way measured samples are wrapped:
    // a reading of 12.5 with instrument sensitivity 0.1
    let reading = Interval::from_midrad(12.5, 0.1)?;
    println!("midrad(12.5, 0.1)   = {reading}");

    // a zero radius is the exact degenerate point
    let exact = Interval::from_midrad(5.0, 0.0)?;
    println!("midrad(5.0, 0.0)    = {exact} (width {})", exact.width());

    let x = Interval::new(1.0, 2.0)?;
    let y = Interval::new(3.0, 4.0)?;
    println!("\n[1,2] + [3,4]       = {}", x.add(&y)?);
    println!("[1,2] - [3,4]       = {}", x.sub(&y)?);
    println!("[1,2] * [3,4]       = {}", x.mul(&y)?);
    println!("[1,2] / [3,4]       = {}", x.div(&y)?);

    // division by an interval containing zero is a domain error
    let z = Interval::new(-1.0, 1.0)?;
    println!("[1,2] / [-1,1]      -> {}", x.div(&z).unwrap_err());

    // dependency-aware powers: squaring an interval that straddles zero
    // starts at 0, which plain self-multiplication cannot know
    let s = Interval::new(-2.0, 1.0)?;
    println!("\n[-2,1]^2            = {}", s.pow_int(2)?);
    println!("[-2,1] * [-2,1]     = {} (wider)", s.mul(&s)?);

    // containment: the interval result encloses every point result
    let a = 1.7375;
    let b = 3.125;
    let point = a * b;
    let boxed = Interval::point(a)?.mul(&Interval::point(b)?)?;
    println!("\n{a} * {b} = {point}");
    println!("interval product    = {boxed}");
    println!("contains the point: {}", boxed.contains(point));

    // outward rounding makes inexact bounds strictly bracket the value
    let tenth = Interval::point(1.0)?.div(&Interval::point(10.0)?)?;
    println!("\n1/10 as an interval = {tenth}");
    println!("width               = {} (a couple of ulps)", tenth.width());
    Ok(())
}
