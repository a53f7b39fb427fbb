//! Rigorous interval arithmetic with outward rounding.
//!
//! A closed interval [lo, hi] with finite bounds is the carrier of
//! measurement uncertainty throughout the crate. Every arithmetic
//! operation returns an interval guaranteed to contain all point results
//! (containment), realized by next-representable-value outward nudging of
//! each computed bound whenever it may be inexact.
//!
//! Empty intervals are unrepresentable and all values are immutable, so
//! intervals are freely shared across threads.

mod linalg;
mod round;

pub use linalg::{solve_enclosure, IntervalMatrix, IntervalVector};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A closed real interval with finite, ordered bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Exact interval from explicit bounds. Rejects NaN, infinities and lo > hi.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFinite);
        }
        if lo > hi {
            return Err(Error::InvalidBounds { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval [v, v].
    pub fn point(v: f64) -> Result<Self> {
        Self::new(v, v)
    }

    /// Interval from midpoint and radius, outward-rounded so that it
    /// contains [mid − rad, mid + rad]. A zero radius yields the exact
    /// degenerate point.
    pub fn from_midrad(mid: f64, rad: f64) -> Result<Self> {
        if !mid.is_finite() || !rad.is_finite() {
            return Err(Error::NonFinite);
        }
        if rad < 0.0 {
            return Err(Error::NegativeRadius(rad));
        }
        if rad == 0.0 {
            return Ok(Interval { lo: mid, hi: mid });
        }
        let lo = round::sub_down(mid, rad);
        let hi = round::add_up(mid, rad);
        Self::new(lo, hi)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        // Overflow-safe midpoint.
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn rad(&self) -> f64 {
        let m = self.mid();
        (m - self.lo).max(self.hi - m)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Exact negation [−hi, −lo].
    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    fn check(lo: f64, hi: f64) -> Result<Interval> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Overflow);
        }
        debug_assert!(lo <= hi);
        Ok(Interval { lo, hi })
    }

    pub fn add(&self, other: &Interval) -> Result<Interval> {
        Self::check(
            round::add_down(self.lo, other.lo),
            round::add_up(self.hi, other.hi),
        )
    }

    pub fn sub(&self, other: &Interval) -> Result<Interval> {
        Self::check(
            round::sub_down(self.lo, other.hi),
            round::sub_up(self.hi, other.lo),
        )
    }

    pub fn mul(&self, other: &Interval) -> Result<Interval> {
        let (xl, xh, yl, yh) = (self.lo, self.hi, other.lo, other.hi);
        let lo = round::mul_down(xl, yl)
            .min(round::mul_down(xl, yh))
            .min(round::mul_down(xh, yl))
            .min(round::mul_down(xh, yh));
        let hi = round::mul_up(xl, yl)
            .max(round::mul_up(xl, yh))
            .max(round::mul_up(xh, yl))
            .max(round::mul_up(xh, yh));
        Self::check(lo, hi)
    }

    /// Division; requires 0 ∉ other.
    pub fn div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let (xl, xh, yl, yh) = (self.lo, self.hi, other.lo, other.hi);
        let lo = round::div_down(xl, yl)
            .min(round::div_down(xl, yh))
            .min(round::div_down(xh, yl))
            .min(round::div_down(xh, yh));
        let hi = round::div_up(xl, yl)
            .max(round::div_up(xl, yh))
            .max(round::div_up(xh, yl))
            .max(round::div_up(xh, yh));
        Self::check(lo, hi)
    }

    /// Dependency-aware integer power: for even exponents the lower bound
    /// is 0 whenever 0 ∈ x, which is tighter than repeated multiplication.
    pub fn pow_int(&self, n: u32) -> Result<Interval> {
        match n {
            0 => Ok(Interval { lo: 1.0, hi: 1.0 }),
            1 => Ok(*self),
            n if n % 2 == 0 => {
                let hi_abs = self.mag();
                let lo_abs = if self.contains_zero() {
                    0.0
                } else {
                    self.lo.abs().min(self.hi.abs())
                };
                let lo = if lo_abs == 0.0 {
                    0.0
                } else {
                    round::pow_down_nonneg(lo_abs, n)
                };
                Self::check(lo, round::pow_up_nonneg(hi_abs, n))
            }
            n => {
                // Odd power is monotone increasing.
                Self::check(signed_pow_down(self.lo, n), signed_pow_up(self.hi, n))
            }
        }
    }

    /// Square root; requires lo ≥ 0.
    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::NegativeSqrt(self.lo));
        }
        Self::check(round::sqrt_down(self.lo), round::sqrt_up(self.hi))
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Multiply by an exact scalar.
    pub fn scale(&self, c: f64) -> Result<Interval> {
        self.mul(&Interval { lo: c, hi: c })
    }

    /// Symmetric relative-plus-absolute inflation used by the verified solver.
    pub(crate) fn inflate(&self, rel: f64, abs: f64) -> Interval {
        let r = self.rad() * rel + abs;
        Interval {
            lo: self.lo - r,
            hi: self.hi + r,
        }
    }

    pub(crate) fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }
}

fn signed_pow_down(x: f64, n: u32) -> f64 {
    if x >= 0.0 {
        round::pow_down_nonneg(x, n)
    } else {
        -round::pow_up_nonneg(-x, n)
    }
}

fn signed_pow_up(x: f64, n: u32) -> f64 {
    if x >= 0.0 {
        round::pow_up_nonneg(x, n)
    } else {
        -round::pow_down_nonneg(-x, n)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ivl(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn interval_values_are_shareable_across_threads() {
        // immutable value types; concurrent use needs no synchronization
        const fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Interval>();
        assert_send_sync::<crate::interval::IntervalVector>();
        assert_send_sync::<crate::interval::IntervalMatrix>();
    }

    #[test]
    fn constructors_validate() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(f64::NAN, 0.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
        assert!(Interval::from_midrad(0.0, -1.0).is_err());
        assert!(Interval::from_midrad(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn midrad_zero_radius_is_degenerate_point() {
        let x = Interval::from_midrad(5.0, 0.0).unwrap();
        assert_eq!((x.lo(), x.hi()), (5.0, 5.0));
    }

    #[test]
    fn midrad_contains_requested_box() {
        let x = Interval::from_midrad(0.0, 1e-6).unwrap();
        assert!(x.lo() <= -1e-6 && 1e-6 <= x.hi());
        let y = Interval::from_midrad(-2.0, 0.5).unwrap();
        assert!(y.lo() <= -2.5 && -1.5 <= y.hi());
    }

    #[test]
    fn add_examples() {
        let s = ivl(1.0, 2.0).add(&ivl(3.0, 4.0)).unwrap();
        assert!(s.lo() <= 4.0 && 6.0 <= s.hi());
        let id = ivl(0.0, 0.0).add(&ivl(-3.0, 7.0)).unwrap();
        assert!(id.contains_interval(&ivl(-3.0, 7.0)));
        let sym = ivl(-1.0, 1.0).add(&ivl(-1.0, 1.0)).unwrap();
        assert!(sym.lo() <= -2.0 && 2.0 <= sym.hi());
    }

    #[test]
    fn sub_examples() {
        let d = ivl(3.0, 4.0).sub(&ivl(1.0, 2.0)).unwrap();
        // brute force over endpoint grid and interior samples
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for i in 0..=10 {
            for j in 0..=10 {
                let a = 3.0 + i as f64 * 0.1;
                let b = 1.0 + j as f64 * 0.1;
                min = min.min(a - b);
                max = max.max(a - b);
            }
        }
        assert!(d.lo() <= min && max <= d.hi());
        assert!((d.lo() - 1.0).abs() < 1e-12 && (d.hi() - 3.0).abs() < 1e-12);

        let x = ivl(0.25, 0.75);
        assert!(x.sub(&x).unwrap().contains(0.0));

        let n = ivl(0.0, 0.0).sub(&ivl(2.0, 5.0)).unwrap();
        assert!(n.lo() <= -5.0 && -2.0 <= n.hi());
    }

    #[test]
    fn mul_examples() {
        let p = ivl(-1.0, 2.0).mul(&ivl(3.0, 4.0)).unwrap();
        assert!(p.lo() <= -4.0 && 8.0 <= p.hi());
        let z = ivl(0.0, 0.0).mul(&ivl(-7.0, 9.0)).unwrap();
        assert_eq!((z.lo(), z.hi()), (0.0, 0.0));
        let s = ivl(-1.0, 1.0).mul(&ivl(-1.0, 1.0)).unwrap();
        assert!(s.lo() <= -1.0 && 1.0 <= s.hi());
    }

    #[test]
    fn div_examples() {
        let q = ivl(1.0, 1.0).div(&ivl(2.0, 4.0)).unwrap();
        assert!(q.lo() <= 0.25 && 0.5 <= q.hi());
        let id = ivl(-3.0, 5.0).div(&ivl(1.0, 1.0)).unwrap();
        assert!(id.contains_interval(&ivl(-3.0, 5.0)));
        assert!(matches!(
            ivl(1.0, 2.0).div(&ivl(-1.0, 1.0)),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn pow_examples() {
        // brute-force oracle for [-2,1]^2
        let x = ivl(-2.0, 1.0);
        let sq = x.pow_int(2).unwrap();
        let mut max = f64::NEG_INFINITY;
        for i in 0..=300 {
            let a = -2.0 + 3.0 * i as f64 / 300.0;
            max = max.max(a * a);
        }
        assert!(sq.lo() <= 0.0 && max <= sq.hi());
        assert_eq!(sq.lo(), 0.0);

        let one = ivl(-5.0, 9.0).pow_int(0).unwrap();
        assert_eq!((one.lo(), one.hi()), (1.0, 1.0));

        let c = ivl(2.0, 3.0).pow_int(3).unwrap();
        assert!(c.lo() <= 8.0 && 27.0 <= c.hi());

        let odd = ivl(-2.0, 1.0).pow_int(3).unwrap();
        assert!(odd.lo() <= -8.0 && 1.0 <= odd.hi());
    }

    #[test]
    fn sqrt_rejects_negative() {
        assert!(ivl(-1.0, 4.0).sqrt().is_err());
        let r = ivl(4.0, 9.0).sqrt().unwrap();
        assert!(r.lo() <= 2.0 && 3.0 <= r.hi());
    }

    #[test]
    fn pow_tighter_than_repeated_mul() {
        let x = ivl(-2.0, 1.0);
        let by_pow = x.pow_int(2).unwrap();
        let by_mul = x.mul(&x).unwrap();
        assert!(by_mul.contains_interval(&by_pow));
        assert!(by_pow.lo() > by_mul.lo());
    }

    #[test]
    fn degenerate_consistency() {
        // zero-radius inputs: midpoint within 4 ulps of point arithmetic,
        // width at most 8 ulps of the magnitude
        let pairs = [(0.1, 0.2), (1.5, -2.25), (1e10, 3.7), (-1e-7, 42.0)];
        for (a, b) in pairs {
            let x = Interval::point(a).unwrap();
            let y = Interval::point(b).unwrap();
            for (r, p) in [
                (x.add(&y).unwrap(), a + b),
                (x.sub(&y).unwrap(), a - b),
                (x.mul(&y).unwrap(), a * b),
                (x.div(&y).unwrap(), a / b),
            ] {
                let ulp = p.abs().max(f64::MIN_POSITIVE) * f64::EPSILON;
                assert!((r.mid() - p).abs() <= 4.0 * ulp, "mid off for {a} {b}");
                assert!(r.width() <= 8.0 * ulp, "width {} for {a} {b}", r.width());
            }
        }
    }

    proptest! {
        #[test]
        fn containment_add_sub_mul(
            (xl, xw) in (-1e6f64..1e6, 0.0f64..1e3),
            (yl, yw) in (-1e6f64..1e6, 0.0f64..1e3),
            (ta, tb) in (0.0f64..1.0, 0.0f64..1.0),
        ) {
            let x = ivl(xl, xl + xw);
            let y = ivl(yl, yl + yw);
            let a = xl + ta * xw;
            let b = yl + tb * yw;
            prop_assert!(x.add(&y).unwrap().contains(a + b));
            prop_assert!(x.sub(&y).unwrap().contains(a - b));
            prop_assert!(x.mul(&y).unwrap().contains(a * b));
        }

        #[test]
        fn containment_div_pow(
            (xl, xw) in (-1e6f64..1e6, 0.0f64..1e3),
            (yl, yw) in (1e-3f64..1e6, 0.0f64..1e3),
            neg in proptest::bool::ANY,
            n in 0u32..6,
            (ta, tb) in (0.0f64..1.0, 0.0f64..1.0),
        ) {
            let x = ivl(xl, xl + xw);
            let y0 = ivl(yl, yl + yw);
            let y = if neg { y0.neg() } else { y0 };
            let a = xl + ta * xw;
            let b = y.lo() + tb * y.width();
            prop_assert!(x.div(&y).unwrap().contains(a / b));
            prop_assert!(x.pow_int(n).unwrap().contains(a.powi(n as i32)));
        }

        #[test]
        fn inclusion_monotonicity(
            (xl, xw) in (-1e4f64..1e4, 0.0f64..1e2),
            (yl, yw) in (-1e4f64..1e4, 0.0f64..1e2),
            (gl, gh) in (0.0f64..1e2, 0.0f64..1e2),
        ) {
            let x = ivl(xl, xl + xw);
            let y = ivl(yl, yl + yw);
            let xbig = ivl(xl - gl, xl + xw + gh);
            let ybig = ivl(yl - gh, yl + yw + gl);
            prop_assert!(xbig.add(&ybig).unwrap().contains_interval(&x.add(&y).unwrap()));
            prop_assert!(xbig.sub(&ybig).unwrap().contains_interval(&x.sub(&y).unwrap()));
            prop_assert!(xbig.mul(&ybig).unwrap().contains_interval(&x.mul(&y).unwrap()));
        }
    }
}
