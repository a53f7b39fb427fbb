//! Directed-rounding scalar primitives.
//!
//! Bounds are computed in round-to-nearest and then nudged to the next
//! representable value outward whenever the computation was (or may have
//! been) inexact. Exactness is decided with error-free transformations:
//! the Møller–Knuth two-sum for addition and the FMA residual for
//! products, quotients and square roots. Those residuals are exact for
//! results well inside the normal range, so a zero residual certifies an
//! exact bound; outside that range we nudge unconditionally.

/// Magnitudes below this are treated as too close to the subnormal range
/// for the FMA-residual exactness argument to hold.
const TINY: f64 = 1e-290;
/// Magnitudes above this are close enough to overflow that intermediate
/// values of the error-free transforms may themselves overflow.
const HUGE: f64 = 1e307;

/// Knuth two-sum: returns (s, e) with s = round(a + b) and s + e = a + b exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let a1 = s - b;
    let b1 = s - a1;
    let da = a - a1;
    let db = b - b1;
    (s, da + db)
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if s.abs() > HUGE {
        return s.next_down();
    }
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if s.abs() > HUGE {
        return s.next_up();
    }
    if e > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p == 0.0 {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        // Nonzero product underflowed to zero; sign decides the bound.
        return if (a > 0.0) == (b > 0.0) {
            0.0
        } else {
            -f64::from_bits(1)
        };
    }
    if p.abs() < TINY || p.abs() > HUGE {
        return p.next_down();
    }
    let e = a.mul_add(b, -p);
    if e < 0.0 {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p == 0.0 {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        return if (a > 0.0) == (b > 0.0) {
            f64::from_bits(1)
        } else {
            0.0
        };
    }
    if p.abs() < TINY || p.abs() > HUGE {
        return p.next_up();
    }
    let e = a.mul_add(b, -p);
    if e > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// Sign of the exact quotient error a/b − q, where q = round(a / b).
/// Returns None when the residual argument is untrustworthy.
#[inline]
fn div_err_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if q == 0.0 && a == 0.0 {
        return Some(0.0);
    }
    if q.abs() < 1e-200 || q.abs() > HUGE || b.abs() < 1e-100 || b.abs() > HUGE {
        return None;
    }
    // r = a − q·b exactly (division-residual theorem in the normal range);
    // a/b − q = r/b.
    let r = q.mul_add(-b, a);
    Some(if r == 0.0 { 0.0 } else { r / b })
}

#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    match div_err_sign(a, b, q) {
        Some(s) if s >= 0.0 => q,
        _ => q.next_down(),
    }
}

#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    match div_err_sign(a, b, q) {
        Some(s) if s <= 0.0 => q,
        _ => q.next_up(),
    }
}

#[inline]
pub fn sqrt_down(a: f64) -> f64 {
    debug_assert!(a >= 0.0);
    if a == 0.0 {
        return 0.0;
    }
    let r = a.sqrt();
    if !(TINY..=HUGE).contains(&a) {
        return r.next_down().max(0.0);
    }
    // e = r² − a exactly; sign(e) = sign(r − √a).
    let e = r.mul_add(r, -a);
    if e > 0.0 {
        r.next_down()
    } else {
        r
    }
}

#[inline]
pub fn sqrt_up(a: f64) -> f64 {
    debug_assert!(a >= 0.0);
    if a == 0.0 {
        return 0.0;
    }
    let r = a.sqrt();
    if !(TINY..=HUGE).contains(&a) {
        return r.next_up();
    }
    let e = r.mul_add(r, -a);
    if e < 0.0 {
        r.next_up()
    } else {
        r
    }
}

/// Lower bound of xⁿ for x ≥ 0, n ≥ 1.
pub fn pow_down_nonneg(x: f64, n: u32) -> f64 {
    debug_assert!(x >= 0.0 && n >= 1);
    let mut acc = x;
    for _ in 1..n {
        acc = mul_down(acc, x);
    }
    acc
}

/// Upper bound of xⁿ for x ≥ 0, n ≥ 1.
pub fn pow_up_nonneg(x: f64, n: u32) -> f64 {
    debug_assert!(x >= 0.0 && n >= 1);
    let mut acc = x;
    for _ in 1..n {
        acc = mul_up(acc, x);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_operations_stay_exact() {
        assert_eq!(add_down(1.0, 2.0), 3.0);
        assert_eq!(add_up(1.0, 2.0), 3.0);
        assert_eq!(mul_down(2.0, 3.0), 6.0);
        assert_eq!(mul_up(2.0, 3.0), 6.0);
        assert_eq!(mul_down(0.0, 1e300), 0.0);
        assert_eq!(mul_up(0.0, -1e300), 0.0);
        assert_eq!(div_down(6.0, 2.0), 3.0);
        assert_eq!(div_up(6.0, 2.0), 3.0);
        assert_eq!(div_down(1.0, 1.0), 1.0);
        assert_eq!(sqrt_down(4.0), 2.0);
        assert_eq!(sqrt_up(4.0), 2.0);
    }

    #[test]
    fn inexact_operations_bracket() {
        let (a, b) = (0.1f64, 0.2f64);
        assert!(add_down(a, b) < add_up(a, b));
        assert!(add_down(a, b) <= 0.3 && 0.3 <= add_up(a, b));
        assert!(mul_down(a, b) < mul_up(a, b));
        assert!(div_down(1.0, 3.0) < div_up(1.0, 3.0));
        assert!(sqrt_down(2.0) < sqrt_up(2.0));
        let s = sqrt_down(2.0);
        assert!(s * s <= 2.0);
        let s = sqrt_up(2.0);
        assert!(s * s >= 2.0);
    }

    #[test]
    fn directed_bounds_bracket_exact_rational_value() {
        // 1/10 + 2/10 computed through many magnitudes
        for scale in [1e-30, 1e-3, 1.0, 1e3, 1e30] {
            let a = 0.1 * scale;
            let b = 0.2 * scale;
            let lo = add_down(a, b);
            let hi = add_up(a, b);
            assert!(lo <= a + b && a + b <= hi);
            assert!(hi - lo <= 2.0 * (a + b).abs() * f64::EPSILON);
        }
    }

    #[test]
    fn underflow_products_keep_sign_side() {
        let a = 1e-200;
        let b = -1e-200;
        assert!(mul_down(a, b) < 0.0);
        assert_eq!(mul_up(a, b), 0.0);
        assert_eq!(mul_down(a, a), 0.0);
        assert!(mul_up(a, a) > 0.0);
    }
}
