//! Exact rational scalars and guard-banded comparisons.
//!
//! Probabilities and character sums on integer-character groups are exact
//! [`Rat`] values. Comparisons involving square roots are performed by
//! comparing squares (both sides nonnegative), which stays inside rational
//! arithmetic. Log-domain comparisons used by the large-`n` scans carry an
//! explicit relative guard band: a comparison that lands inside the band is
//! reported as [`Decision::TooClose`] instead of being decided silently.

use num::bigint::BigInt;
use num::rational::Ratio;
use num::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Rat = Ratio<BigInt>;

/// Default relative guard band for float-domain comparisons.
pub const GUARD_BAND: f64 = 1e-12;

/// Outcome of a guard-banded comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    /// Strictly greater, decided outside the guard band (or exactly).
    Greater,
    /// Strictly smaller, decided outside the guard band (or exactly).
    Smaller,
    /// Within the guard band; caller must escalate or flag.
    TooClose,
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: impl Into<BigInt>) -> Rat {
    Rat::from_integer(num.into())
}

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= k;
    }
    f
}

/// Render a rational as `num/den` (or just `num` for integers).
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `num/den` or a bare integer.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

/// Decide `a ? sqrt(b)` for nonnegative rationals by comparing `a²` with `b`.
/// Exact; never returns `TooClose`.
pub fn cmp_to_sqrt(a: &Rat, b: &Rat) -> Decision {
    assert!(!a.is_negative() && !b.is_negative());
    let a2 = a * a;
    if a2 > *b {
        Decision::Greater
    } else if a2 < *b {
        Decision::Smaller
    } else {
        // a == sqrt(b) exactly.
        Decision::Smaller
    }
}

/// Natural log of a positive big integer, accurate to ~1e-15 relative.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive());
    let bits = x.bits();
    if bits <= 52 {
        return x.to_f64().unwrap().ln();
    }
    // Take the top 64 bits as mantissa, count the rest as an exponent.
    let shift = bits - 52;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Guard-banded comparison of two floats: relative band on the larger scale.
pub fn cmp_guarded(lhs: f64, rhs: f64, band: f64) -> Decision {
    let scale = 1.0_f64.max(lhs.abs()).max(rhs.abs());
    let diff = lhs - rhs;
    if diff.abs() <= band * scale {
        Decision::TooClose
    } else if diff > 0.0 {
        Decision::Greater
    } else {
        Decision::Smaller
    }
}

/// `ln(n!)` via exact integer factorial for small `n`, Stirling-free.
pub fn ln_factorial(n: u64) -> f64 {
    // Summing logs is accurate enough for every guard-banded use here.
    (2..=n).map(|k| (k as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(14), BigInt::from(87_178_291_200_i64));
    }

    #[test]
    fn rat_round_trip() {
        let r = rat(-3, 6);
        assert_eq!(rat_string(&r), "-1/2");
        assert_eq!(parse_rat("-1/2").unwrap(), r);
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert!(parse_rat("1/0").is_none());
    }

    #[test]
    fn sqrt_comparison_exact() {
        // 3/2 vs sqrt(9/4): equal -> treated as not-greater.
        assert_eq!(cmp_to_sqrt(&rat(3, 2), &rat(9, 4)), Decision::Smaller);
        assert_eq!(cmp_to_sqrt(&rat(2, 1), &rat(3, 1)), Decision::Greater);
        assert_eq!(cmp_to_sqrt(&rat(1, 2), &rat(1, 3)), Decision::Smaller);
    }

    #[test]
    fn ln_bigint_matches_f64() {
        let x = BigInt::from(123456789_u64);
        assert!((ln_bigint(&x) - 123456789.0_f64.ln()).abs() < 1e-12);
        let big = factorial(60);
        let expect = ln_factorial(60);
        assert!((ln_bigint(&big) - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn guard_band_flags_close_calls() {
        assert_eq!(cmp_guarded(1.0, 1.0 + 1e-15, GUARD_BAND), Decision::TooClose);
        assert_eq!(cmp_guarded(2.0, 1.0, GUARD_BAND), Decision::Greater);
        assert_eq!(cmp_guarded(1.0, 2.0, GUARD_BAND), Decision::Smaller);
    }
}
