//! Scalar abstraction for matrix entries and measure masses.
//!
//! Everything that only needs field arithmetic and an order is generic over
//! [`Scalar`]. Exact certificates are produced with [`crate::Rational`]; the
//! `f64` instance exists for quick numerical exploration and is never used to
//! decide a verdict.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, Zero};

/// Denominator exponent used when rounding square roots upward.
pub const SQRT_PRECISION_BITS: u32 = 32;

pub trait Scalar: Num + Clone + Debug + PartialOrd + Signed + Send + Sync {
    fn from_i64(value: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// `2^exp`, for any sign of `exp`.
    fn pow2(exp: i32) -> Self {
        let two = Self::from_i64(2);
        let mut out = Self::one();
        for _ in 0..exp.unsigned_abs() {
            out = out * two.clone();
        }
        if exp < 0 {
            Self::one() / out
        } else {
            out
        }
    }

    /// An upper bound on the square root of a nonnegative value.
    fn sqrt_upper(&self) -> Self;

    /// Whether equality and order on this type are exact.
    fn is_exact() -> bool;

    /// Text form used in JSON output (`"p/q"` for rationals).
    fn to_text(&self) -> String;
}

impl Scalar for BigRational {
    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn pow2(exp: i32) -> Self {
        let p = BigInt::one() << exp.unsigned_abs();
        if exp < 0 {
            BigRational::new(BigInt::one(), p)
        } else {
            BigRational::from_integer(p)
        }
    }

    /// Smallest `m / 2^32` with `(m / 2^32)^2 >= self`.
    fn sqrt_upper(&self) -> Self {
        assert!(!self.is_negative(), "sqrt_upper of a negative value");
        if self.is_zero() {
            return Self::zero();
        }
        let scale = BigInt::one() << (2 * SQRT_PRECISION_BITS);
        let scaled = self * BigRational::from_integer(scale);
        let ceil = scaled.ceil().to_integer();
        let ceil = ceil.to_biguint().expect("nonnegative");
        let mut root: BigUint = ceil.sqrt();
        if &root * &root < ceil {
            root += 1u32;
        }
        BigRational::new(
            BigInt::from(root),
            BigInt::one() << SQRT_PRECISION_BITS,
        )
    }

    fn is_exact() -> bool {
        true
    }

    fn to_text(&self) -> String {
        rational_to_string(self)
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(value: i64) -> Self {
        Ratio::from_integer(value)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn sqrt_upper(&self) -> Self {
        let big = BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()));
        let up = big.sqrt_upper();
        let numer: i64 = up.numer().try_into().expect("sqrt bound overflows i64");
        let denom: i64 = up.denom().try_into().expect("sqrt bound overflows i64");
        Ratio::new(numer, denom)
    }

    fn is_exact() -> bool {
        true
    }

    fn to_text(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

impl Scalar for f64 {
    fn from_i64(value: i64) -> Self {
        value as f64
    }

    fn sqrt_upper(&self) -> Self {
        self.sqrt()
    }

    fn is_exact() -> bool {
        false
    }

    fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Scalar for f32 {
    fn from_i64(value: i64) -> Self {
        value as f32
    }

    fn sqrt_upper(&self) -> Self {
        self.sqrt()
    }

    fn is_exact() -> bool {
        false
    }

    fn to_text(&self) -> String {
        self.to_string()
    }
}

/// Formats a rational as `"p/q"` (always with a denominator).
pub fn rational_to_string(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `"p/q"` or `"p"` exactly.
pub fn parse_rational(text: &str) -> crate::Result<BigRational> {
    let text = text.trim();
    let err = || crate::Error::Parse(format!("not a rational: {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn sqrt_upper_is_exact_on_squares() {
        assert_eq!(q(25, 1).sqrt_upper(), q(5, 1));
        assert_eq!(q(9, 16).sqrt_upper(), q(3, 4));
        assert_eq!(q(0, 1).sqrt_upper(), q(0, 1));
    }

    #[test]
    fn sqrt_upper_bounds_from_above_within_precision() {
        for n in [2i64, 3, 5, 7, 1000, 12345] {
            let v = q(n, 7);
            let r = v.sqrt_upper();
            assert!(&r * &r >= v);
            let step = BigRational::pow2(-(SQRT_PRECISION_BITS as i32));
            let below = &r - &step;
            assert!(&below * &below < v);
        }
    }

    #[test]
    fn pow2_signs() {
        assert_eq!(BigRational::pow2(3), q(8, 1));
        assert_eq!(BigRational::pow2(-3), q(1, 8));
        assert_eq!(<f64 as Scalar>::pow2(-2), 0.25);
        assert_eq!(<Ratio<i64> as Scalar>::pow2(-1), Ratio::new(1, 2));
    }

    #[test]
    fn rational_text_round_trip() {
        let v = parse_rational("-6/8").unwrap();
        assert_eq!(v, q(-3, 4));
        assert_eq!(rational_to_string(&v), "-3/4");
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }
}
