//! Exact dyadic rationals `m / 2^e`, the coefficient ring `Z[1/2]`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// `mantissa / 2^exponent`, with `mantissa` odd (or zero with `exponent == 0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: impl Into<BigInt>, exponent: i64) -> Self {
        let mut mantissa = mantissa.into();
        let mut exponent = exponent;
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let twos = mantissa.trailing_zeros().unwrap_or(0);
        if twos > 0 {
            mantissa >>= twos;
            exponent -= twos as i64;
        }
        Dyadic { mantissa, exponent }
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Dyadic::new(value, 0)
    }

    /// `2^{-k}`.
    pub fn inverse_power_of_two(k: i64) -> Self {
        Dyadic::new(1, k)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn half(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mantissa: self.mantissa.clone(), exponent: self.exponent + 1 }
    }

    /// If `self == 2^{-k}` returns `k`.
    pub fn power_of_two_exponent(&self) -> Option<i64> {
        (self.mantissa == BigInt::one()).then_some(self.exponent)
    }

    pub fn is_integer(&self) -> bool {
        self.exponent <= 0
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| &self.mantissa << (-self.exponent) as usize)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::new(self.mantissa.clone(), BigInt::one() << self.exponent as usize)
        } else {
            BigRational::from_integer(&self.mantissa << (-self.exponent) as usize)
        }
    }

    pub fn from_rational(value: &BigRational) -> Option<Self> {
        let den = value.denom();
        let twos = den.trailing_zeros().unwrap_or(0);
        if (den >> twos as usize) != BigInt::one() {
            return None;
        }
        Some(Dyadic::new(value.numer().clone(), twos as i64))
    }

    pub fn signum_i32(&self) -> i32 {
        if self.mantissa.is_positive() {
            1
        } else if self.mantissa.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Division by a power of two `2^{-k}`; fails for anything else.
    pub fn div_power_of_two(&self, divisor: &Dyadic) -> Result<Self> {
        match divisor.power_of_two_exponent() {
            Some(k) => Ok(Dyadic::new(self.mantissa.clone(), self.exponent - k)),
            None => Err(Error::InternalInconsistency(format!(
                "divisor {divisor} is not a power of two"
            ))),
        }
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let e = self.exponent.max(other.exponent);
        let a = &self.mantissa << (e - self.exponent) as usize;
        let b = &other.mantissa << (e - other.exponent) as usize;
        (a, b, e)
    }

    /// Parses `"m/2^e"` (the serialized form) or a plain integer.
    pub fn parse(text: &str) -> Result<Self> {
        let err = || Error::Parse(format!("not a dyadic: {text:?}"));
        let text = text.trim();
        match text.split_once("/2^") {
            Some((m, e)) => {
                let m: BigInt = m.trim().parse().map_err(|_| err())?;
                let e: i64 = e.trim().parse().map_err(|_| err())?;
                Ok(Dyadic::new(m, e))
            }
            None => Ok(Dyadic::from_integer(text.parse::<BigInt>().map_err(|_| err())?)),
        }
    }
}

impl Zero for Dyadic {
    fn zero() -> Self {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }
}

impl One for Dyadic {
    fn one() -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: 0 }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -self.mantissa, exponent: self.exponent }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Dyadic {
    fn from(value: i64) -> Self {
        Dyadic::from_integer(value)
    }
}

impl From<&BigInt> for Dyadic {
    fn from(value: &BigInt) -> Self {
        Dyadic::from_integer(value.clone())
    }
}

/// Serialized as `"odd/2^e"`; zero is `"0/2^0"`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn normalized(d: &Dyadic) -> bool {
        d.mantissa.is_zero() && d.exponent == 0 || d.mantissa.bit(0)
    }

    #[test]
    fn normalizes_even_mantissa() {
        let d = Dyadic::new(12, 4);
        assert_eq!(d.mantissa(), &BigInt::from(3));
        assert_eq!(d.exponent(), 2);
        assert_eq!(Dyadic::new(0, 7), Dyadic::zero());
        assert_eq!(Dyadic::new(4, 0).to_string(), "1/2^-2");
    }

    #[test]
    fn halving_and_powers() {
        let one = Dyadic::one();
        assert_eq!(one.half().power_of_two_exponent(), Some(1));
        assert_eq!(Dyadic::new(3, 1).power_of_two_exponent(), None);
        assert_eq!(Dyadic::new(3, 2).div_power_of_two(&Dyadic::new(1, 3)).unwrap(), Dyadic::from(6));
    }

    #[test]
    fn parse_display() {
        for text in ["3/2^5", "-1/2^0", "0/2^0", "1/2^-3"] {
            assert_eq!(Dyadic::parse(text).unwrap().to_string(), text);
        }
        assert_eq!(Dyadic::parse("-8").unwrap(), Dyadic::from(-8));
    }

    proptest! {
        #[test]
        fn field_ops_agree_with_rationals(a in -1000i64..1000, ea in -5i64..12, b in -1000i64..1000, eb in -5i64..12) {
            let x = Dyadic::new(a, ea);
            let y = Dyadic::new(b, eb);
            prop_assert!(normalized(&x));
            prop_assert_eq!((&x + &y).to_rational(), x.to_rational() + y.to_rational());
            prop_assert_eq!((&x - &y).to_rational(), x.to_rational() - y.to_rational());
            prop_assert_eq!((&x * &y).to_rational(), x.to_rational() * y.to_rational());
            prop_assert_eq!(x.cmp(&y), x.to_rational().cmp(&y.to_rational()));
            prop_assert_eq!(Dyadic::from_rational(&x.to_rational()), Some(x));
        }
    }
}
