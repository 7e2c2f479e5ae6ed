//! The monotone surjection `lambda : Ω -> [0,1]`, reading ternary digits
//! `0/2` as binary digits `0/1`.

use super::point::{DyadicPoint, TernaryPoint, MAX_DEPTH};
use super::Point;
use crate::{Error, Result};

pub fn lambda(x: &TernaryPoint) -> DyadicPoint {
    // Digit position i sits at bit 128 - i; scaled by 2^MAX_DEPTH it must sit
    // at bit MAX_DEPTH - i.
    let mut scaled = x.raw_digits() >> (128 - MAX_DEPTH);
    if let Some(n) = x.tail() {
        scaled += 1u128 << (MAX_DEPTH + 1 - n);
    }
    DyadicPoint::from_scaled(scaled)
}

pub fn lambda_map(x: &Point) -> Result<Point> {
    match x {
        Point::Ternary(t) => Ok(Point::Dyadic(lambda(t))),
        Point::Dyadic(_) => Err(Error::InvalidArgument(format!("lambda is defined on the Cantor set, got {x}"))),
    }
}

/// The least `x` in Ω with `lambda(x) >= d`. For dyadic `d` this is the
/// preimage ending in an all-2 tail, and `lambda(x) = d` exactly.
pub fn min_preimage(d: &DyadicPoint) -> TernaryPoint {
    if *d == DyadicPoint::ZERO {
        return TernaryPoint::ZERO;
    }
    if *d == DyadicPoint::ONE {
        return TernaryPoint::ONE;
    }
    // Reduced with d in (0,1): the numerator is odd and its last binary digit
    // sits at position `exp`. Drop it and replace it by a tail of 2s.
    let exp = d.exponent();
    let num = d.numerator();
    let digits = ((num >> 1) << 1) << (128 - exp);
    TernaryPoint::from_raw(digits, Some(exp + 1))
}

pub fn lambda_min_preimage(d: &Point) -> Result<Point> {
    match d {
        Point::Dyadic(p) => Ok(Point::Ternary(min_preimage(p))),
        Point::Ternary(_) => Err(Error::InvalidArgument(format!("expected a point of [0,1], got {d}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(positions: &[u32], tail: Option<u32>) -> TernaryPoint {
        TernaryPoint::new(positions.iter().copied(), tail).unwrap()
    }

    fn d(num: u128, exp: u32) -> DyadicPoint {
        DyadicPoint::new(num, exp).unwrap()
    }

    #[test]
    fn finite_digit_sets() {
        assert_eq!(lambda(&t(&[1], None)), d(1, 1));
        assert_eq!(lambda(&t(&[], None)), d(0, 0));
        assert_eq!(lambda(&t(&[1, 2], None)), d(3, 2));
        assert_eq!(lambda(&t(&[2, 5], None)), d(9, 5));
    }

    #[test]
    fn tails_map_to_the_same_dyadic_as_their_finite_twin() {
        // 1/3 = 0.0222... and 2/3 = 0.2 both go to 1/2.
        assert_eq!(lambda(&t(&[], Some(2))), d(1, 1));
        assert_eq!(lambda(&TernaryPoint::ONE), DyadicPoint::ONE);
    }

    #[test]
    fn min_preimages() {
        assert_eq!(min_preimage(&d(1, 1)), t(&[], Some(2)));
        assert_eq!(min_preimage(&DyadicPoint::ZERO), TernaryPoint::ZERO);
        assert_eq!(min_preimage(&DyadicPoint::ONE), TernaryPoint::ONE);
        assert_eq!(min_preimage(&d(3, 2)), t(&[1], Some(3)));
    }

    #[test]
    fn wrong_space_is_rejected() {
        assert!(lambda_map(&Point::dyadic(1, 1).unwrap()).is_err());
        assert!(lambda_min_preimage(&Point::ternary([1], None).unwrap()).is_err());
    }
}
