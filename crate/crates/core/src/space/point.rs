use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Deepest binary/ternary digit position a point may use.
pub const MAX_DEPTH: u32 = 120;

/// The two base spaces: the unit interval and the middle-thirds Cantor set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Interval,
    Cantor,
}

impl Space {
    pub fn min_point(self) -> Point {
        match self {
            Space::Interval => Point::Dyadic(DyadicPoint::ZERO),
            Space::Cantor => Point::Ternary(TernaryPoint::ZERO),
        }
    }

    pub fn max_point(self) -> Point {
        match self {
            Space::Interval => Point::Dyadic(DyadicPoint::ONE),
            Space::Cantor => Point::Ternary(TernaryPoint::ONE),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Space::Interval => "interval",
            Space::Cantor => "cantor",
        }
    }
}

impl std::str::FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interval" | "unit" | "[0,1]" => Ok(Space::Interval),
            "cantor" | "omega" => Ok(Space::Cantor),
            _ => Err(Error::Parse(format!("unknown space {s:?} (expected interval or cantor)"))),
        }
    }
}

/// A point `num / 2^exp` of `[0, 1]`, kept reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicPoint {
    num: u128,
    exp: u32,
}

impl DyadicPoint {
    pub const ZERO: DyadicPoint = DyadicPoint { num: 0, exp: 0 };
    pub const ONE: DyadicPoint = DyadicPoint { num: 1, exp: 0 };

    pub fn new(num: u128, exp: u32) -> Result<Self> {
        if exp > MAX_DEPTH {
            return Err(Error::DepthOverflow(exp));
        }
        if num > 1u128 << exp {
            return Err(Error::InvalidArgument(format!("{num}/2^{exp} lies outside [0,1]")));
        }
        Ok(Self::reduced(num, exp))
    }

    fn reduced(mut num: u128, mut exp: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let twos = num.trailing_zeros().min(exp);
        num >>= twos;
        exp -= twos;
        DyadicPoint { num, exp }
    }

    pub fn numerator(&self) -> u128 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    /// The value scaled by `2^MAX_DEPTH`, an exact integer.
    pub(crate) fn scaled(&self) -> u128 {
        self.num << (MAX_DEPTH - self.exp)
    }

    pub(crate) fn from_scaled(scaled: u128) -> Self {
        Self::reduced(scaled, MAX_DEPTH)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::one() << self.exp as usize)
    }
}

impl fmt::Debug for DyadicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&Point::Dyadic(*self), f)
    }
}

impl Ord for DyadicPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.scaled().cmp(&other.scaled())
    }
}

impl PartialOrd for DyadicPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A point of the Cantor set: `sum_{n in F} 2*3^{-n}`, plus `sum_{n >= N} 2*3^{-n}`
/// when a tail start `N` is present.
///
/// Digit position `i` is stored at bit `128 - i` of `digits`, so comparing the
/// words numerically compares the ternary expansions lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TernaryPoint {
    digits: u128,
    tail: Option<u32>,
}

const fn position_bit(position: u32) -> u128 {
    1u128 << (128 - position)
}

impl TernaryPoint {
    pub const ZERO: TernaryPoint = TernaryPoint { digits: 0, tail: None };
    pub const ONE: TernaryPoint = TernaryPoint { digits: 0, tail: Some(1) };

    pub fn new(positions: impl IntoIterator<Item = u32>, tail: Option<u32>) -> Result<Self> {
        let mut digits = 0u128;
        for p in positions {
            if p == 0 {
                return Err(Error::InvalidArgument("digit positions start at 1".into()));
            }
            if p > MAX_DEPTH {
                return Err(Error::DepthOverflow(p));
            }
            digits |= position_bit(p);
        }
        if let Some(n) = tail {
            if n == 0 {
                return Err(Error::InvalidArgument("tail start must be positive".into()));
            }
            if n > MAX_DEPTH + 1 {
                return Err(Error::DepthOverflow(n));
            }
        }
        Ok(Self::canonical(digits, tail))
    }

    /// Folds digits into the tail so that equal points have equal representations.
    fn canonical(mut digits: u128, tail: Option<u32>) -> Self {
        let Some(mut n) = tail else {
            return TernaryPoint { digits, tail: None };
        };
        for p in n..=MAX_DEPTH {
            digits &= !position_bit(p);
        }
        while n > 1 && digits & position_bit(n - 1) != 0 {
            digits &= !position_bit(n - 1);
            n -= 1;
        }
        TernaryPoint { digits, tail: Some(n) }
    }

    pub fn positions(&self) -> Vec<u32> {
        (1..=MAX_DEPTH).filter(|&p| self.digits & position_bit(p) != 0).collect()
    }

    pub fn tail(&self) -> Option<u32> {
        self.tail
    }

    /// Digits at positions `1..=MAX_DEPTH`, tail included.
    pub(crate) fn word(&self) -> u128 {
        let mut word = self.digits;
        if let Some(n) = self.tail {
            for p in n..=MAX_DEPTH {
                word |= position_bit(p);
            }
        }
        word
    }

    pub(crate) fn raw_digits(&self) -> u128 {
        self.digits
    }

    pub(crate) fn from_raw(digits: u128, tail: Option<u32>) -> Self {
        Self::canonical(digits, tail)
    }

    pub fn digit(&self, position: u32) -> bool {
        match self.tail {
            Some(n) if position >= n => true,
            _ => position <= MAX_DEPTH && self.digits & position_bit(position) != 0,
        }
    }

    pub fn to_rational(&self) -> BigRational {
        let mut value = BigRational::zero();
        let three = BigInt::from(3);
        for p in self.positions() {
            value += BigRational::new(BigInt::from(2), three.pow(p));
        }
        if let Some(n) = self.tail {
            value += BigRational::new(BigInt::one(), three.pow(n - 1));
        }
        value
    }

    /// Recognizes rationals of the form `a / 3^m` whose ternary expansion uses
    /// only the digits 0 and 2, or ends in a single 1 (read as `0222...`).
    pub fn from_rational(value: &BigRational) -> Result<Self> {
        let err = || Error::InvalidArgument(format!("{value} is not an exactly representable Cantor point"));
        if value < &BigRational::zero() || value > &BigRational::one() {
            return Err(err());
        }
        let three = BigInt::from(3);
        let mut den = value.denom().clone();
        let mut m = 0u32;
        while den > BigInt::one() {
            if &den % &three != BigInt::zero() {
                return Err(err());
            }
            den /= &three;
            m += 1;
        }
        if value == &BigRational::one() {
            return Ok(Self::ONE);
        }
        let scaled = (value * BigRational::from_integer(three.pow(m))).to_integer();
        let mut digits: Vec<u8> = Vec::with_capacity(m as usize);
        let mut rest = scaled;
        for _ in 0..m {
            let d = (&rest % &three).to_string().parse::<u8>().expect("digit");
            digits.push(d);
            rest /= &three;
        }
        digits.reverse();
        let mut positions = Vec::new();
        let mut tail = None;
        for (i, &d) in digits.iter().enumerate() {
            let pos = i as u32 + 1;
            match d {
                0 => {}
                2 => positions.push(pos),
                _ if pos == m => tail = Some(pos + 1),
                _ => return Err(err()),
            }
        }
        TernaryPoint::new(positions, tail)
    }
}

impl fmt::Debug for TernaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&Point::Ternary(*self), f)
    }
}

impl Ord for TernaryPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word()
            .cmp(&other.word())
            .then_with(|| self.tail.is_some().cmp(&other.tail.is_some()))
    }
}

impl PartialOrd for TernaryPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An exact point of one of the two base spaces.
///
/// The derived order compares the space first, so it is only meaningful
/// between points of the same space; use [`Point::cmp_checked`] at API
/// boundaries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Dyadic(DyadicPoint),
    Ternary(TernaryPoint),
}

impl Point {
    pub fn dyadic(num: u128, exp: u32) -> Result<Self> {
        DyadicPoint::new(num, exp).map(Point::Dyadic)
    }

    pub fn ternary(positions: impl IntoIterator<Item = u32>, tail: Option<u32>) -> Result<Self> {
        TernaryPoint::new(positions, tail).map(Point::Ternary)
    }

    pub fn space(&self) -> Space {
        match self {
            Point::Dyadic(_) => Space::Interval,
            Point::Ternary(_) => Space::Cantor,
        }
    }

    pub fn is_min(&self) -> bool {
        *self == self.space().min_point()
    }

    pub fn is_max(&self) -> bool {
        *self == self.space().max_point()
    }

    pub fn same_space(&self, other: &Point) -> Result<()> {
        if self.space() == other.space() {
            Ok(())
        } else {
            Err(Error::MixedSpace { left: self.space(), right: other.space() })
        }
    }

    pub fn cmp_checked(&self, other: &Point) -> Result<Ordering> {
        self.same_space(other)?;
        Ok(self.cmp(other))
    }

    pub fn to_rational(&self) -> BigRational {
        match self {
            Point::Dyadic(d) => d.to_rational(),
            Point::Ternary(t) => t.to_rational(),
        }
    }

    pub fn as_dyadic(&self) -> Option<&DyadicPoint> {
        match self {
            Point::Dyadic(d) => Some(d),
            Point::Ternary(_) => None,
        }
    }

    pub fn as_ternary(&self) -> Option<&TernaryPoint> {
        match self {
            Point::Ternary(t) => Some(t),
            Point::Dyadic(_) => None,
        }
    }

    /// Parses the tagged forms `d:<num>/2^<exp>` and `t:{n1,n2,...}+tail<N>`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let err = |why: &str| Error::Parse(format!("bad point {text:?}: {why}"));
        if let Some(rest) = text.strip_prefix("d:") {
            let (num, exp) = rest.split_once("/2^").ok_or_else(|| err("expected d:<num>/2^<exp>"))?;
            let num: u128 = num.trim().parse().map_err(|_| err("numerator"))?;
            let exp: u32 = exp.trim().parse().map_err(|_| err("exponent"))?;
            return Point::dyadic(num, exp);
        }
        if let Some(rest) = text.strip_prefix("t:") {
            let rest = rest.trim();
            let close = rest.find('}').ok_or_else(|| err("missing '}'"))?;
            let body = rest
                .strip_prefix('{')
                .ok_or_else(|| err("missing '{'"))?
                .get(..close - 1)
                .unwrap_or("");
            let mut positions = Vec::new();
            for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                positions.push(part.parse::<u32>().map_err(|_| err("digit position"))?);
            }
            let after = rest[close + 1..].trim();
            let tail = if after.is_empty() {
                None
            } else {
                let n = after.strip_prefix("+tail").ok_or_else(|| err("expected +tail<N>"))?;
                Some(n.trim().parse::<u32>().map_err(|_| err("tail start"))?)
            };
            return Point::ternary(positions, tail);
        }
        Err(err("expected a d: or t: prefix"))
    }

    /// Accepts the tagged forms, or a plain rational `p/q` read as a point of `space`.
    pub fn parse_in(text: &str, space: Space) -> Result<Self> {
        let text = text.trim();
        let point = if text.starts_with("d:") || text.starts_with("t:") {
            Point::parse(text)?
        } else {
            let value = crate::scalar::parse_rational(text)?;
            Point::from_rational(&value, space)?
        };
        if point.space() != space {
            return Err(Error::MixedSpace { left: point.space(), right: space });
        }
        Ok(point)
    }

    pub fn from_rational(value: &BigRational, space: Space) -> Result<Self> {
        match space {
            Space::Interval => {
                let den = value.denom();
                let twos = den.trailing_zeros().unwrap_or(0);
                if (den >> twos as usize) != BigInt::one() {
                    return Err(Error::InvalidArgument(format!("{value} is not a dyadic rational")));
                }
                let num: u128 = value
                    .numer()
                    .try_into()
                    .map_err(|_| Error::InvalidArgument(format!("{value} lies outside [0,1]")))?;
                Point::dyadic(num, twos as u32)
            }
            Space::Cantor => TernaryPoint::from_rational(value).map(Point::Ternary),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Dyadic(d) => write!(f, "d:{}/2^{}", d.num, d.exp),
            Point::Ternary(t) => {
                let positions: Vec<String> = t.positions().iter().map(u32::to_string).collect();
                write!(f, "t:{{{}}}", positions.join(","))?;
                if let Some(n) = t.tail {
                    write!(f, "+tail{n}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Point::parse(&text).map_err(serde::de::Error::custom)
    }
}
