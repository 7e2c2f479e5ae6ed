//! Matrix-valued step functions on a base space: the stage algebras
//! `C_0(T_0, M_{2^n})` realized on piecewise-constant functions.
//!
//! A function is a list of pieces `(from, value)`; piece `i` covers
//! `[from_i, from_{i+1})` and the last piece runs up to and including
//! `max T`. The first piece always starts at `min T`. Adjacent pieces never
//! carry equal values, so structural equality is equality of functions.

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::space::{Point, Space, ThresholdMap};
use crate::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct StepFunction<S> {
    space: Space,
    dim: usize,
    pieces: Vec<(Point, Matrix<S>)>,
}

impl<S: Scalar> StepFunction<S> {
    pub fn new(space: Space, dim: usize, pieces: Vec<(Point, Matrix<S>)>) -> Result<Self> {
        let Some((first, _)) = pieces.first() else {
            return Err(Error::InvalidArgument("a step function needs at least one piece".into()));
        };
        if *first != space.min_point() {
            return Err(Error::InvalidArgument(format!("first piece must start at {}", space.min_point())));
        }
        for (from, value) in &pieces {
            if from.space() != space {
                return Err(Error::MixedSpace { left: space, right: from.space() });
            }
            if value.dim() != dim {
                return Err(Error::StageMismatch { expected: dim, found: value.dim() });
            }
        }
        if pieces.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument("breakpoints must increase strictly".into()));
        }
        Ok(Self::normalized(space, dim, pieces))
    }

    fn normalized(space: Space, dim: usize, pieces: Vec<(Point, Matrix<S>)>) -> Self {
        let mut out: Vec<(Point, Matrix<S>)> = Vec::with_capacity(pieces.len());
        for (from, value) in pieces {
            match out.last() {
                Some((_, last)) if *last == value => {}
                _ => out.push((from, value)),
            }
        }
        StepFunction { space, dim, pieces: out }
    }

    pub fn constant(space: Space, value: Matrix<S>) -> Self {
        let dim = value.dim();
        StepFunction { space, dim, pieces: vec![(space.min_point(), value)] }
    }

    pub fn zero(space: Space, dim: usize) -> Self {
        Self::constant(space, Matrix::zeros(dim))
    }

    /// `value` on `[lower, upper)`, zero elsewhere.
    pub fn indicator(lower: Point, upper: Point, value: Matrix<S>) -> Result<Self> {
        lower.same_space(&upper)?;
        let space = lower.space();
        let dim = value.dim();
        let zero = Matrix::zeros(dim);
        let mut pieces = Vec::new();
        if !lower.is_min() {
            pieces.push((space.min_point(), zero.clone()));
        }
        pieces.push((lower, value));
        pieces.push((upper, zero));
        if lower >= upper {
            return Err(Error::InvalidArgument(format!("empty indicator range [{lower}, {upper})")));
        }
        Self::new(space, dim, pieces)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `n` with `dim = 2^n`, if the size is a power of two.
    pub fn stage(&self) -> Option<u32> {
        self.dim.is_power_of_two().then(|| self.dim.trailing_zeros())
    }

    pub fn pieces(&self) -> &[(Point, Matrix<S>)] {
        &self.pieces
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = &Point> {
        self.pieces.iter().map(|(p, _)| p)
    }

    fn piece_index(&self, t: &Point) -> usize {
        self.pieces.partition_point(|(from, _)| from <= t) - 1
    }

    pub fn evaluate(&self, t: &Point) -> Result<&Matrix<S>> {
        if t.space() != self.space {
            return Err(Error::MixedSpace { left: self.space, right: t.space() });
        }
        Ok(&self.pieces[self.piece_index(t)].1)
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].1.is_zero()
    }

    /// Membership in `C_0(T_0, ·)`: the value at `max T` is zero.
    pub fn vanishes_at_top(&self) -> bool {
        self.pieces.last().map(|(_, v)| v.is_zero()).unwrap_or(true)
    }

    /// Whether `f(s) = 0` for every `s >= t`.
    pub fn vanishes_from(&self, t: &Point) -> bool {
        let first = self.piece_index(t);
        self.pieces[first..].iter().all(|(_, v)| v.is_zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::MixedSpace { left: self.space, right: other.space });
        }
        if self.dim != other.dim {
            return Err(Error::StageMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// Pointwise combination over the common refinement of breakpoints.
    pub fn zip_with(
        &self,
        other: &Self,
        dim: usize,
        op: impl Fn(&Matrix<S>, &Matrix<S>) -> Result<Matrix<S>>,
    ) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::MixedSpace { left: self.space, right: other.space });
        }
        let mut points: Vec<Point> = self.breakpoints().chain(other.breakpoints()).copied().collect();
        points.sort();
        points.dedup();
        let mut pieces = Vec::with_capacity(points.len());
        for p in points {
            let v = op(&self.pieces[self.piece_index(&p)].1, &other.pieces[other.piece_index(&p)].1)?;
            pieces.push((p, v));
        }
        Ok(Self::normalized(self.space, dim, pieces))
    }

    pub fn map(&self, op: impl Fn(&Matrix<S>) -> Matrix<S>) -> Self {
        let pieces: Vec<(Point, Matrix<S>)> = self.pieces.iter().map(|(p, v)| (*p, op(v))).collect();
        let dim = pieces[0].1.dim();
        Self::normalized(self.space, dim, pieces)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        self.zip_with(other, self.dim, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        self.zip_with(other, self.dim, |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        self.zip_with(other, self.dim, |a, b| a.mul(b))
    }

    pub fn scale(&self, factor: &S) -> Self {
        self.map(|v| v.scale(factor))
    }

    pub fn adjoint(&self) -> Self {
        self.map(Matrix::adjoint)
    }

    /// `f o chi_s`: the value `f(s)` on `[min T, s]`, unchanged above `s`.
    pub fn pullback_chi(&self, s: &ThresholdMap) -> Result<Self> {
        let s = s.threshold();
        if s.space() != self.space {
            return Err(Error::MixedSpace { left: self.space, right: s.space() });
        }
        let at = self.piece_index(s);
        let mut pieces = Vec::with_capacity(self.pieces.len() - at);
        pieces.push((self.space.min_point(), self.pieces[at].1.clone()));
        pieces.extend(self.pieces[at + 1..].iter().cloned());
        Ok(Self::normalized(self.space, self.dim, pieces))
    }

    /// Largest Frobenius-squared value over the pieces.
    pub fn sup_frobenius_sq(&self) -> S {
        let mut best = S::zero();
        for (_, v) in &self.pieces {
            let f = v.frobenius_sq();
            if f > best {
                best = f;
            }
        }
        best
    }

    /// An upper bound on the sup-norm: the largest per-piece Frobenius norm,
    /// with the square root rounded up.
    pub fn norm_upper(&self) -> S {
        self.sup_frobenius_sq().sqrt_upper()
    }

    /// `E(f)(t) = 2^{-n} Tr f(t)`, returned as a scalar (size 1) function.
    pub fn conditional_expectation(&self) -> Self {
        let inv = S::one() / S::from_i64(self.dim as i64);
        self.map(|v| Matrix::scalar(v.trace() * inv.clone()))
    }

    /// `diag(f_1, ..., f_k)` over the common refinement.
    pub fn block_diagonal(blocks: &[StepFunction<S>]) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(Error::InvalidArgument("block diagonal of nothing".into()));
        };
        let space = first.space;
        let mut points: Vec<Point> = Vec::new();
        for b in blocks {
            if b.space != space {
                return Err(Error::MixedSpace { left: space, right: b.space });
            }
            points.extend(b.breakpoints().copied());
        }
        points.sort();
        points.dedup();
        let dim = blocks.iter().map(|b| b.dim).sum();
        let pieces = points
            .into_iter()
            .map(|p| {
                let values: Vec<Matrix<S>> = blocks.iter().map(|b| b.pieces[b.piece_index(&p)].1.clone()).collect();
                (p, Matrix::block_diagonal(&values))
            })
            .collect();
        Ok(Self::normalized(space, dim, pieces))
    }

    /// The diagonal block `offset .. offset + size` as its own function.
    pub fn block(&self, offset: usize, size: usize) -> Self {
        let pieces = self.pieces.iter().map(|(p, v)| (*p, v.block(offset, size))).collect();
        Self::normalized(self.space, size, pieces)
    }

    /// Pointwise positive semidefinite values.
    pub fn is_positive(&self) -> bool {
        self.pieces.iter().all(|(_, v)| v.is_positive())
    }
}

impl<S: Scalar> std::fmt::Debug for StepFunction<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StepFunction").field("space", &self.space).field("dim", &self.dim).field("pieces", &self.pieces).finish()
    }
}

#[derive(Serialize)]
#[serde(bound = "")]
struct PieceOut<'a, S: Scalar> {
    from: &'a Point,
    value: &'a Matrix<S>,
}

impl<S: Scalar> Serialize for StepFunction<S> {
    fn serialize<Ser: serde::Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut st = serializer.serialize_struct("StepFunction", 3)?;
        st.serialize_field("stage", &self.stage())?;
        st.serialize_field("dim", &self.dim)?;
        let pieces: Vec<PieceOut<'_, S>> = self.pieces.iter().map(|(from, value)| PieceOut { from, value }).collect();
        st.serialize_field("pieces", &pieces)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn d(num: u128, exp: u32) -> Point {
        Point::dyadic(num, exp).unwrap()
    }

    fn scalar_indicator(lo: Point, hi: Point) -> StepFunction<Rational> {
        StepFunction::indicator(lo, hi, Matrix::scalar(q(1, 1))).unwrap()
    }

    #[test]
    fn additive_identity() {
        let f = scalar_indicator(d(1, 1), d(3, 2));
        let zero = StepFunction::zero(Space::Interval, 1);
        assert_eq!(f.add(&zero).unwrap(), f);
    }

    #[test]
    fn orthogonal_constants_multiply_to_zero() {
        let p = StepFunction::constant(Space::Interval, Matrix::diagonal(vec![q(1, 1), q(0, 1)]));
        let r = StepFunction::constant(Space::Interval, Matrix::diagonal(vec![q(0, 1), q(1, 1)]));
        assert!(p.mul(&r).unwrap().is_zero());
    }

    #[test]
    fn stage_mismatch_is_rejected() {
        let a = StepFunction::<Rational>::zero(Space::Interval, 2);
        let b = StepFunction::<Rational>::zero(Space::Interval, 4);
        assert!(matches!(a.add(&b), Err(Error::StageMismatch { .. })));
    }

    #[test]
    fn pullback_by_minimum_is_identity() {
        let f = scalar_indicator(d(1, 4), d(1, 1));
        let id = ThresholdMap::identity(Space::Interval);
        assert_eq!(f.pullback_chi(&id).unwrap(), f);
    }

    #[test]
    fn pullback_raises_value_below_threshold() {
        // 1 on [1/2, 1), 0 at 1; pulled back by chi_{3/4} it is 1 on [0, 1).
        let f = scalar_indicator(d(1, 1), d(1, 0));
        let g = f.pullback_chi(&ThresholdMap::new(d(3, 2))).unwrap();
        let expected = scalar_indicator(d(0, 0), d(1, 0));
        assert_eq!(g, expected);
    }

    #[test]
    fn pullback_kills_support_below_threshold() {
        let f = scalar_indicator(d(0, 0), d(1, 2));
        let g = f.pullback_chi(&ThresholdMap::new(d(1, 1))).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn norms() {
        assert_eq!(StepFunction::<Rational>::zero(Space::Interval, 2).norm_upper(), q(0, 1));
        let f = StepFunction::constant(Space::Interval, Matrix::diagonal(vec![q(3, 1), q(4, 1)]));
        assert_eq!(f.norm_upper(), q(5, 1));
    }

    #[test]
    fn expectation_of_diag() {
        let f = StepFunction::constant(Space::Interval, Matrix::diagonal(vec![q(2, 1), q(0, 1)]));
        let e = f.conditional_expectation();
        assert_eq!(e, StepFunction::constant(Space::Interval, Matrix::scalar(q(1, 1))));
        assert!(StepFunction::<Rational>::zero(Space::Interval, 4).conditional_expectation().is_zero());
    }

    #[test]
    fn vanishing_at_top() {
        assert!(scalar_indicator(d(1, 1), d(1, 0)).vanishes_at_top());
        let c = StepFunction::constant(Space::Interval, Matrix::scalar(q(1, 1)));
        assert!(!c.vanishes_at_top());
    }

    #[test]
    fn evaluation_uses_half_open_pieces() {
        let f = scalar_indicator(d(1, 2), d(1, 1));
        assert!(f.evaluate(&d(1, 2)).unwrap().get(0, 0) == &q(1, 1));
        assert!(f.evaluate(&d(1, 4)).unwrap().is_zero());
        assert!(f.evaluate(&d(1, 1)).unwrap().is_zero());
        assert!(f.evaluate(&Point::ternary([1], None).unwrap()).is_err());
    }

    #[test]
    fn json_shape() {
        let f = scalar_indicator(d(1, 2), d(1, 1));
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["stage"], 0);
        assert_eq!(v["pieces"][1]["from"], "d:1/2^2");
        assert_eq!(v["pieces"][1]["value"][0][0], "1/1");
    }
}
