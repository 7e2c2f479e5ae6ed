//! Seeded random inputs for property runs and the command-line runner.
//!
//! Every generator draws from a `ChaCha8Rng`, so a seed fixes the corpus on
//! every platform.

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ideal::ZeroSetStage;
use crate::k0::ClopenCombination;
use crate::matrix::Matrix;
use crate::space::{DenseSequence, Point, Space, MAX_DEPTH};
use crate::step::StepFunction;
use crate::{Rational, RationalMatrix, RationalStepFunction, Result};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A point whose digits stop by `depth`. Cantor points get an all-2 tail a
/// quarter of the time.
pub fn point(rng: &mut impl Rng, space: Space, depth: u32) -> Point {
    let depth = depth.clamp(1, MAX_DEPTH);
    match space {
        Space::Interval => {
            let num = rng.gen_range(0..=1u128 << depth);
            Point::dyadic(num, depth).expect("numerator within range")
        }
        Space::Cantor => {
            let positions: Vec<u32> = (1..=depth).filter(|_| rng.gen_bool(0.5)).collect();
            let tail = rng.gen_bool(0.25).then(|| rng.gen_range(1..=depth + 1));
            Point::ternary(positions, tail).expect("positions within range")
        }
    }
}

/// An explicit sequence of `len` points below the maximum, with repeats
/// mixed in.
pub fn sequence(rng: &mut impl Rng, space: Space, len: usize, depth: u32) -> DenseSequence {
    let mut points: Vec<Point> = Vec::with_capacity(len);
    for _ in 0..len {
        if !points.is_empty() && rng.gen_bool(0.15) {
            let p = *points.choose(rng).expect("nonempty");
            points.push(p);
        } else {
            let p = loop {
                let p = point(rng, space, depth);
                if !p.is_max() {
                    break p;
                }
            };
            points.push(p);
        }
    }
    DenseSequence::explicit(points).expect("nonempty sequence")
}

fn small_rational(rng: &mut impl Rng, range: i64) -> Rational {
    Rational::from_integer(BigInt::from(rng.gen_range(-range..=range)))
}

pub fn matrix(rng: &mut impl Rng, dim: usize, range: i64) -> RationalMatrix {
    let rows = (0..dim).map(|_| (0..dim).map(|_| small_rational(rng, range)).collect()).collect();
    Matrix::from_rows(rows).expect("square")
}

/// A `2 x 2` rational matrix with operator norm at most 1: entries `p/q`
/// with `|p| <= q <= 8`, divided by the norm bound when that exceeds 1.
pub fn contraction(rng: &mut impl Rng) -> RationalMatrix {
    let rows = (0..2)
        .map(|_| {
            (0..2)
                .map(|_| {
                    let q = rng.gen_range(1..=8i64);
                    Rational::new(BigInt::from(rng.gen_range(-q..=q)), BigInt::from(q))
                })
                .collect()
        })
        .collect();
    let x: RationalMatrix = Matrix::from_rows(rows).expect("square");
    let bound = x.norm_upper();
    if bound > Rational::one() {
        x.scale(&(Rational::one() / bound))
    } else {
        x
    }
}

/// A step function with at most `pieces` pieces and integer entries in
/// `[-range, range]`.
pub fn step_function(
    rng: &mut impl Rng,
    space: Space,
    dim: usize,
    pieces: usize,
    depth: u32,
    range: i64,
) -> RationalStepFunction {
    let mut breaks: Vec<Point> = (1..pieces.max(1)).map(|_| point(rng, space, depth)).collect();
    breaks.push(space.min_point());
    breaks.sort();
    breaks.dedup();
    let parts = breaks.into_iter().map(|p| (p, matrix(rng, dim, range))).collect();
    StepFunction::new(space, dim, parts).expect("valid pieces")
}

/// A step function that vanishes from `cut` on.
pub fn step_function_below(
    rng: &mut impl Rng,
    cut: &Point,
    dim: usize,
    pieces: usize,
    depth: u32,
    range: i64,
) -> Result<RationalStepFunction> {
    let f = step_function(rng, cut.space(), dim, pieces, depth, range);
    if cut.is_min() {
        return Ok(StepFunction::zero(cut.space(), dim));
    }
    let mask = StepFunction::indicator(cut.space().min_point(), *cut, Matrix::identity(dim))?;
    f.mul(&mask)
}

/// `h* h` for a random `h` vanishing from `cut`, together with `h`.
pub fn positive_below(
    rng: &mut impl Rng,
    cut: &Point,
    dim: usize,
    pieces: usize,
    depth: u32,
) -> Result<(RationalStepFunction, RationalStepFunction)> {
    let h = step_function_below(rng, cut, dim, pieces, depth, 3)?;
    Ok((h.adjoint().mul(&h)?, h))
}

/// A nonzero element of the span of `1_{A_1}, ..., 1_{A_{2^level - 1}}`.
pub fn k0_element(rng: &mut impl Rng, level: u32, range: i64) -> ClopenCombination<BigInt> {
    let size = 1usize << level;
    loop {
        let mut coeffs: Vec<BigInt> = (0..size)
            .map(|_| if rng.gen_bool(0.6) { BigInt::from(rng.gen_range(-range..=range)) } else { BigInt::from(0) })
            .collect();
        coeffs[size - 1] = BigInt::from(0);
        let g = ClopenCombination::from_coeffs(level, coeffs).expect("sized");
        if !g.is_zero() {
            return g;
        }
    }
}

/// An up-set `[t, max T]` joined with a few scattered intervals above `t`.
pub fn zero_set(rng: &mut impl Rng, space: Space, depth: u32) -> ZeroSetStage {
    let t = point(rng, space, depth);
    let mut intervals = vec![(t, t)];
    for _ in 0..rng.gen_range(0..4) {
        let mut a = point(rng, space, depth);
        let mut b = point(rng, space, depth);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        if a >= t {
            intervals.push((a, b));
        }
    }
    ZeroSetStage::new(space, intervals).expect("same space")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_reproduce() {
        let a = sequence(&mut rng(7), Space::Cantor, 20, 10);
        let b = sequence(&mut rng(7), Space::Cantor, 20, 10);
        assert_eq!(a, b);
        let f = step_function(&mut rng(3), Space::Interval, 2, 4, 6, 5);
        assert_eq!(f, step_function(&mut rng(3), Space::Interval, 2, 4, 6, 5));
    }

    #[test]
    fn generated_objects_meet_their_contracts() {
        let mut r = rng(11);
        for _ in 0..50 {
            let cut = point(&mut r, Space::Interval, 6);
            let (f, _) = positive_below(&mut r, &cut, 2, 3, 6).unwrap();
            assert!(f.is_positive() && f.vanishes_from(&cut));
            let g = k0_element(&mut r, 4, 9);
            assert!(g.vanishes_at_top() && !g.is_zero());
            let x = contraction(&mut r);
            assert!(x.norm_upper() <= Rational::one());
        }
    }
}
