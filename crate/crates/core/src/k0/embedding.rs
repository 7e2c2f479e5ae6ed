use serde::Serialize;

use crate::morphism::DiagonalMorphism;
use crate::scalar::Scalar;
use crate::space::{lambda_map, lambda_min_preimage, DenseSequence, Point, Space};
use crate::step::StepFunction;
use crate::{Error, Result};

/// `f o lambda`: a step function on `[0,1]` read on the Cantor set.
/// A piece starting at `a` starts at the least preimage of `a`.
pub fn pullback_lambda<S: Scalar>(f: &StepFunction<S>) -> Result<StepFunction<S>> {
    if f.space() != Space::Interval {
        return Err(Error::MixedSpace { left: Space::Interval, right: f.space() });
    }
    let pieces = f
        .pieces()
        .iter()
        .map(|(from, value)| Ok((lambda_min_preimage(from)?, value.clone())))
        .collect::<Result<Vec<_>>>()?;
    StepFunction::new(Space::Cantor, f.dim(), pieces)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub n: usize,
    pub m: usize,
    pub functions: usize,
    /// `s_j = lambda(t_j)` for `j` up to this bound.
    pub sequence_terms_checked: usize,
    pub sequence_mismatches: Vec<usize>,
    /// Functions whose images under the two routes differ.
    pub intertwining_failures: Vec<usize>,
    /// Functions where `f o lambda` disagrees with `f` at `lambda(x)` on a
    /// sample point `x`.
    pub pointwise_failures: Vec<usize>,
    /// Pairs of distinct functions with equal images.
    pub collisions: Vec<(usize, usize)>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.sequence_mismatches.is_empty()
            && self.intertwining_failures.is_empty()
            && self.pointwise_failures.is_empty()
            && self.collisions.is_empty()
    }
}

/// Checks that `lambda^#` intertwines the canonical maps of the interval
/// and Cantor systems from stage `n` to stage `m`, and that it separates
/// the given functions.
pub fn lambda_sharp_check<S: Scalar>(
    functions: &[StepFunction<S>],
    n: usize,
    m: usize,
    samples: &[Point],
) -> Result<EmbeddingReport> {
    let dyadic = DenseSequence::CanonicalDyadic;
    let ternary = DenseSequence::CanonicalTernary;
    let phi = DiagonalMorphism::canonical(&dyadic, n, m)?;
    let psi = DiagonalMorphism::canonical(&ternary, n, m)?;

    let terms = m.max(64);
    let mut report = EmbeddingReport { n, m, functions: functions.len(), sequence_terms_checked: terms, ..Default::default() };
    for j in 1..=terms {
        if lambda_map(&ternary.point(j))? != dyadic.point(j) {
            report.sequence_mismatches.push(j);
        }
    }

    let mut images = Vec::with_capacity(functions.len());
    for (idx, f) in functions.iter().enumerate() {
        let lifted = pullback_lambda(f)?;
        let lhs = pullback_lambda(&phi.apply(f)?)?;
        let rhs = psi.apply(&lifted)?;
        if lhs != rhs {
            report.intertwining_failures.push(idx);
        }
        for x in samples {
            if lifted.evaluate(x)? != f.evaluate(&lambda_map(x)?)? {
                report.pointwise_failures.push(idx);
                break;
            }
        }
        images.push(lifted);
    }
    for a in 0..functions.len() {
        for b in a + 1..functions.len() {
            if functions[a] != functions[b] && images[a] == images[b] {
                report.collisions.push((a, b));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LambdaPointReport {
    pub cantor_points: usize,
    pub interval_points: usize,
    /// Adjacent sorted Cantor points where `lambda` decreases.
    pub monotonicity_failures: Vec<(Point, Point)>,
    /// `d` with `lambda(min_preimage(d)) != d`.
    pub section_failures: Vec<Point>,
    /// `(x, d)` where `x >= min_preimage(d)` and `lambda(x) >= d` disagree.
    pub least_preimage_failures: Vec<(Point, Point)>,
}

impl LambdaPointReport {
    pub fn passed(&self) -> bool {
        self.monotonicity_failures.is_empty() && self.section_failures.is_empty() && self.least_preimage_failures.is_empty()
    }
}

/// Checks that `lambda` is monotone on `xs`, that the least preimage is a
/// section on `ds`, and that it is the least one against every `x`.
pub fn lambda_point_checks(xs: &[Point], ds: &[Point]) -> Result<LambdaPointReport> {
    let mut sorted = xs.to_vec();
    sorted.sort();
    let images = sorted.iter().map(lambda_map).collect::<Result<Vec<_>>>()?;
    let mut report = LambdaPointReport { cantor_points: xs.len(), interval_points: ds.len(), ..Default::default() };
    for i in 1..sorted.len() {
        if images[i - 1] > images[i] {
            report.monotonicity_failures.push((sorted[i - 1], sorted[i]));
        }
    }
    for d in ds {
        let x0 = lambda_min_preimage(d)?;
        if lambda_map(&x0)? != *d {
            report.section_failures.push(*d);
        }
        for (x, image) in sorted.iter().zip(&images) {
            if (*x >= x0) != (image >= d) {
                report.least_preimage_failures.push((*x, *d));
            }
        }
    }
    Ok(report)
}
