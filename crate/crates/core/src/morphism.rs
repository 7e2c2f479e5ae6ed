//! Connecting maps of the inductive systems.
//!
//! A [`DiagonalMorphism`] from stage `n` to stage `m` is a list of `2^{m-n}`
//! thresholds; it sends `f` to the block diagonal of `f o chi_u` over its
//! slots `u`. The canonical map `phi_{m,n}` lists `max F` for the subsets
//! `F` of `{t_n, ..., t_{m-1}}` in binary-counter order: slot `mask` holds
//! the maximum of the terms `t_{n+i}` with bit `i` of `mask` set, and the
//! empty set gives `min T`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::matrix::Matrix;
use crate::scalar::rational_to_string;
use crate::space::{DenseSequence, Point, Space, ThresholdMap};
use crate::step::StepFunction;
use crate::trace::ser_rational;
use crate::{Error, Rational, RationalMatrix, RationalStepFunction, Result, Scalar};

/// Largest `m - n` for which slot lists are materialized.
pub const MAX_SLOT_BITS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalMorphism {
    n: usize,
    m: usize,
    slots: Vec<Point>,
}

impl DiagonalMorphism {
    /// A morphism with the given slots; their number must be `2^{m-n}`.
    pub fn from_slots(n: usize, slots: Vec<Point>) -> Result<Self> {
        let count = slots.len();
        if !count.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("{count} slots is not a power of two")));
        }
        let space = slots[0].space();
        for s in &slots {
            if s.space() != space {
                return Err(Error::MixedSpace { left: space, right: s.space() });
            }
        }
        let m = n + count.trailing_zeros() as usize;
        Ok(DiagonalMorphism { n, m, slots })
    }

    pub fn identity(space: Space, n: usize) -> Self {
        DiagonalMorphism { n, m: n, slots: vec![space.min_point()] }
    }

    /// The canonical `phi_{m,n}`.
    pub fn canonical(seq: &DenseSequence, n: usize, m: usize) -> Result<Self> {
        if n == 0 || m < n {
            return Err(Error::InvalidArgument(format!("need 1 <= n <= m, got n = {n}, m = {m}")));
        }
        let k = m - n;
        if k > MAX_SLOT_BITS {
            return Err(Error::InvalidArgument(format!("2^{k} slots is too many to list")));
        }
        let mut slots = Vec::with_capacity(1 << k);
        slots.push(seq.space().min_point());
        for (i, t) in seq.window(n, k).into_iter().enumerate() {
            // Masks in [2^i, 2^{i+1}) add t_{n+i} to a mask below 2^i.
            for low in 0..1usize << i {
                let top = slots[low].max(t);
                slots.push(top);
            }
        }
        Ok(DiagonalMorphism { n, m, slots })
    }

    pub fn source(&self) -> usize {
        self.n
    }

    pub fn target(&self) -> usize {
        self.m
    }

    pub fn space(&self) -> Space {
        self.slots[0].space()
    }

    pub fn slots(&self) -> &[Point] {
        &self.slots
    }

    /// Slot multisets agree, i.e. the maps agree up to a block permutation.
    pub fn same_multiset(&self, other: &Self) -> bool {
        let mut a = self.slots.clone();
        let mut b = other.slots.clone();
        a.sort();
        b.sort();
        self.n == other.n && self.m == other.m && a == b
    }

    /// `self o inner`. Slot `a * 2^{m-n} + b` is `max(u_a, v_b)` for outer
    /// slot `u_a` and inner slot `v_b`, which reproduces the canonical
    /// counter order when both factors are canonical.
    pub fn compose(&self, inner: &DiagonalMorphism) -> Result<Self> {
        if inner.m != self.n {
            return Err(Error::InvalidArgument(format!(
                "cannot compose: inner ends at stage {}, outer starts at stage {}",
                inner.m, self.n
            )));
        }
        if self.space() != inner.space() {
            return Err(Error::MixedSpace { left: self.space(), right: inner.space() });
        }
        let mut slots = Vec::with_capacity(self.slots.len() * inner.slots.len());
        for u in &self.slots {
            for v in &inner.slots {
                slots.push(*u.max(v));
            }
        }
        Ok(DiagonalMorphism { n: inner.n, m: self.m, slots })
    }

    fn check_source<S: Scalar>(&self, f: &StepFunction<S>) -> Result<()> {
        if f.dim() != 1 << self.n {
            return Err(Error::StageMismatch { expected: 1 << self.n, found: f.dim() });
        }
        if f.space() != self.space() {
            return Err(Error::MixedSpace { left: self.space(), right: f.space() });
        }
        Ok(())
    }

    /// The blocks `f o chi_u`, one per slot.
    pub fn blocks<S: Scalar>(&self, f: &StepFunction<S>) -> Result<Vec<StepFunction<S>>> {
        self.check_source(f)?;
        self.slots.iter().map(|u| f.pullback_chi(&ThresholdMap::new(*u))).collect()
    }

    pub fn apply<S: Scalar>(&self, f: &StepFunction<S>) -> Result<StepFunction<S>> {
        StepFunction::block_diagonal(&self.blocks(f)?)
    }
}

/// `psi(f) = diag(f, ..., f, f o chi_t)` with `l` plain copies, from size
/// `k` to size `(l + 1) k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodearlMorphism {
    size: usize,
    multiplicity: usize,
    threshold: Point,
}

impl GoodearlMorphism {
    pub fn new(size: usize, multiplicity: usize, threshold: Point) -> Result<Self> {
        if size == 0 || multiplicity == 0 {
            return Err(Error::InvalidArgument("sizes and multiplicities must be positive".into()));
        }
        Ok(GoodearlMorphism { size, multiplicity, threshold })
    }

    pub fn source_size(&self) -> usize {
        self.size
    }

    pub fn target_size(&self) -> usize {
        (self.multiplicity + 1) * self.size
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn threshold(&self) -> &Point {
        &self.threshold
    }

    pub fn apply<S: Scalar>(&self, f: &StepFunction<S>) -> Result<StepFunction<S>> {
        if f.dim() != self.size {
            return Err(Error::StageMismatch { expected: self.size, found: f.dim() });
        }
        let mut blocks = vec![f.clone(); self.multiplicity];
        blocks.push(f.pullback_chi(&ThresholdMap::new(self.threshold))?);
        StepFunction::block_diagonal(&blocks)
    }
}

/// The tower `k_1 = 1`, `k_{j+1} = (l_j + 1) k_j` of Goodearl maps along
/// `t_1, t_2, ...`.
pub fn goodearl_tower(
    seq: &DenseSequence,
    multiplicity: impl Fn(usize) -> usize,
    depth: usize,
) -> Result<Vec<GoodearlMorphism>> {
    let mut size = 1;
    let mut out = Vec::with_capacity(depth);
    for j in 1..=depth {
        let psi = GoodearlMorphism::new(size, multiplicity(j), seq.point(j))?;
        size = psi.target_size();
        out.push(psi);
    }
    Ok(out)
}

/// Constant step function holding a permutation matrix that swaps block
/// `j` with block `pairing[j]`.
fn block_permutation(space: Space, block: usize, pairing: &[usize]) -> RationalStepFunction {
    let dim = block * pairing.len();
    let mut p = Matrix::zeros(dim);
    for (j, &target) in pairing.iter().enumerate() {
        for d in 0..block {
            p.set(target * block + d, j * block + d, Rational::one());
        }
    }
    StepFunction::constant(space, p)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityWitness {
    pub n: usize,
    pub m: usize,
    /// Slots whose subsets contain `t_{m-1}`; `f` vanishes after composing.
    pub zero_slots: Vec<usize>,
    /// `pairing[j]` is the slot that block `j` is moved to; an involution
    /// swapping each slot `j` without `t_{m-1}` with `j + 2^{m-n-1}`.
    pub pairing: Vec<usize>,
    pub phi_f: RationalStepFunction,
    pub g: RationalStepFunction,
    /// The partial isometry with `x* x = g`, `x x* = phi(f)`, when a root
    /// of `f` was supplied.
    pub x: Option<RationalStepFunction>,
}

impl StabilityWitness {
    /// Rechecks every claimed identity from the stored matrices.
    pub fn verify(&self) -> Result<bool> {
        let orthogonal = self.g.mul(&self.phi_f)?.is_zero() && self.phi_f.mul(&self.g)?.is_zero();
        let positive = self.g.is_positive();
        let half = 2 * self.zero_slots.len() >= self.pairing.len();
        let partial_isometry = match &self.x {
            Some(x) => x.adjoint().mul(x)? == self.g && x.mul(&x.adjoint())? == self.phi_f,
            None => true,
        };
        Ok(orthogonal && positive && half && partial_isometry)
    }
}

/// Builds the comparison witness for a positive `f` at stage `n` that
/// vanishes on `[t_{m-1}, max T]`.
///
/// With `root = Some(h)` where `f = h* h`, the witness also carries
/// `x = phi(h)* P` for the slot swap `P`; then `x x* = phi(f)` and
/// `x* x = P phi(h h*) P =: g`. Without a root, `g = P phi(f) P`.
pub fn stability_witness(
    seq: &DenseSequence,
    n: usize,
    m: usize,
    f: &RationalStepFunction,
    root: Option<&RationalStepFunction>,
) -> Result<StabilityWitness> {
    if m <= n {
        return Err(Error::InvalidArgument(format!("need m > n, got n = {n}, m = {m}")));
    }
    if !f.is_positive() {
        return Err(Error::Precondition("f is not positive".into()));
    }
    let last = seq.point(m - 1);
    if let Some((from, _)) = f.pieces().iter().find(|(from, v)| !v.is_zero() && piece_reaches(f, from, &last)) {
        return Err(Error::Precondition(format!(
            "f is nonzero on the piece starting at {from}, which meets [t_{}, max T] = [{last}, max T]",
            m - 1
        )));
    }
    if let Some(h) = root {
        if h.adjoint().mul(h)? != *f {
            return Err(Error::Precondition("the supplied root h does not satisfy h* h = f".into()));
        }
    }
    let phi = DiagonalMorphism::canonical(seq, n, m)?;
    let count = phi.slots.len();
    let top_bit = count / 2;
    let zero_slots: Vec<usize> = (0..count).filter(|j| j & top_bit != 0).collect();
    let pairing: Vec<usize> = (0..count).map(|j| j ^ top_bit).collect();
    let phi_f = phi.apply(f)?;
    let p = block_permutation(f.space(), f.dim(), &pairing);
    for &j in &zero_slots {
        if !phi_f.block(j * f.dim(), f.dim()).is_zero() {
            return Err(Error::InternalInconsistency(format!("slot {j} contains t_{} but is nonzero", m - 1)));
        }
    }
    let (g, x) = match root {
        Some(h) => {
            let x = phi.apply(h)?.adjoint().mul(&p)?;
            (x.adjoint().mul(&x)?, Some(x))
        }
        None => (p.mul(&phi_f)?.mul(&p)?, None),
    };
    let witness = StabilityWitness { n, m, zero_slots, pairing, phi_f, g, x };
    if !witness.verify()? {
        return Err(Error::InternalInconsistency("stability witness failed its own checks".into()));
    }
    Ok(witness)
}

/// Whether the piece of `f` starting at `from` contains a point `>= t`.
fn piece_reaches<S: Scalar>(f: &StepFunction<S>, from: &Point, t: &Point) -> bool {
    let next = f.pieces().iter().map(|(p, _)| p).find(|p| *p > from);
    match next {
        Some(end) => end > t,
        None => true,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxDivisibilityWitness {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    /// Every `h` stays within `epsilon / 2` (Frobenius) of `h(min T)` on
    /// `[min T, delta)`; `None` when no piece ever leaves that ball.
    pub delta: Option<Point>,
    /// `t_n, ..., t_m` in increasing order.
    pub sorted: Vec<Point>,
    /// Per function: `sup_t |h(t) - h(max(t, s_1))|_F^2`, the squared
    /// defect of the only pair whose two slots differ.
    #[serde(serialize_with = "ser_rationals")]
    pub defects: Vec<Rational>,
}

fn ser_rationals<Ser: serde::Serializer>(values: &[Rational], serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
    let text: Vec<String> = values.iter().map(rational_to_string).collect();
    text.serialize(serializer)
}

impl ApproxDivisibilityWitness {
    /// `s_1`, the smallest threshold among `t_n, ..., t_m`.
    pub fn first_threshold(&self) -> &Point {
        &self.sorted[0]
    }

    /// Whether every pair defect is at most `epsilon^2`, which bounds
    /// `|[lambda(x), phi(h)]|_F` by `epsilon |x|_F` for all `x` in `M_2`.
    pub fn certified(&self) -> bool {
        let eps_sq = &self.epsilon * &self.epsilon;
        self.defects.iter().all(|d| *d <= eps_sq)
    }

    /// Canonical slot masks listed in the reordered sequence
    /// `F_1 = ∅, F_2, ..., F_{2^k}` where subsets are grouped by the sorted
    /// position of their maximum.
    pub fn slot_order(&self, seq: &DenseSequence) -> Result<Vec<usize>> {
        if self.k > MAX_SLOT_BITS {
            return Err(Error::InvalidArgument(format!("2^{} slots is too many to list", self.k)));
        }
        let window = seq.window(self.n, self.k);
        let mut rank: Vec<usize> = (0..self.k).collect();
        rank.sort_by(|&a, &b| window[a].cmp(&window[b]).then(a.cmp(&b)));
        let mut position = vec![0; self.k];
        for (r, &i) in rank.iter().enumerate() {
            position[i] = r + 1;
        }
        let mut order: Vec<usize> = (0..1usize << self.k).collect();
        let key = |mask: usize| (0..self.k).filter(|i| mask >> i & 1 == 1).map(|i| position[i]).max().unwrap_or(0);
        order.sort_by_key(|&mask| (key(mask), mask));
        Ok(order)
    }

    /// The commutator `[x ⊗ 1, diag(h, h o chi_{s_1})]` of the first pair.
    pub fn first_pair_commutator(&self, x: &RationalMatrix, h: &RationalStepFunction) -> Result<RationalStepFunction> {
        let lifted = StepFunction::constant(h.space(), x.kron(&Matrix::identity(h.dim())));
        let pair = StepFunction::block_diagonal(&[h.clone(), h.pullback_chi(&ThresholdMap::new(self.sorted[0]))?])?;
        lifted.mul(&pair)?.sub(&pair.mul(&lifted)?)
    }

    /// Checks `sup |[lambda(x), phi(h)]|_F^2 <= epsilon^2 |x|_F^2` for one
    /// `x`, using that pairs beyond the first have equal slots and commute.
    pub fn check_contraction(&self, x: &RationalMatrix, h: &RationalStepFunction) -> Result<bool> {
        if x.dim() != 2 {
            return Err(Error::StageMismatch { expected: 2, found: x.dim() });
        }
        let lhs = self.first_pair_commutator(x, h)?.sup_frobenius_sq();
        Ok(lhs <= &self.epsilon * &self.epsilon * x.frobenius_sq())
    }

    /// The full commutator at stage `n + k`, with blocks in the reordered
    /// slot sequence and `lambda(x) = 1 ⊗ x ⊗ 1`.
    pub fn full_commutator(
        &self,
        seq: &DenseSequence,
        x: &RationalMatrix,
        h: &RationalStepFunction,
    ) -> Result<RationalStepFunction> {
        let phi = DiagonalMorphism::canonical(seq, self.n, self.n + self.k)?;
        let blocks = phi.blocks(h)?;
        let ordered: Vec<RationalStepFunction> =
            self.slot_order(seq)?.into_iter().map(|mask| blocks[mask].clone()).collect();
        let phi_h = StepFunction::block_diagonal(&ordered)?;
        let lambda = Matrix::identity(1 << (self.k - 1)).kron(x).kron(&Matrix::identity(h.dim()));
        let lambda = StepFunction::constant(h.space(), lambda);
        lambda.mul(&phi_h)?.sub(&phi_h.mul(&lambda)?)
    }
}

/// Finds `delta`, the first `m >= n` with `t_m < delta`, and the pair
/// defects for `k = m + 1 - n`.
pub fn approx_divisibility_witness(
    seq: &DenseSequence,
    n: usize,
    functions: &[RationalStepFunction],
    epsilon: &Rational,
    horizon: usize,
) -> Result<ApproxDivisibilityWitness> {
    if *epsilon <= Rational::zero() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("stages are indexed from 1".into()));
    }
    let half_sq = epsilon * epsilon / Rational::from_i64(4);
    let mut delta: Option<Point> = None;
    for h in functions {
        if h.dim() != 1 << n {
            return Err(Error::StageMismatch { expected: 1 << n, found: h.dim() });
        }
        if h.space() != seq.space() {
            return Err(Error::MixedSpace { left: seq.space(), right: h.space() });
        }
        let base = &h.pieces()[0].1;
        for (from, value) in h.pieces() {
            if value.sub(base)?.frobenius_sq() > half_sq {
                delta = Some(match delta {
                    Some(d) if d <= *from => d,
                    _ => *from,
                });
                break;
            }
        }
    }
    let m = (n..n + horizon)
        .find(|&j| delta.is_none_or(|d| seq.point(j) < d))
        .ok_or_else(|| Error::HorizonExhausted {
            horizon,
            detail: format!("no t_m below delta = {}", delta.map_or("max T".to_string(), |d| d.to_string())),
        })?;
    let k = m + 1 - n;
    let mut sorted = seq.window(n, k);
    sorted.sort();
    let s1 = ThresholdMap::new(sorted[0]);
    let defects = functions
        .iter()
        .map(|h| Ok(h.sub(&h.pullback_chi(&s1)?)?.sup_frobenius_sq()))
        .collect::<Result<Vec<_>>>()?;
    let witness = ApproxDivisibilityWitness { n, m, k, epsilon: epsilon.clone(), delta, sorted, defects };
    if !witness.certified() {
        return Err(Error::InternalInconsistency("pair defect exceeds epsilon^2 below delta".into()));
    }
    Ok(witness)
}
