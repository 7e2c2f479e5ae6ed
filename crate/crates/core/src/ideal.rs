//! Ideals of the stage algebras as zero sets.
//!
//! The stage ideal `I_t` consists of the functions vanishing on
//! `[t, max T]`. A general ideal of a stage is determined by its common
//! zero set `T_n`, a closed subset of `T` containing `max T`; the
//! connecting maps act on zero sets by `T_n = T_{n+1} ∪ chi_{t_n}(T_{n+1})`.

use serde::Serialize;

use crate::morphism::DiagonalMorphism;
use crate::scalar::Scalar;
use crate::space::{cylinder_left, cylinder_right, mesh_cell, DenseSequence, Point, Space, TernaryPoint};
use crate::step::StepFunction;
use crate::{Error, Result};

/// `I_t^{(n)} = { f : f(s) = 0 for s >= t }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdealUpSet {
    pub stage: usize,
    pub cut: Point,
}

impl IdealUpSet {
    pub fn new(stage: usize, cut: Point) -> Self {
        IdealUpSet { stage, cut }
    }

    pub fn contains<S: Scalar>(&self, f: &StepFunction<S>) -> Result<bool> {
        if f.dim() != 1 << self.stage {
            return Err(Error::StageMismatch { expected: 1 << self.stage, found: f.dim() });
        }
        if f.space() != self.cut.space() {
            return Err(Error::MixedSpace { left: self.cut.space(), right: f.space() });
        }
        Ok(f.vanishes_from(&self.cut))
    }

    /// `phi^{-1}(I_t^{(m)}) = I_t^{(n)}`.
    pub fn pullback(&self, phi: &DiagonalMorphism) -> Result<IdealUpSet> {
        if phi.target() != self.stage {
            return Err(Error::StageMismatch { expected: self.stage, found: phi.target() });
        }
        Ok(IdealUpSet { stage: phi.source(), cut: self.cut })
    }
}

/// Checks `f ∈ phi^{-1}(I) ⟺ phi(f) ∈ I` on every function of a corpus.
/// Returns the indices where the two sides disagree.
pub fn pullback_disagreements<S: Scalar>(
    phi: &DiagonalMorphism,
    ideal: &IdealUpSet,
    corpus: &[StepFunction<S>],
) -> Result<Vec<usize>> {
    let back = ideal.pullback(phi)?;
    let mut bad = Vec::new();
    for (i, f) in corpus.iter().enumerate() {
        if back.contains(f)? != ideal.contains(&phi.apply(f)?)? {
            bad.push(i);
        }
    }
    Ok(bad)
}

/// Whether no point of the Cantor set lies strictly between `b < c`:
/// `b = w0222...` and `c = w2`.
fn cantor_gap(b: &TernaryPoint, c: &TernaryPoint) -> bool {
    match (b.tail(), c.tail()) {
        (Some(n), None) if n >= 2 => {
            let mut positions = b.positions();
            positions.push(n - 1);
            TernaryPoint::new(positions, None).map(|next| next == *c).unwrap_or(false)
        }
        _ => false,
    }
}

/// A finite union of closed order intervals `[a, b] ∩ T`, kept sorted,
/// disjoint and merged wherever no point of `T` separates two pieces.
/// `max T` always belongs to the set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroSetStage {
    space: Space,
    intervals: Vec<(Point, Point)>,
}

impl ZeroSetStage {
    pub fn new(space: Space, intervals: impl IntoIterator<Item = (Point, Point)>) -> Result<Self> {
        let mut list = Vec::new();
        for (a, b) in intervals {
            a.same_space(&b)?;
            if a.space() != space {
                return Err(Error::MixedSpace { left: space, right: a.space() });
            }
            if a > b {
                return Err(Error::InvalidArgument(format!("interval [{a}, {b}] is empty")));
            }
            list.push((a, b));
        }
        Ok(Self::normalized(space, list))
    }

    /// `[t, max T]`.
    pub fn up_set(t: Point) -> Self {
        let top = t.space().max_point();
        Self::normalized(t.space(), vec![(t, top)])
    }

    pub fn whole(space: Space) -> Self {
        Self::up_set(space.min_point())
    }

    fn normalized(space: Space, mut list: Vec<(Point, Point)>) -> Self {
        let top = space.max_point();
        list.push((top, top));
        list.sort();
        let mut out: Vec<(Point, Point)> = Vec::with_capacity(list.len());
        for (a, b) in list {
            if let Some(last) = out.last_mut() {
                if touches(&last.1, &a) {
                    if b > last.1 {
                        last.1 = b;
                    }
                    continue;
                }
            }
            out.push((a, b));
        }
        ZeroSetStage { space, intervals: out }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn intervals(&self) -> &[(Point, Point)] {
        &self.intervals
    }

    pub fn min(&self) -> Point {
        self.intervals[0].0
    }

    pub fn contains(&self, t: &Point) -> bool {
        let i = self.intervals.partition_point(|(a, _)| a <= t);
        i > 0 && self.intervals[i - 1].1 >= *t
    }

    /// Whether the set is `[min, max T]`.
    pub fn is_up_set(&self) -> bool {
        self.intervals.len() == 1
    }

    /// `chi_u` of the set: `[a, b] ↦ [max(a, u), max(b, u)]`.
    pub fn image_chi(&self, u: &Point) -> Result<Self> {
        if u.space() != self.space {
            return Err(Error::MixedSpace { left: self.space, right: u.space() });
        }
        let list = self.intervals.iter().map(|(a, b)| (*a.max(u), *b.max(u))).collect();
        Ok(Self::normalized(self.space, list))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        if other.space != self.space {
            return Err(Error::MixedSpace { left: self.space, right: other.space });
        }
        let list = self.intervals.iter().chain(&other.intervals).copied().collect();
        Ok(Self::normalized(self.space, list))
    }

    /// `self ∪ chi_t(self)`. The image only adds the point `t` (when some
    /// interval starts at or below `t`), so this is one sorted insertion.
    pub fn step(&self, t: &Point) -> Result<Self> {
        let mut out = self.clone();
        out.step_in_place(t)?;
        Ok(out)
    }

    fn step_in_place(&mut self, t: &Point) -> Result<()> {
        if t.space() != self.space {
            return Err(Error::MixedSpace { left: self.space, right: t.space() });
        }
        if self.min() > *t || self.contains(t) {
            return Ok(());
        }
        let i = self.intervals.partition_point(|(a, _)| a <= t);
        self.intervals.insert(i, (*t, *t));
        if i + 1 < self.intervals.len() && touches(&self.intervals[i].1, &self.intervals[i + 1].0) {
            self.intervals[i].1 = self.intervals[i + 1].1;
            self.intervals.remove(i + 1);
        }
        if touches(&self.intervals[i - 1].1, &self.intervals[i].0) {
            self.intervals[i - 1].1 = self.intervals[i].1;
            self.intervals.remove(i);
        }
        Ok(())
    }
}

/// Whether an interval ending at `b` and one starting at `a` overlap or
/// leave no point of `T` between them.
fn touches(b: &Point, a: &Point) -> bool {
    a <= b
        || match (b, a) {
            (Point::Ternary(x), Point::Ternary(y)) => cantor_gap(x, y),
            _ => false,
        }
}

/// `T_n = ∪_{F ⊆ X} chi_{max F}(T_{n+k})` for `X = {t_n, ..., t_{n+k-1}}`,
/// computed once per distinct value of `max F`.
pub fn zero_set_recursion(seq: &DenseSequence, n: usize, k: usize, top: &ZeroSetStage) -> Result<ZeroSetStage> {
    let mut values = seq.window(n, k);
    values.sort();
    values.dedup();
    let mut list: Vec<(Point, Point)> = top.intervals.clone();
    for v in &values {
        list.extend(top.image_chi(v)?.intervals);
    }
    Ok(ZeroSetStage::normalized(top.space, list))
}

/// The same set via `k` single steps `T_j = T_{j+1} ∪ chi_{t_j}(T_{j+1})`,
/// using the general image and union.
pub fn zero_set_single_steps(seq: &DenseSequence, n: usize, k: usize, top: &ZeroSetStage) -> Result<ZeroSetStage> {
    let mut current = top.clone();
    for j in (n..n + k).rev() {
        current = current.union(&current.image_chi(&seq.point(j))?)?;
    }
    Ok(current)
}

/// The same set as a union over all `2^k` subsets.
pub fn zero_set_brute_force(seq: &DenseSequence, n: usize, k: usize, top: &ZeroSetStage) -> Result<ZeroSetStage> {
    if k > 20 {
        return Err(Error::InvalidArgument(format!("2^{k} subsets is too many")));
    }
    let window = seq.window(n, k);
    let mut out = top.clone();
    for mask in 1usize..1 << k {
        let top_point = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| window[i]).max().expect("nonempty");
        out = out.union(&top.image_chi(&top_point)?)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageSummary {
    pub n: usize,
    pub min: Point,
    pub size: usize,
    /// Listed for the first and last stage only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<(Point, Point)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealCertificate {
    pub cut: Point,
    pub stages: Vec<StageSummary>,
    /// Indices `j` in `[n, n+k)` with `t_j >= cut`; each lies in `T_n`.
    pub absorbed: Vec<usize>,
    pub mesh_level: u32,
    /// Mesh cells meeting `[cut, max T]`.
    pub cells_required: usize,
    /// Required cells that `T_n` misses.
    pub cells_missing: Vec<usize>,
}

impl IdealCertificate {
    pub fn certified(&self) -> bool {
        self.cells_missing.is_empty()
    }
}

/// Bounds of mesh cell `i` at `level` as `(lower, upper, upper_closed)`.
fn mesh_bounds(space: Space, level: u32, i: usize) -> (Point, Point, bool) {
    match space {
        Space::Interval => {
            let last = i + 1 == 1 << level;
            let lower = Point::dyadic(i as u128, level).expect("mesh point");
            let upper = Point::dyadic(i as u128 + 1, level).expect("mesh point");
            (lower, upper, last)
        }
        Space::Cantor => (cylinder_left(level, i as u128), cylinder_right(level, i as u128), true),
    }
}

fn cell_meets(lower: &Point, upper: &Point, closed: bool, a: &Point, b: &Point) -> bool {
    let below_upper = if closed { a <= upper } else { a < upper };
    below_upper && b >= lower
}

/// Runs the zero-set recursion from `initial = T_{n+k}` down to `T_n`,
/// checks that the minimum never moves, and collects the finite density
/// evidence for `T_n = [min, max T]` at the given mesh level.
pub fn certify_ideal_is_point(
    seq: &DenseSequence,
    initial: &ZeroSetStage,
    n: usize,
    k: usize,
    mesh_level: u32,
) -> Result<IdealCertificate> {
    if seq.space() != initial.space {
        return Err(Error::MixedSpace { left: seq.space(), right: initial.space });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("stages are indexed from 1".into()));
    }
    let cut = initial.min();
    let summary = |stage: usize, set: &ZeroSetStage, full: bool| StageSummary {
        n: stage,
        min: set.min(),
        size: set.intervals.len(),
        intervals: full.then(|| set.intervals.clone()),
    };
    let mut stages = vec![summary(n + k, initial, true)];
    let mut current = initial.clone();
    for j in (n..n + k).rev() {
        current.step_in_place(&seq.point(j))?;
        if current.min() != cut {
            return Err(Error::InternalInconsistency(format!(
                "minimum moved from {cut} to {} at stage {j}",
                current.min()
            )));
        }
        stages.push(summary(j, &current, j == n));
    }
    let mut absorbed = Vec::new();
    for j in n..n + k {
        let t = seq.point(j);
        if t >= cut {
            if !current.contains(&t) {
                return Err(Error::InternalInconsistency(format!("t_{j} = {t} is missing from T_{n}")));
            }
            absorbed.push(j);
        }
    }
    let first_cell = mesh_cell(&cut, mesh_level);
    let mut cells_missing = Vec::new();
    for cell in first_cell..1usize << mesh_level {
        let (lower, upper, closed) = mesh_bounds(initial.space, mesh_level, cell);
        let i = current.intervals.partition_point(|(a, _)| if closed { a <= &upper } else { a < &upper });
        let hit = i > 0 && cell_meets(&lower, &upper, closed, &current.intervals[i - 1].0, &current.intervals[i - 1].1);
        if !hit {
            cells_missing.push(cell);
        }
    }
    Ok(IdealCertificate {
        cut,
        stages,
        absorbed,
        mesh_level,
        cells_required: (1usize << mesh_level) - first_cell,
        cells_missing,
    })
}

/// The smallest `k` such that `t_n, ..., t_{n+k-1}` meets every mesh cell
/// at `level`, searched up to `horizon`.
pub fn depth_for_mesh(seq: &DenseSequence, n: usize, level: u32, horizon: usize) -> Result<usize> {
    let cells = 1usize << level;
    let mut hit = vec![false; cells];
    // The cell holding min T is covered by the cut itself, never by a term.
    hit[mesh_cell(&seq.space().min_point(), level)] = true;
    let mut remaining = hit.iter().filter(|h| !**h).count();
    for k in 0..horizon {
        if remaining == 0 {
            return Ok(k);
        }
        let c = mesh_cell(&seq.point(n + k), level);
        if !hit[c] {
            hit[c] = true;
            remaining -= 1;
        }
    }
    if remaining == 0 {
        return Ok(horizon);
    }
    Err(Error::HorizonExhausted { horizon, detail: format!("{remaining} level-{level} mesh cells never hit") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::Rational;

    fn d(num: u128, exp: u32) -> Point {
        Point::dyadic(num, exp).unwrap()
    }

    fn indicator(a: Point, b: Point) -> StepFunction<Rational> {
        StepFunction::indicator(a, b, Matrix::scalar(Rational::from_i64(1))).unwrap()
    }

    #[test]
    fn membership_examples() {
        let zero = Space::Interval.min_point();
        let top = IdealUpSet::new(0, Space::Interval.max_point());
        assert!(top.contains(&indicator(zero, d(3, 2))).unwrap());
        let half = IdealUpSet::new(0, d(1, 1));
        assert!(half.contains(&indicator(zero, d(1, 2))).unwrap());
        assert!(!half.contains(&indicator(zero, d(3, 2))).unwrap());
        assert!(half.contains(&indicator(zero, d(1, 1))).unwrap());
    }

    #[test]
    fn recursion_examples() {
        let seq = DenseSequence::explicit(vec![d(1, 1)]).unwrap();
        let top = ZeroSetStage::up_set(d(1, 2));
        assert_eq!(zero_set_recursion(&seq, 1, 1, &top).unwrap(), top);
        let whole = ZeroSetStage::whole(Space::Interval);
        assert_eq!(zero_set_recursion(&seq, 1, 3, &whole).unwrap(), whole);
    }

    #[test]
    fn three_routes_agree() {
        let seq = DenseSequence::CanonicalDyadic;
        let seed = ZeroSetStage::new(Space::Interval, vec![(d(3, 3), d(1, 1)), (d(13, 4), d(7, 3))]).unwrap();
        for k in 0..9 {
            let closed = zero_set_recursion(&seq, 2, k, &seed).unwrap();
            assert_eq!(closed, zero_set_single_steps(&seq, 2, k, &seed).unwrap());
            assert_eq!(closed, zero_set_brute_force(&seq, 2, k, &seed).unwrap());
            assert_eq!(closed.min(), seed.min());
        }
    }

    #[test]
    fn cantor_gap_merges() {
        let lower = Point::ternary([], Some(2)).unwrap();
        let upper = Point::ternary([1], None).unwrap();
        let set = ZeroSetStage::new(Space::Cantor, vec![(Space::Cantor.min_point(), lower), (upper, Space::Cantor.max_point())]).unwrap();
        assert_eq!(set, ZeroSetStage::whole(Space::Cantor));
    }

    #[test]
    fn certificate_for_half() {
        let seq = DenseSequence::CanonicalDyadic;
        let k = depth_for_mesh(&seq, 1, 8, 1 << 12).unwrap();
        let cert = certify_ideal_is_point(&seq, &ZeroSetStage::up_set(d(1, 1)), 1, k, 8).unwrap();
        assert_eq!(cert.cut, d(1, 1));
        assert!(cert.certified());
        assert!(cert.absorbed.contains(&1));
        let top = certify_ideal_is_point(&seq, &ZeroSetStage::up_set(Space::Interval.max_point()), 1, 8, 4).unwrap();
        assert_eq!(top.cut, Space::Interval.max_point());
        assert!(top.certified());
    }

    #[test]
    fn cantor_top_certificate() {
        let seq = DenseSequence::CanonicalTernary;
        let cert = certify_ideal_is_point(&seq, &ZeroSetStage::up_set(Space::Cantor.max_point()), 1, 20, 10).unwrap();
        assert_eq!(cert.cut, Space::Cantor.max_point());
        assert!(cert.certified());
    }
}
