//! Stage traces as atomic measures.
//!
//! A trace on the stage algebra `C_0([min T, t), M_{2^n})` is integration of
//! the matrix trace against a Radon measure `mu_n`. Connecting maps act on
//! measures by pushforward along `chi_u`, which moves every atom below `u`
//! up to `u`, so finitely supported measures with rational masses are closed
//! under everything done here.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::scalar::{rational_to_string, Scalar};
use crate::space::{cylinder_left, DenseSequence, Point, Space};
use crate::step::StepFunction;
use crate::{Error, Rational, Result};

/// A finitely supported nonnegative measure on one base space.
#[derive(Clone, PartialEq)]
pub struct AtomicMeasure<S> {
    space: Space,
    atoms: BTreeMap<Point, S>,
}

impl<S: Scalar> AtomicMeasure<S> {
    pub fn zero(space: Space) -> Self {
        AtomicMeasure { space, atoms: BTreeMap::new() }
    }

    /// Builds a measure from `(point, mass)` pairs; repeated points add up,
    /// zero masses are dropped and negative masses are rejected.
    pub fn from_atoms(space: Space, atoms: impl IntoIterator<Item = (Point, S)>) -> Result<Self> {
        let mut out = Self::zero(space);
        for (p, m) in atoms {
            if p.space() != space {
                return Err(Error::MixedSpace { left: space, right: p.space() });
            }
            if m < S::zero() {
                return Err(Error::InvalidArgument(format!("negative mass at {p}")));
            }
            out.add_atom(p, m);
        }
        Ok(out)
    }

    /// Unit atoms at the left endpoints of every level-`level` mesh cell.
    pub fn mesh_sample(space: Space, level: u32) -> Self {
        let points = (0..1u128 << level).map(|i| match space {
            Space::Interval => Point::dyadic(i, level).expect("mesh point"),
            Space::Cantor => cylinder_left(level, i),
        });
        Self::from_atoms(space, points.map(|p| (p, S::one()))).expect("mesh points share a space")
    }

    fn add_atom(&mut self, p: Point, m: S) {
        if m.is_zero() {
            return;
        }
        let slot = self.atoms.entry(p).or_insert_with(S::zero);
        *slot = slot.clone() + m;
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Point, &S)> {
        self.atoms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> S {
        self.atoms.values().fold(S::zero(), |acc, m| acc + m.clone())
    }

    /// `mu([min T, v])`.
    pub fn mass_up_to(&self, v: &Point) -> S {
        self.atoms.range(..=*v).fold(S::zero(), |acc, (_, m)| acc + m.clone())
    }

    /// `mu((a, b])`.
    pub fn mass_between(&self, a: &Point, b: &Point) -> S {
        if a >= b {
            return S::zero();
        }
        self.mass_up_to(b) - self.mass_up_to(a)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::MixedSpace { left: self.space, right: other.space });
        }
        let mut out = self.clone();
        for (p, m) in &other.atoms {
            out.add_atom(*p, m.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self::zero(self.space);
        for (p, m) in &self.atoms {
            out.add_atom(*p, m.clone() * factor.clone());
        }
        out
    }

    /// `mu o chi_u^{-1}`: all mass at points `<= u` collapses onto `u`.
    pub fn pushforward_chi(&self, u: &Point) -> Result<Self> {
        if u.space() != self.space {
            return Err(Error::MixedSpace { left: self.space, right: u.space() });
        }
        let mut out = Self::zero(self.space);
        let below = self.mass_up_to(u);
        out.add_atom(*u, below);
        for (p, m) in self.atoms.range(*u..) {
            if p != u {
                out.add_atom(*p, m.clone());
            }
        }
        Ok(out)
    }

    /// `mu_n = sum_{F subset X} mu_{n+k} o chi_{max F}^{-1}` for
    /// `X = {t_n, ..., t_{n+k-1}}`.
    ///
    /// With the window sorted as `v_1 <= ... <= v_k` (repeats kept), exactly
    /// `2^{i-1}` subsets have their maximum at position `i`, so the sum
    /// collapses to `mu + sum_i 2^{i-1} push(mu, v_i)`.
    pub fn recursion(&self, seq: &DenseSequence, n: usize, k: usize) -> Result<Self> {
        let mut window = seq.window(n, k);
        window.sort();
        let mut out = self.clone();
        let mut weight = S::one();
        for v in &window {
            out = out.add(&self.pushforward_chi(v)?.scale(&weight))?;
            weight = weight.clone() + weight;
        }
        Ok(out)
    }

    /// The same sum taken over all `2^k` subsets one by one.
    pub fn recursion_brute_force(&self, seq: &DenseSequence, n: usize, k: usize) -> Result<Self> {
        if k >= usize::BITS as usize {
            return Err(Error::InvalidArgument(format!("2^{k} subsets is too many")));
        }
        let window = seq.window(n, k);
        let mut out = Self::zero(self.space);
        for mask in 0usize..1 << k {
            let mut top = self.space.min_point();
            for (i, t) in window.iter().enumerate() {
                if mask >> i & 1 == 1 && *t > top {
                    top = *t;
                }
            }
            out = out.add(&self.pushforward_chi(&top)?)?;
        }
        Ok(out)
    }
}

impl<S: Scalar> std::fmt::Debug for AtomicMeasure<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.atoms.iter().map(|(p, m)| (p, m.to_text()))).finish()
    }
}

impl<S: Scalar> Serialize for AtomicMeasure<S> {
    fn serialize<Ser: serde::Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        #[derive(Serialize)]
        struct Atom {
            point: Point,
            mass: String,
        }
        let atoms: Vec<Atom> = self.atoms.iter().map(|(p, m)| Atom { point: *p, mass: m.to_text() }).collect();
        atoms.serialize(serializer)
    }
}

/// `tau_n(f) = sum over atoms of mass * Tr f(point)`.
#[derive(Clone, PartialEq)]
pub struct TraceFunctional<S> {
    dim: usize,
    measure: AtomicMeasure<S>,
}

impl<S: Scalar> TraceFunctional<S> {
    pub fn new(dim: usize, measure: AtomicMeasure<S>) -> Self {
        TraceFunctional { dim, measure }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn measure(&self) -> &AtomicMeasure<S> {
        &self.measure
    }

    pub fn evaluate(&self, f: &StepFunction<S>) -> Result<S> {
        if f.dim() != self.dim {
            return Err(Error::StageMismatch { expected: self.dim, found: f.dim() });
        }
        if f.space() != self.measure.space {
            return Err(Error::MixedSpace { left: self.measure.space, right: f.space() });
        }
        let mut total = S::zero();
        for (p, m) in &self.measure.atoms {
            total = total + m.clone() * f.evaluate(p)?.trace();
        }
        Ok(total)
    }
}

impl<S: Scalar> std::fmt::Debug for TraceFunctional<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TraceFunctional").field("dim", &self.dim).field("measure", &self.measure).finish()
    }
}

/// `2^k` as an exact rational.
fn pow2(k: usize) -> Rational {
    Rational::from_integer(BigInt::one() << k)
}

/// The two interval identities checked on one sample measure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingCheck {
    /// `|X ∩ [min T, r]|`
    pub z: usize,
    /// `|X ∩ [min T, s]|`
    pub y: usize,
    pub upper_identity: bool,
    pub lower_identity: bool,
    /// `mu_n([0,s]) <= 2^{-(z-y)} mu_n([0,r])`
    pub decay_bound: bool,
}

impl ScalingCheck {
    pub fn holds(&self) -> bool {
        self.upper_identity && self.lower_identity && self.decay_bound
    }
}

/// Runs the recursion from `sample = mu_{n+k}` down to `mu_n` and checks
/// `mu_n([0,r]) = 2^{|Z|} mu_{n+k}([0,r])`, the matching identity at `s`,
/// and the resulting decay bound.
pub fn check_scaling(
    seq: &DenseSequence,
    n: usize,
    k: usize,
    s: &Point,
    r: &Point,
    sample: &AtomicMeasure<Rational>,
) -> Result<ScalingCheck> {
    let window = seq.window(n, k);
    let z = window.iter().filter(|t| *t <= r).count();
    let y = window.iter().filter(|t| *t <= s).count();
    let top = sample.recursion(seq, n, k)?;
    let upper_identity = top.mass_up_to(r) == pow2(z) * sample.mass_up_to(r);
    let lower_identity = top.mass_up_to(s) == pow2(y) * sample.mass_up_to(s);
    let decay_bound = top.mass_up_to(s) * pow2(z - y) <= top.mass_up_to(r);
    Ok(ScalingCheck { z, y, upper_identity, lower_identity, decay_bound })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TracelessnessCertificate {
    pub n: usize,
    pub s: Point,
    pub r: Point,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    pub k: usize,
    /// Indices `j` in `[n, n+k)` with `t_j ∈ (s, r]`.
    pub hits: Vec<usize>,
    /// `2^{-|hits|}`, the factor bounding `mu_n([0,s]) / mu_n([0,r])` for
    /// every consistent tower.
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    pub scaling: ScalingCheck,
}

pub(crate) fn ser_rational<Ser: serde::Serializer>(
    value: &Rational,
    serializer: Ser,
) -> std::result::Result<Ser::Ok, Ser::Error> {
    serializer.serialize_str(&rational_to_string(value))
}

/// Finds the least `k` with `2^{-c(k)} <= epsilon`, where `c(k)` counts the
/// terms of `t_n, ..., t_{n+k-1}` in `(s, r]`. The scaling identities are
/// checked on the level-6 mesh sample measure at the returned `k`.
pub fn tracelessness_certificate(
    seq: &DenseSequence,
    n: usize,
    s: &Point,
    r: &Point,
    epsilon: &Rational,
    horizon: usize,
) -> Result<TracelessnessCertificate> {
    s.same_space(r)?;
    if seq.space() != s.space() {
        return Err(Error::MixedSpace { left: seq.space(), right: s.space() });
    }
    if s >= r {
        return Err(Error::InvalidArgument(format!("need s < r, got s = {s}, r = {r}")));
    }
    if *epsilon <= Rational::zero() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("stages are indexed from 1".into()));
    }
    let mut hits = Vec::new();
    let mut bound = Rational::one();
    let mut k = 0;
    while bound > *epsilon {
        if k == horizon {
            return Err(Error::HorizonExhausted {
                horizon,
                detail: format!("reached {} hits in ({s}, {r}], bound {}", hits.len(), rational_to_string(&bound)),
            });
        }
        let j = n + k;
        let t = seq.point(j);
        if *s < t && t <= *r {
            hits.push(j);
            bound /= Rational::from_integer(BigInt::from(2));
        }
        k += 1;
    }
    let sample = AtomicMeasure::mesh_sample(s.space(), 6);
    let scaling = check_scaling(seq, n, k, s, r, &sample)?;
    if !scaling.holds() {
        return Err(Error::InternalInconsistency(format!("scaling identities fail: {scaling:?}")));
    }
    Ok(TracelessnessCertificate { n, s: *s, r: *r, epsilon: epsilon.clone(), k, hits, bound, scaling })
}

/// Multiplicities `l_1, l_2, ...` of the plain copies in the Goodearl maps
/// `psi_n(f) = diag(f, ..., f, f o chi_{t_n})`.
#[derive(Clone)]
pub enum GoodearlParams {
    Constant(u64),
    /// `l_j = j^2 + 2j`, whose contraction product stays above one half.
    Quadratic,
    Explicit(Vec<u64>),
}

impl GoodearlParams {
    /// `l_j` for `j >= 1`; explicit lists are cycled.
    pub fn multiplicity(&self, j: usize) -> u64 {
        match self {
            GoodearlParams::Constant(l) => *l,
            GoodearlParams::Quadratic => (j * j + 2 * j) as u64,
            GoodearlParams::Explicit(list) => list[(j - 1) % list.len()],
        }
    }

    pub fn name(&self) -> String {
        match self {
            GoodearlParams::Constant(l) => format!("constant-{l}"),
            GoodearlParams::Quadratic => "quadratic".into(),
            GoodearlParams::Explicit(list) => format!("explicit-{list:?}"),
        }
    }
}

/// `prod_{j <= depth, t_j ∈ (s, r]} l_j / (l_j + 1)`.
///
/// One Goodearl step sends `mu` to `l_j mu + push(mu, t_j)`, which scales
/// `mu([0,v])` by `l_j + 1` when `t_j <= v` and by `l_j` otherwise. The
/// ratio `mu([0,s]) / mu([0,r])` therefore shrinks by `l_j / (l_j + 1)`
/// exactly when `t_j` falls in `(s, r]`.
pub fn goodearl_ratio_bound(
    params: &GoodearlParams,
    seq: &DenseSequence,
    s: &Point,
    r: &Point,
    depth: usize,
) -> Result<Rational> {
    s.same_space(r)?;
    if s >= r {
        return Err(Error::InvalidArgument(format!("need s < r, got s = {s}, r = {r}")));
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 1..=depth {
        let t = seq.point(j);
        if *s < t && t <= *r {
            let l = params.multiplicity(j);
            if l == 0 {
                return Err(Error::InvalidArgument(format!("multiplicity l_{j} must be positive")));
            }
            num *= l;
            den *= l + 1;
        }
    }
    Ok(Rational::new(num, den))
}

/// One Goodearl pullback of a measure: `l mu + push(mu, t)`.
pub fn goodearl_measure_step<S: Scalar>(mu: &AtomicMeasure<S>, l: u64, t: &Point) -> Result<AtomicMeasure<S>> {
    mu.scale(&S::from_i64(l as i64)).add(&mu.pushforward_chi(t)?)
}
