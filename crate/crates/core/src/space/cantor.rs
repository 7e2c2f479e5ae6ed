//! Cylinder combinatorics of the Cantor set and clopen order-intervals.
//!
//! The depth-`d` cylinder with index `i` (`0 <= i < 2^d`) is the set of points
//! whose first `d` ternary digits spell the binary word of `i` with `1 -> 2`.

use serde::Serialize;

use super::point::{TernaryPoint, MAX_DEPTH};
use super::{Point, Space};
use crate::{Error, Result};

fn digits_of_index(depth: u32, index: u128) -> u128 {
    debug_assert!(depth <= MAX_DEPTH);
    if depth == 0 {
        return 0;
    }
    index << (128 - depth)
}

/// Left endpoint of a cylinder: the digits of `index`, then zeros.
pub fn cylinder_left(depth: u32, index: u128) -> Point {
    Point::Ternary(TernaryPoint::from_raw(digits_of_index(depth, index), None))
}

/// Right endpoint of a cylinder: the digits of `index`, then all 2s.
pub fn cylinder_right(depth: u32, index: u128) -> Point {
    Point::Ternary(TernaryPoint::from_raw(digits_of_index(depth, index), Some(depth + 1)))
}

/// Index of the depth-`depth` cylinder containing `t`.
pub fn cylinder_index(t: &TernaryPoint, depth: u32) -> u128 {
    if depth == 0 {
        return 0;
    }
    t.word() >> (128 - depth)
}

/// A contiguous run `lo..=hi` of depth-`depth` cylinders; as a subset of the
/// Cantor set this is the order-interval `[left(lo), right(hi)]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CylinderRange {
    pub depth: u32,
    pub lo: u128,
    pub hi: u128,
}

impl CylinderRange {
    pub fn whole() -> Self {
        CylinderRange { depth: 0, lo: 0, hi: 0 }
    }

    pub fn new(depth: u32, lo: u128, hi: u128) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthOverflow(depth));
        }
        if lo > hi || (depth < 128 && hi >= 1u128 << depth) {
            return Err(Error::InvalidArgument(format!("bad cylinder range {lo}..={hi} at depth {depth}")));
        }
        Ok(CylinderRange { depth, lo, hi })
    }

    pub fn count(&self) -> u128 {
        self.hi - self.lo + 1
    }

    /// The same set described at a finer depth.
    pub fn at_depth(&self, depth: u32) -> Self {
        assert!(depth >= self.depth && depth <= MAX_DEPTH);
        let shift = depth - self.depth;
        CylinderRange { depth, lo: self.lo << shift, hi: ((self.hi + 1) << shift) - 1 }
    }

    pub fn lower(&self) -> Point {
        cylinder_left(self.depth, self.lo)
    }

    pub fn upper(&self) -> Point {
        cylinder_right(self.depth, self.hi)
    }

    pub fn contains(&self, t: &TernaryPoint) -> bool {
        let i = cylinder_index(t, self.depth);
        self.lo <= i && i <= self.hi
    }

    pub fn to_interval(&self) -> ClopenInterval {
        ClopenInterval::closed(self.lower(), self.upper()).expect("cylinder endpoints are ordered")
    }

    /// Splits into two nonempty consecutive halves, refining one level if the
    /// range is a single cylinder.
    pub fn split_midpoint(&self) -> Result<(Self, Self)> {
        let r = if self.count() == 1 { self.at_depth(self.depth + 1) } else { *self };
        let mid = r.lo + r.count() / 2 - 1;
        Ok((
            CylinderRange { depth: r.depth, lo: r.lo, hi: mid },
            CylinderRange { depth: r.depth, lo: mid + 1, hi: r.hi },
        ))
    }

    /// Splits so that the first part ends with the cylinder containing `t`,
    /// refining until that cylinder is not the last one. `None` if `t` is not
    /// inside or sits on the right end at every depth up to `max_depth`.
    pub fn split_after(&self, t: &TernaryPoint, max_depth: u32) -> Option<(Self, Self)> {
        if !self.contains(t) {
            return None;
        }
        for depth in self.depth.max(1)..=max_depth.min(MAX_DEPTH) {
            let r = self.at_depth(depth);
            let i = cylinder_index(t, depth);
            if i < r.hi {
                return Some((
                    CylinderRange { depth, lo: r.lo, hi: i },
                    CylinderRange { depth, lo: i + 1, hi: r.hi },
                ));
            }
        }
        None
    }
}

/// An order-interval of a base space.
///
/// On `[0,1]` step pieces are half-open `[a, b)`; on the Cantor set clopen
/// intervals are `[a, b] ∩ Ω`. `upper_closed` records which.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClopenInterval {
    pub lower: Point,
    pub upper: Point,
    pub upper_closed: bool,
}

impl ClopenInterval {
    pub fn closed(lower: Point, upper: Point) -> Result<Self> {
        Self::checked(lower, upper, true)
    }

    pub fn half_open(lower: Point, upper: Point) -> Result<Self> {
        Self::checked(lower, upper, false)
    }

    fn checked(lower: Point, upper: Point, upper_closed: bool) -> Result<Self> {
        if lower.cmp_checked(&upper)? == std::cmp::Ordering::Greater {
            return Err(Error::InvalidArgument(format!("interval [{lower}, {upper}] is reversed")));
        }
        Ok(ClopenInterval { lower, upper, upper_closed })
    }

    pub fn space(&self) -> Space {
        self.lower.space()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.space() == self.space()
            && self.lower <= *p
            && (*p < self.upper || (self.upper_closed && *p == self.upper))
    }
}
