use serde::Serialize;

use super::{Point, Space};
use crate::Result;

/// The map `chi_s(t) = max{t, s}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ThresholdMap {
    threshold: Point,
}

impl ThresholdMap {
    pub fn new(threshold: Point) -> Self {
        ThresholdMap { threshold }
    }

    pub fn identity(space: Space) -> Self {
        ThresholdMap { threshold: space.min_point() }
    }

    pub fn threshold(&self) -> &Point {
        &self.threshold
    }

    pub fn space(&self) -> Space {
        self.threshold.space()
    }

    pub fn is_identity(&self) -> bool {
        self.threshold.is_min()
    }

    pub fn apply(&self, t: &Point) -> Result<Point> {
        chi_apply(&self.threshold, t)
    }

    /// `chi_s o chi_t = chi_{max(s,t)}`.
    pub fn compose(&self, inner: &ThresholdMap) -> Result<ThresholdMap> {
        self.threshold.same_space(&inner.threshold)?;
        Ok(ThresholdMap::new(self.threshold.max(inner.threshold)))
    }
}

/// `max{t, s}` under the exact order; fails for points of different spaces.
pub fn chi_apply(s: &Point, t: &Point) -> Result<Point> {
    s.same_space(t)?;
    Ok(*s.max(t))
}
