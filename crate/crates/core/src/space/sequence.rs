//! Tail-dense sequences `t_1, t_2, ...` in `T_0 = T \ {max T}`.
//!
//! The canonical generators enumerate mesh levels in blocks: level `L`
//! lists the `2^L - 1` nonzero left endpoints of the level-`L` mesh in
//! increasing order, and the levels follow one another forever:
//!
//! ```text
//! dyadic:  1/2 | 1/4 1/2 3/4 | 1/8 2/8 ... 7/8 | ...
//! ternary: 2/3 | 2/9 2/3 8/9 | 2/27 ...        | ...
//! ```
//!
//! The ternary block at level `L` lists the left endpoints of the depth-`L`
//! cylinders `1..2^L`, so `lambda` carries the ternary sequence term by term
//! onto the dyadic one. Explicit lists are cycled periodically.

use serde::ser::SerializeStruct;
use serde::Serialize;

use super::cantor::cylinder_left;
use super::{Point, Space, MAX_DEPTH};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DenseSequence {
    CanonicalDyadic,
    CanonicalTernary,
    Explicit { space: Space, points: Vec<Point> },
}

/// Index of the first term of mesh level `level` (1-based levels and terms).
fn block_start(level: u32) -> u128 {
    // Terms before level L: sum_{l<L} (2^l - 1) = 2^L - 2 - (L - 1).
    (1u128 << level) - 1 - level as u128 + 1
}

/// Splits a term index into `(level, position within level)`.
pub fn block_position(n: usize) -> (u32, u128) {
    let n = n as u128;
    let mut level = 1;
    while block_start(level + 1) <= n {
        level += 1;
    }
    (level, n - block_start(level) + 1)
}

impl DenseSequence {
    pub fn explicit(points: Vec<Point>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidArgument("explicit sequence is empty".into()))?;
        let space = first.space();
        for p in &points {
            p.same_space(first)?;
            if p.is_max() {
                return Err(Error::InvalidArgument(format!(
                    "sequence point {p} is the maximum of the space"
                )));
            }
        }
        Ok(DenseSequence::Explicit { space, points })
    }

    pub fn canonical(space: Space) -> Self {
        match space {
            Space::Interval => DenseSequence::CanonicalDyadic,
            Space::Cantor => DenseSequence::CanonicalTernary,
        }
    }

    pub fn space(&self) -> Space {
        match self {
            DenseSequence::CanonicalDyadic => Space::Interval,
            DenseSequence::CanonicalTernary => Space::Cantor,
            DenseSequence::Explicit { space, .. } => *space,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            DenseSequence::CanonicalDyadic => "canonical-dyadic",
            DenseSequence::CanonicalTernary => "canonical-ternary",
            DenseSequence::Explicit { .. } => "explicit",
        }
    }

    /// The term `t_n`, `n >= 1`.
    pub fn point(&self, n: usize) -> Point {
        assert!(n >= 1, "sequence terms are indexed from 1");
        match self {
            DenseSequence::CanonicalDyadic => {
                let (level, pos) = block_position(n);
                assert!(level <= MAX_DEPTH, "sequence index {n} beyond supported depth");
                Point::dyadic(pos, level).expect("mesh point in [0,1)")
            }
            DenseSequence::CanonicalTernary => {
                let (level, pos) = block_position(n);
                assert!(level <= MAX_DEPTH, "sequence index {n} beyond supported depth");
                cylinder_left(level, pos)
            }
            DenseSequence::Explicit { points, .. } => points[(n - 1) % points.len()],
        }
    }

    /// `t_n, ..., t_{n+k-1}`.
    pub fn window(&self, n: usize, k: usize) -> Vec<Point> {
        (n..n + k).map(|j| self.point(j)).collect()
    }

    /// Finite density evidence: which cells of the level-`mesh_level` mesh
    /// the terms `t_start .. t_{start+window-1}` meet. Dyadic cells are
    /// `[i/2^L, (i+1)/2^L)`, ternary cells are depth-`L` cylinders.
    pub fn mesh_coverage(&self, start: usize, window: usize, mesh_level: u32) -> MeshCoverage {
        let cells = 1usize << mesh_level;
        let mut hit = vec![false; cells];
        for j in start..start + window {
            let cell = mesh_cell(&self.point(j), mesh_level);
            hit[cell] = true;
        }
        let missing: Vec<usize> = hit.iter().enumerate().filter(|(_, h)| !**h).map(|(i, _)| i).collect();
        MeshCoverage { mesh_level, cells, missing }
    }
}

/// Index of the level-`level` mesh cell containing `p`.
pub fn mesh_cell(p: &Point, level: u32) -> usize {
    match p {
        Point::Dyadic(d) => {
            let cell = d.scaled() >> (MAX_DEPTH - level);
            (cell as usize).min((1usize << level) - 1)
        }
        Point::Ternary(t) => super::cantor::cylinder_index(t, level) as usize,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeshCoverage {
    pub mesh_level: u32,
    pub cells: usize,
    pub missing: Vec<usize>,
}

impl MeshCoverage {
    pub fn is_complete(&self) -> bool {
        self.missing.is_empty()
    }
}

impl Serialize for DenseSequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("DenseSequence", 2)?;
        st.serialize_field("kind", self.kind())?;
        match self {
            DenseSequence::Explicit { points, .. } => st.serialize_field("list", points)?,
            _ => st.serialize_field("list", &Vec::<Point>::new())?,
        }
        st.end()
    }
}
