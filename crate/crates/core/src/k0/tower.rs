use serde::Serialize;

use crate::space::{CylinderRange, DenseSequence, Point, Space, MAX_DEPTH};
use crate::{Error, Result};

/// How each interval is cut in two when passing to the next level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitRule {
    /// Halve every run of cylinders; level `n` is the depth-`n` cylinders.
    Midpoint,
    /// Split `A_1` right after the cylinder holding `t_n` whenever `t_n`
    /// lies in it, so that `t_n ∈ A_1` at level `n`; halve everything else.
    ChaseFirst,
}

/// Partitions of Ω into `2^n` clopen intervals, `A_j = A_{2j-1} ∪ A_{2j}`
/// between consecutive levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTower {
    rule: SplitRule,
    levels: Vec<Vec<CylinderRange>>,
    /// `positions[n - 1]` is `j_0` with `t_n ∈ A_{j_0}` at level `n`.
    positions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerEvidence {
    pub rule: SplitRule,
    pub depth: u32,
    /// `j_0` per level.
    pub positions: Vec<usize>,
    /// Levels `n` with `t_n ∈ A_1`.
    pub first_interval_levels: Vec<usize>,
    /// Largest `d` such that the deepest level refines the depth-`d`
    /// cylinders.
    pub refines_cylinder_depth: u32,
}

impl PartitionTower {
    pub fn build(seq: &DenseSequence, depth: u32, rule: SplitRule) -> Result<Self> {
        if seq.space() != Space::Cantor {
            return Err(Error::MixedSpace { left: Space::Cantor, right: seq.space() });
        }
        if depth + 1 > MAX_DEPTH {
            return Err(Error::DepthOverflow(depth));
        }
        let mut levels = vec![vec![CylinderRange::whole()]];
        let mut positions = Vec::new();
        for n in 1..=depth as usize {
            let t = seq.point(n);
            let t = t.as_ternary().expect("Cantor sequence");
            let previous = &levels[n - 1];
            let mut next = Vec::with_capacity(previous.len() * 2);
            for (i, range) in previous.iter().enumerate() {
                let chased = match rule {
                    SplitRule::ChaseFirst if i == 0 => range.split_after(t, MAX_DEPTH),
                    _ => None,
                };
                let (a, b) = match chased {
                    Some(pair) => pair,
                    None => range.split_midpoint()?,
                };
                next.push(a);
                next.push(b);
            }
            let j0 = next
                .iter()
                .position(|r| r.contains(t))
                .ok_or_else(|| Error::InternalInconsistency(format!("t_{n} lies in no interval of level {n}")))?;
            positions.push(j0 + 1);
            levels.push(next);
        }
        Ok(PartitionTower { rule, levels, positions })
    }

    pub fn rule(&self) -> SplitRule {
        self.rule
    }

    pub fn depth(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    pub fn intervals(&self, level: u32) -> &[CylinderRange] {
        &self.levels[level as usize]
    }

    /// `A_j` at `level`, 1-based.
    pub fn interval(&self, level: u32, j: usize) -> CylinderRange {
        self.levels[level as usize][j - 1]
    }

    /// `j_0` with `t_n ∈ A_{j_0}^{(n)}`.
    pub fn position(&self, n: usize) -> usize {
        self.positions[n - 1]
    }

    /// Index `j` of the interval of `level` containing `t`.
    pub fn locate(&self, level: u32, t: &Point) -> Result<usize> {
        let t = t.as_ternary().ok_or_else(|| Error::MixedSpace { left: Space::Cantor, right: t.space() })?;
        let intervals = &self.levels[level as usize];
        let i = intervals.partition_point(|r| r.upper() < Point::Ternary(*t));
        if i < intervals.len() && intervals[i].contains(t) {
            Ok(i + 1)
        } else {
            Err(Error::InternalInconsistency(format!("level {level} does not cover {t:?}")))
        }
    }

    /// Checks `A_j = A_{2j-1} ∪ A_{2j}` at every level.
    pub fn refinement_holds(&self) -> bool {
        self.levels.windows(2).all(|w| {
            w[0].iter().enumerate().all(|(j, parent)| {
                let (a, b) = (&w[1][2 * j], &w[1][2 * j + 1]);
                a.lower() == parent.lower()
                    && b.upper() == parent.upper()
                    && a.count() > 0
                    && b.count() > 0
                    && adjacent(a, b)
            })
        })
    }

    pub fn evidence(&self) -> TowerEvidence {
        let first_interval_levels = (1..=self.positions.len()).filter(|&n| self.positions[n - 1] == 1).collect();
        let deepest = &self.levels[self.levels.len() - 1];
        let mut refines = 0;
        for d in 1..=MAX_DEPTH {
            let fits = deepest.iter().all(|r| {
                if r.depth < d {
                    return false;
                }
                let shift = r.depth - d;
                r.lo >> shift == r.hi >> shift
            });
            if !fits {
                break;
            }
            refines = d;
        }
        TowerEvidence {
            rule: self.rule,
            depth: self.depth(),
            positions: self.positions.clone(),
            first_interval_levels,
            refines_cylinder_depth: refines,
        }
    }
}

/// `b` starts right where `a` ends: the cylinder after `a`'s last one.
fn adjacent(a: &CylinderRange, b: &CylinderRange) -> bool {
    let depth = a.depth.max(b.depth);
    let (a, b) = (a.at_depth(depth), b.at_depth(depth));
    a.hi + 1 == b.lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_level_of_midpoint_tower() {
        let seq = DenseSequence::CanonicalTernary;
        let tower = PartitionTower::build(&seq, 1, SplitRule::Midpoint).unwrap();
        let a1 = tower.interval(1, 1);
        let a2 = tower.interval(1, 2);
        assert_eq!(a1.lower(), Point::ternary([], None).unwrap());
        assert_eq!(a1.upper(), Point::ternary([], Some(2)).unwrap());
        assert_eq!(a2.lower(), Point::ternary([1], None).unwrap());
        assert_eq!(a2.upper(), Space::Cantor.max_point());
        assert_eq!(tower.position(1), 2);
    }

    #[test]
    fn towers_refine() {
        for rule in [SplitRule::Midpoint, SplitRule::ChaseFirst] {
            let tower = PartitionTower::build(&DenseSequence::CanonicalTernary, 8, rule).unwrap();
            assert!(tower.refinement_holds());
            for n in 1..=8 {
                let j = tower.position(n);
                assert_eq!(tower.locate(n as u32, &DenseSequence::CanonicalTernary.point(n)).unwrap(), j);
            }
        }
    }

    #[test]
    fn midpoint_tower_is_the_cylinder_basis() {
        let tower = PartitionTower::build(&DenseSequence::CanonicalTernary, 6, SplitRule::Midpoint).unwrap();
        assert_eq!(tower.evidence().refines_cylinder_depth, 6);
    }

    #[test]
    fn chase_first_keeps_terms_in_the_first_interval() {
        let seq = DenseSequence::explicit(vec![
            Point::ternary([3], None).unwrap(),
            Point::ternary([4], None).unwrap(),
            Point::ternary([5], None).unwrap(),
        ])
        .unwrap();
        let tower = PartitionTower::build(&seq, 3, SplitRule::ChaseFirst).unwrap();
        assert!(tower.refinement_holds());
        assert_eq!(tower.evidence().first_interval_levels, vec![1, 2, 3]);
    }
}
