use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{ClopenCombination, PartitionTower};
use crate::dyadic::Dyadic;
use crate::{Error, Result};

/// Coefficients `delta(n, J, i)` with `beta_n(1_{A_J}) = sum_{i <= J}
/// delta(n, J, i) 1_{A_i}`, stored sparsely per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTable {
    /// `levels[n - 1][J - 1]` is row `J` of level `n`, sorted by index.
    levels: Vec<Vec<Vec<(usize, Dyadic)>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaLevelSummary {
    pub level: usize,
    pub rows: usize,
    pub entries: usize,
}

impl DeltaTable {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Row `J` at level `n`.
    pub fn row(&self, n: usize, j: usize) -> &[(usize, Dyadic)] {
        &self.levels[n - 1][j - 1]
    }

    /// `delta(n, J, i)`, zero when absent.
    pub fn delta(&self, n: usize, j: usize, i: usize) -> Dyadic {
        let row = self.row(n, j);
        row.binary_search_by_key(&i, |(idx, _)| *idx).map(|p| row[p].1.clone()).unwrap_or_else(|_| Dyadic::zero())
    }

    pub fn summary(&self) -> Vec<DeltaLevelSummary> {
        self.levels
            .iter()
            .enumerate()
            .map(|(i, rows)| DeltaLevelSummary {
                level: i + 1,
                rows: rows.len(),
                entries: rows.iter().map(Vec::len).sum(),
            })
            .collect()
    }

    /// `beta_n(1_{A_J})` as a level-`n` combination.
    pub fn image_of_generator(&self, n: usize, j: usize) -> ClopenCombination<Dyadic> {
        let mut out = ClopenCombination::zero(n as u32);
        for (i, d) in self.row(n, j) {
            out.coeffs[i - 1] = d.clone();
        }
        out
    }
}

fn push_pair(row: &mut Vec<(usize, Dyadic)>, i: usize, d: &Dyadic) {
    if !d.is_zero() {
        row.push((2 * i - 1, d.clone()));
        row.push((2 * i, d.clone()));
    }
}

/// Builds `beta_1, ..., beta_depth` so that `beta_{n+1} o alpha_n = beta_n`.
///
/// Level 1 starts from `beta_1(1_{A_1}) = 1_{A_1}`. Passing to level `n+1`
/// with `j_0` the interval of `t_n`, generator `j` of level `n` splits into
/// `2j - 1` and `2j`:
///
/// * below `j_0` the row of `j` is copied onto both halves, with the
///   diagonal only on its own half;
/// * above `j_0` the same, halved;
/// * at `j_0` the lower part is `(delta(j_0, i) - sum_{k=i}^{j_0-1}
///   delta(k, i)) / 2`, which absorbs the `1_{A_i}, i < j_0` produced by
///   `alpha_n`.
///
/// The new top generator `2^{n+1} - 1` maps to its own indicator.
pub fn beta_recursion(tower: &PartitionTower, depth: usize) -> Result<DeltaTable> {
    if depth == 0 || depth > tower.depth() as usize {
        return Err(Error::InvalidArgument(format!("depth {depth} is outside the tower of depth {}", tower.depth())));
    }
    let mut levels = vec![vec![vec![(1usize, Dyadic::one())]]];
    for n in 1..depth {
        let prev = &levels[n - 1];
        let j0 = tower.position(n);
        let size = 1usize << (n + 1);
        let mut next: Vec<Vec<(usize, Dyadic)>> = Vec::with_capacity(size - 1);
        // Column sums sum_{k < j} delta(k, i), kept up to date for j = j0.
        let mut column: Vec<Dyadic> = vec![Dyadic::zero(); j0];
        for (idx, row) in prev.iter().enumerate() {
            let j = idx + 1;
            let (diag, lower) = row.split_last().expect("rows hold their diagonal");
            debug_assert_eq!(diag.0, j);
            let mut odd = Vec::with_capacity(2 * lower.len() + 1);
            let even;
            if j < j0 {
                for (i, d) in lower {
                    push_pair(&mut odd, *i, d);
                }
                odd.push((2 * j - 1, diag.1.clone()));
                even = vec![(2 * j, diag.1.clone())];
                for (i, d) in row {
                    column[i - 1] = &column[i - 1] + d;
                }
            } else if j == j0 {
                let mut lower_part: Vec<Dyadic> = column[..j - 1].iter().map(|c| -c).collect();
                for (i, d) in lower {
                    lower_part[i - 1] = &lower_part[i - 1] + d;
                }
                for (i, c) in lower_part.iter().enumerate() {
                    push_pair(&mut odd, i + 1, &c.half());
                }
                odd.push((2 * j - 1, diag.1.half()));
                even = vec![(2 * j, diag.1.half())];
            } else {
                for (i, d) in lower {
                    push_pair(&mut odd, *i, &d.half());
                }
                odd.push((2 * j - 1, diag.1.half()));
                even = vec![(2 * j, diag.1.half())];
            }
            next.push(odd);
            next.push(even);
        }
        next.push(vec![(size - 1, Dyadic::one())]);
        levels.push(next);
    }
    Ok(DeltaTable { levels })
}

/// `beta_n(g)` for `g` in the span of `1_{A_1}, ..., 1_{A_{2^n-1}}`.
pub fn beta_apply(table: &DeltaTable, n: usize, g: &ClopenCombination<BigInt>) -> Result<ClopenCombination<Dyadic>> {
    if n == 0 || n > table.depth() {
        return Err(Error::InvalidArgument(format!("level {n} is outside the table of depth {}", table.depth())));
    }
    if g.level() as usize > n {
        return Err(Error::BasisMismatch { level: n as u32, reason: format!("element lives at finer level {}", g.level()) });
    }
    let g = g.expand_to(n as u32)?;
    g.check_generated()?;
    let mut out = ClopenCombination::<Dyadic>::zero(n as u32);
    for (idx, c) in g.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = Dyadic::from(c);
        for (i, d) in table.row(n, idx + 1) {
            out.coeffs[i - 1] = &out.coeffs[i - 1] + &(&c * d);
        }
    }
    Ok(out)
}

/// Solves `beta_n(c) = h` by back-substitution from the top generator.
/// The diagonal entries are powers of two, so the solution is dyadic; it is
/// integral exactly when `h` lies in the image of stage `n`.
pub fn generator_solve(table: &DeltaTable, n: usize, h: &ClopenCombination<Dyadic>) -> Result<ClopenCombination<Dyadic>> {
    if n == 0 || n > table.depth() {
        return Err(Error::InvalidArgument(format!("level {n} is outside the table of depth {}", table.depth())));
    }
    if h.level() as usize > n {
        return Err(Error::BasisMismatch { level: n as u32, reason: format!("element lives at finer level {}", h.level()) });
    }
    let mut residual = h.expand_to(n as u32)?;
    residual.check_generated()?;
    let mut out = ClopenCombination::<Dyadic>::zero(n as u32);
    for j in (1..1usize << n).rev() {
        let r = residual.coeffs[j - 1].clone();
        if r.is_zero() {
            continue;
        }
        let row = table.row(n, j);
        let (_, diag) = row.last().expect("rows hold their diagonal");
        let c = r.div_power_of_two(diag)?;
        for (i, d) in row {
            residual.coeffs[i - 1] = &residual.coeffs[i - 1] - &(&c * d);
        }
        out.coeffs[j - 1] = c;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::k0::{alpha_apply, SplitRule};
    use crate::space::DenseSequence;

    fn setup(depth: u32) -> (PartitionTower, DeltaTable) {
        let tower = PartitionTower::build(&DenseSequence::CanonicalTernary, depth, SplitRule::Midpoint).unwrap();
        let table = beta_recursion(&tower, depth as usize).unwrap();
        (tower, table)
    }

    #[test]
    fn level_two_by_hand() {
        // t_1 = 2/3 lies in A_2 at level 1, so j0 = 2 and generator 1 sits
        // below it.
        let (tower, table) = setup(2);
        assert_eq!(tower.position(1), 2);
        assert_eq!(table.row(2, 1), &[(1, Dyadic::one())]);
        assert_eq!(table.row(2, 2), &[(2, Dyadic::one())]);
        assert_eq!(table.row(2, 3), &[(3, Dyadic::one())]);
    }

    #[test]
    fn intertwines_with_alpha() {
        let (tower, table) = setup(7);
        for n in 1..7 {
            for j in 1..1usize << n {
                let g = ClopenCombination::<BigInt>::indicator(n as u32, j).unwrap();
                let lhs = beta_apply(&table, n + 1, &alpha_apply(&tower, n, &g).unwrap()).unwrap();
                let rhs = beta_apply(&table, n, &g).unwrap();
                assert!(lhs.same_function(&rhs), "n = {n}, j = {j}: {lhs:?} vs {rhs:?}");
            }
        }
    }

    #[test]
    fn diagonal_is_a_positive_power_of_two() {
        let (_, table) = setup(8);
        for n in 1..=8 {
            for j in 1..1usize << n {
                let (i, d) = table.row(n, j).last().unwrap();
                assert_eq!(*i, j);
                assert!(d.power_of_two_exponent().is_some());
            }
        }
    }

    #[test]
    fn solve_inverts_apply() {
        let (_, table) = setup(6);
        let coeffs: Vec<BigInt> = (0..64).map(|i| BigInt::from((i * 37 % 11) as i64 - 5)).collect();
        let mut coeffs = coeffs;
        coeffs[63] = BigInt::zero();
        let g = ClopenCombination::from_coeffs(6, coeffs).unwrap();
        let h = beta_apply(&table, 6, &g).unwrap();
        let back = generator_solve(&table, 6, &h).unwrap();
        assert_eq!(back, g.to_dyadic());
    }

    #[test]
    fn top_coefficient_is_rejected() {
        let (_, table) = setup(3);
        let g = ClopenCombination::<BigInt>::indicator(3, 8).unwrap();
        assert!(matches!(beta_apply(&table, 3, &g), Err(Error::BasisMismatch { .. })));
    }
}
