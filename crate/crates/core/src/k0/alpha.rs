use num_bigint::BigInt;

use super::{ClopenCombination, Coefficient, PartitionTower};
use crate::space::DenseSequence;
use crate::{Error, Result};

/// `g o chi_t` for `t ∈ A_{j}` at the level of `g`: every interval at or
/// below `A_j` takes the value `g` has on `A_j`.
pub fn pullback_chi<C: Coefficient>(g: &ClopenCombination<C>, j: usize) -> ClopenCombination<C> {
    let mut out = g.clone();
    let v = g.coeffs[j - 1].clone();
    for c in &mut out.coeffs[..j] {
        *c = v.clone();
    }
    out
}

fn at_level<C: Coefficient>(g: &ClopenCombination<C>, n: usize, tower: &PartitionTower) -> Result<ClopenCombination<C>> {
    if n == 0 || n > tower.depth() as usize {
        return Err(Error::InvalidArgument(format!("level {n} is outside the tower of depth {}", tower.depth())));
    }
    if g.level() as usize > n {
        return Err(Error::BasisMismatch { level: n as u32, reason: format!("element lives at finer level {}", g.level()) });
    }
    g.expand_to(n as u32)
}

/// `alpha_n(g) = g + g o chi_{t_n}` by the three-case rule on generators:
/// `1_{A_j}` is fixed below `j_0`, doubled above `j_0`, and at `j_0`
/// becomes `2 1_{A_{j_0}} + 1_{A_{j_0 - 1}} + ... + 1_{A_1}`.
pub fn alpha_apply<C: Coefficient>(
    tower: &PartitionTower,
    n: usize,
    g: &ClopenCombination<C>,
) -> Result<ClopenCombination<C>> {
    let g = at_level(g, n, tower)?;
    let j0 = tower.position(n);
    let mut out = ClopenCombination::<C>::zero(n as u32);
    for (idx, c) in g.coeffs.iter().enumerate() {
        let j = idx + 1;
        if c.is_zero() {
            continue;
        }
        if j < j0 {
            out.coeffs[idx] = out.coeffs[idx].clone() + c.clone();
        } else if j == j0 {
            out.coeffs[idx] = out.coeffs[idx].clone() + c.clone() + c.clone();
            for lower in &mut out.coeffs[..idx] {
                *lower = lower.clone() + c.clone();
            }
        } else {
            out.coeffs[idx] = out.coeffs[idx].clone() + c.clone() + c.clone();
        }
    }
    Ok(out)
}

/// `alpha_{n+k-1} o ... o alpha_n (g)`, written at level `n + k`.
pub fn alpha_iterated<C: Coefficient>(
    tower: &PartitionTower,
    n: usize,
    k: usize,
    g: &ClopenCombination<C>,
) -> Result<ClopenCombination<C>> {
    let mut current = at_level(g, n, tower)?;
    for step in n..n + k {
        current = alpha_apply(tower, step, &current)?.expand_to(step as u32 + 1)?;
    }
    Ok(current)
}

/// `alpha_{n+k,n}(g) = sum_{F ⊆ X} g o chi_{max F}` over
/// `X = {t_n, ..., t_{n+k-1}}`, written at level `n`.
///
/// With `X` sorted as `v_1 <= ... <= v_k`, this is
/// `g + sum_i 2^{i-1} g o chi_{v_i}`. Each `g o chi_v` only needs the
/// level-`n` interval holding `v`.
pub fn alpha_composite(
    tower: &PartitionTower,
    seq: &DenseSequence,
    n: usize,
    k: usize,
    g: &ClopenCombination<BigInt>,
) -> Result<ClopenCombination<BigInt>> {
    let g = at_level(g, n, tower)?;
    let mut window = seq.window(n, k);
    window.sort();
    let mut out = g.clone();
    let mut weight = BigInt::from(1);
    for v in &window {
        let j = tower.locate(n as u32, v)?;
        out = out.add(&pullback_chi(&g, j).scale(&weight))?;
        weight <<= 1;
    }
    Ok(out)
}

/// The same sum over all `2^k` subsets.
pub fn alpha_composite_brute_force<C: Coefficient>(
    tower: &PartitionTower,
    seq: &DenseSequence,
    n: usize,
    k: usize,
    g: &ClopenCombination<C>,
) -> Result<ClopenCombination<C>> {
    if k > 24 {
        return Err(Error::InvalidArgument(format!("2^{k} subsets is too many")));
    }
    let g = at_level(g, n, tower)?;
    let window = seq.window(n, k);
    let located: Vec<usize> = window.iter().map(|t| tower.locate(n as u32, t)).collect::<Result<_>>()?;
    let mut out = ClopenCombination::zero(n as u32);
    for mask in 0usize..1 << k {
        let top = (0..k).filter(|i| mask >> i & 1 == 1).max_by(|&a, &b| window[a].cmp(&window[b]));
        let term = match top {
            None => g.clone(),
            Some(i) => pullback_chi(&g, located[i]),
        };
        out = out.add(&term)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::k0::SplitRule;

    fn k0(level: u32, coeffs: &[i64]) -> ClopenCombination<BigInt> {
        ClopenCombination::from_coeffs(level, coeffs.iter().map(|&c| BigInt::from(c)).collect()).unwrap()
    }

    fn tower(depth: u32) -> (DenseSequence, PartitionTower) {
        let seq = DenseSequence::CanonicalTernary;
        let tower = PartitionTower::build(&seq, depth, SplitRule::Midpoint).unwrap();
        (seq, tower)
    }

    #[test]
    fn three_cases() {
        let (_, tower) = tower(4);
        // t_2 = 2/9 lies in A_2 at level 2.
        assert_eq!(tower.position(2), 2);
        let g1 = ClopenCombination::<BigInt>::indicator(2, 1).unwrap();
        assert_eq!(alpha_apply(&tower, 2, &g1).unwrap(), g1);
        let g2 = ClopenCombination::<BigInt>::indicator(2, 2).unwrap();
        assert_eq!(alpha_apply(&tower, 2, &g2).unwrap(), k0(2, &[1, 2, 0, 0]));
        let g3 = ClopenCombination::<BigInt>::indicator(2, 3).unwrap();
        assert_eq!(alpha_apply(&tower, 2, &g3).unwrap(), k0(2, &[0, 0, 2, 0]));
        assert!(alpha_apply(&tower, 2, &ClopenCombination::<BigInt>::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn one_step_composite_is_alpha() {
        let (seq, tower) = tower(5);
        let g = k0(3, &[4, -1, 0, 2, -7, 1, 3, 0]);
        let a = alpha_apply(&tower, 3, &g).unwrap();
        assert_eq!(alpha_composite(&tower, &seq, 3, 1, &g).unwrap(), a);
    }

    #[test]
    fn routes_agree() {
        let (seq, tower) = tower(12);
        let g = k0(3, &[4, -1, 0, 2, -7, 1, 3, 0]);
        for k in 0..8 {
            let closed = alpha_composite(&tower, &seq, 3, k, &g).unwrap();
            assert_eq!(closed, alpha_composite_brute_force(&tower, &seq, 3, k, &g).unwrap());
            assert!(closed.same_function(&alpha_iterated(&tower, 3, k, &g).unwrap()));
        }
    }
}
