use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::{pullback_chi, ClopenCombination, PartitionTower, Sign};
use crate::space::{DenseSequence, Point};
use crate::{Error, Result};

/// Evidence that `g` or `-g` becomes positive in the limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TotalOrderCertificate {
    pub n: usize,
    pub element: ClopenCombination<BigInt>,
    pub sign: Sign,
    /// Least `k` with `sign * alpha_{n+k,n}(g) >= 0` on `Ω_0`.
    pub k: usize,
    /// A `k` that the a priori bound guarantees; always `>= k`.
    pub guaranteed_k: usize,
    /// `[s, r]`, the run of intervals below the top support where the
    /// oriented element is at least 1.
    pub s: Option<Point>,
    pub r: Option<Point>,
    /// Terms of the window `t_n, ..., t_{n+k'-1}` in `[s, r]`.
    pub hits: usize,
    /// `sign * alpha_{n+k,n}(g)` at level `n`.
    pub witness: ClopenCombination<BigInt>,
}

/// Least `m` with `2^m >= value`.
fn ceil_log2(value: &BigInt) -> usize {
    if *value <= BigInt::from(1) {
        0
    } else {
        (value - 1u32).bits() as usize
    }
}

/// Decides the order on the limit group for an element of stage `n`:
/// orient by the sign of the topmost nonzero coefficient and run
/// `S_{k+1} = S_k + S_k o chi_{t_{n+k}}` until `S_k >= 0`.
///
/// Every window term `v` in `[s, r]` contributes a copy of the oriented
/// element that is at least 1 below `r`, and it outweighs everything before
/// it in sorted order. So once the window holds `m` such terms with
/// `2^m >= 1 + |min g|`, positivity is guaranteed.
pub fn total_order_decide(
    tower: &PartitionTower,
    seq: &DenseSequence,
    n: usize,
    g: &ClopenCombination<BigInt>,
    horizon: usize,
) -> Result<TotalOrderCertificate> {
    if n == 0 || n > tower.depth() as usize {
        return Err(Error::InvalidArgument(format!("level {n} is outside the tower of depth {}", tower.depth())));
    }
    if g.level() as usize > n {
        return Err(Error::BasisMismatch { level: n as u32, reason: format!("element lives at finer level {}", g.level()) });
    }
    let element = g.expand_to(n as u32)?;
    element.check_generated()?;
    let sign = element.lex_sign();
    let oriented = match sign {
        Sign::Negative => element.neg(),
        _ => element.clone(),
    };
    let Some(top) = oriented.top_support() else {
        return Ok(TotalOrderCertificate {
            n,
            witness: oriented,
            element,
            sign,
            k: 0,
            guaranteed_k: 0,
            s: None,
            r: None,
            hits: 0,
        });
    };

    let one = BigInt::from(1);
    let mut bottom = top;
    while bottom > 1 && *oriented.coeff(bottom - 1) >= one {
        bottom -= 1;
    }
    let s = tower.interval(n as u32, bottom).lower();
    let r = tower.interval(n as u32, top).upper();
    let min = oriented.min_value();
    let needed = if min.is_negative() { ceil_log2(&(BigInt::from(1) + min.abs())) } else { 0 };

    let mut current = oriented.clone();
    let mut found = None;
    let mut guaranteed = if needed == 0 { Some(0) } else { None };
    let mut hits = 0;
    let mut k = 0;
    loop {
        if found.is_none() && current.is_pointwise_nonnegative() {
            found = Some((k, current.clone()));
        }
        if found.is_some() && guaranteed.is_some() {
            break;
        }
        if k == horizon {
            return Err(Error::HorizonExhausted {
                horizon,
                detail: format!(
                    "{} positive after {k} steps; {hits} of {needed} terms seen in [s, r]",
                    if found.is_some() { "already" } else { "not" }
                ),
            });
        }
        let t = seq.point(n + k);
        if s <= t && t <= r {
            hits += 1;
        }
        if found.is_none() {
            let j = tower.locate(n as u32, &t)?;
            current = current.add(&pullback_chi(&current, j))?;
        }
        k += 1;
        if guaranteed.is_none() && hits >= needed {
            guaranteed = Some(k);
        }
    }
    let (k, witness) = found.expect("loop exits with a witness");
    let guaranteed_k = guaranteed.expect("loop exits with a bound");
    if k > guaranteed_k {
        return Err(Error::InternalInconsistency(format!("positive only after {k} steps, bound was {guaranteed_k}")));
    }
    Ok(TotalOrderCertificate {
        n,
        element,
        sign,
        k,
        guaranteed_k,
        s: Some(s),
        r: Some(r),
        hits,
        witness,
    })
}

impl TotalOrderCertificate {
    /// Recomputes the witness from the closed form.
    pub fn verify(&self, tower: &PartitionTower, seq: &DenseSequence) -> Result<bool> {
        let oriented = match self.sign {
            Sign::Negative => self.element.neg(),
            _ => self.element.clone(),
        };
        let composite = super::alpha_composite(tower, seq, self.n, self.k, &oriented)?;
        Ok(composite == self.witness && self.witness.is_pointwise_nonnegative() && !self.witness.is_zero() == (self.sign != Sign::Zero))
    }
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
        (seq.clone(), PartitionTower::build(&seq, depth, SplitRule::Midpoint).unwrap())
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(&BigInt::from(1)), 0);
        assert_eq!(ceil_log2(&BigInt::from(2)), 1);
        assert_eq!(ceil_log2(&BigInt::from(3)), 2);
        assert_eq!(ceil_log2(&BigInt::from(4)), 2);
        assert_eq!(ceil_log2(&BigInt::from(5)), 3);
    }

    #[test]
    fn nonnegative_needs_no_steps() {
        let (seq, tower) = tower(3);
        let c = total_order_decide(&tower, &seq, 2, &k0(2, &[0, 3, 1, 0]), 10).unwrap();
        assert_eq!((c.sign, c.k, c.guaranteed_k), (Sign::Positive, 0, 0));
    }

    #[test]
    fn large_negative_mass_is_absorbed() {
        let (seq, tower) = tower(3);
        let g = k0(3, &[-1000, 0, 0, 0, 0, 0, 1, 0]);
        let c = total_order_decide(&tower, &seq, 3, &g, 5000).unwrap();
        assert_eq!(c.sign, Sign::Positive);
        assert!(c.k >= 1 && c.k <= c.guaranteed_k);
        assert!(c.verify(&tower, &seq).unwrap());
        let neg = total_order_decide(&tower, &seq, 3, &g.neg(), 5000).unwrap();
        assert_eq!(neg.sign, Sign::Negative);
        assert_eq!(neg.witness, c.witness);
    }

    #[test]
    fn zero_is_zero() {
        let (seq, tower) = tower(3);
        let c = total_order_decide(&tower, &seq, 3, &ClopenCombination::zero(3), 5).unwrap();
        assert_eq!(c.sign, Sign::Zero);
        assert!(c.verify(&tower, &seq).unwrap());
    }
}
