//! Ordered K-theory of the Cantor-set limit.
//!
//! Stage groups are `C_0(Ω_0, Z)`, realized as integer combinations of the
//! indicators of a fixed [`PartitionTower`]. The connecting maps are
//! `alpha_n(g) = g + g o chi_{t_n}`, and the maps `beta_n` into
//! `G = C_0(Ω_0, Z[1/2])` are built level by level from coefficient tables.

mod alpha;
mod beta;
mod embedding;
mod order;
mod tower;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

pub use alpha::{alpha_apply, alpha_composite, alpha_composite_brute_force, alpha_iterated, pullback_chi};
pub use beta::{beta_apply, beta_recursion, generator_solve, DeltaLevelSummary, DeltaTable};
pub use embedding::{lambda_point_checks, lambda_sharp_check, pullback_lambda, EmbeddingReport, LambdaPointReport};
pub use order::{total_order_decide, TotalOrderCertificate};
pub use tower::{PartitionTower, SplitRule, TowerEvidence};

use crate::dyadic::Dyadic;
use crate::{Error, Result};

/// Coefficient rings for clopen combinations: `Z` and `Z[1/2]`.
pub trait Coefficient:
    Clone
    + Debug
    + Display
    + Ord
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
}

impl<T> Coefficient for T where
    T: Clone
        + Debug
        + Display
        + Ord
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + Send
        + Sync
{
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// `sum_j c_j 1_{A_j}` over the `2^level` intervals of one tower level.
/// Coefficient `j - 1` belongs to `A_j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClopenCombination<C> {
    level: u32,
    coeffs: Vec<C>,
}

impl<C: Coefficient> ClopenCombination<C> {
    pub fn zero(level: u32) -> Self {
        ClopenCombination { level, coeffs: vec![C::zero(); 1 << level] }
    }

    pub fn from_coeffs(level: u32, coeffs: Vec<C>) -> Result<Self> {
        if coeffs.len() != 1 << level {
            return Err(Error::InvalidArgument(format!(
                "level {level} needs {} coefficients, got {}",
                1u64 << level,
                coeffs.len()
            )));
        }
        Ok(ClopenCombination { level, coeffs })
    }

    /// `1_{A_j}` for `1 <= j <= 2^level`.
    pub fn indicator(level: u32, j: usize) -> Result<Self> {
        if j == 0 || j > 1 << level {
            return Err(Error::InvalidArgument(format!("no interval A_{j} at level {level}")));
        }
        let mut out = Self::zero(level);
        out.coeffs[j - 1] = C::one();
        Ok(out)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `A_j`, 1-based.
    pub fn coeff(&self, j: usize) -> &C {
        &self.coeffs[j - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Membership in `C_0(Ω_0, ·)`: the top interval contains `max Ω`.
    pub fn vanishes_at_top(&self) -> bool {
        self.coeffs.last().is_none_or(Zero::is_zero)
    }

    /// Requires membership in the span of `1_{A_1}, ..., 1_{A_{2^n - 1}}`.
    pub fn check_generated(&self) -> Result<()> {
        if self.vanishes_at_top() {
            Ok(())
        } else {
            Err(Error::BasisMismatch { level: self.level, reason: "nonzero coefficient on the top interval".into() })
        }
    }

    /// The same function written over a finer level, using
    /// `A_j = A_{2j-1} ∪ A_{2j}`.
    pub fn expand_to(&self, level: u32) -> Result<Self> {
        if level < self.level {
            return Err(Error::InvalidArgument(format!("cannot expand level {} to level {level}", self.level)));
        }
        let factor = 1usize << (level - self.level);
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * factor);
        for c in &self.coeffs {
            coeffs.extend(std::iter::repeat_n(c.clone(), factor));
        }
        Ok(ClopenCombination { level, coeffs })
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        let level = self.level.max(other.level);
        Ok((self.expand_to(level)?, other.expand_to(level)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let coeffs = a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x + y).collect();
        Ok(ClopenCombination { level: a.level, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ClopenCombination { level: self.level, coeffs: self.coeffs.iter().cloned().map(Neg::neg).collect() }
    }

    pub fn scale(&self, factor: &C) -> Self {
        ClopenCombination {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect(),
        }
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> ClopenCombination<D> {
        ClopenCombination { level: self.level, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Equality as functions on Ω, whatever the levels.
    pub fn same_function(&self, other: &Self) -> bool {
        self.aligned(other).map(|(a, b)| a == b).unwrap_or(false)
    }

    /// Index of the topmost interval with a nonzero coefficient.
    pub fn top_support(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero()).map(|i| i + 1)
    }

    /// Lexicographic sign: the sign of the topmost nonzero coefficient.
    pub fn lex_sign(&self) -> Sign {
        match self.top_support() {
            None => Sign::Zero,
            Some(j) if self.coeffs[j - 1] > C::zero() => Sign::Positive,
            Some(_) => Sign::Negative,
        }
    }

    pub fn is_pointwise_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| *c >= C::zero())
    }

    /// Smallest value taken on `Ω_0`.
    pub fn min_value(&self) -> C {
        self.coeffs.iter().min().cloned().unwrap_or_else(C::zero)
    }
}

impl ClopenCombination<BigInt> {
    pub fn to_dyadic(&self) -> ClopenCombination<Dyadic> {
        self.map(|c| Dyadic::from(c))
    }
}

impl<C: Coefficient> Debug for ClopenCombination<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "L{}[", self.level)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl<C: Coefficient> Serialize for ClopenCombination<C> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        let mut st = serializer.serialize_struct("ClopenCombination", 2)?;
        st.serialize_field("level", &self.level)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}
