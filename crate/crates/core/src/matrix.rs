//! Dense square matrices over a [`Scalar`].

use std::fmt;

use crate::scalar::Scalar;
use crate::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    dim: usize,
    entries: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, entries: vec![S::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = S::one();
        }
        m
    }

    pub fn scalar(value: S) -> Self {
        Matrix { dim: 1, entries: vec![value] }
    }

    pub fn diagonal(values: Vec<S>) -> Self {
        let dim = values.len();
        let mut m = Self::zeros(dim);
        for (i, v) in values.into_iter().enumerate() {
            m.entries[i * dim + i] = v;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("matrix rows must form a square".into()));
        }
        Ok(Matrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: S) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.entries.chunks(self.dim.max(1))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::StageMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Matrix { dim: self.dim, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(Matrix { dim: self.dim, entries })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j] = out.entries[i * n + j].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &S) -> Self {
        Matrix { dim: self.dim, entries: self.entries.iter().map(|e| e.clone() * factor.clone()).collect() }
    }

    pub fn neg(&self) -> Self {
        Matrix { dim: self.dim, entries: self.entries.iter().map(|e| -e.clone()).collect() }
    }

    /// Transpose; real scalars make this the adjoint.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].clone();
            }
        }
        out
    }

    pub fn trace(&self) -> S {
        (0..self.dim).fold(S::zero(), |acc, i| acc + self.entries[i * self.dim + i].clone())
    }

    /// Sum of squared entries.
    pub fn frobenius_sq(&self) -> S {
        self.entries.iter().fold(S::zero(), |acc, e| acc + e.clone() * e.clone())
    }

    /// Upper bound on the operator norm via the Frobenius norm, rounded up.
    pub fn norm_upper(&self) -> S {
        self.frobenius_sq().sqrt_upper()
    }

    pub fn block_diagonal(blocks: &[Matrix<S>]) -> Self {
        let dim = blocks.iter().map(|b| b.dim).sum();
        let mut out = Self::zeros(dim);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    out.entries[(offset + i) * dim + offset + j] = b.entries[i * b.dim + j].clone();
                }
            }
            offset += b.dim;
        }
        out
    }

    /// The diagonal block of size `size` starting at row/column `offset`.
    pub fn block(&self, offset: usize, size: usize) -> Self {
        let mut out = Self::zeros(size);
        for i in 0..size {
            for j in 0..size {
                out.entries[i * size + j] = self.entries[(offset + i) * self.dim + offset + j].clone();
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut out = Self::zeros(dim);
        for i in 0..n {
            for j in 0..n {
                let a = &self.entries[i * n + j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.entries[(i * m + k) * dim + j * m + l] = a.clone() * other.entries[k * m + l].clone();
                    }
                }
            }
        }
        out
    }

    pub fn permute_blocks(&self, block: usize, order: &[usize]) -> Self {
        let blocks: Vec<Matrix<S>> = order.iter().map(|&b| self.block(b * block, block)).collect();
        Self::block_diagonal(&blocks)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..i).all(|j| self.entries[i * n + j] == self.entries[j * n + i]))
    }

    /// Positive semidefiniteness by symmetric Gaussian elimination; exact for
    /// exact scalars.
    pub fn is_positive(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        let n = self.dim;
        let mut a = self.entries.clone();
        for k in 0..n {
            let pivot = a[k * n + k].clone();
            if pivot < S::zero() {
                return false;
            }
            if pivot.is_zero() {
                if (k + 1..n).any(|j| !a[k * n + j].is_zero()) {
                    return false;
                }
                continue;
            }
            for i in k + 1..n {
                let factor = a[i * n + k].clone() / pivot.clone();
                if factor.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let v = a[i * n + j].clone() - factor.clone() * a[k * n + j].clone();
                    a[i * n + j] = v;
                }
            }
        }
        true
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self.rows().map(|r| r.iter().map(S::to_text).collect()).collect();
        write!(f, "{rows:?}")
    }
}

impl<S: Scalar> serde::Serialize for Matrix<S> {
    fn serialize<Ser: serde::Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let rows: Vec<Vec<String>> = self.rows().map(|r| r.iter().map(S::to_text).collect()).collect();
        rows.serialize(serializer)
    }
}
