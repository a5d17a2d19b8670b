//! Banded complex matrices with exact, locality-preserving arithmetic.
//!
//! The model operators are tridiagonal and every polynomial expression in
//! them stays banded with predictable bandwidth. Banded products evaluate an
//! interior entry through index ranges that do not depend on the ambient
//! dimension, so corner quantities of such expressions are bit-for-bit
//! invariant under enlarging the truncation. That exactness (and the O(dim)
//! cost) is why the model pipeline runs on this type instead of dense
//! matrices.

use crate::functions::poly::PolyFunction;
use crate::linalg::dense::{cr, CMat, C64, NEG_I};
use crate::{Error, Result};

/// Square matrix with entries confined to |i - j| <= half_bandwidth.
/// Diagonal k (entries (i, i+k)) is stored densely at `diags[k + half_bw]`,
/// indexed by row; slots whose column falls outside the matrix stay zero.
#[derive(Clone, Debug)]
pub struct Banded {
    dim: usize,
    hbw: usize,
    diags: Vec<Vec<C64>>,
}

impl Banded {
    pub fn zeros(dim: usize, hbw: usize) -> Self {
        let hbw = hbw.min(dim.saturating_sub(1));
        Self { dim, hbw, diags: vec![vec![cr(0.0); dim]; 2 * hbw + 1] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, 0);
        for i in 0..dim {
            m.diags[0][i] = cr(1.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), 0);
        m.diags[0].copy_from_slice(diag);
        m
    }

    /// Tridiagonal with given main, sub (entries (i+1, i)), and super
    /// (entries (i, i+1)) diagonals.
    pub fn tridiagonal(diag: &[C64], sub: &[C64], sup: &[C64]) -> Self {
        let n = diag.len();
        assert_eq!(sub.len(), n.saturating_sub(1));
        assert_eq!(sup.len(), n.saturating_sub(1));
        let mut m = Self::zeros(n, 1);
        m.diags[1].copy_from_slice(diag);
        for i in 0..n - 1 {
            m.diags[0][i + 1] = sub[i]; // offset -1: entry (i+1, i)
            m.diags[2][i] = sup[i]; // offset +1: entry (i, i+1)
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_bandwidth(&self) -> usize {
        self.hbw
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        debug_assert!(i < self.dim && j < self.dim);
        let (lo, hi) = (i.min(j), i.max(j));
        if hi - lo > self.hbw {
            return cr(0.0);
        }
        self.diags[(j + self.hbw) - i][i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        let (lo, hi) = (i.min(j), i.max(j));
        assert!(hi - lo <= self.hbw, "entry ({i},{j}) outside bandwidth {}", self.hbw);
        self.diags[(j + self.hbw) - i][i] = v;
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = self.clone();
        for d in &mut out.diags {
            for v in d.iter_mut() {
                *v *= factor;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "banded dimensions must match");
        let hbw = self.hbw.max(other.hbw);
        let mut out = Self::zeros(self.dim, hbw);
        for m in [self, other] {
            for (d, col) in m.diags.iter().enumerate() {
                let dst = d + hbw - m.hbw;
                for (i, &v) in col.iter().enumerate() {
                    out.diags[dst][i] += v;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(cr(-1.0)))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim, self.hbw);
        for i in 0..self.dim {
            let lo = i.saturating_sub(self.hbw);
            let hi = (i + self.hbw).min(self.dim - 1);
            for j in lo..=hi {
                let v = self.entry(j, i).conj();
                out.diags[(j + out.hbw) - i][i] = v;
            }
        }
        out
    }

    /// Banded product; the result bandwidth is the sum of the factors'.
    /// The inner summation range for an interior entry depends only on the
    /// bandwidths, never on `dim`, which is what makes corner quantities of
    /// polynomial expressions invariant under enlarging the truncation.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "banded dimensions must match");
        let n = self.dim;
        let hbw = (self.hbw + other.hbw).min(n.saturating_sub(1));
        let mut out = Self::zeros(n, hbw);
        for i in 0..n {
            let jlo = i.saturating_sub(hbw);
            let jhi = (i + hbw).min(n - 1);
            for j in jlo..=jhi {
                let klo = i.saturating_sub(self.hbw).max(j.saturating_sub(other.hbw));
                let khi = (i + self.hbw).min(j + other.hbw).min(n - 1);
                let mut acc = cr(0.0);
                let mut k = klo;
                while k <= khi {
                    acc += self.entry(i, k) * other.entry(k, j);
                    k += 1;
                }
                out.diags[(j + hbw) - i][i] = acc;
            }
        }
        out
    }

    /// p(A) by Horner's rule; bandwidth grows by deg(p) * half_bandwidth.
    pub fn poly(&self, p: &PolyFunction) -> Self {
        let coeffs = p.coeffs();
        let mut acc = Self::zeros(self.dim, 0);
        for i in 0..self.dim {
            acc.diags[0][i] = coeffs[coeffs.len() - 1];
        }
        for &ck in coeffs.iter().rev().skip(1) {
            acc = self.mul(&acc);
            for i in 0..self.dim {
                acc.diags[acc.hbw][i] += ck;
            }
        }
        acc
    }

    /// Integer matrix power by repeated multiplication.
    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Sum of the first n diagonal entries.
    pub fn corner_trace(&self, n: usize) -> Result<C64> {
        if n > self.dim {
            return Err(Error::CornerExceedsDim { corner: n, dim: self.dim });
        }
        let mut t = cr(0.0);
        for i in 0..n {
            t += self.diags[self.hbw][i];
        }
        Ok(t)
    }

    pub fn trace(&self) -> C64 {
        self.corner_trace(self.dim).expect("full trace is always in range")
    }

    pub fn diagonal_entry(&self, i: usize) -> C64 {
        self.diags[self.hbw][i]
    }

    /// Dense copy of the leading n-by-n corner.
    pub fn corner_block(&self, n: usize) -> Result<CMat> {
        if n > self.dim {
            return Err(Error::CornerExceedsDim { corner: n, dim: self.dim });
        }
        Ok(CMat::from_fn(n, n, |i, j| self.entry(i, j)))
    }

    pub fn to_dense(&self) -> CMat {
        CMat::from_fn(self.dim, self.dim, |i, j| self.entry(i, j))
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.diags
            .iter()
            .flat_map(|d| d.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Max entry of |A - A*|.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            let hi = (i + self.hbw).min(self.dim - 1);
            for j in i..=hi {
                let d = (self.entry(i, j) - self.entry(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

/// [A, B] = AB - BA on banded operands.
pub fn commutator(a: &Banded, b: &Banded) -> Banded {
    a.mul(b).sub(&b.mul(a))
}

/// -i[A, B].
pub fn neg_i_commutator(a: &Banded, b: &Banded) -> Banded {
    commutator(a, b).scale(NEG_I)
}
