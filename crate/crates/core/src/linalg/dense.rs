//! Dense complex matrices, Hermitian validation, traces, and norms.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::{Error, Result};

pub type C64 = Complex<f64>;

/// Dense complex matrix, the working representation for dense operators.
pub type CMat = DMatrix<C64>;

/// Complex dense matrix with no symmetry requirement; commutators and other
/// non-Hermitian results live here.
pub type GeneralOperator = CMat;

/// Relative tolerance for the Hermitian validation check: a matrix passes if
/// max |A_ij - conj(A_ji)| <= HERMITIAN_RTOL * max |A_ij|.
pub const HERMITIAN_RTOL: f64 = 1e-12;

pub const I: C64 = C64::new(0.0, 1.0);
pub const NEG_I: C64 = C64::new(0.0, -1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Square complex matrix validated to be Hermitian at construction.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    mat: CMat,
}

impl HermitianOperator {
    /// Validates shape and Hermitian symmetry.
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() == 0 || mat.nrows() != mat.ncols() {
            return Err(Error::BadShape { rows: mat.nrows(), cols: mat.ncols() });
        }
        let asym = max_asymmetry(&mat);
        let tolerance = HERMITIAN_RTOL * max_abs_entry(&mat).max(f64::MIN_POSITIVE);
        if asym > tolerance {
            return Err(Error::NotHermitian { max_asymmetry: asym, tolerance });
        }
        Ok(Self { mat })
    }

    /// Symmetrizes (A + A*)/2 first; for inputs that are Hermitian up to
    /// rounding this removes the asymmetry instead of rejecting it.
    pub fn symmetrize(mat: CMat) -> Result<Self> {
        let sym = (&mat + mat.adjoint()) * cr(0.5);
        Self::new(sym)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mat = CMat::from_fn(n, n, |i, j| if i == j { cr(diag[i]) } else { cr(0.0) });
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }
}

/// Max entry of |A - A*|.
pub fn max_asymmetry(a: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..=i {
            let d = (a[(i, j)] - a[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

pub fn max_abs_entry(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Sum of diagonal entries.
pub fn trace(a: &CMat) -> C64 {
    let mut t = cr(0.0);
    for i in 0..a.nrows().min(a.ncols()) {
        t += a[(i, i)];
    }
    t
}

/// Sum of the first `n` diagonal entries, the compression of the trace to the
/// leading corner. For truncations of operators whose full commutator trace
/// vanishes identically, this is the quantity that retains the trace defect.
pub fn corner_trace(a: &CMat, n: usize) -> Result<C64> {
    if n > a.nrows() || n > a.ncols() {
        return Err(Error::CornerExceedsDim { corner: n, dim: a.nrows() });
    }
    let mut t = cr(0.0);
    for i in 0..n {
        t += a[(i, i)];
    }
    Ok(t)
}

/// [A, B] = AB - BA.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// -i[A, B], the combination whose corner traces carry the trace defect.
pub fn neg_i_commutator(a: &CMat, b: &CMat) -> CMat {
    commutator(a, b) * NEG_I
}

/// Hilbert-Schmidt (Frobenius) norm.
pub fn hs_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Trace norm: sum of singular values, computed as sqrt of the eigenvalues of
/// A*A. Satisfies |trace(A)| <= trace_norm(A) up to eigensolver accuracy.
pub fn trace_norm(a: &CMat) -> f64 {
    let gram = a.adjoint() * a;
    let se = nalgebra::SymmetricEigen::new(gram);
    se.eigenvalues.iter().map(|&x| x.max(0.0).sqrt()).sum()
}

/// Trace norm of a Hermitian matrix: sum of |eigenvalues|, exact up to the
/// eigensolver rather than through the squared Gram matrix.
pub fn hermitian_trace_norm(a: &HermitianOperator) -> f64 {
    let se = nalgebra::SymmetricEigen::new(a.matrix().clone());
    se.eigenvalues.iter().map(|x| x.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat2(a: C64, b: C64, c2: C64, d: C64) -> CMat {
        CMat::from_row_slice(2, 2, &[a, b, c2, d])
    }

    #[test]
    fn hermitian_validation_accepts_and_rejects() {
        let good = mat2(cr(1.0), c(0.0, 2.0), c(0.0, -2.0), cr(-1.0));
        assert!(HermitianOperator::new(good).is_ok());

        let bad = mat2(cr(1.0), c(0.0, 2.0), c(0.0, 2.0), cr(-1.0));
        match HermitianOperator::new(bad) {
            Err(Error::NotHermitian { max_asymmetry, .. }) => {
                assert!((max_asymmetry - 4.0).abs() < 1e-12);
            }
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn empty_and_rectangular_rejected() {
        assert!(matches!(HermitianOperator::new(CMat::zeros(0, 0)), Err(Error::BadShape { .. })));
        assert!(matches!(HermitianOperator::new(CMat::zeros(2, 3)), Err(Error::BadShape { .. })));
    }

    #[test]
    fn corner_trace_identity() {
        let id = CMat::identity(8, 8);
        assert_eq!(corner_trace(&id, 3).unwrap(), cr(3.0));
        assert!(matches!(corner_trace(&id, 9), Err(Error::CornerExceedsDim { .. })));
    }

    #[test]
    fn trace_of_commutator_vanishes() {
        let a = mat2(cr(1.0), c(2.0, 1.0), c(0.5, -0.25), cr(3.0));
        let b = mat2(cr(-1.0), c(0.0, 1.0), c(1.0, 1.0), cr(2.0));
        let t = trace(&commutator(&a, &b));
        assert!(t.norm() < 1e-14);
    }

    #[test]
    fn trace_norm_of_diagonal() {
        let d = HermitianOperator::from_real_diagonal(&[3.0, -4.0]);
        assert!((hermitian_trace_norm(&d) - 7.0).abs() < 1e-12);
        assert!((trace_norm(d.matrix()) - 7.0).abs() < 1e-10);
        assert!((trace(d.matrix()).re - (-1.0)).abs() < 1e-14);
    }

    #[test]
    fn trace_bounded_by_trace_norm() {
        let a = mat2(c(1.0, 0.5), c(2.0, -1.0), c(-0.5, 0.25), c(0.0, 3.0));
        assert!(trace(&a).norm() <= trace_norm(&a) + 1e-10);
    }

    #[test]
    fn hs_norm_matches_entries() {
        let a = mat2(cr(3.0), cr(0.0), cr(0.0), cr(4.0));
        assert!((hs_norm(&a) - 5.0).abs() < 1e-14);
    }
}
