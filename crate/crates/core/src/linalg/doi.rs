//! Double operator integral transform against a divided-difference kernel.

use crate::functions::poly::PolyFunction;
use crate::linalg::dense::{CMat, HermitianOperator, C64};
use crate::linalg::eigh::eigh;
use crate::{Error, Result};

/// Eigenvalue pairs closer than this (relative to max(1, |y_i|, |y_j|)) use
/// the derivative at the midpoint instead of the divided difference; beyond
/// it the product-form divided difference is exact and stable anyway, so the
/// switch only settles the exactly-degenerate case.
pub const DEGENERACY_RTOL: f64 = 1e-8;

/// Transforms K by the divided-difference kernel of psi in the eigenbasis of
/// Y: with Y = U diag(y) U*, the result is U (M .* (U* K U)) U* where
/// M_ij = (psi(y_i) - psi(y_j)) / (y_i - y_j), and psi'((y_i+y_j)/2) when the
/// pair is degenerate.
///
/// For K = -i[Y, A] this reproduces -i[psi(Y), A]: the kernel multiplies the
/// factor (y_i - y_j) already present in the commutator's matrix elements.
pub fn doi_transform(
    y: &HermitianOperator,
    k: &CMat,
    psi: &PolyFunction,
) -> Result<CMat> {
    if k.nrows() != y.dim() || k.ncols() != y.dim() {
        return Err(Error::DimensionMismatch { expected: y.dim(), got: k.nrows() });
    }
    if !psi.is_real() {
        return Err(Error::NonRealCoefficients);
    }
    let d = eigh(y);
    let dpsi = psi.derivative();
    let u = d.vectors();
    let mut kt = u.adjoint() * k * u;
    let ev = d.eigenvalues();
    for i in 0..d.dim() {
        for j in 0..d.dim() {
            let (yi, yj) = (ev[i], ev[j]);
            let kernel: C64 = if (yi - yj).abs() < DEGENERACY_RTOL * yi.abs().max(yj.abs()).max(1.0)
            {
                dpsi.eval(0.5 * (yi + yj))
            } else {
                psi.divided_difference(yi, yj)
            };
            kt[(i, j)] *= kernel;
        }
    }
    Ok(u * kt * u.adjoint())
}
