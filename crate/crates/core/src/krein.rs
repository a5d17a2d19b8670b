//! Spectral shift functions of Hermitian pairs and the exact trace identity
//! Tr{phi(H) - phi(H0)} = Int phi'(l) xi(l) dl.

use crate::functions::poly::PolyFunction;
use crate::linalg::dense::{c, hermitian_trace_norm, trace, HermitianOperator};
use crate::linalg::eigh::{apply_function, eigh};
use crate::models::{HyponormalModel, ModelSpec};
use crate::{Error, Result};

/// Integer-valued compactly supported step function
///   xi(l) = #{eig(H0) <= l} - #{eig(H) <= l},
/// stored as sorted breakpoints with the constant value on each interval
/// [breakpoints[k], breakpoints[k+1]). Outside the stored support xi is zero,
/// and integrals against it are interval sums, exact up to rounding in the
/// endpoint evaluations.
#[derive(Clone, Debug)]
pub struct SpectralShiftFunction {
    breakpoints: Vec<f64>,
    values: Vec<i64>,
}

impl SpectralShiftFunction {
    /// Builds the shift function of the pair from the two eigenvalue lists.
    /// Both spectra enter as multisets; the lists need not be sorted.
    pub fn from_spectra(eigs_h0: &[f64], eigs_h: &[f64]) -> Self {
        let mut events: Vec<(f64, i64)> = eigs_h0
            .iter()
            .map(|&l| (l, 1i64))
            .chain(eigs_h.iter().map(|&l| (l, -1i64)))
            .collect();
        events.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues").then(a.1.cmp(&b.1)));

        let mut breakpoints: Vec<f64> = Vec::new();
        let mut values: Vec<i64> = Vec::new();
        let mut cum = 0i64;
        let mut idx = 0;
        while idx < events.len() {
            let l = events[idx].0;
            while idx < events.len() && events[idx].0 == l {
                cum += events[idx].1;
                idx += 1;
            }
            breakpoints.push(l);
            values.push(cum);
        }
        debug_assert_eq!(cum, eigs_h0.len() as i64 - eigs_h.len() as i64);
        // the value after the last breakpoint is `cum`; for equal-sized
        // spectra it is zero, which is what compact support means here
        if !values.is_empty() {
            values.pop();
        } else {
            breakpoints.clear();
        }
        let mut out = Self { breakpoints, values };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while !self.values.is_empty() && self.values[0] == 0 {
            self.values.remove(0);
            self.breakpoints.remove(0);
        }
        while !self.values.is_empty() && *self.values.last().unwrap() == 0 {
            self.values.pop();
            self.breakpoints.pop();
        }
        if self.values.is_empty() {
            self.breakpoints.clear();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Value on [breakpoints[k], breakpoints[k+1]).
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        if self.is_zero() {
            None
        } else {
            Some((self.breakpoints[0], *self.breakpoints.last().unwrap()))
        }
    }

    pub fn eval(&self, l: f64) -> i64 {
        if self.is_zero() {
            return 0;
        }
        match self.breakpoints.partition_point(|&b| b <= l) {
            0 => 0,
            k if k > self.values.len() => 0,
            k => self.values[k - 1],
        }
    }

    /// Int xi dl, an exact interval sum.
    pub fn integral(&self) -> f64 {
        self.values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(&v, w)| v as f64 * (w[1] - w[0]))
            .sum()
    }

    /// Int |xi| dl.
    pub fn abs_integral(&self) -> f64 {
        self.values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(&v, w)| (v.abs()) as f64 * (w[1] - w[0]))
            .sum()
    }

    /// Int phi'(l) xi(l) dl computed interval by interval as
    /// sum_k v_k (phi(b_{k+1}) - phi(b_k)); exact because xi is constant on
    /// each interval, no quadrature involved.
    pub fn integrate_against_derivative(&self, phi: &PolyFunction) -> f64 {
        self.values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(&v, w)| v as f64 * (phi.eval_real(w[1]) - phi.eval_real(w[0])))
            .sum()
    }

    /// Same interval sum restricted to [lo, hi] (intervals clipped).
    pub fn windowed_integrate_against_derivative(&self, phi: &PolyFunction, lo: f64, hi: f64) -> f64 {
        self.values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(&v, w)| {
                let a = w[0].max(lo);
                let b = w[1].min(hi);
                if a < b {
                    v as f64 * (phi.eval_real(b) - phi.eval_real(a))
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// Int over [lo, hi] of xi, intervals clipped.
    pub fn windowed_integral(&self, lo: f64, hi: f64) -> f64 {
        self.values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(&v, w)| {
                let a = w[0].max(lo);
                let b = w[1].min(hi);
                if a < b {
                    v as f64 * (b - a)
                } else {
                    0.0
                }
            })
            .sum()
    }
}

/// Shift function of the Hermitian pair (H0, H).
pub fn spectral_shift(h0: &HermitianOperator, h: &HermitianOperator) -> Result<SpectralShiftFunction> {
    if h0.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h0.dim(), got: h.dim() });
    }
    let e0 = eigh(h0);
    let e1 = eigh(h);
    Ok(SpectralShiftFunction::from_spectra(e0.eigenvalues(), e1.eigenvalues()))
}

/// Both sides of the trace identity for one pair and one test polynomial,
/// together with the integral diagnostics of the shift function.
#[derive(Clone, Debug)]
pub struct KreinCheck {
    /// Tr{phi(H) - phi(H0)} through the functional calculus.
    pub lhs: f64,
    /// Int phi' xi through exact interval sums.
    pub rhs: f64,
    /// Int xi; equals Tr(V) up to eigensolver accuracy.
    pub xi_integral: f64,
    /// Int |xi|; bounded by the trace norm of V.
    pub abs_xi_integral: f64,
    /// Tr(V) where V = H - H0.
    pub trace_v: f64,
    /// |V|_1, the trace norm of the perturbation.
    pub trace_norm_v: f64,
    pub xi: SpectralShiftFunction,
}

impl KreinCheck {
    pub fn diff(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Evaluates the trace identity Tr{phi(H) - phi(H0)} = Int phi' xi for a
/// Hermitian pair. The left side goes through the spectral functional
/// calculus of each operator separately, the right side through the shift
/// function's interval sums, so the two routes share no arithmetic beyond the
/// eigensolver.
pub fn krein_check(
    h0: &HermitianOperator,
    h: &HermitianOperator,
    phi: &PolyFunction,
) -> Result<KreinCheck> {
    if h0.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h0.dim(), got: h.dim() });
    }
    if !phi.is_real() {
        return Err(Error::NonRealCoefficients);
    }
    let xi = spectral_shift(h0, h)?;
    let lhs = (trace(apply_function(h, phi)?.matrix()) - trace(apply_function(h0, phi)?.matrix())).re;
    let rhs = xi.integrate_against_derivative(phi);
    let v = h.matrix() - h0.matrix();
    let v_op = HermitianOperator::symmetrize(v)?;
    Ok(KreinCheck {
        lhs,
        rhs,
        xi_integral: xi.integral(),
        abs_xi_integral: xi.abs_integral(),
        trace_v: trace(v_op.matrix()).re,
        trace_norm_v: hermitian_trace_norm(&v_op),
        xi,
    })
}

/// Fraction of the spectral interval trimmed from each end when a slice is
/// compared on an interior window.
pub const SLICE_WINDOW_MARGIN: f64 = 0.1;

/// Extra rows kept beyond the ambient dimension while a conjugation is
/// evaluated, before compressing back to the ambient block. The unitary
/// e^{i g(B)} of a banded B has rapidly decaying off-diagonal entries, so a
/// margin past the effective bandwidth of the phase makes the compressed
/// block independent of the margin to working precision.
pub const SLICE_EMBED_MARGIN: usize = 128;

/// Shift function of a conjugated pair, reported in the two forms a finite
/// truncation admits.
///
/// Conjugating the ambient truncation by its own unitary e^{i g(B_M)} makes
/// the pair similar, so that shift function integrates to zero exactly; its
/// integral is kept as the `null_sum` diagnostic. The slice that carries
/// information is computed differently: conjugate in an enlarged truncation
/// and compress back to the ambient block, which reproduces the eigenvalue
/// flow of the untruncated model. Its total mass is the commutator trace
/// rather than zero, and only that version is worth windowing.
#[derive(Clone, Debug)]
pub struct SsfSlice {
    /// Shift function of (A_M, compression of e^{i g(B)} A e^{-i g(B)} from
    /// the enlarged truncation); total mass approximates the trace of the
    /// corner commutator, not zero.
    pub ssf: SpectralShiftFunction,
    /// Int of the shift function of the same-dimension conjugated pair
    /// (A_M, e^{i g(B_M)} A_M e^{-i g(B_M)}); zero up to eigensolver
    /// rounding because the two operators are similar.
    pub null_sum: f64,
    /// Interior window [a + margin, b - margin] of the model interval.
    pub window: (f64, f64),
}

fn interior_window(interval: (f64, f64)) -> (f64, f64) {
    let (a, b) = interval;
    let delta = SLICE_WINDOW_MARGIN * (b - a);
    (a + delta, b - delta)
}

/// The slice pair (A_M, P_M e^{i g(B)} A e^{-i g(B)} P_M) with the
/// conjugation evaluated in dimension M + margin and compressed back to M.
/// Conjugating after truncating instead would tie the two spectra together
/// exactly and empty every slice; compressing after conjugating keeps the
/// interior eigenvalue flow of the untruncated model while trace
/// preservation forces the total integral toward zero.
fn compressed_conjugate(
    model: &HyponormalModel,
    phase: &dyn Fn(f64) -> f64,
    swap: bool,
    margin: usize,
) -> Result<(HermitianOperator, HermitianOperator)> {
    let m = model.ambient_dim();
    let spec = model.spec();
    let enlarged =
        HyponormalModel::build(ModelSpec::new(spec.kind, m + margin, spec.corner_dim)?)?;
    let (a_big, b_big) = if swap {
        (enlarged.y_dense(), enlarged.x_dense())
    } else {
        (enlarged.x_dense(), enlarged.y_dense())
    };
    let w = eigh(&b_big).apply_map(|lam| {
        let p = phase(lam);
        c(p.cos(), p.sin())
    });
    let conjugated = &w * a_big.matrix() * w.adjoint();
    let base = HermitianOperator::symmetrize(a_big.matrix().view((0, 0), (m, m)).into_owned())?;
    let compressed = HermitianOperator::symmetrize(conjugated.view((0, 0), (m, m)).into_owned())?;
    Ok((base, compressed))
}

fn slice_impl(
    model: &HyponormalModel,
    phase: &dyn Fn(f64) -> f64,
    swap: bool,
) -> Result<SsfSlice> {
    let (base, conjugated) = compressed_conjugate(model, phase, swap, SLICE_EMBED_MARGIN)?;
    let ssf = spectral_shift(&base, &conjugated)?;

    // same-dimension conjugation: similar pair, so this integral is zero up
    // to eigensolver rounding; kept as a solver-quality diagnostic
    let (a, b) = if swap {
        (model.y_dense(), model.x_dense())
    } else {
        (model.x_dense(), model.y_dense())
    };
    let w = eigh(&b).apply_map(|lam| {
        let p = phase(lam);
        c(p.cos(), p.sin())
    });
    let h = HermitianOperator::symmetrize(&w * a.matrix() * w.adjoint())?;
    let null_sum = spectral_shift(&a, &h)?.integral();

    Ok(SsfSlice { ssf, null_sum, window: interior_window(model.interval()) })
}

/// Slice in the first variable: shift function of the pair
/// (X, e^{i psi(Y)} X e^{-i psi(Y)}) with the conjugation compressed from an
/// enlarged truncation. The renormalized slice carried by the trace
/// identities is the negative of this one; window comparisons account for
/// that sign.
pub fn xi_slice(model: &HyponormalModel, psi: &PolyFunction) -> Result<SsfSlice> {
    if !psi.is_real() {
        return Err(Error::NonRealCoefficients);
    }
    slice_impl(model, &|t| psi.eval_real(t), false)
}

/// Slice in the second variable: shift function of the pair
/// (Y, e^{i phi(X)} Y e^{-i phi(X)}); the mirror image of `xi_slice`.
pub fn eta_slice(model: &HyponormalModel, phi: &PolyFunction) -> Result<SsfSlice> {
    if !phi.is_real() {
        return Err(Error::NonRealCoefficients);
    }
    slice_impl(model, &|t| phi.eval_real(t), true)
}

/// `xi_slice` with an arbitrary real phase function instead of a polynomial;
/// used with smoothed ramp phases by the binned estimator.
pub fn xi_slice_with_phase(
    model: &HyponormalModel,
    phase: impl Fn(f64) -> f64,
) -> Result<SpectralShiftFunction> {
    Ok(slice_impl(model, &phase, false)?.ssf)
}
