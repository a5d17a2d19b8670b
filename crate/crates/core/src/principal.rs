//! Corner-compressed trace defects of the model commutators: the
//! one-variable trace lemma, mixed-moment extraction, the two-sided
//! bivariate trace formula, and reconstruction of the underlying density
//! from its moments.
//!
//! Every left side is a corner trace of a banded commutator at ambient
//! dimension M. Away from the truncation edge the banded entries coincide
//! with the infinite-dimensional ones, so for polynomial data with corner
//! wide enough the corner trace is exactly the renormalized trace the
//! identities are about, independent of M.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::functions::bivariate::SeparableBivariate;
use crate::functions::cheb::{indicator_ramp, ChebInterp};
use crate::functions::poly::PolyFunction;
use crate::functions::quadrature::gauss_legendre_on;
use crate::krein::xi_slice_with_phase;
use crate::linalg::banded::{neg_i_commutator, Banded};
use crate::linalg::dense::{cr, HermitianOperator};
use crate::linalg::eigh::eigh;
use crate::models::HyponormalModel;
use crate::{Error, Result};

/// Which Hermitian part carries the function in the one-variable lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Left and right side of one trace identity.
#[derive(Clone, Copy, Debug)]
pub struct TraceIdentity {
    pub lhs: f64,
    pub rhs: f64,
}

impl TraceIdentity {
    pub fn diff(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

fn window_check(corner: usize, degree: usize) -> Result<()> {
    if corner > degree + 2 {
        Ok(())
    } else {
        Err(Error::WindowTooSmall { corner, degree, needed: degree + 3 })
    }
}

/// One-variable trace lemma. For `Axis::Y` the left side is the corner trace
/// of -i[psi(Y), X] and the right side Tr{psi'(Y) D2}; `Axis::X` exchanges
/// the roles, pairing -i[Y, psi(X)] with Tr{psi'(X) D2}.
pub fn lemma1_check(model: &HyponormalModel, psi: &PolyFunction, axis: Axis) -> Result<TraceIdentity> {
    if !psi.is_real() {
        return Err(Error::NonRealCoefficients);
    }
    let n = model.corner_dim();
    window_check(n, psi.degree())?;
    let carrier = match axis {
        Axis::Y => model.y(),
        Axis::X => model.x(),
    };
    let psi_op = carrier.poly(psi);
    let comm = match axis {
        Axis::Y => neg_i_commutator(&psi_op, model.x()),
        Axis::X => neg_i_commutator(model.y(), &psi_op),
    };
    let lhs = comm.corner_trace(n)?;
    debug_assert!(lhs.im.abs() < 1e-10, "corner trace imaginary residue {}", lhs.im);
    let rhs = carrier.poly(&psi.derivative()).mul(model.d2()).trace();
    debug_assert!(rhs.im.abs() < 1e-10);
    Ok(TraceIdentity { lhs: lhs.re, rhs: rhs.re })
}

/// Mixed moment mu_pq of the principal density: the corner trace of
/// -i[Y^{q+1}, X^{p+1}] divided by (p+1)(q+1), which renormalizes the
/// monomials to their indefinite integrals.
pub fn moment(model: &HyponormalModel, p: usize, q: usize) -> Result<f64> {
    let n = model.corner_dim();
    if n <= p + q + 3 {
        return Err(Error::WindowTooSmall { corner: n, degree: p + q + 1, needed: p + q + 4 });
    }
    let xp = model.x().pow(p + 1);
    let yq = model.y().pow(q + 1);
    let tr = neg_i_commutator(&yq, &xp).corner_trace(n)?;
    debug_assert!(tr.im.abs() < 1e-10, "moment imaginary residue {}", tr.im);
    Ok(tr.re / (((p + 1) * (q + 1)) as f64))
}

/// All mixed moments mu_pq with p + q <= max_degree, keyed by (p, q).
#[derive(Clone, Debug)]
pub struct MomentTable {
    entries: BTreeMap<(usize, usize), f64>,
    max_degree: usize,
    interval: (f64, f64),
    model_name: String,
}

impl MomentTable {
    /// Builds a table from precomputed entries; used for synthetic densities
    /// in diagnostics. Requires every (p, q) with p + q <= max_degree and a
    /// nonnegative total mass entry.
    pub fn from_map(
        entries: BTreeMap<(usize, usize), f64>,
        max_degree: usize,
        interval: (f64, f64),
        model_name: impl Into<String>,
    ) -> Result<Self> {
        for p in 0..=max_degree {
            for q in 0..=(max_degree - p) {
                if !entries.contains_key(&(p, q)) {
                    return Err(Error::IncompleteMomentTable { p, q, max_degree });
                }
            }
        }
        if entries[&(0, 0)] < 0.0 {
            return Err(Error::Config {
                message: format!("total mass moment must be nonnegative, got {}", entries[&(0, 0)]),
            });
        }
        Ok(Self { entries, max_degree, interval, model_name: model_name.into() })
    }

    pub fn get(&self, p: usize, q: usize) -> Result<f64> {
        self.entries
            .get(&(p, q))
            .copied()
            .ok_or(Error::IncompleteMomentTable { p, q, max_degree: self.max_degree })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn model_name(&self) -> &str {
        &self.model_name
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &f64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Computes the moment table for all p + q <= max_degree in parallel.
pub fn moment_table(model: &HyponormalModel, max_degree: usize) -> Result<MomentTable> {
    let n = model.corner_dim();
    if n <= max_degree + 3 {
        return Err(Error::WindowTooSmall { corner: n, degree: max_degree + 1, needed: max_degree + 4 });
    }
    let pairs: Vec<(usize, usize)> =
        (0..=max_degree).flat_map(|p| (0..=max_degree - p).map(move |q| (p, q))).collect();
    let computed: Result<Vec<((usize, usize), f64)>> =
        pairs.par_iter().map(|&(p, q)| moment(model, p, q).map(|v| ((p, q), v))).collect();
    let entries: BTreeMap<(usize, usize), f64> = computed?.into_iter().collect();
    MomentTable::from_map(entries, max_degree, model.interval(), model.spec().kind.name())
}

/// Sum of terms c alpha(X) psi(Y), X-factor on the left, as a banded matrix.
pub fn bivariate_operator(model: &HyponormalModel, f: &SeparableBivariate) -> Banded {
    let mut acc = Banded::zeros(model.ambient_dim(), 0);
    for (coeff, alpha, psi) in f.terms() {
        let term = model.x().poly(alpha).mul(&model.y().poly(psi)).scale(*coeff);
        acc = acc.add(&term);
    }
    acc
}

/// Left side of the bivariate trace formula: the corner trace of
/// -i[Psi(X, Y), Phi(X, Y)] with both operands built X-factor-left.
pub fn generalized_trace_lhs(
    model: &HyponormalModel,
    psi: &SeparableBivariate,
    phi: &SeparableBivariate,
) -> Result<f64> {
    let n = model.corner_dim();
    let d = psi.total_degree() + phi.total_degree();
    if n <= d + 3 {
        return Err(Error::WindowTooSmall { corner: n, degree: d, needed: d + 4 });
    }
    let p_op = bivariate_operator(model, psi);
    let q_op = bivariate_operator(model, phi);
    let tr = neg_i_commutator(&p_op, &q_op).corner_trace(n)?;
    debug_assert!(tr.im.abs() < 1e-9, "trace imaginary residue {}", tr.im);
    Ok(tr.re)
}

/// Where the density r comes from on the right side of the formula.
pub enum RSource<'a> {
    /// Closed-form monomial integrals of the model's symbol region; exact.
    ClosedForm(&'a HyponormalModel),
    /// Tensor Gauss-Legendre quadrature of the model's indicator density;
    /// accuracy limited by the discontinuity at the region boundary.
    Quadrature { model: &'a HyponormalModel, grid_size: usize },
    /// Quadrature against a reconstructed density on its own grid.
    Estimate(&'a PrincipalFunctionEstimate),
}

/// Right side of the bivariate trace formula:
/// Int -J(Psi, Phi)(t, lambda) r(t, lambda) dt dlambda with
/// J = Psi_t Phi_lambda - Psi_lambda Phi_t. The minus sign is the working
/// convention; it is fixed by the total-mass case Psi = lambda, Phi = t,
/// where the left side is Tr(D2) > 0 and -J = +1.
pub fn generalized_trace_rhs(
    psi: &SeparableBivariate,
    phi: &SeparableBivariate,
    source: &RSource<'_>,
) -> Result<f64> {
    let neg_j = psi.jacobian(phi).scale(cr(-1.0));
    match *source {
        RSource::ClosedForm(model) => {
            let table = neg_j.monomial_table();
            let mut acc = 0.0;
            for (p, row) in table.iter().enumerate() {
                for (q, &coeff) in row.iter().enumerate() {
                    if coeff.norm() == 0.0 {
                        continue;
                    }
                    debug_assert!(coeff.im.abs() < 1e-12);
                    let mu = model.expected_moment(p, q).ok_or(Error::UnsupportedModel {
                        op: "closed-form region moments",
                        model: model.spec().kind.name(),
                    })?;
                    acc += coeff.re * mu;
                }
            }
            Ok(acc)
        }
        RSource::Quadrature { model, grid_size } => {
            let (a, b) = model.interval();
            let (nodes, weights) = gauss_legendre_on(grid_size, a, b);
            let mut acc = 0.0;
            for (ti, wi) in nodes.iter().zip(&weights) {
                for (lj, wj) in nodes.iter().zip(&weights) {
                    let r = model.expected_r(*ti, *lj).ok_or(Error::UnsupportedModel {
                        op: "closed-form density quadrature",
                        model: model.spec().kind.name(),
                    })?;
                    if r != 0.0 {
                        acc += wi * wj * neg_j.eval(*ti, *lj).re * r;
                    }
                }
            }
            Ok(acc)
        }
        RSource::Estimate(est) => {
            let mut acc = 0.0;
            for (i, (ti, wi)) in est.nodes_t.iter().zip(&est.weights_t).enumerate() {
                for (j, (lj, wj)) in est.nodes_l.iter().zip(&est.weights_l).enumerate() {
                    acc += wi * wj * neg_j.eval(*ti, *lj).re * est.values[i][j];
                }
            }
            Ok(acc)
        }
    }
}

/// A density estimate on a tensor grid over [a, b]^2: node values with the
/// quadrature weights that integrate them, and, for projection estimates,
/// the orthonormal Legendre coefficients that allow pointwise evaluation.
#[derive(Clone, Debug)]
pub struct PrincipalFunctionEstimate {
    interval: (f64, f64),
    nodes_t: Vec<f64>,
    weights_t: Vec<f64>,
    nodes_l: Vec<f64>,
    weights_l: Vec<f64>,
    values: Vec<Vec<f64>>,
    basis_degree: usize,
    coeffs: Option<Vec<Vec<f64>>>,
    l1_mass: f64,
}

impl PrincipalFunctionEstimate {
    fn assemble(
        interval: (f64, f64),
        nodes_t: Vec<f64>,
        weights_t: Vec<f64>,
        nodes_l: Vec<f64>,
        weights_l: Vec<f64>,
        values: Vec<Vec<f64>>,
        basis_degree: usize,
        coeffs: Option<Vec<Vec<f64>>>,
    ) -> Self {
        let mut l1 = 0.0;
        for (row, wi) in values.iter().zip(&weights_t) {
            for (v, wj) in row.iter().zip(&weights_l) {
                l1 += wi * wj * v.abs();
            }
        }
        Self { interval, nodes_t, weights_t, nodes_l, weights_l, values, basis_degree, coeffs, l1_mass: l1 }
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn nodes(&self) -> (&[f64], &[f64]) {
        (&self.nodes_t, &self.nodes_l)
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn basis_degree(&self) -> usize {
        self.basis_degree
    }

    /// Quadrature of |estimate| over the square.
    pub fn l1_mass(&self) -> f64 {
        self.l1_mass
    }

    /// Quadrature of the estimate over the square.
    pub fn integral(&self) -> f64 {
        let mut acc = 0.0;
        for (row, wi) in self.values.iter().zip(&self.weights_t) {
            for (v, wj) in row.iter().zip(&self.weights_l) {
                acc += wi * wj * v;
            }
        }
        acc
    }

    /// Quadrature of t^p lambda^q against the estimate. Exact for the grid's
    /// Gauss-Legendre degree when the estimate is a projection.
    pub fn moment_of_estimate(&self, p: usize, q: usize) -> f64 {
        let mut acc = 0.0;
        for (row, (ti, wi)) in self.values.iter().zip(self.nodes_t.iter().zip(&self.weights_t)) {
            for (v, (lj, wj)) in row.iter().zip(self.nodes_l.iter().zip(&self.weights_l)) {
                acc += wi * wj * ti.powi(p as i32) * lj.powi(q as i32) * v;
            }
        }
        acc
    }

    /// Pointwise value. Projection estimates evaluate their Legendre
    /// expansion; grid-only estimates return the nearest node value.
    pub fn eval(&self, t: f64, lambda: f64) -> f64 {
        match &self.coeffs {
            Some(coeffs) => {
                let basis = legendre_basis(self.basis_degree, self.interval)
                    .expect("stored basis parameters are valid");
                let bt: Vec<f64> = basis.iter().map(|l| l.eval_real(t)).collect();
                let bl: Vec<f64> = basis.iter().map(|l| l.eval_real(lambda)).collect();
                let mut acc = 0.0;
                for (ci, bi) in coeffs.iter().zip(&bt) {
                    for (c, bj) in ci.iter().zip(&bl) {
                        acc += c * bi * bj;
                    }
                }
                acc
            }
            None => {
                let i = nearest_index(&self.nodes_t, t);
                let j = nearest_index(&self.nodes_l, lambda);
                self.values[i][j]
            }
        }
    }
}

fn nearest_index(nodes: &[f64], t: f64) -> usize {
    let mut best = 0;
    let mut dist = f64::INFINITY;
    for (i, &n) in nodes.iter().enumerate() {
        let d = (n - t).abs();
        if d < dist {
            dist = d;
            best = i;
        }
    }
    best
}

/// Orthonormal Legendre basis on [a, b] through the given degree, as
/// monomial-coefficient polynomials: the classical recurrence on [-1, 1]
/// composed with the affine map and normalized to unit L^2 norm.
pub fn legendre_basis(degree: usize, interval: (f64, f64)) -> Result<Vec<PolyFunction>> {
    let (a, b) = interval;
    let width = b - a;
    // P_k on [-1, 1] in monomial coefficients
    let mut raw: Vec<Vec<f64>> = vec![vec![1.0], vec![0.0, 1.0]];
    for k in 1..degree {
        let prev = &raw[k - 1];
        let cur = &raw[k];
        let mut next = vec![0.0; k + 2];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += (2.0 * k as f64 + 1.0) * c / (k as f64 + 1.0);
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= k as f64 * c / (k as f64 + 1.0);
        }
        raw.push(next);
    }
    raw.truncate(degree + 1);
    let u = 2.0 / width;
    let v = -(a + b) / width;
    raw.iter()
        .enumerate()
        .map(|(k, coeffs)| {
            let on_unit = PolyFunction::from_real(coeffs, (-1.0, 1.0))?;
            let shifted = on_unit.compose_affine(u, v, interval)?;
            Ok(shifted.scale(cr(((2.0 * k as f64 + 1.0) / width).sqrt())))
        })
        .collect()
}

/// Projects the density onto tensor Legendre polynomials of per-axis degree
/// <= `degree` and evaluates the projection on a Gauss-Legendre grid. Each
/// coefficient is an exact linear combination of table moments, so the
/// moments the basis spans are reproduced exactly; the table must reach
/// total degree 2*degree for the corner coefficient.
pub fn reconstruct_r(
    moments: &MomentTable,
    degree: usize,
    grid_size: usize,
) -> Result<PrincipalFunctionEstimate> {
    if grid_size == 0 {
        return Err(Error::DegenerateBins { detail: "reconstruction grid must be nonempty".into() });
    }
    if moments.max_degree() < 2 * degree {
        return Err(Error::IncompleteMomentTable { p: degree, q: degree, max_degree: moments.max_degree() });
    }
    let interval = moments.interval();
    let basis = legendre_basis(degree, interval)?;
    let mut coeffs = vec![vec![0.0; degree + 1]; degree + 1];
    for (i, li) in basis.iter().enumerate() {
        for (j, lj) in basis.iter().enumerate() {
            let mut acc = 0.0;
            for (p, ap) in li.coeffs().iter().enumerate() {
                if ap.re == 0.0 {
                    continue;
                }
                for (q, aq) in lj.coeffs().iter().enumerate() {
                    if aq.re == 0.0 {
                        continue;
                    }
                    acc += ap.re * aq.re * moments.get(p, q)?;
                }
            }
            coeffs[i][j] = acc;
        }
    }
    let (a, b) = interval;
    let (nodes, weights) = gauss_legendre_on(grid_size, a, b);
    // sample matrix: samples[k][g] = L_k(nodes[g])
    let samples: Vec<Vec<f64>> =
        basis.iter().map(|l| nodes.iter().map(|&t| l.eval_real(t)).collect()).collect();
    let mut values = vec![vec![0.0; grid_size]; grid_size];
    for (gi, row) in values.iter_mut().enumerate() {
        for (gj, v) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (ci, si) in coeffs.iter().zip(&samples) {
                for (c, sj) in ci.iter().zip(&samples) {
                    acc += c * si[gi] * sj[gj];
                }
            }
            *v = acc;
        }
    }
    Ok(PrincipalFunctionEstimate::assemble(
        interval,
        nodes.clone(),
        weights.clone(),
        nodes,
        weights,
        values,
        degree,
        Some(coeffs),
    ))
}

/// Chebyshev degree used to smooth indicator ramps before they enter a
/// conjugation phase.
pub const RAMP_SMOOTHING_DEGREE: usize = 64;

/// Experimental density estimate from shift-function slices: for each
/// lambda-bin the phase is a smoothed ramp (an antiderivative of the bin
/// indicator), and each (t-bin, lambda-bin) cell averages the windowed slice
/// integral. The slice of the conjugated pair has the opposite sign to the
/// renormalized slice the identities are about, so cell values negate the
/// raw integrals. At finite truncation the slice integrates to zero over the
/// whole line, which visibly contaminates the cells near the window edge;
/// this estimator is a diagnostic, not a converged quantity.
pub fn ssf_binned_r(
    model: &HyponormalModel,
    t_bins: usize,
    l_bins: usize,
    window: (f64, f64),
) -> Result<PrincipalFunctionEstimate> {
    let (a, b) = model.interval();
    if t_bins == 0 || l_bins == 0 {
        return Err(Error::DegenerateBins {
            detail: format!("bin counts ({t_bins}, {l_bins}) must both be positive"),
        });
    }
    let (w0, w1) = window;
    if !(w0 < w1) || w0 < a - 1e-12 || w1 > b + 1e-12 {
        return Err(Error::DegenerateBins {
            detail: format!("window [{w0}, {w1}] must be nondegenerate inside [{a}, {b}]"),
        });
    }
    let edges = |count: usize| -> Vec<f64> {
        (0..=count).map(|k| a + (b - a) * k as f64 / count as f64).collect()
    };
    let t_edges = edges(t_bins);
    let l_edges = edges(l_bins);
    let slices: Result<Vec<_>> = (0..l_bins)
        .into_par_iter()
        .map(|j| {
            let ramp = indicator_ramp(l_edges[j], l_edges[j + 1]);
            let smooth = ChebInterp::from_fn(ramp, RAMP_SMOOTHING_DEGREE, a, b);
            xi_slice_with_phase(model, |t| smooth.eval(t))
        })
        .collect();
    let slices = slices?;
    let mut values = vec![vec![0.0; l_bins]; t_bins];
    for (i, row) in values.iter_mut().enumerate() {
        let t_lo = t_edges[i].max(w0);
        let t_hi = t_edges[i + 1].min(w1);
        for (j, v) in row.iter_mut().enumerate() {
            if t_lo < t_hi {
                let cell = (t_edges[i + 1] - t_edges[i]) * (l_edges[j + 1] - l_edges[j]);
                *v = -slices[j].windowed_integral(t_lo, t_hi) / cell;
            }
        }
    }
    let centers = |e: &[f64]| -> Vec<f64> { e.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect() };
    let widths = |e: &[f64]| -> Vec<f64> { e.windows(2).map(|w| w[1] - w[0]).collect() };
    Ok(PrincipalFunctionEstimate::assemble(
        (a, b),
        centers(&t_edges),
        widths(&t_edges),
        centers(&l_edges),
        widths(&l_edges),
        values,
        0,
        None,
    ))
}

/// Smallest eigenvalue of the N x N corner block of -i[psi(Y), X]. The
/// one-variable positivity heuristic suggests a sign for monotone psi; the
/// probe records the eigenvalue and asserts nothing.
pub fn positivity_probe(model: &HyponormalModel, psi: &PolyFunction) -> Result<f64> {
    if !psi.is_real() {
        return Err(Error::NonRealCoefficients);
    }
    let n = model.corner_dim();
    window_check(n, psi.degree())?;
    let comm = neg_i_commutator(&model.y().poly(psi), model.x());
    let corner = comm.corner_block(n)?;
    let h = HermitianOperator::symmetrize(corner)?;
    Ok(eigh(&h).eigenvalues()[0])
}
