//! Finite truncations of hyponormal operator models built from weighted
//! shifts, with their analytic self-commutator data and, where available,
//! the closed-form principal function of the symbol region.

use std::f64::consts::PI;

use crate::linalg::banded::{neg_i_commutator, Banded};
use crate::linalg::dense::{c, cr, C64, CMat, HermitianOperator};
use crate::linalg::eigh::eigh;
use crate::{Error, Result};

/// The operator family. All are truncations of bounded weighted shifts
/// T acting on the standard basis, with X = (T + T*)/2 and Y = (T - T*)/2i.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelKind {
    /// T = S, the unweighted unilateral shift. Symbol traces the unit
    /// circle; the principal function is 1/(2 pi) on the open unit disc.
    Shift,
    /// T = S + c e^{i phase} S* with 0 < c < 1. Symbol traces an ellipse
    /// with semiaxes 1 + c and 1 - c rotated by phase/2; the principal
    /// function is 1/(2 pi) on its interior.
    Elliptic { c: f64, phase: f64 },
    /// T e_j = sqrt(1 - q^{j+1}) e_{j+1} with 0 < q < 1. The
    /// self-commutator has full diagonal (1 - q) q^j / 2; no closed-form
    /// principal function is exposed and winding queries are unsupported.
    QWeighted { q: f64 },
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Shift => "shift",
            ModelKind::Elliptic { .. } => "elliptic",
            ModelKind::QWeighted { .. } => "q_weighted",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ModelKind::Shift => Ok(()),
            ModelKind::Elliptic { c, phase } => {
                if !(c > 0.0 && c < 1.0) {
                    return Err(Error::InvalidModelParameter {
                        name: "c",
                        value: c,
                        constraint: "0 < c < 1",
                    });
                }
                if !phase.is_finite() {
                    return Err(Error::InvalidModelParameter {
                        name: "phase",
                        value: phase,
                        constraint: "finite",
                    });
                }
                Ok(())
            }
            ModelKind::QWeighted { q } => {
                if !(q > 0.0 && q < 1.0) {
                    return Err(Error::InvalidModelParameter {
                        name: "q",
                        value: q,
                        constraint: "0 < q < 1",
                    });
                }
                Ok(())
            }
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ModelKind::Shift => write!(f, "shift"),
            ModelKind::Elliptic { c, phase } => write!(f, "elliptic(c={c}, phase={phase})"),
            ModelKind::QWeighted { q } => write!(f, "q_weighted(q={q})"),
        }
    }
}

/// Which family to build and at which truncation sizes. `ambient_dim` is the
/// full matrix dimension M, `corner_dim` the size N of the corner block used
/// for trace extraction; N must stay well clear of the truncation edge.
#[derive(Clone, Copy, Debug)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub ambient_dim: usize,
    pub corner_dim: usize,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, ambient_dim: usize, corner_dim: usize) -> Result<Self> {
        kind.validate()?;
        if ambient_dim < 8 {
            return Err(Error::InvalidModelParameter {
                name: "ambient_dim",
                value: ambient_dim as f64,
                constraint: ">= 8",
            });
        }
        if corner_dim == 0 {
            return Err(Error::InvalidModelParameter {
                name: "corner_dim",
                value: 0.0,
                constraint: ">= 1",
            });
        }
        if 2 * corner_dim > ambient_dim {
            return Err(Error::InvalidModelParameter {
                name: "corner_dim",
                value: corner_dim as f64,
                constraint: "corner_dim <= ambient_dim / 2",
            });
        }
        Ok(Self { kind, ambient_dim, corner_dim })
    }
}

/// A built model: the Hermitian parts X and Y of the truncated operator as
/// banded matrices, the analytic self-commutator diagonal D2 with
/// -i[Y, X] = D2 away from the truncation edge, and the spectral interval
/// that contains both X and Y.
#[derive(Clone, Debug)]
pub struct HyponormalModel {
    spec: ModelSpec,
    x: Banded,
    y: Banded,
    d2: Banded,
    tr_d2: f64,
    interval: (f64, f64),
}

/// How far -i[Y, X] may drift from D2 away from the truncation edge. The
/// shift and elliptic models agree bitwise; the q-weighted diagonal is
/// assembled through square roots and allows a few ulps.
const D2_AGREEMENT_TOL: f64 = 1e-13;

impl HyponormalModel {
    pub fn build(spec: ModelSpec) -> Result<Self> {
        let m = spec.ambient_dim;
        let (x, y, d2_diag, tr_d2, half_width) = match spec.kind {
            ModelKind::Shift => {
                // T = S: X and Y are tridiagonal Toeplitz, D2 = e0 e0* / 2
                let sub_x = vec![cr(0.5); m - 1];
                let sup_x = vec![cr(0.5); m - 1];
                let sub_y = vec![c(0.0, -0.5); m - 1];
                let sup_y = vec![c(0.0, 0.5); m - 1];
                let zero = vec![cr(0.0); m];
                let x = Banded::tridiagonal(&zero, &sub_x, &sup_x);
                let y = Banded::tridiagonal(&zero, &sub_y, &sup_y);
                let mut d2 = vec![cr(0.0); m];
                d2[0] = cr(0.5);
                (x, y, d2, 0.5, 1.0)
            }
            ModelKind::Elliptic { c: ecc, phase } => {
                // T = S + ecc e^{i phase} S*: X = (gamma S + (gamma S)*)/2
                // with gamma = 1 + ecc e^{-i phase}, and
                // -i[Y, X] = (1 - ecc^2)/2 (e0 e0* - e_{M-1} e_{M-1}*)
                let gamma = c(1.0 + ecc * phase.cos(), -ecc * phase.sin());
                let delta = c(1.0 - ecc * phase.cos(), ecc * phase.sin());
                let half = cr(0.5);
                let sub_x = vec![gamma * half; m - 1];
                let sup_x = vec![gamma.conj() * half; m - 1];
                // Y = (delta S - (delta S)*)/2i
                let sub_y = vec![delta * c(0.0, -0.5); m - 1];
                let sup_y = vec![delta.conj() * c(0.0, 0.5); m - 1];
                let zero = vec![cr(0.0); m];
                let x = Banded::tridiagonal(&zero, &sub_x, &sup_x);
                let y = Banded::tridiagonal(&zero, &sub_y, &sup_y);
                let mut d2 = vec![cr(0.0); m];
                let strength = (1.0 - ecc * ecc) / 2.0;
                d2[0] = cr(strength);
                (x, y, d2, strength, 1.0 + ecc)
            }
            ModelKind::QWeighted { q } => {
                // T e_j = w_j e_{j+1} with w_j = sqrt(1 - q^{j+1}); the
                // analytic self-commutator diagonal is (1 - q) q^j / 2 on
                // every index, with trace (1 - q^M)/2
                let w: Vec<f64> = (0..m - 1).map(|j| (1.0 - q.powi(j as i32 + 1)).sqrt()).collect();
                let sub_x: Vec<C64> = w.iter().map(|&wj| cr(wj / 2.0)).collect();
                let sup_x: Vec<C64> = w.iter().map(|&wj| cr(wj / 2.0)).collect();
                let sub_y: Vec<C64> = w.iter().map(|&wj| c(0.0, -wj / 2.0)).collect();
                let sup_y: Vec<C64> = w.iter().map(|&wj| c(0.0, wj / 2.0)).collect();
                let zero = vec![cr(0.0); m];
                let x = Banded::tridiagonal(&zero, &sub_x, &sup_x);
                let y = Banded::tridiagonal(&zero, &sub_y, &sup_y);
                let d2: Vec<C64> = (0..m).map(|j| cr((1.0 - q) * q.powi(j as i32) / 2.0)).collect();
                let tr = (1.0 - q.powi(m as i32)) / 2.0;
                (x, y, d2, tr, 1.0)
            }
        };
        let model = Self {
            spec,
            x,
            y,
            d2: Banded::from_diagonal(&d2_diag),
            tr_d2,
            interval: (-half_width, half_width),
        };
        let deviation = model.d2_deviation_outside_edge();
        if deviation > D2_AGREEMENT_TOL {
            return Err(Error::InvalidModelParameter {
                name: "d2_agreement",
                value: deviation,
                constraint: "self-commutator must match its analytic diagonal away from the edge",
            });
        }
        Ok(model)
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn ambient_dim(&self) -> usize {
        self.spec.ambient_dim
    }

    pub fn corner_dim(&self) -> usize {
        self.spec.corner_dim
    }

    pub fn x(&self) -> &Banded {
        &self.x
    }

    pub fn y(&self) -> &Banded {
        &self.y
    }

    /// Analytic self-commutator diagonal D2 (a diagonal banded matrix).
    pub fn d2(&self) -> &Banded {
        &self.d2
    }

    /// Trace of the analytic self-commutator diagonal.
    pub fn tr_d2(&self) -> f64 {
        self.tr_d2
    }

    /// Interval containing the spectra of both X and Y.
    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    /// First index of the truncation edge window (the last ceil(M/8)
    /// indices), where -i[Y, X] is allowed to differ from D2.
    pub fn edge_start(&self) -> usize {
        let m = self.spec.ambient_dim;
        m - m.div_ceil(8)
    }

    pub fn x_dense(&self) -> HermitianOperator {
        HermitianOperator::new(self.x.to_dense()).expect("X is Hermitian by construction")
    }

    pub fn y_dense(&self) -> HermitianOperator {
        HermitianOperator::new(self.y.to_dense()).expect("Y is Hermitian by construction")
    }

    /// The full truncated matrix -i[Y, X], including its edge defect.
    pub fn neg_i_commutator_yx(&self) -> Banded {
        neg_i_commutator(&self.y, &self.x)
    }

    /// Largest entry of -i[Y, X] - D2 over rows and columns below the edge
    /// window.
    pub fn d2_deviation_outside_edge(&self) -> f64 {
        let comm = self.neg_i_commutator_yx();
        let edge = self.edge_start();
        let mut worst = 0.0f64;
        let hbw = 2; // both terms are at most pentadiagonal
        for i in 0..edge {
            for j in i.saturating_sub(hbw)..(i + hbw + 1).min(edge) {
                let diff = (comm.entry(i, j) - self.d2.entry(i, j)).norm();
                worst = worst.max(diff);
            }
        }
        worst
    }

    /// Closed-form principal function at (u, v), when the family has one:
    /// 1/(2 pi) inside the symbol curve, 0 outside. None for families
    /// without a closed form.
    pub fn expected_r(&self, u: f64, v: f64) -> Option<f64> {
        match self.spec.kind {
            ModelKind::Shift => Some(if u * u + v * v < 1.0 { 1.0 / (2.0 * PI) } else { 0.0 }),
            ModelKind::Elliptic { c: ecc, phase } => {
                let chi = phase / 2.0;
                let (a, b) = (1.0 + ecc, 1.0 - ecc);
                // rotate back by chi, then test the axis-aligned ellipse
                let s = u * chi.cos() + v * chi.sin();
                let t = -u * chi.sin() + v * chi.cos();
                let q = (s / a).powi(2) + (t / b).powi(2);
                Some(if q < 1.0 { 1.0 / (2.0 * PI) } else { 0.0 })
            }
            ModelKind::QWeighted { .. } => None,
        }
    }

    /// Closed-form Int u^p v^q r(u, v) du dv over the plane, when the
    /// principal function has a closed form.
    pub fn expected_moment(&self, p: usize, q: usize) -> Option<f64> {
        match self.spec.kind {
            ModelKind::Shift => Some(disc_monomial_integral(p, q) / (2.0 * PI)),
            ModelKind::Elliptic { c: ecc, phase } => {
                Some(rotated_ellipse_monomial_integral(1.0 + ecc, 1.0 - ecc, phase / 2.0, p, q) / (2.0 * PI))
            }
            ModelKind::QWeighted { .. } => None,
        }
    }

    /// Symbol curve of the defining weighted shift at angle theta.
    fn symbol(&self, theta: f64) -> Result<C64> {
        match self.spec.kind {
            ModelKind::Shift => Ok(c(theta.cos(), theta.sin())),
            ModelKind::Elliptic { c: ecc, phase } => {
                // e^{i theta} + ecc e^{i phase} e^{-i theta}
                Ok(c(theta.cos(), theta.sin()) + c(ecc * phase.cos(), ecc * phase.sin()) * c(theta.cos(), -theta.sin()))
            }
            ModelKind::QWeighted { .. } => Err(Error::UnsupportedModel {
                op: "symbol winding",
                model: "q_weighted",
            }),
        }
    }

    /// Principal function at (u, v) recovered from the winding number of the
    /// symbol curve around u + iv, via a discretized argument principle on
    /// `WINDING_NODES` nodes. Points within node resolution of the curve
    /// report 0. Unsupported for families without a symbol curve.
    pub fn winding_r(&self, u: f64, v: f64) -> Result<f64> {
        const WINDING_NODES: usize = 4096;
        let z = c(u, v);
        let mut pts = Vec::with_capacity(WINDING_NODES + 1);
        for k in 0..=WINDING_NODES {
            let theta = 2.0 * PI * k as f64 / WINDING_NODES as f64;
            pts.push(self.symbol(theta)? - z);
        }
        let mut max_step = 0.0f64;
        let mut min_dist = f64::INFINITY;
        for w in pts.windows(2) {
            max_step = max_step.max((w[1] - w[0]).norm());
        }
        for p in &pts {
            min_dist = min_dist.min(p.norm());
        }
        // too close to the curve for the node spacing to resolve a side
        if min_dist <= 2.0 * max_step {
            return Ok(0.0);
        }
        let mut total = 0.0f64;
        for w in pts.windows(2) {
            let d = w[1].arg() - w[0].arg();
            // wrap to (-pi, pi]
            let d = if d > PI {
                d - 2.0 * PI
            } else if d <= -PI {
                d + 2.0 * PI
            } else {
                d
            };
            total += d;
        }
        let wind = total / (2.0 * PI);
        let rounded = wind.round();
        let wind = if (wind - rounded).abs() < 1e-3 { rounded } else { wind };
        Ok(wind / (2.0 * PI))
    }
}

/// Int over the unit disc of u^m v^n; zero unless both exponents are even,
/// in which case it is 2 pi (m-1)!! (n-1)!! / ((m+n)!! (m+n+2)).
pub fn disc_monomial_integral(m: usize, n: usize) -> f64 {
    if m % 2 == 1 || n % 2 == 1 {
        return 0.0;
    }
    2.0 * PI * double_factorial(m as i64 - 1) * double_factorial(n as i64 - 1)
        / (double_factorial((m + n) as i64) * (m + n + 2) as f64)
}

fn double_factorial(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// Int over the ellipse with semiaxes (a, b) rotated by chi of u^p v^q,
/// by the affine substitution (u, v) = R_chi (a s, b t) with (s, t) in the
/// unit disc; the Jacobian is a b.
pub fn rotated_ellipse_monomial_integral(a: f64, b: f64, chi: f64, p: usize, q: usize) -> f64 {
    let (cos, sin) = (chi.cos(), chi.sin());
    let mut total = 0.0;
    for i in 0..=p {
        for j in 0..=q {
            // u^p contributes (a cos s)^i (-b sin t)^{p-i},
            // v^q contributes (a sin s)^j (b cos t)^{q-j}
            let coeff = binomial(p, i)
                * binomial(q, j)
                * (a * cos).powi(i as i32)
                * (-b * sin).powi((p - i) as i32)
                * (a * sin).powi(j as i32)
                * (b * cos).powi((q - j) as i32);
            if coeff != 0.0 {
                total += coeff * disc_monomial_integral(i + j, (p - i) + (q - j));
            }
        }
    }
    a * b * total
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Structural checks on a built model: corner positivity of the
/// self-commutator, agreement of -i[Y, X] with D2 away from the edge,
/// spectral containment in the stated interval, and the stored trace.
#[derive(Clone, Debug)]
pub struct HyponormalityReport {
    /// Smallest eigenvalue of the corner block of [T*, T]; hyponormality
    /// means it is nonnegative up to rounding.
    pub corner_selfcommutator_eigmin: f64,
    /// Largest deviation of -i[Y, X] from D2 below the edge window.
    pub d2_max_deviation: f64,
    /// Smallest and largest eigenvalue of X over the full truncation.
    pub x_spectrum_bounds: (f64, f64),
    /// Whether the X spectrum sits inside the stated interval (with a
    /// rounding allowance).
    pub interval_contains_spectrum: bool,
    /// Stored tr(D2) minus the recomputed diagonal sum.
    pub tr_d2_error: f64,
}

pub fn verify_hyponormal(model: &HyponormalModel) -> HyponormalityReport {
    let n = model.corner_dim();
    // T = X + iY; the corner of [T*, T] = T*T - TT* must be PSD
    let t = model.x().add(&model.y().scale(c(0.0, 1.0)));
    let t_adj = t.adjoint();
    let comm = t_adj.mul(&t).sub(&t.mul(&t_adj));
    let corner: CMat = comm.corner_block(n).expect("corner_dim <= ambient_dim");
    let corner_h = HermitianOperator::symmetrize(corner).expect("self-commutator corner is Hermitian");
    let eigmin = eigh(&corner_h).eigenvalues()[0];

    let xe = eigh(&model.x_dense());
    let lo = xe.eigenvalues()[0];
    let hi = *xe.eigenvalues().last().unwrap();
    let (a, b) = model.interval();
    let pad = 64.0 * f64::EPSILON * (1.0 + b.abs().max(a.abs()));

    let recomputed: f64 = (0..model.ambient_dim()).map(|j| model.d2().entry(j, j).re).sum();

    HyponormalityReport {
        corner_selfcommutator_eigmin: eigmin,
        d2_max_deviation: model.d2_deviation_outside_edge(),
        x_spectrum_bounds: (lo, hi),
        interval_contains_spectrum: lo >= a - pad && hi <= b + pad,
        tr_d2_error: (model.tr_d2() - recomputed).abs(),
    }
}
