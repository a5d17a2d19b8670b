//! Cross-module randomized properties: the workspace-level invariants that
//! tie the eigensolver, the shift function, the transform, and the banded
//! corner algebra together.

use proptest::prelude::*;

use principal_lab::functions::bivariate::SeparableBivariate;
use principal_lab::functions::poly::PolyFunction;
use principal_lab::krein::{krein_check, spectral_shift};
use principal_lab::linalg::dense::{c, cr, CMat, HermitianOperator};
use principal_lab::linalg::doi::doi_transform;
use principal_lab::linalg::eigh::{apply_function, eigh};
use principal_lab::linalg::banded::neg_i_commutator;
use principal_lab::models::{HyponormalModel, ModelKind, ModelSpec};

const INTERVAL: (f64, f64) = (-2.5, 2.5);

/// Hermitian matrix with spectral norm <= 1, generated entrywise.
fn hermitian_from(values: &[f64], dim: usize) -> HermitianOperator {
    let raw = CMat::from_fn(dim, dim, |i, j| {
        let k = 2 * (i * dim + j);
        c(values[k], values[k + 1])
    });
    let sym = (&raw + raw.adjoint()) * cr(0.5 / dim as f64);
    HermitianOperator::symmetrize(sym).expect("construction is Hermitian")
}

fn hermitian_strategy(max_dim: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2usize..=max_dim)
        .prop_flat_map(|dim| (Just(dim), proptest::collection::vec(-1.0f64..1.0, 2 * dim * dim)))
}

fn poly_strategy(max_degree: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1.0f64..1.0, 1..=max_degree + 1)
}

proptest! {
    /// Trace identity, mass identity, and trace-norm bound of the shift
    /// function, on pairs with no special structure.
    #[test]
    fn krein_identity_and_mass_bounds(
        (dim, h_vals) in hermitian_strategy(10),
        v_vals in proptest::collection::vec(-1.0f64..1.0, 2 * 10 * 10),
        coeffs in poly_strategy(6),
    ) {
        let h0 = hermitian_from(&h_vals, dim);
        let v = hermitian_from(&v_vals[..2 * dim * dim], dim);
        let h = HermitianOperator::symmetrize(h0.matrix() + v.matrix()).unwrap();
        let phi = PolyFunction::from_real(&coeffs, INTERVAL).unwrap();

        let check = krein_check(&h0, &h, &phi).unwrap();
        let scale = 1.0 + check.trace_norm_v * phi.derivative().sup_abs(256);
        prop_assert!(check.diff() <= 1e-8 * scale,
            "trace identity residual {} above {:.3e}", check.diff(), 1e-8 * scale);
        prop_assert!((check.xi_integral - check.trace_v).abs() <= 1e-9 * (1.0 + check.trace_v.abs()));
        prop_assert!(check.abs_xi_integral <= check.trace_norm_v + 1e-9);
    }

    /// A positive-semidefinite perturbation can only push eigenvalues up.
    #[test]
    fn psd_perturbation_gives_nonnegative_shift(
        (dim, h_vals) in hermitian_strategy(10),
        b_vals in proptest::collection::vec(-1.0f64..1.0, 2 * 10 * 10),
    ) {
        let h0 = hermitian_from(&h_vals, dim);
        let b = CMat::from_fn(dim, dim, |i, j| {
            let k = 2 * (i * dim + j);
            c(b_vals[k], b_vals[k + 1])
        });
        let psd = (b.adjoint() * &b) * cr(0.25 / dim as f64);
        let h = HermitianOperator::symmetrize(h0.matrix() + psd).unwrap();
        let xi = spectral_shift(&h0, &h).unwrap();
        // counting orientation: upward motion of eigenvalues of H makes
        // xi = #eig(H0) - #eig(H) nonnegative below each crossing
        prop_assert!(xi.values().iter().all(|&v| v >= 0));
    }

    /// The shift function is a joint unitary invariant of the pair.
    #[test]
    fn shift_function_is_unitarily_invariant(
        (dim, h_vals) in hermitian_strategy(8),
        v_vals in proptest::collection::vec(-1.0f64..1.0, 2 * 8 * 8),
        w_vals in proptest::collection::vec(-1.0f64..1.0, 2 * 8 * 8),
    ) {
        let h0 = hermitian_from(&h_vals, dim);
        let h = HermitianOperator::symmetrize(
            h0.matrix() + hermitian_from(&v_vals[..2 * dim * dim], dim).matrix(),
        ).unwrap();
        let w = eigh(&hermitian_from(&w_vals[..2 * dim * dim], dim)).vectors().clone();

        let xi = spectral_shift(&h0, &h).unwrap();
        let rotated = spectral_shift(
            &HermitianOperator::symmetrize(&w * h0.matrix() * w.adjoint()).unwrap(),
            &HermitianOperator::symmetrize(&w * h.matrix() * w.adjoint()).unwrap(),
        ).unwrap();

        prop_assert_eq!(xi.values(), rotated.values());
        prop_assert_eq!(xi.breakpoints().len(), rotated.breakpoints().len());
        for (a, b) in xi.breakpoints().iter().zip(rotated.breakpoints()) {
            prop_assert!((a - b).abs() <= 1e-9, "breakpoints drift: {} vs {}", a, b);
        }
    }

    /// The divided-difference transform turns -i[Y, X] into -i[psi(Y), X].
    #[test]
    fn transform_carries_commutators_through_functions(
        (dim, y_vals) in hermitian_strategy(10),
        x_vals in proptest::collection::vec(-1.0f64..1.0, 2 * 10 * 10),
        coeffs in poly_strategy(5),
    ) {
        let y = hermitian_from(&y_vals, dim);
        let x = hermitian_from(&x_vals[..2 * dim * dim], dim);
        let psi = PolyFunction::from_real(&coeffs, INTERVAL).unwrap();

        let k = (y.matrix() * x.matrix() - x.matrix() * y.matrix()) * c(0.0, -1.0);
        let via_transform = doi_transform(&y, &k, &psi).unwrap();

        let psi_y = apply_function(&y, &psi).unwrap();
        let direct = (psi_y.matrix() * x.matrix() - x.matrix() * psi_y.matrix()) * c(0.0, -1.0);

        let scale = 1.0 + direct.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let residual = (&via_transform - &direct).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(residual <= 1e-9 * scale, "residual {} vs scale {}", residual, scale);
    }

    /// Functional calculus respects pointwise sums and products.
    #[test]
    fn functional_calculus_is_a_homomorphism(
        (dim, h_vals) in hermitian_strategy(10),
        f_coeffs in poly_strategy(4),
        g_coeffs in poly_strategy(4),
    ) {
        let a = hermitian_from(&h_vals, dim);
        let f = PolyFunction::from_real(&f_coeffs, INTERVAL).unwrap();
        let g = PolyFunction::from_real(&g_coeffs, INTERVAL).unwrap();

        let fa = apply_function(&a, &f).unwrap();
        let ga = apply_function(&a, &g).unwrap();
        let sum = apply_function(&a, &f.add(&g)).unwrap();
        let product = apply_function(&a, &f.mul(&g)).unwrap();

        let sum_residual = (sum.matrix() - (fa.matrix() + ga.matrix()))
            .iter().map(|z| z.norm()).fold(0.0, f64::max);
        let prod_residual = (product.matrix() - fa.matrix() * ga.matrix())
            .iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(sum_residual <= 1e-10);
        prop_assert!(prod_residual <= 1e-9);
    }

    /// Divided differences are symmetric and collapse to the derivative.
    #[test]
    fn divided_difference_symmetry_and_diagonal(
        coeffs in poly_strategy(6),
        s in -2.0f64..2.0,
        t in -2.0f64..2.0,
    ) {
        let phi = PolyFunction::from_real(&coeffs, INTERVAL).unwrap();
        let fwd = phi.divided_difference(s, t);
        let bwd = phi.divided_difference(t, s);
        prop_assert!((fwd - bwd).norm() <= 1e-10 * (1.0 + fwd.norm()));
        let on_diagonal = phi.divided_difference(s, s);
        let derivative = phi.derivative().eval(s);
        prop_assert!((on_diagonal - derivative).norm() <= 1e-10 * (1.0 + derivative.norm()));
    }

    /// The symbol Jacobian is antisymmetric and vanishes on equal operands.
    #[test]
    fn jacobian_is_antisymmetric(
        a_coeffs in poly_strategy(3),
        b_coeffs in poly_strategy(3),
        c_coeffs in poly_strategy(3),
        d_coeffs in poly_strategy(3),
        t in -2.0f64..2.0,
        lambda in -2.0f64..2.0,
    ) {
        let make = |u: &[f64], v: &[f64]| {
            SeparableBivariate::product(
                PolyFunction::from_real(u, INTERVAL).unwrap(),
                PolyFunction::from_real(v, INTERVAL).unwrap(),
            ).unwrap()
        };
        let psi = make(&a_coeffs, &b_coeffs);
        let phi = make(&c_coeffs, &d_coeffs);

        let fwd = psi.jacobian(&phi).eval(t, lambda);
        let bwd = phi.jacobian(&psi).eval(t, lambda);
        prop_assert!((fwd + bwd).norm() <= 1e-10 * (1.0 + fwd.norm()));

        let self_jac = psi.jacobian(&psi).eval(t, lambda);
        prop_assert!(self_jac.norm() <= 1e-10);
    }

    /// Banded polynomial calculus agrees with the dense eigensolver route.
    #[test]
    fn banded_and_dense_routes_agree(
        m_octs in 2usize..=8,
        coeffs in poly_strategy(4),
    ) {
        let m = 8 * m_octs;
        let model = HyponormalModel::build(ModelSpec::new(ModelKind::Shift, m, m / 8).unwrap()).unwrap();
        let p = PolyFunction::from_real(&coeffs, model.interval()).unwrap();

        let banded = model.x().poly(&p).to_dense();
        let dense = apply_function(&model.x_dense(), &p).unwrap();
        let residual = (&banded - dense.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(residual <= 1e-10, "banded/dense disagreement {}", residual);

        let comm = neg_i_commutator(&model.y().poly(&p), model.x());
        let corner = comm.corner_trace(model.corner_dim()).unwrap();
        prop_assert!(corner.im.abs() <= 1e-12, "corner trace should be real");
    }

    /// The q-weighted defect trace follows its geometric closed form.
    #[test]
    fn q_weighted_defect_trace_closed_form(
        q in 0.05f64..0.95,
        m_octs in 2usize..=6,
    ) {
        let m = 8 * m_octs;
        let model = HyponormalModel::build(
            ModelSpec::new(ModelKind::QWeighted { q }, m, m / 8).unwrap(),
        ).unwrap();
        let expected = (1.0 - q.powi(m as i32)) / 2.0;
        prop_assert!((model.tr_d2() - expected).abs() <= 1e-12);
    }
}
