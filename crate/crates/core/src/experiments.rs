//! Experiment drivers behind the command-line binary: each runner turns a
//! validated configuration into a [`RunReport`]. Case construction is
//! sequential and seeded, so a report's summary is a pure function of the
//! configuration.

use std::time::Instant;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::functions::bivariate::SeparableBivariate;
use crate::functions::poly::PolyFunction;
use crate::krein::{eta_slice, krein_check, xi_slice};
use crate::linalg::banded::neg_i_commutator as banded_neg_i_commutator;
use crate::linalg::dense::{c, cr, neg_i_commutator, CMat, HermitianOperator};
use crate::linalg::doi::doi_transform;
use crate::linalg::eigh::{apply_function, eigh};
use crate::models::HyponormalModel;
use crate::principal::{
    lemma1_check, moment_table, positivity_probe, reconstruct_r, ssf_binned_r,
    generalized_trace_lhs, generalized_trace_rhs, Axis, RSource,
};
use crate::report::{CaseRecord, RunReport, Table};
use crate::{Error, Result};

/// Runs the configured experiment, dispatching to sweep mode when the
/// configuration carries a list of ambient dimensions.
pub fn run(config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    let kind = config
        .experiment
        .ok_or_else(|| Error::config("no experiment selected"))?;
    if config.sweep.is_empty() {
        run_single(config, kind)
    } else {
        run_sweep(config, kind)
    }
}

fn run_single(config: &ExperimentConfig, kind: ExperimentKind) -> Result<RunReport> {
    let mut report = RunReport::new(
        kind.name(),
        &config.model,
        config.ambient_dim,
        config.corner_dim,
        config.seed,
    );
    match kind {
        ExperimentKind::Krein => run_krein(config, &mut report)?,
        ExperimentKind::Doi => run_doi(config, &mut report)?,
        ExperimentKind::Lemma1 => run_lemma1(config, &mut report)?,
        ExperimentKind::Moments => run_moments(config, &mut report)?,
        ExperimentKind::Formula => run_formula(config, &mut report)?,
        ExperimentKind::Reconstruct => run_reconstruct(config, &mut report)?,
        ExperimentKind::SsfSlice => run_ssf_slice(config, &mut report)?,
        ExperimentKind::Positivity => run_positivity(config, &mut report)?,
    }
    report.finalize();
    Ok(report)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

fn rescale(m: CMat, target_norm: f64) -> HermitianOperator {
    let h = HermitianOperator::symmetrize(m).expect("hermitian by construction");
    let norm = eigh(&h)
        .eigenvalues()
        .iter()
        .fold(0.0f64, |acc, &e| acc.max(e.abs()))
        .max(f64::EPSILON);
    let factor = cr(target_norm / norm);
    HermitianOperator::symmetrize(h.matrix().map(|z| z * factor))
        .expect("scaling preserves symmetry")
}

fn random_hermitian(dim: usize, target_norm: f64, rng: &mut ChaCha8Rng) -> HermitianOperator {
    let mut m = CMat::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = cr(uniform(rng));
        for j in i + 1..dim {
            let z = c(uniform(rng), uniform(rng));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    rescale(m, target_norm)
}

fn random_psd(dim: usize, target_norm: f64, rng: &mut ChaCha8Rng) -> HermitianOperator {
    let mut a = CMat::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            a[(i, j)] = c(uniform(rng), uniform(rng));
        }
    }
    rescale(a.adjoint() * &a, target_norm)
}

fn random_poly(max_degree: usize, interval: (f64, f64), rng: &mut ChaCha8Rng) -> PolyFunction {
    let degree = 1 + (rng.random::<u32>() as usize) % max_degree;
    let coeffs: Vec<f64> = (0..=degree).map(|_| uniform(rng)).collect();
    PolyFunction::from_real(&coeffs, interval).expect("valid interval")
}

/// Random separable symbol whose per-term degrees in the two variables sum
/// to at most `max_total`.
fn random_bivariate(
    max_total: usize,
    interval: (f64, f64),
    rng: &mut ChaCha8Rng,
) -> SeparableBivariate {
    let n_terms = 1 + (rng.random::<u32>() as usize) % 2;
    let mut terms = Vec::with_capacity(n_terms);
    for _ in 0..n_terms {
        let dt = (rng.random::<u32>() as usize) % (max_total + 1);
        let dl = (rng.random::<u32>() as usize) % (max_total + 1 - dt);
        let alpha: Vec<f64> = (0..=dt).map(|_| uniform(rng)).collect();
        let beta: Vec<f64> = (0..=dl).map(|_| uniform(rng)).collect();
        terms.push((
            cr(1.0),
            PolyFunction::from_real(&alpha, interval).expect("valid interval"),
            PolyFunction::from_real(&beta, interval).expect("valid interval"),
        ));
    }
    SeparableBivariate::new(terms, interval).expect("consistent intervals")
}

fn build_model(config: &ExperimentConfig) -> Result<HyponormalModel> {
    HyponormalModel::build(config.model_spec()?)
}

fn ms(clock: Instant) -> f64 {
    clock.elapsed().as_secs_f64() * 1e3
}

/// Seeded Hermitian pairs against the shift-function identity
/// Tr{phi(H) - phi(H0)} = Int phi' xi, plus the mass, l1, and sign
/// invariants of xi. Every odd pair uses a positive perturbation.
fn run_krein(config: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let pairs = config.parameter("pairs", 100.0) as usize;
    let dim = config.parameter("dim", 40.0) as usize;
    if dim < 2 {
        return Err(Error::config("krein experiment needs dim >= 2"));
    }
    let tol = config.tolerance(1e-8);
    let trace_tol = config.parameter("trace_tolerance", 1e-9);
    let interval = (-1.2, 1.2);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for i in 0..pairs {
        let clock = Instant::now();
        let h0 = random_hermitian(dim, 0.75, &mut rng);
        let psd = i % 2 == 1;
        let v = if psd {
            random_psd(dim, 0.25, &mut rng)
        } else {
            random_hermitian(dim, 0.25, &mut rng)
        };
        let h = HermitianOperator::symmetrize(h0.matrix() + v.matrix())?;
        let phi = random_poly(8, interval, &mut rng);
        let check = krein_check(&h0, &h, &phi)?;
        report.push_case(
            CaseRecord::checked(format!("pair-{i:03}/identity"), check.lhs, check.rhs, tol)
                .with_wall(ms(clock)),
        );
        report.push_case(CaseRecord::checked(
            format!("pair-{i:03}/xi-mass"),
            check.xi_integral,
            check.trace_v,
            trace_tol,
        ));
        let slack = check.abs_xi_integral - check.trace_norm_v;
        report.push_case(CaseRecord::condition(
            format!("pair-{i:03}/l1-bound"),
            slack,
            slack <= trace_tol,
        ));
        if psd {
            let min_level = check.xi.values().iter().copied().min().unwrap_or(0) as f64;
            report.push_case(CaseRecord::condition(
                format!("pair-{i:03}/nonnegative"),
                min_level,
                min_level >= 0.0,
            ));
        }
    }
    Ok(())
}

/// Seeded pairs against the divided-difference transform identity: feeding
/// the commutator -i[Y, X] through the kernel of psi must reproduce
/// -i[psi(Y), X] entrywise.
fn run_doi(config: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let pairs = config.parameter("pairs", 100.0) as usize;
    let dim = config.parameter("dim", 30.0) as usize;
    if dim < 2 {
        return Err(Error::config("doi experiment needs dim >= 2"));
    }
    let rel_tol = config.tolerance(1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for i in 0..pairs {
        let clock = Instant::now();
        let y = random_hermitian(dim, 0.9, &mut rng);
        let x = random_hermitian(dim, 0.9, &mut rng);
        let psi = random_poly(6, (-1.2, 1.2), &mut rng);
        let k = neg_i_commutator(y.matrix(), x.matrix());
        let via_kernel = doi_transform(&y, &k, &psi)?;
        let direct = neg_i_commutator(apply_function(&y, &psi)?.matrix(), x.matrix());
        let residual = (&via_kernel - &direct)
            .iter()
            .fold(0.0f64, |acc, z| acc.max(z.norm()));
        let scale = 1.0 + direct.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        report.push_case(
            CaseRecord::checked(
                format!("pair-{i:03}/transform"),
                residual,
                0.0,
                rel_tol * scale,
            )
            .with_wall(ms(clock)),
        );
    }
    Ok(())
}

/// One-variable trace lemma on the configured model, both axes: the corner
/// trace of -i[psi(Y), X] against Tr{psi'(Y) D2} and the mirrored form.
fn run_lemma1(config: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let model = build_model(config)?;
    let tol = config.tolerance(1e-9);
    let interval = model.interval();
    let mut probes: Vec<(String, PolyFunction)> = (1..=3)
        .map(|k| (format!("deg-{k}"), PolyFunction::monomial(k, interval).expect("valid interval")))
        .collect();
    let mixed = PolyFunction::monomial(1, interval)?
        .add(&PolyFunction::monomial(2, interval)?.scale(cr(0.5)));
    probes.push(("mixed".into(), mixed));
    for (name, psi) in &probes {
        for (axis, axis_name) in [(Axis::Y, "axis-y"), (Axis::X, "axis-x")] {
            let clock = Instant::now();
            let id = lemma1_check(&model, psi, axis)?;
            report.push_case(
                CaseRecord::checked(format!("{name}/{axis_name}"), id.lhs, id.rhs, tol)
                    .with_wall(ms(clock)),
            );
        }
    }
    Ok(())
}

/// Cumulative moment table with closed-form cross-checks where the model has
/// an explicit density; entries without one are reported unchecked.
fn run_moments(config: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let model = build_model(config)?;
    let max_degree = config.parameter("max_degree", 6.0) as usize;
    let tol = config.tolerance(1e-8);
    let clock = Instant::now();
    let table = moment_table(&model, max_degree)?;
    let wall = ms(clock) / table.len().max(1) as f64;
    let mut csv = Table::new(
        "moments",
        ["p", "q", "operator", "closed_form", "diff"].map(String::from).to_vec(),
    );
    for (&(p, q), &value) in table.entries() {
        let label = format!("mu({p},{q})");
        match model.expected_moment(p, q) {
            Some(reference) => {
                report.push_case(CaseRecord::checked(label.as_str(), value, reference, tol).with_wall(wall));
                csv.push_row(label, vec![p as f64, q as f64, value, reference, (value - reference).abs()]);
            }
            None => {
                report.push_case(CaseRecord::diagnostic(label.as_str(), value, f64::NAN).with_wall(wall));
                csv.push_row(label, vec![p as f64, q as f64, value, f64::NAN, f64::NAN]);
            }
        }
    }
    report.push_table(csv);
    Ok(())
}

/// Two-sided bivariate trace formula on random symbol pairs: corner trace
/// against the closed-form density integral and against quadrature, plus the
/// single-product collapse decomposition.
fn run_formula(config: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let model = build_model(config)?;
    if model.expected_moment(0, 0).is_none() {
        return Err(Error::config(format!(
            "formula experiment needs a model with a closed-form density; '{}' has none",
            config.model
        )));
    }
    let pairs = config.parameter("pairs", 20.0) as usize;
    let tol_cf = config.tolerance(1e-8);
    let tol_quad = config.parameter("quad_tolerance", 5e-3);
    let tol_collapse = config.parameter("collapse_tolerance", 1e-9);
    let identical = config.parameter("identical_operands", 0.0) != 0.0;
    let tol_anti = config.parameter("antisymmetry_tolerance", 1e-10);
    let interval = model.interval();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for i in 0..pairs {
        let psi = random_bivariate(3, interval, &mut rng);
        let phi = if identical { psi.clone() } else { random_bivariate(3, interval, &mut rng) };
        let clock = Instant::now();
        let lhs = generalized_trace_lhs(&model, &psi, &phi)?;
        let rhs_closed = generalized_trace_rhs(&psi, &phi, &RSource::ClosedForm(&model))?;
        report.push_case(
            CaseRecord::checked(format!("pair-{i:02}/closed-form"), lhs, rhs_closed, tol_cf)
                .with_wall(ms(clock)),
        );
        let rhs_quad = generalized_trace_rhs(
            &psi,
            &phi,
            &RSource::Quadrature { model: &model, grid_size: config.grid_size },
        )?;
        report.push_case(CaseRecord::checked(
            format!("pair-{i:02}/quadrature"),
            lhs,
            rhs_quad,
            tol_quad,
        ));
        if identical {
            report.push_case(CaseRecord::checked(
                format!("pair-{i:02}/antisymmetry"),
                lhs,
                0.0,
                tol_anti,
            ));
        }

        // Collapse of a product pair: with single products alpha(t)psi1(l)
        // and phi1(t)beta(l), the trace splits into a pure-t bracket against
        // the combined l-part and a pure-l bracket against the combined
        // t-part.
        let alpha = random_poly(2, interval, &mut rng);
        let psi1 = random_poly(2, interval, &mut rng);
        let phi1 = random_poly(2, interval, &mut rng);
        let beta = random_poly(2, interval, &mut rng);
        let one = PolyFunction::from_real(&[1.0], interval)?;
        let whole = generalized_trace_lhs(
            &model,
            &SeparableBivariate::product(alpha.clone(), psi1.clone())?,
            &SeparableBivariate::product(phi1.clone(), beta.clone())?,
        )?;
        let first = generalized_trace_lhs(
            &model,
            &SeparableBivariate::product(alpha.clone(), psi1.mul(&beta))?,
            &SeparableBivariate::product(phi1.clone(), one.clone())?,
        )?;
        let second = generalized_trace_lhs(
            &model,
            &SeparableBivariate::product(alpha.mul(&phi1), psi1)?,
            &SeparableBivariate::product(one, beta)?,
        )?;
        report.push_case(CaseRecord::checked(
            format!("pair-{i:02}/collapse"),
            whole,
            first + second,
            tol_collapse,
        ));
    }
    Ok(())
}

/// Moment-based density reconstruction: total mass, l1 mass, the value at
/// the origin, matched moments, and the degree trend of the l1 error.
fn run_reconstruct(config: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let model = build_model(config)?;
    let degree = config.degree.max(1);
    let grid = config.grid_size;
    let tol = config.tolerance(1e-9);
    let center_tol = config.parameter("center_tolerance", 0.03);
    let mass_rel = config.parameter("mass_tolerance", 0.05);
    let clock = Instant::now();
    let moments = moment_table(&model, 2 * degree)?;
    let estimate = reconstruct_r(&moments, degree, grid)?;
    let wall = ms(clock);

    let mu00 = moments.get(0, 0)?;
    report.push_case(
        CaseRecord::checked("integral-vs-mu00", estimate.integral(), mu00, tol).with_wall(wall),
    );
    report.push_case(CaseRecord::checked(
        "l1-mass",
        estimate.l1_mass(),
        model.tr_d2(),
        mass_rel * model.tr_d2(),
    ));
    match model.expected_r(0.0, 0.0) {
        Some(reference) => report.push_case(CaseRecord::checked(
            "center-value",
            estimate.eval(0.0, 0.0),
            reference,
            center_tol,
        )),
        None => report.push_case(CaseRecord::diagnostic(
            "center-value",
            estimate.eval(0.0, 0.0),
            f64::NAN,
        )),
    }

    let mut matched = Table::new(
        "matched_moments",
        ["p", "q", "estimate", "operator", "diff"].map(String::from).to_vec(),
    );
    let mut max_mismatch = 0.0f64;
    for p in 0..=degree {
        for q in 0..=degree {
            let from_estimate = estimate.moment_of_estimate(p, q);
            let from_operator = moments.get(p, q)?;
            let diff = (from_estimate - from_operator).abs();
            max_mismatch = max_mismatch.max(diff);
            matched.push_row(
                format!("mu({p},{q})"),
                vec![p as f64, q as f64, from_estimate, from_operator, diff],
            );
        }
    }
    report.push_table(matched);
    report.push_case(CaseRecord::checked("matched-moments-max", max_mismatch, 0.0, tol));

    // l1 error against tr(D2) over increasing basis degree; the moment table
    // above already covers every degree in the trend.
    let trend_degrees: Vec<usize> = [4usize, 6, 8].into_iter().filter(|&d| d <= degree).collect();
    if trend_degrees.len() > 1 {
        let mut trend = Table::new(
            "degree_trend",
            ["degree", "l1_mass", "l1_error"].map(String::from).to_vec(),
        );
        let mut errors = Vec::new();
        for &d in &trend_degrees {
            let est = if d == degree { estimate.clone() } else { reconstruct_r(&moments, d, grid)? };
            let err = (est.l1_mass() - model.tr_d2()).abs();
            trend.push_row(format!("degree-{d}"), vec![d as f64, est.l1_mass(), err]);
            errors.push(err);
        }
        report.push_table(trend);
        let slack = config.parameter("trend_slack", 1e-12);
        let monotone = errors.windows(2).all(|w| w[1] <= w[0] + slack);
        report.push_case(CaseRecord::condition(
            "l1-trend-monotone",
            *errors.last().unwrap(),
            monotone,
        ));
    }

    let (nodes_t, nodes_l) = estimate.nodes();
    let mut density = Table::new(
        "density",
        ["t", "lambda", "estimate", "reference"].map(String::from).to_vec(),
    );
    for (i, &t) in nodes_t.iter().enumerate() {
        for (j, &l) in nodes_l.iter().enumerate() {
            let reference = model.expected_r(t, l).unwrap_or(f64::NAN);
            density.push_row(
                format!("r-{i:03}-{j:03}"),
                vec![t, l, estimate.values()[i][j], reference],
            );
        }
    }
    report.push_table(density);
    Ok(())
}

/// Conjugated-pair slices: the forced null sum at finite truncation, the
/// windowed comparison against corner traces (trend only), and the binned
/// density estimate.
fn run_ssf_slice(config: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let model = build_model(config)?;
    let tol = config.tolerance(1e-9);
    let interval = model.interval();
    let n = model.corner_dim();
    let mut trend = Table::new(
        "windowed_trend",
        ["windowed", "corner_reference", "abs_diff"].map(String::from).to_vec(),
    );
    let mut window = interval;
    let ident = PolyFunction::monomial(1, interval)?;
    for k in 1..=3usize {
        let psi = PolyFunction::monomial(k, interval)?;
        let clock = Instant::now();
        let slice = xi_slice(&model, &psi)?;
        report.push_case(
            CaseRecord::checked(format!("xi/deg-{k}/null-sum"), slice.null_sum, 0.0, tol)
                .with_wall(ms(clock)),
        );
        let mirror = eta_slice(&model, &psi)?;
        report.push_case(CaseRecord::checked(
            format!("eta/deg-{k}/null-sum"),
            mirror.null_sum,
            0.0,
            tol,
        ));
        window = slice.window;
        for m in 1..=3usize {
            let phi = PolyFunction::monomial(m, interval)?;
            // The pair slice is the negative of the renormalized slice, so
            // the windowed integral flips sign before the comparison.
            let windowed = -slice
                .ssf
                .windowed_integrate_against_derivative(&phi, slice.window.0, slice.window.1);
            let reference = banded_neg_i_commutator(&model.y().poly(&psi), &model.x().poly(&phi))
                .corner_trace(n)?
                .re;
            trend.push_row(
                format!("xi-deg{k}/phi-deg{m}"),
                vec![windowed, reference, (windowed - reference).abs()],
            );
        }
        // unwindowed mass of the compressed slice: converges to the corner
        // commutator trace much faster than any windowed integral because
        // nothing is clipped away
        let total = -slice.ssf.integral();
        let total_ref = banded_neg_i_commutator(&model.y().poly(&psi), &model.x().poly(&ident))
            .corner_trace(n)?
            .re;
        trend.push_row(
            format!("xi-deg{k}/total-mass"),
            vec![total, total_ref, (total - total_ref).abs()],
        );
        let mirror_total = -mirror.ssf.integral();
        let mirror_ref = banded_neg_i_commutator(&model.x().poly(&psi), &model.y().poly(&ident))
            .corner_trace(n)?
            .re;
        trend.push_row(
            format!("eta-deg{k}/total-mass"),
            vec![mirror_total, mirror_ref, (mirror_total - mirror_ref).abs()],
        );
    }
    report.push_table(trend);

    let t_bins = config.parameter("t_bins", 4.0) as usize;
    let l_bins = config.parameter("l_bins", 3.0) as usize;
    if t_bins > 0 && l_bins > 0 {
        let estimate = ssf_binned_r(&model, t_bins, l_bins, window)?;
        report.push_case(CaseRecord::diagnostic("binned/integral", estimate.integral(), f64::NAN));
        let (nodes_t, nodes_l) = estimate.nodes();
        let mut binned = Table::new(
            "binned_density",
            ["t", "lambda", "estimate", "reference"].map(String::from).to_vec(),
        );
        for (i, &t) in nodes_t.iter().enumerate() {
            for (j, &l) in nodes_l.iter().enumerate() {
                let reference = model.expected_r(t, l).unwrap_or(f64::NAN);
                binned.push_row(
                    format!("bin-{i:02}-{j:02}"),
                    vec![t, l, estimate.values()[i][j], reference],
                );
            }
        }
        report.push_table(binned);
    }
    Ok(())
}

/// Smallest eigenvalue of the symmetrized corner of -i[psi(Y), X]. Sign
/// assertions only for the linear probes; the rest is recorded data.
fn run_positivity(config: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let model = build_model(config)?;
    let tol = config.tolerance(1e-10);
    let interval = model.interval();
    let l1 = PolyFunction::monomial(1, interval)?;
    let l2 = PolyFunction::monomial(2, interval)?;
    let l3 = PolyFunction::monomial(3, interval)?;
    let probes: Vec<(&str, PolyFunction, Option<bool>)> = vec![
        ("psi=l", l1.clone(), Some(true)),
        ("psi=-l", l1.scale(cr(-1.0)), Some(false)),
        ("psi=l^2", l2, None),
        ("psi=l^3", l3.clone(), None),
        ("psi=l+l^3/3", l1.add(&l3.scale(cr(1.0 / 3.0))), None),
    ];
    let mut table = Table::new("eigmin", ["eigmin"].map(String::from).to_vec());
    for (name, psi, expect_nonneg) in probes {
        let clock = Instant::now();
        let eigmin = positivity_probe(&model, &psi)?;
        let case = match expect_nonneg {
            Some(true) => CaseRecord::condition(format!("{name}/nonnegative"), eigmin, eigmin >= -tol),
            Some(false) => CaseRecord::condition(format!("{name}/nonpositive"), eigmin, eigmin <= tol),
            None => CaseRecord::diagnostic(format!("{name}/eigmin"), eigmin, f64::NAN),
        };
        report.push_case(case.with_wall(ms(clock)));
        table.push_row(name, vec![eigmin]);
    }
    report.push_table(table);
    Ok(())
}

/// Repeats the experiment across the configured ambient dimensions and
/// compares each case's left-hand value across runs. Corner-windowed
/// quantities are exact in the ambient dimension, so most experiments assert
/// a near-zero spread; the slice experiment reports trends only.
fn run_sweep(config: &ExperimentConfig, kind: ExperimentKind) -> Result<RunReport> {
    if matches!(kind, ExperimentKind::Krein | ExperimentKind::Doi) {
        return Err(Error::config(format!(
            "sweep does not apply to '{}': its cases have no ambient truncation",
            kind.name()
        )));
    }
    let assert_exact = !matches!(kind, ExperimentKind::SsfSlice);
    let sweep_tol = config.parameter("sweep_tolerance", 1e-12);

    let mut runs = Vec::with_capacity(config.sweep.len());
    for &m in &config.sweep {
        let mut sub = config.clone();
        sub.ambient_dim = m;
        sub.sweep = Vec::new();
        runs.push(run_single(&sub, kind)?);
    }

    let mut report = RunReport::new(
        kind.name(),
        &config.model,
        *config.sweep.last().expect("sweep mode requires dimensions"),
        config.corner_dim,
        config.seed,
    );
    let mut columns: Vec<String> = config.sweep.iter().map(|m| format!("M={m}")).collect();
    columns.push("spread".into());
    let mut table = Table::new("sweep", columns);
    for (idx, base) in runs[0].cases.iter().enumerate() {
        let mut values = Vec::with_capacity(runs.len());
        for run in &runs {
            let case = run.cases.get(idx).filter(|c| c.label == base.label).ok_or_else(|| {
                Error::config("sweep runs produced different case lists; seeds must agree")
            })?;
            values.push(case.lhs);
        }
        let spread = values.iter().fold(f64::NEG_INFINITY, |a, &v| a.max(v))
            - values.iter().fold(f64::INFINITY, |a, &v| a.min(v));
        let mut row = values;
        row.push(spread);
        table.push_row(base.label.clone(), row);
        if assert_exact {
            report.push_case(CaseRecord::checked(format!("spread/{}", base.label), spread, 0.0, sweep_tol));
        } else {
            report.push_case(CaseRecord::diagnostic(format!("spread/{}", base.label), spread, 0.0));
        }
    }
    report.push_table(table);

    // For the slice experiment the interesting output is how the windowed
    // integrals move as the truncation grows, so the per-run trend tables
    // are merged into one convergence table.
    if matches!(kind, ExperimentKind::SsfSlice) {
        if let Some(first) = runs[0].tables.iter().find(|t| t.name == "windowed_trend") {
            let mut columns: Vec<String> = config.sweep.iter().map(|m| format!("M={m}")).collect();
            columns.push("corner_reference".into());
            let mut conv = Table::new("windowed_convergence", columns);
            for (row_idx, label) in first.row_labels.iter().enumerate() {
                let mut row = Vec::with_capacity(runs.len() + 1);
                for run in &runs {
                    let t = run
                        .tables
                        .iter()
                        .find(|t| t.name == "windowed_trend")
                        .ok_or_else(|| Error::config("sweep run missing its trend table"))?;
                    row.push(t.rows[row_idx][0]);
                }
                row.push(first.rows[row_idx][1]);
                conv.push_row(label.clone(), row);
            }
            report.push_table(conv);
        }
    }
    report.finalize();
    Ok(report)
}
