//! Separable bivariate symbols: finite sums of products a(t) * p(lambda).

use crate::functions::poly::PolyFunction;
use crate::linalg::dense::{cr, C64};
use crate::{Error, Result};

/// Finite sum  Psi(t, lambda) = sum_j c_j alpha_j(t) psi_j(lambda)  over the
/// square [a, b]^2. The separable form is what the operator substitution
/// Psi(X, Y) = sum_j c_j alpha_j(X) psi_j(Y) (X-factor on the left, no
/// symmetrization) needs; everything else (Jacobians, monomial expansion)
/// is derived from it.
#[derive(Clone, Debug)]
pub struct SeparableBivariate {
    terms: Vec<(C64, PolyFunction, PolyFunction)>,
    interval: (f64, f64),
}

impl SeparableBivariate {
    pub fn new(terms: Vec<(C64, PolyFunction, PolyFunction)>, interval: (f64, f64)) -> Result<Self> {
        if !(interval.0.is_finite() && interval.1.is_finite() && interval.0 < interval.1) {
            return Err(Error::InvalidInterval { a: interval.0, b: interval.1 });
        }
        for (_, alpha, psi) in &terms {
            if alpha.interval() != interval || psi.interval() != interval {
                return Err(Error::IncompatibleGrid {
                    detail: "factor polynomial interval differs from the symbol's".into(),
                });
            }
        }
        Ok(Self { terms, interval })
    }

    /// t^p * lambda^q.
    pub fn monomial(p: usize, q: usize, interval: (f64, f64)) -> Result<Self> {
        let alpha = PolyFunction::monomial(p, interval)?;
        let psi = PolyFunction::monomial(q, interval)?;
        Self::new(vec![(cr(1.0), alpha, psi)], interval)
    }

    /// Single product term alpha(t) psi(lambda).
    pub fn product(alpha: PolyFunction, psi: PolyFunction) -> Result<Self> {
        let interval = alpha.interval();
        Self::new(vec![(cr(1.0), alpha, psi)], interval)
    }

    pub fn terms(&self) -> &[(C64, PolyFunction, PolyFunction)] {
        &self.terms
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn eval(&self, t: f64, lambda: f64) -> C64 {
        self.terms
            .iter()
            .map(|(cj, alpha, psi)| cj * alpha.eval(t) * psi.eval(lambda))
            .sum()
    }

    pub fn is_real(&self) -> bool {
        self.terms
            .iter()
            .all(|(cj, alpha, psi)| cj.im == 0.0 && alpha.is_real() && psi.is_real())
    }

    /// Max over terms of deg(alpha_j) + deg(psi_j); the bandwidth bound for
    /// the operator substitution.
    pub fn total_degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(_, alpha, psi)| alpha.degree() + psi.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, factor: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(cj, a, p)| (cj * factor, a.clone(), p.clone()))
            .collect();
        Self { terms, interval: self.interval }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.interval, other.interval, "symbol intervals must match");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms, interval: self.interval }
    }

    /// Partial derivative in t, term by term.
    pub fn partial_t(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(cj, a, p)| (*cj, a.derivative(), p.clone()))
            .collect();
        Self { terms, interval: self.interval }
    }

    /// Partial derivative in lambda, term by term.
    pub fn partial_lambda(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(cj, a, p)| (*cj, a.clone(), p.derivative()))
            .collect();
        Self { terms, interval: self.interval }
    }

    /// Pointwise product, expanded pairwise (term count multiplies).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.interval, other.interval, "symbol intervals must match");
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ci, ai, pi) in &self.terms {
            for (cj, aj, pj) in &other.terms {
                terms.push((ci * cj, ai.mul(aj), pi.mul(pj)));
            }
        }
        Self { terms, interval: self.interval }
    }

    /// Poisson-bracket Jacobian J(Psi, Phi) = Psi_t Phi_lambda - Psi_lambda Phi_t.
    pub fn jacobian(&self, other: &Self) -> Self {
        let a = self.partial_t().mul(&other.partial_lambda());
        let b = self.partial_lambda().mul(&other.partial_t());
        a.add(&b.scale(cr(-1.0)))
    }

    /// Dense monomial coefficients: table[p][q] is the coefficient of
    /// t^p lambda^q after expanding every separable term. This is the
    /// canonical form used to compare symbols and to integrate against
    /// closed-form region moments.
    pub fn monomial_table(&self) -> Vec<Vec<C64>> {
        let dt = self.terms.iter().map(|(_, a, _)| a.degree()).max().unwrap_or(0);
        let dl = self.terms.iter().map(|(_, _, p)| p.degree()).max().unwrap_or(0);
        let mut table = vec![vec![cr(0.0); dl + 1]; dt + 1];
        for (cj, alpha, psi) in &self.terms {
            for (p, &ap) in alpha.coeffs().iter().enumerate() {
                for (q, &pq) in psi.coeffs().iter().enumerate() {
                    table[p][q] += cj * ap * pq;
                }
            }
        }
        table
    }

    /// Max |difference of monomial tables|; zero iff the symbols agree as
    /// polynomials regardless of how the separable terms are arranged.
    pub fn max_coefficient_difference(&self, other: &Self) -> f64 {
        let a = self.monomial_table();
        let b = other.monomial_table();
        let rows = a.len().max(b.len());
        let mut worst = 0.0f64;
        for p in 0..rows {
            let cols = a.get(p).map_or(0, |r| r.len()).max(b.get(p).map_or(0, |r| r.len()));
            for q in 0..cols {
                let av = a.get(p).and_then(|r| r.get(q)).copied().unwrap_or(cr(0.0));
                let bv = b.get(p).and_then(|r| r.get(q)).copied().unwrap_or(cr(0.0));
                worst = worst.max((av - bv).norm());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT: (f64, f64) = (-1.0, 1.0);

    fn poly(coeffs: &[f64]) -> PolyFunction {
        PolyFunction::from_real(coeffs, UNIT).unwrap()
    }

    #[test]
    fn jacobian_of_product_pair() {
        // Psi = t * lambda, Phi = lambda: J = lambda * 1 - t * 0 = lambda
        let psi = SeparableBivariate::monomial(1, 1, UNIT).unwrap();
        let phi = SeparableBivariate::monomial(0, 1, UNIT).unwrap();
        let j = psi.jacobian(&phi);
        let want = SeparableBivariate::monomial(0, 1, UNIT).unwrap();
        assert!(j.max_coefficient_difference(&want) < 1e-15);
    }

    #[test]
    fn jacobian_antisymmetric_and_zero_on_diagonal() {
        let psi = SeparableBivariate::new(
            vec![
                (cr(1.0), poly(&[0.0, 1.0, 0.5]), poly(&[1.0, -1.0])),
                (cr(-2.0), poly(&[1.0]), poly(&[0.0, 0.0, 1.0])),
            ],
            UNIT,
        )
        .unwrap();
        let phi = SeparableBivariate::new(
            vec![(cr(0.5), poly(&[0.0, 0.0, 1.0]), poly(&[0.0, 2.0]))],
            UNIT,
        )
        .unwrap();
        let j1 = psi.jacobian(&phi);
        let j2 = phi.jacobian(&psi).scale(cr(-1.0));
        assert!(j1.max_coefficient_difference(&j2) < 1e-14);

        let zero = SeparableBivariate::new(vec![], UNIT).unwrap();
        assert!(psi.jacobian(&psi).max_coefficient_difference(&zero) < 1e-14);
    }

    #[test]
    fn jacobian_collapse_identity() {
        // For single products: -J(alpha psi, phi beta) equals
        // alpha phi' (psi beta)' - (alpha phi)' psi beta', the two-term
        // rearrangement behind splitting a mixed commutator trace.
        let alpha = poly(&[0.5, 1.0, -1.0]);
        let psi = poly(&[0.0, 2.0, 1.0]);
        let phi = poly(&[1.0, -0.5]);
        let beta = poly(&[0.0, 1.0, 0.0, 0.5]);

        let f = SeparableBivariate::product(alpha.clone(), psi.clone()).unwrap();
        let g = SeparableBivariate::product(phi.clone(), beta.clone()).unwrap();
        let neg_j = f.jacobian(&g).scale(cr(-1.0));

        let first = SeparableBivariate::product(
            alpha.mul(&phi.derivative()),
            psi.mul(&beta).derivative(),
        )
        .unwrap();
        let second = SeparableBivariate::product(
            alpha.mul(&phi).derivative(),
            psi.mul(&beta.derivative()),
        )
        .unwrap();
        let combined = first.add(&second.scale(cr(-1.0)));

        assert!(neg_j.max_coefficient_difference(&combined) < 1e-13);
    }

    #[test]
    fn monomial_table_expands_terms() {
        // (1 + t)(lambda) + 2 * t^2 => table entries at (0,1), (1,1), (2,0)
        let s = SeparableBivariate::new(
            vec![
                (cr(1.0), poly(&[1.0, 1.0]), poly(&[0.0, 1.0])),
                (cr(2.0), poly(&[0.0, 0.0, 1.0]), poly(&[1.0])),
            ],
            UNIT,
        )
        .unwrap();
        let table = s.monomial_table();
        assert_eq!(table[0][1], cr(1.0));
        assert_eq!(table[1][1], cr(1.0));
        assert_eq!(table[2][0], cr(2.0));
        assert_eq!(table[0][0], cr(0.0));
        assert!((s.eval(0.5, -0.5) - cr(0.5 * -0.5 + 1.0 * -0.5 + 2.0 * 0.25)).norm() < 1e-15);
    }

    #[test]
    fn interval_mismatch_rejected() {
        let a = PolyFunction::from_real(&[1.0], (-2.0, 2.0)).unwrap();
        let p = PolyFunction::from_real(&[1.0], (-1.0, 1.0)).unwrap();
        assert!(SeparableBivariate::new(vec![(cr(1.0), a, p)], (-1.0, 1.0)).is_err());
    }
}
