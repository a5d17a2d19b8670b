//! Trigonometric polynomials and the weighted first-derivative norm.

use std::collections::BTreeMap;

use crate::linalg::dense::{c, cr, C64};

/// Finite Fourier sum f(theta) = sum_k c_k e^{i k theta}.
#[derive(Clone, Debug, Default)]
pub struct TrigPoly {
    coeffs: BTreeMap<i64, C64>,
}

impl TrigPoly {
    pub fn new(coeffs: impl IntoIterator<Item = (i64, C64)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in coeffs {
            if v != cr(0.0) {
                *map.entry(k).or_insert(cr(0.0)) += v;
            }
        }
        map.retain(|_, v| *v != cr(0.0));
        Self { coeffs: map }
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, C64> {
        &self.coeffs
    }

    pub fn eval(&self, theta: f64) -> C64 {
        let mut acc = cr(0.0);
        for (&k, &ck) in &self.coeffs {
            let phase = k as f64 * theta;
            acc += ck * c(phase.cos(), phase.sin());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|(&k, &ck)| (k, ck * c(0.0, k as f64))),
        )
    }

    /// Weighted coefficient norm (1/sqrt(2 pi)) sum |c_k| (1 + |k|), finite
    /// exactly on functions with summable first derivative coefficients; the
    /// class of symbols the trace identities are stated for.
    pub fn c11_norm(&self) -> f64 {
        let sum: f64 = self
            .coeffs
            .iter()
            .map(|(&k, &ck)| ck.norm() * (1.0 + k.abs() as f64))
            .sum();
        sum / (2.0 * std::f64::consts::PI).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_norm() {
        // e^{i theta}: |c_1| (1 + 1) / sqrt(2 pi) = 2 / sqrt(2 pi)
        let f = TrigPoly::new([(1, cr(1.0))]);
        let want = 2.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert!((f.c11_norm() - want).abs() < 1e-15);
    }

    #[test]
    fn eval_and_derivative() {
        let f = TrigPoly::new([(1, cr(1.0)), (-1, cr(1.0))]); // 2 cos(theta)
        assert!((f.eval(0.0).re - 2.0).abs() < 1e-15);
        assert!(f.eval(std::f64::consts::FRAC_PI_2).norm() < 1e-15);
        let df = f.derivative(); // -2 sin(theta)
        assert!((df.eval(std::f64::consts::FRAC_PI_2).re + 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_coefficients_dropped() {
        let f = TrigPoly::new([(3, cr(0.0)), (1, cr(2.0)), (1, cr(-2.0))]);
        assert!(f.coeffs().is_empty());
        assert_eq!(f.c11_norm(), 0.0);
    }
}
