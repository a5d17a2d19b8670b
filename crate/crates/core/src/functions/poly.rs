//! Polynomials in one real variable with an attached reference interval.

use crate::linalg::dense::{cr, C64};
use crate::{Error, Result};

/// Polynomial with complex coefficients in ascending order, together with the
/// interval `[a, b]` it is meant to act on (the spectral interval of the
/// operator it will be applied to). Trailing zero coefficients are trimmed so
/// equality of representations is meaningful; the zero polynomial keeps a
/// single zero coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyFunction {
    coeffs: Vec<C64>,
    interval: (f64, f64),
}

fn valid_interval(a: f64, b: f64) -> bool {
    a.is_finite() && b.is_finite() && a < b
}

impl PolyFunction {
    pub fn new(mut coeffs: Vec<C64>, interval: (f64, f64)) -> Result<Self> {
        if !valid_interval(interval.0, interval.1) {
            return Err(Error::InvalidInterval { a: interval.0, b: interval.1 });
        }
        while coeffs.len() > 1 && coeffs.last() == Some(&cr(0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(cr(0.0));
        }
        Ok(Self { coeffs, interval })
    }

    pub fn from_real(coeffs: &[f64], interval: (f64, f64)) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| cr(x)).collect(), interval)
    }

    /// t^k on the given interval.
    pub fn monomial(k: usize, interval: (f64, f64)) -> Result<Self> {
        let mut coeffs = vec![cr(0.0); k + 1];
        coeffs[k] = cr(1.0);
        Self::new(coeffs, interval)
    }

    pub fn zero(interval: (f64, f64)) -> Result<Self> {
        Self::new(vec![], interval)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == cr(0.0)
    }

    /// True when every coefficient has exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|z| z.im == 0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, t: f64) -> C64 {
        let mut acc = cr(0.0);
        for &ck in self.coeffs.iter().rev() {
            acc = acc * cr(t) + ck;
        }
        acc
    }

    /// Horner evaluation for real-coefficient polynomials.
    pub fn eval_real(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for &ck in self.coeffs.iter().rev() {
            acc = acc * t + ck.re;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for (k, &ck) in self.coeffs.iter().enumerate().skip(1) {
            coeffs.push(ck * cr(k as f64));
        }
        Self::new(coeffs, self.interval).expect("derivative keeps the interval")
    }

    /// Antiderivative normalized to vanish at the left endpoint of the
    /// interval: F' = p and F(a) = 0. This is the renormalization that makes
    /// cumulative moment integrands well defined.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = vec![cr(0.0); self.coeffs.len() + 1];
        for (k, &ck) in self.coeffs.iter().enumerate() {
            coeffs[k + 1] = ck / cr((k + 1) as f64);
        }
        let raw = Self::new(coeffs, self.interval).expect("antiderivative keeps the interval");
        let shift = raw.eval(self.interval.0);
        let mut coeffs = raw.coeffs;
        coeffs[0] -= shift;
        Self::new(coeffs, self.interval).expect("antiderivative keeps the interval")
    }

    /// Divided difference (p(s) - p(t)) / (s - t), evaluated in product form
    ///   sum_k c_k sum_{i+j=k-1} s^i t^j,
    /// which is exact at coincidence (it degenerates to p'(t)) and suffers no
    /// cancellation for nearby arguments.
    pub fn divided_difference(&self, s: f64, t: f64) -> C64 {
        let mut acc = cr(0.0);
        // running powers: s_pow[i] built incrementally inside the loop
        for (k, &ck) in self.coeffs.iter().enumerate().skip(1) {
            let mut inner = cr(0.0);
            let mut s_pow = 1.0;
            for i in 0..k {
                // s^i * t^(k-1-i)
                inner += cr(s_pow * t.powi((k - 1 - i) as i32));
                s_pow *= s;
            }
            acc += ck * inner;
        }
        acc
    }

    /// p(u t + v): composition with an affine map, by binomial expansion.
    pub fn compose_affine(&self, u: f64, v: f64, interval: (f64, f64)) -> Result<Self> {
        let mut coeffs = vec![cr(0.0); self.coeffs.len()];
        // (u t + v)^k expanded iteratively
        let mut power = vec![cr(1.0)]; // (u t + v)^0
        for (k, &ck) in self.coeffs.iter().enumerate() {
            if k > 0 {
                let mut next = vec![cr(0.0); power.len() + 1];
                for (i, &pi) in power.iter().enumerate() {
                    next[i] += pi * cr(v);
                    next[i + 1] += pi * cr(u);
                }
                power = next;
            }
            for (i, &pi) in power.iter().enumerate() {
                coeffs[i] += ck * pi;
            }
        }
        Self::new(coeffs, interval)
    }

    pub fn scale(&self, factor: C64) -> Self {
        let coeffs = self.coeffs.iter().map(|&ck| ck * factor).collect();
        Self::new(coeffs, self.interval).expect("scaling keeps the interval")
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.interval, other.interval, "polynomial intervals must match");
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![cr(0.0); n];
        for (i, &ck) in self.coeffs.iter().enumerate() {
            coeffs[i] += ck;
        }
        for (i, &ck) in other.coeffs.iter().enumerate() {
            coeffs[i] += ck;
        }
        Self::new(coeffs, self.interval).expect("sum keeps the interval")
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.interval, other.interval, "polynomial intervals must match");
        let mut coeffs = vec![cr(0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs, self.interval).expect("product keeps the interval")
    }

    /// Sampled sup of |p| over the interval; an upper-bound surrogate used in
    /// tolerance scales, not a certified bound.
    pub fn sup_abs(&self, samples: usize) -> f64 {
        let (a, b) = self.interval;
        let n = samples.max(2);
        let mut worst = 0.0f64;
        for k in 0..n {
            let t = a + (b - a) * (k as f64) / ((n - 1) as f64);
            worst = worst.max(self.eval(t).norm());
        }
        worst
    }
}
