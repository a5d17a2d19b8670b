//! Chebyshev interpolation, used to feed non-polynomial profiles (cumulative
//! ramps of indicator functions) through the spectral functional calculus
//! without leaving a numerically stable basis.

/// Chebyshev interpolant of degree n on [a, b], evaluated by Clenshaw
/// recurrence on the coefficients. Coefficients come from the interpolation
/// conditions at the n+1 Chebyshev-Lobatto points.
#[derive(Clone, Debug)]
pub struct ChebInterp {
    a: f64,
    b: f64,
    coeffs: Vec<f64>,
}

impl ChebInterp {
    /// Interpolates `f` at the Chebyshev-Lobatto points of degree `n`.
    pub fn from_fn(f: impl Fn(f64) -> f64, n: usize, a: f64, b: f64) -> Self {
        assert!(n >= 1 && a < b);
        let nf = n as f64;
        let samples: Vec<f64> = (0..=n)
            .map(|j| {
                let x = (std::f64::consts::PI * j as f64 / nf).cos();
                f(0.5 * (a + b) + 0.5 * (b - a) * x)
            })
            .collect();
        // discrete cosine transform of the sample vector; endpoint terms halved
        let mut coeffs = vec![0.0; n + 1];
        for (k, ck) in coeffs.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, &fj) in samples.iter().enumerate() {
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                acc += w * fj * (std::f64::consts::PI * (k * j) as f64 / nf).cos();
            }
            let scale = if k == 0 || k == n { 1.0 / nf } else { 2.0 / nf };
            *ck = acc * scale;
        }
        Self { a, b, coeffs }
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        let x = (2.0 * t - (self.a + self.b)) / (self.b - self.a);
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &ck in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + ck;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + self.coeffs[0]
    }
}

/// The cumulative ramp of the indicator of [lo, hi): zero below lo, rising
/// with unit slope inside, constant hi - lo above. This is the antiderivative
/// (vanishing at the left) of the indicator, the profile that turns
/// spectral-shift slices into bin averages.
pub fn indicator_ramp(lo: f64, hi: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| (t - lo).clamp(0.0, hi - lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_smooth_functions() {
        let f = |t: f64| (1.5 * t).sin() + 0.25 * t * t;
        let interp = ChebInterp::from_fn(f, 24, -1.0, 1.0);
        let mut worst = 0.0f64;
        for k in 0..=400 {
            let t = -1.0 + 2.0 * k as f64 / 400.0;
            worst = worst.max((interp.eval(t) - f(t)).abs());
        }
        assert!(worst < 1e-12, "worst={worst:e}");
    }

    #[test]
    fn matches_samples_at_interpolation_points() {
        let f = indicator_ramp(-0.25, 0.5);
        let n = 64;
        let interp = ChebInterp::from_fn(&f, n, -1.0, 1.0);
        for j in 0..=n {
            let x = (std::f64::consts::PI * j as f64 / n as f64).cos();
            assert!((interp.eval(x) - f(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn ramp_shape() {
        let f = indicator_ramp(0.0, 1.0);
        assert_eq!(f(-0.5), 0.0);
        assert_eq!(f(0.25), 0.25);
        assert_eq!(f(2.0), 1.0);
        // degree-64 interpolant stays within a few percent of the kink
        let interp = ChebInterp::from_fn(&f, 64, -2.0, 2.0);
        let mut worst = 0.0f64;
        for k in 0..=800 {
            let t = -2.0 + 4.0 * k as f64 / 800.0;
            worst = worst.max((interp.eval(t) - f(t)).abs());
        }
        assert!(worst < 0.05, "worst={worst}");
    }
}
