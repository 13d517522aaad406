//! Forward Lévy–Khinchine evaluation with sine centering.
//!
//! ```text
//! Ln f(t)     = iγt + ∫ (e^{itx} − 1 − it·sin x)·(1 + x²)/x² dG(x)
//! Δ²ₕ Ln f(t) = 2 ∫ e^{itx}(cos hx − 1)·(1 + x²)/x² dG(x)
//! (Ln f)″(t)  = −∫ e^{itx}(1 + x²) dG(x)
//! ```
//!
//! At `x = 0` the kernels take their limits `−t²/2`, `−h²/2` (before the
//! leading factor 2) and `1`.

use num_complex::Complex64;

use crate::charfn::CharacteristicFunction;
use crate::spectral::{integrate_kernel, SpectralFunction, SpectralPair};

/// `(e^{itx} − 1 − it·sin x)·(1 + x²)/x²` for `x ≠ 0`.
pub fn lk_kernel(t: f64, x: f64) -> Complex64 {
    let weight = (1.0 + x * x) / (x * x);
    let half = (0.5 * t * x).sin();
    let re = -2.0 * half * half * weight;
    let im = if x.abs() < 1e-3 && (t * x).abs() < 1e-2 {
        // sin(tx) − t·sin(x) cancels to O(x³); use its Taylor series.
        let x2 = x * x;
        let (t3, t5, t7) = (t.powi(3), t.powi(5), t.powi(7));
        x * (1.0 + x2) * (-(t3 - t) / 6.0 + x2 * (t5 - t) / 120.0 - x2 * x2 * (t7 - t) / 5040.0)
    } else {
        ((t * x).sin() - t * x.sin()) * weight
    };
    Complex64::new(re, im)
}

/// `Ln f(t)` for the law with spectral pair `(γ, G)`.
pub fn lk_log_cf(pair: &SpectralPair, t: f64) -> Complex64 {
    let integral = integrate_kernel(&pair.g, |x| lk_kernel(t, x), Complex64::new(-0.5 * t * t, 0.0));
    Complex64::new(0.0, pair.gamma * t) + integral
}

/// `2∫ e^{itx}(cos hx − 1)(1 + x²)/x² dG(x)`, the exact second difference of
/// [`lk_log_cf`].
pub fn lk_second_difference_integral(g: &SpectralFunction, t: f64, h: f64) -> Complex64 {
    let kernel = |x: f64| {
        let half = (0.5 * h * x).sin();
        Complex64::cis(t * x) * (-2.0 * half * half * (1.0 + x * x) / (x * x))
    };
    integrate_kernel(g, kernel, Complex64::new(-0.5 * h * h, 0.0)) * 2.0
}

/// `−∫ e^{itx}(1 + x²) dG(x)`.
pub fn lk_second_derivative(g: &SpectralFunction, t: f64) -> Complex64 {
    -integrate_kernel(g, |x| Complex64::cis(t * x) * (1.0 + x * x), Complex64::new(1.0, 0.0))
}

/// The function `exp(lk_log_cf(pair, ·))`. For non-monotone `G` this need
/// not be a characteristic function of a probability law, but it can still
/// be analysed like one.
#[derive(Debug, Clone, PartialEq)]
pub struct LkCharFn {
    pub pair: SpectralPair,
}

impl LkCharFn {
    pub fn new(pair: SpectralPair) -> Self {
        LkCharFn { pair }
    }

    pub fn log(&self, t: f64) -> Complex64 {
        lk_log_cf(&self.pair, t)
    }
}

impl CharacteristicFunction for LkCharFn {
    fn eval(&self, t: f64) -> Complex64 {
        self.log(t).exp()
    }
}
