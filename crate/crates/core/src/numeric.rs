//! Small numerical helpers shared by the analysis modules.

use num_complex::Complex64;

/// Composite Simpson rule on a uniform grid.
///
/// An odd number of intervals is made even by appending one node with value
/// zero, so the rule always applies to the full sample set.
pub fn simpson_uniform<T>(values: &[T], step: f64) -> T
where
    T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let n = values.len();
    if n < 2 {
        return T::default();
    }
    let intervals = n - 1;
    let padded = intervals % 2 == 1;
    let last = if padded { n } else { n - 1 };
    let at = |i: usize| if i < n { values[i] } else { T::default() };
    let mut acc = at(0) + at(last);
    for i in 1..last {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc = acc + at(i) * w;
    }
    acc * (step / 3.0)
}

/// `e^z − 1` without cancellation for small `|z|`.
pub fn exp_m1(z: Complex64) -> Complex64 {
    let half = (0.5 * z.im).sin();
    let re = z.re.exp_m1() * z.im.cos() - 2.0 * half * half;
    let im = z.re.exp() * z.im.sin();
    Complex64::new(re, im)
}

/// `ln(1 + φ) − φ` (principal branch) for `|φ| ≤ 1/2`, summed as the
/// alternating tail `Σ_{n≥2} (−1)^{n−1} φⁿ/n` so that the result keeps
/// full relative accuracy even when `φ` is tiny.
pub fn ln1p_minus_identity(phi: Complex64) -> Complex64 {
    debug_assert!(phi.norm() <= 0.5 + 1e-12);
    let mut power = phi * phi;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut n = 2u32;
    loop {
        let term = power / f64::from(n);
        if n.is_multiple_of(2) {
            acc -= term;
        } else {
            acc += term;
        }
        if term.norm() <= f64::EPSILON * 1e-2 * acc.norm() || n > 200 {
            break;
        }
        power *= phi;
        n += 1;
    }
    acc
}

/// `sin(u)/u`, equal to 1 at the origin.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// Greatest common "divisor" of two positive reals, or `None` when their
/// ratio is not rational at the resolution of the test.
pub fn real_gcd(a: f64, b: f64) -> Option<f64> {
    let scale = a.max(b);
    if !(scale > 0.0) || !a.is_finite() || !b.is_finite() {
        return None;
    }
    let tol = 1e-9 * scale;
    let (mut x, mut y) = (a.max(b), a.min(b));
    for _ in 0..256 {
        if y <= tol {
            break;
        }
        let mut r = x % y;
        if r > y - tol {
            r = 0.0;
        }
        x = y;
        y = r;
    }
    if x < 1e-6 * scale {
        return None;
    }
    let is_multiple = |v: f64| {
        let q = v / x;
        (q - q.round()).abs() <= 1e-6
    };
    (is_multiple(a) && is_multiple(b)).then_some(x)
}

/// Index `i` with `t ≈ i·step`, if `t` lies on the lattice `step·ℤ`.
pub fn lattice_index(t: f64, step: f64) -> Option<i64> {
    let q = t / step;
    let i = q.round();
    if (q - i).abs() <= 1e-7 && i.abs() < 9e15 {
        Some(i as i64)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_for_cubics() {
        let step = 0.25;
        let v: Vec<f64> = (0..9).map(|i| (i as f64 * step).powi(3)).collect();
        assert!((simpson_uniform(&v, step) - 2f64.powi(4) / 4.0).abs() < 1e-13);
    }

    #[test]
    fn simpson_pads_odd_interval_count() {
        // Three intervals: a zero node is appended and the fourth interval is
        // integrated as part of the last Simpson panel.
        let v = [1.0, 1.0, 1.0, 1.0];
        let padded = [1.0, 1.0, 1.0, 1.0, 0.0];
        assert_eq!(simpson_uniform(&v, 0.5), simpson_uniform(&padded, 0.5));
    }

    #[test]
    fn exp_m1_small_argument() {
        let z = Complex64::new(1e-12, -2e-12);
        let e = exp_m1(z);
        assert!((e - z).norm() < 1e-23);
    }

    #[test]
    fn ln1p_remainder_matches_log() {
        for phi in [
            Complex64::new(0.3, -0.2),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 0.45),
        ] {
            let direct = (Complex64::new(1.0, 0.0) + phi).ln() - phi;
            assert!((ln1p_minus_identity(phi) - direct).norm() < 1e-14);
        }
        let tiny = Complex64::new(1e-20, 1e-20);
        let r = ln1p_minus_identity(tiny);
        assert!((r + tiny * tiny / 2.0).norm() <= 1e-55);
    }

    #[test]
    fn gcd_of_commensurate_and_incommensurate() {
        assert!((real_gcd(1.0, 0.5).unwrap() - 0.5).abs() < 1e-12);
        assert!((real_gcd(0.6, 0.9).unwrap() - 0.3).abs() < 1e-9);
        assert!(real_gcd(1.0, 2f64.sqrt()).is_none());
    }

    #[test]
    fn lattice_index_tolerates_decimal_steps() {
        assert_eq!(lattice_index(1.0, 0.0025), Some(400));
        assert_eq!(lattice_index(0.3, 0.1), Some(3));
        assert_eq!(lattice_index(1.0, std::f64::consts::PI / 512.0), None);
    }
}
