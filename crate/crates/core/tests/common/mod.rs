#![allow(dead_code)]

use num_complex::Complex64;
use quasiid::{CharFn, SpectralFunction, SpectralPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn atoms(list: &[(f64, f64)]) -> SpectralFunction {
    SpectralFunction::from_atoms(list.iter().copied()).unwrap()
}

/// `q + p·e^{it}` in log form: `Ln f(t) = ln q + Σ_{k≥1} (−1)^{k−1} (p/q)^k e^{ikt}/k`,
/// summed until the terms fall below round-off.
pub fn bernoulli_log_series(p: f64, t: f64) -> Complex64 {
    let q = 1.0 - p;
    let r = p / q;
    let mut acc = Complex64::new(q.ln(), 0.0);
    let mut rk = 1.0;
    for k in 1..400 {
        rk *= r;
        let term = Complex64::cis(k as f64 * t) * (rk / k as f64);
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
        if rk < 1e-18 {
            break;
        }
    }
    acc
}

/// Atom masses of `G` for Bernoulli(p), obtained by differentiating the
/// log-series twice: the `e^{ikt}` coefficient of `−(Ln f)″` is
/// `k²·(−1)^{k−1} r^k/k`, and the atom is that divided by `1 + k²`.
pub fn bernoulli_series_masses(p: f64, k_max: usize) -> Vec<(f64, f64)> {
    let r = p / (1.0 - p);
    (1..=k_max)
        .map(|k| {
            let kf = k as f64;
            let log_coeff = if k % 2 == 1 { 1.0 } else { -1.0 } * r.powi(k as i32) / kf;
            let second = kf * kf * log_coeff;
            (kf, second / (1.0 + kf * kf))
        })
        .collect()
}

pub struct Oracle {
    pub name: &'static str,
    pub cf: CharFn,
    pub pair: SpectralPair,
}

/// Laws with exactly known spectral pairs. Every one keeps `|f| > 1e−12`
/// on `[−10.5, 10.5]`.
pub fn oracles() -> Vec<Oracle> {
    let bern_pair = {
        let f1 = Complex64::new(0.7, 0.0) + Complex64::cis(1.0) * 0.3;
        SpectralPair::new(f1.arg(), atoms(&bernoulli_series_masses(0.3, 60)))
    };
    vec![
        Oracle {
            name: "degenerate(1.5)",
            cf: CharFn::degenerate(1.5).unwrap(),
            pair: SpectralPair::new(1.5, SpectralFunction::empty()),
        },
        Oracle {
            name: "gaussian(2, 0.5)",
            cf: CharFn::gaussian(2.0, 0.5).unwrap(),
            pair: SpectralPair::new(2.0, atoms(&[(0.0, 0.5)])),
        },
        Oracle {
            name: "poisson(1)",
            cf: CharFn::poisson(1.0).unwrap(),
            pair: SpectralPair::new(1f64.sin(), atoms(&[(1.0, 0.5)])),
        },
        Oracle {
            name: "poisson(2.5) - 1",
            cf: CharFn::scaled_shift(CharFn::poisson(2.5).unwrap(), 1.0, -1.0).unwrap(),
            pair: SpectralPair::new(2.5 * 1f64.sin() - 1.0, atoms(&[(1.0, 1.25)])),
        },
        Oracle {
            name: "gaussian(0, 0.25) * poisson(1)",
            cf: CharFn::convolution(vec![
                CharFn::gaussian(0.0, 0.25).unwrap(),
                CharFn::poisson(1.0).unwrap(),
            ]),
            pair: SpectralPair::new(1f64.sin(), atoms(&[(0.0, 0.25), (1.0, 0.5)])),
        },
        Oracle {
            name: "bernoulli(0.3)",
            cf: CharFn::bernoulli(0.3).unwrap(),
            pair: bern_pair,
        },
    ]
}

/// Random pair: integer atoms in [−5, 5], masses in [−1, 1], ‖G‖ ≤ 3.
pub fn random_pair(rng: &mut ChaCha8Rng) -> SpectralPair {
    let count = rng.gen_range(1..=6);
    let mut list: Vec<(f64, f64)> = Vec::new();
    for _ in 0..count {
        let x = rng.gen_range(-5i32..=5) as f64;
        if list.iter().any(|a| a.0 == x) {
            continue;
        }
        list.push((x, rng.gen_range(-1.0..=1.0)));
    }
    let tv: f64 = list.iter().map(|a| a.1.abs()).sum();
    if tv > 3.0 {
        for a in &mut list {
            a.1 *= 3.0 / tv;
        }
    }
    SpectralPair::new(rng.gen_range(-2.0..=2.0), atoms(&list))
}

pub fn random_pairs(seed: u64, n: usize) -> Vec<SpectralPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_pair(&mut rng)).collect()
}
