//! Recovery of the spectral pair `(γ, G)` from a distinguished-log trace.
//!
//! For a law supported on `c + ℤ` (optionally convolved with a Gaussian),
//! `(Ln f)″(t) = −Σ_k (1 + k²)·G({k})·e^{ikt}` is 2π-periodic, so the atoms of
//! `G` are its Fourier coefficients divided by `−(1 + k²)`. The coefficients
//! are taken from the second difference `D_h = Δ²ₕ Ln f / h²` sampled at
//! `t_j = −π + 2πj/N`, `h = 2π/N`: on the lattice its `k`-th coefficient is exactly
//! `−(1 + k²)·sinc²(kh/2)·G({k})`, so dividing by that symbol gives the atoms
//! without any finite-difference truncation error. The trapezoid (DFT) rule
//! is spectrally accurate for periodic data.
//!
//! The shift comes from `γ = Arg f(1)`: the Lévy–Khinchine kernel has zero
//! imaginary part at `t = 1` for every `x`.
//!
//! This inversion is a construction of this crate; the representation is
//! unique, but no inversion algorithm comes with it.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dlog::{second_difference, DlogError, LogTrace};
use crate::numeric::{lattice_index, sinc};
use crate::spectral::{Atom, SpectralFunction, SpectralPair};

/// Spectral energy allowed outside `|k| ≤ k_max`.
pub const PARSEVAL_TOL: f64 = 1e-6;
/// Largest tolerated imaginary part of a recovered atom mass.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Recovered masses below this are dropped.
pub const MASS_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RecoverError {
    #[error(transparent)]
    Dlog(#[from] DlogError),
    #[error("law is not on an integer lattice: {0}")]
    NonLattice(String),
    #[error("trace grid unsuitable for lattice recovery: {0}")]
    Grid(String),
}

/// `F₁ = F ∗ F₂` with both factors infinitely divisible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    /// Spectral pair of `F₁`.
    pub numerator: SpectralPair,
    /// Spectral pair of `F₂`.
    pub denominator: SpectralPair,
}

/// `γ = Im Ln f(1)`.
pub fn recover_gamma(trace: &LogTrace) -> Result<f64, RecoverError> {
    Ok(trace.value_at(1.0)?.im)
}

/// Sample count `N` and the second-difference step `h = 2π/N` used on a
/// trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodSampling {
    pub samples: usize,
    pub stride: i64,
    pub step: f64,
}

impl PeriodSampling {
    pub fn h(&self) -> f64 {
        self.stride as f64 * self.step
    }
}

/// Picks the smallest even `N ≥ min_samples` such that `2π/N` is a multiple
/// of the trace step and the trace is long enough. Samples sit at `t_j = −π + 2πj/N`, so the trace must hold
/// `±π` as nodes and reach `π + 2π/N`.
pub fn period_sampling(trace: &LogTrace, min_samples: usize) -> Result<PeriodSampling, RecoverError> {
    let step = trace.step();
    let per_period = lattice_index(TAU, step)
        .filter(|&p| p > 0 && p % 2 == 0)
        .ok_or_else(|| RecoverError::Grid(format!("step {step} does not divide π")))?;
    let per_period_u = per_period as usize;
    if per_period_u < min_samples {
        return Err(RecoverError::Grid(format!(
            "need at least {min_samples} samples per period, grid has {per_period}"
        )));
    }
    (min_samples.max(2)..=per_period_u)
        .filter(|n| per_period_u.is_multiple_of(*n) && n % 2 == 0)
        .map(|samples| PeriodSampling {
            samples,
            stride: per_period / samples as i64,
            step,
        })
        .find(|s| trace.contains(PI + s.h()))
        .ok_or_else(|| {
            RecoverError::Grid(format!(
                "trace must reach π + 2π/N for some admissible N, t_max is {}",
                trace.t_max()
            ))
        })
}

/// Step for a trace that supports [`recover_lattice_spectral`] with the given
/// `k_max`: `2π/(4·k_max + 4)`. Use it with `t_max = π + step`.
pub fn period_trace_step(k_max: usize) -> f64 {
    TAU / (4 * k_max + 4) as f64
}

#[derive(Debug, Clone)]
struct LatticeSpectrum {
    /// Complex atom masses for `k = −k_max..=k_max`.
    masses: Vec<Complex64>,
    energy_outside: f64,
    k_max: i64,
}

impl LatticeSpectrum {
    fn mass(&self, k: i64) -> Complex64 {
        self.masses[(k + self.k_max) as usize]
    }
}

fn lattice_spectrum(trace: &LogTrace, k_max: usize, sampling: PeriodSampling) -> Result<LatticeSpectrum, RecoverError> {
    let n = sampling.samples;
    let h = sampling.h();
    let half = (n / 2) as i64;
    let d: Vec<Complex64> = (0..n)
        .map(|j| {
            let t = ((j as i64 - half) * sampling.stride) as f64 * sampling.step;
            Ok(second_difference(trace, t, h)? / (h * h))
        })
        .collect::<Result<_, DlogError>>()?;

    let k_max = k_max as i64;
    let twiddle: Vec<Complex64> = (0..n).map(|m| Complex64::cis(-TAU * m as f64 / n as f64)).collect();
    let coefficient = |k: i64| -> Complex64 {
        let sum: Complex64 = d
            .iter()
            .enumerate()
            .map(|(j, &v)| v * twiddle[(((j as i64 - half) * k).rem_euclid(n as i64)) as usize])
            .sum();
        sum / n as f64
    };

    let mut in_band = 0.0;
    let mut masses = Vec::with_capacity((2 * k_max + 1) as usize);
    for k in -k_max..=k_max {
        let c = coefficient(k);
        in_band += c.norm_sqr();
        let kf = k as f64;
        let s = sinc(0.5 * kf * h);
        masses.push(-c / ((1.0 + kf * kf) * s * s));
    }
    let total = d.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
    Ok(LatticeSpectrum {
        masses,
        energy_outside: (total - in_band).max(0.0),
        k_max,
    })
}

fn check_hermitian(k: i64, mass: Complex64) -> Result<(), RecoverError> {
    if mass.im.abs() >= HERMITIAN_TOL {
        return Err(RecoverError::NonLattice(format!(
            "coefficient at k = {k} has imaginary part {:e}",
            mass.im
        )));
    }
    Ok(())
}

/// Recovers `G` (atoms at integers `|k| ≤ k_max`) and `γ` from a trace whose
/// step divides `2π/N` for some even `N ≥ 4·k_max + 4` and which reaches
/// `π + 2π/N`.
///
/// `γ` is `Arg f(1)` when `t = 1` is a grid node. Otherwise it is read off
/// `Arg f(π) = πγ − π·Σ_k G({k})(1 + k²)·sin(k)/k²`, which is exact only
/// when every atom lies within `|k| ≤ k_max`.
pub fn recover_lattice_spectral(trace: &LogTrace, k_max: usize) -> Result<SpectralPair, RecoverError> {
    let g = recover_lattice_g(trace, k_max)?;
    let gamma = if trace.contains(1.0) {
        recover_gamma(trace)?
    } else {
        let tail: f64 = g
            .atoms()
            .iter()
            .filter(|a| a.x != 0.0)
            .map(|a| a.mass * (1.0 + a.x * a.x) * a.x.sin() / (a.x * a.x))
            .sum();
        trace.value_at(PI)?.im / PI + tail
    };
    Ok(SpectralPair::new(gamma, g))
}

/// `G` alone, as in [`recover_lattice_spectral`].
pub fn recover_lattice_g(trace: &LogTrace, k_max: usize) -> Result<SpectralFunction, RecoverError> {
    let sampling = period_sampling(trace, 4 * k_max + 4)?;
    let spectrum = lattice_spectrum(trace, k_max, sampling)?;
    if spectrum.energy_outside > PARSEVAL_TOL {
        return Err(RecoverError::NonLattice(format!(
            "spectral energy {:e} beyond |k| = {k_max}",
            spectrum.energy_outside
        )));
    }
    let mut atoms = Vec::new();
    for k in -spectrum.k_max..=spectrum.k_max {
        let m = spectrum.mass(k);
        check_hermitian(k, m)?;
        if m.re.abs() >= MASS_FLOOR {
            atoms.push(Atom {
                x: k as f64,
                mass: m.re,
            });
        }
    }
    SpectralFunction::new(atoms, None).map_err(|e| RecoverError::NonLattice(e.to_string()))
}

/// The atom of `G` at the origin (the Gaussian variance), i.e. the mean of
/// `−(Ln f)″` over one period.
pub fn recover_gaussian_component(trace: &LogTrace) -> Result<f64, RecoverError> {
    // 64 samples push aliasing from frequencies ±64, ±128, … below
    // round-off for every law in scope.
    let sampling = period_sampling(trace, 64).or_else(|_| period_sampling(trace, 2))?;
    let spectrum = lattice_spectrum(trace, 0, sampling)?;
    let m = spectrum.mass(0);
    check_hermitian(0, m)?;
    Ok(m.re)
}

/// `G` from the period trace and `γ = Arg f(1)` from a trace containing `t = 1`.
pub fn recover_pair(
    unit_trace: &LogTrace,
    period_trace: &LogTrace,
    k_max: usize,
) -> Result<SpectralPair, RecoverError> {
    Ok(SpectralPair::new(
        recover_gamma(unit_trace)?,
        recover_lattice_g(period_trace, k_max)?,
    ))
}

/// Maps the spectral function of `Y` (atoms at integers) to that of
/// `X = spacing·Y`. An atom of mass `m` at `k` moves to `x = spacing·k` with
/// mass `m·(1 + k²)·spacing²/(1 + x²)`; the Gaussian atom scales by
/// `spacing²`. The shift parameter of `X` is not derived here; read it from a
/// trace of `X` with [`recover_gamma`].
pub fn rescale_lattice_spectral(g: &SpectralFunction, spacing: f64) -> Result<SpectralFunction, RecoverError> {
    if g.density().is_some() {
        return Err(RecoverError::NonLattice("rescaling applies to atoms only".into()));
    }
    let d2 = spacing * spacing;
    let atoms = g
        .atoms()
        .iter()
        .map(|a| {
            let x = spacing * a.x;
            Atom {
                x,
                mass: a.mass * (1.0 + a.x * a.x) * d2 / (1.0 + x * x),
            }
        })
        .collect();
    SpectralFunction::new(atoms, None).map_err(|e| RecoverError::NonLattice(e.to_string()))
}

/// Splits `(γ, G)` into `(γ, G⁺)` and `(0, G⁻)`: both spectral functions are
/// non-decreasing, hence define infinitely divisible laws `F₁`, `F₂` with
/// `F₁ = F ∗ F₂`.
pub fn factorize(pair: &SpectralPair) -> Factorization {
    let (plus, minus) = pair.g.jordan_decompose();
    Factorization {
        numerator: SpectralPair::new(pair.gamma, plus),
        denominator: SpectralPair::new(0.0, minus),
    }
}
