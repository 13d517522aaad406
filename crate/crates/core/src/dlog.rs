//! The distinguished logarithm `Ln f(t) = ln|f(t)| + i·Arg f(t)`.
//!
//! `Arg f` is tracked continuously from `Arg f(0) = 0` along a uniform grid
//! on `[0, t_max]`. Each cell contributes the principal argument of the ratio
//! `f(t_{k+1})/f(t_k)`; a cell whose increment reaches `π/2` is bisected
//! recursively (at most [`MAX_REFINE_DEPTH`] levels) until every
//! sub-increment is below `π/2`. The negative half-line is filled by
//! conjugation, so `ln|f|` is even and `Arg f` odd on every trace.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use thiserror::Error;

use crate::charfn::CharacteristicFunction;
use crate::numeric::lattice_index;

/// Below this modulus the characteristic function is treated as vanishing.
pub const ZERO_CF_THRESHOLD: f64 = 1e-12;
pub const MAX_REFINE_DEPTH: u32 = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DlogError {
    #[error("characteristic function vanishes numerically at t = {t} (|f| = {modulus:e})")]
    ZeroCf { t: f64, modulus: f64 },
    #[error("t = {t} is not a node of the trace grid (step {step}, t_max {t_max})")]
    OffGrid { t: f64, step: f64, t_max: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// `Ln f` sampled on the symmetric uniform grid `{k·step : |k| ≤ n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogTrace {
    step: f64,
    half: usize,
    values: Vec<Complex64>,
}

fn half_width(t_max: f64, step: f64) -> Result<usize, DlogError> {
    if !(step.is_finite() && step > 0.0 && t_max.is_finite() && t_max > 0.0) {
        return Err(DlogError::InvalidGrid(format!(
            "t_max = {t_max} and step = {step} must be positive and finite"
        )));
    }
    match lattice_index(t_max, step) {
        Some(n) if n >= 1 => Ok(n as usize),
        _ => Err(DlogError::InvalidGrid(format!(
            "step {step} does not divide t_max {t_max}"
        ))),
    }
}

impl LogTrace {
    /// Builds a trace from positive-axis values `Ln f(k·step)`, `k = 0..=n`,
    /// mirroring them onto the negative axis by conjugation.
    fn from_positive(step: f64, positive: Vec<Complex64>) -> Self {
        let half = positive.len() - 1;
        let mut values = Vec::with_capacity(2 * half + 1);
        values.extend(positive[1..].iter().rev().map(|v| v.conj()));
        values.extend(positive);
        values[half] = Complex64::new(0.0, 0.0);
        LogTrace { step, half, values }
    }

    /// Trace of a logarithm that is already known in continuous form (for
    /// instance one produced by a Lévy–Khinchine representation). `log_f(0)`
    /// must vanish.
    pub fn from_continuous_log<F>(log_f: F, t_max: f64, step: f64) -> Result<Self, DlogError>
    where
        F: Fn(f64) -> Complex64,
    {
        let n = half_width(t_max, step)?;
        let at_zero = log_f(0.0);
        if at_zero.norm() > 1e-12 {
            return Err(DlogError::InvalidGrid(format!(
                "logarithm must vanish at the origin, got {at_zero}"
            )));
        }
        let positive = (0..=n).map(|k| log_f(k as f64 * step)).collect();
        Ok(Self::from_positive(step, positive))
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn t_max(&self) -> f64 {
        self.half as f64 * self.step
    }

    /// Number of grid nodes.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.values.len())
            .map(|i| (i as f64 - self.half as f64) * self.step)
            .collect()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `(t, Ln f(t))` pairs in increasing `t`.
    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| ((i as f64 - self.half as f64) * self.step, v))
    }

    fn off_grid(&self, t: f64) -> DlogError {
        DlogError::OffGrid {
            t,
            step: self.step,
            t_max: self.t_max(),
        }
    }

    /// Signed node offset of `t` (node `k` sits at `k·step`).
    pub fn node(&self, t: f64) -> Result<i64, DlogError> {
        match lattice_index(t, self.step) {
            Some(k) if k.unsigned_abs() as usize <= self.half => Ok(k),
            _ => Err(self.off_grid(t)),
        }
    }

    /// Value at signed node `k`, if it exists.
    pub fn at_node(&self, k: i64) -> Option<Complex64> {
        let i = k.checked_add(self.half as i64)?;
        usize::try_from(i).ok().and_then(|i| self.values.get(i).copied())
    }

    pub fn value_at(&self, t: f64) -> Result<Complex64, DlogError> {
        let k = self.node(t)?;
        Ok(self.at_node(k).expect("node checked against half-width"))
    }

    /// Whether `t` is a grid node.
    pub fn contains(&self, t: f64) -> bool {
        self.node(t).is_ok()
    }
}

/// Builds the distinguished logarithm of `cf` on `[−t_max, t_max]` with grid
/// spacing `step`.
pub fn distinguished_log<C>(cf: &C, t_max: f64, step: f64) -> Result<LogTrace, DlogError>
where
    C: CharacteristicFunction + ?Sized,
{
    let n = half_width(t_max, step)?;
    let mut positive = Vec::with_capacity(n + 1);
    positive.push(Complex64::new(0.0, 0.0));

    let mut prev_t = 0.0;
    let mut prev_f = sample(cf, 0.0)?;
    let mut arg = 0.0;
    for k in 1..=n {
        let t = k as f64 * step;
        let f = sample(cf, t)?;
        let unwrapped = arg + phase_increment(cf, prev_t, prev_f, t, f, 0)?;
        // Snap to the principal argument plus a whole number of turns so
        // rounding does not accumulate along the grid.
        let principal = f.arg();
        let turns = ((unwrapped - principal) / TAU).round();
        arg = principal + TAU * turns;
        positive.push(Complex64::new(f.norm().ln(), arg));
        prev_t = t;
        prev_f = f;
    }
    Ok(LogTrace::from_positive(step, positive))
}

fn sample<C: CharacteristicFunction + ?Sized>(cf: &C, t: f64) -> Result<Complex64, DlogError> {
    let f = cf.eval(t);
    let modulus = f.norm();
    if modulus < ZERO_CF_THRESHOLD || !modulus.is_finite() {
        return Err(DlogError::ZeroCf { t, modulus });
    }
    Ok(f)
}

fn phase_increment<C: CharacteristicFunction + ?Sized>(
    cf: &C,
    a: f64,
    fa: Complex64,
    b: f64,
    fb: Complex64,
    depth: u32,
) -> Result<f64, DlogError> {
    let increment = (fb * fa.conj()).arg();
    if increment.abs() < FRAC_PI_2 {
        return Ok(increment);
    }
    if depth >= MAX_REFINE_DEPTH {
        // The phase still jumps by a quarter turn on a cell of width
        // step/2^40: only a zero of f can do that.
        return Err(DlogError::ZeroCf {
            t: 0.5 * (a + b),
            modulus: fa.norm().min(fb.norm()),
        });
    }
    let mid = 0.5 * (a + b);
    let fm = sample(cf, mid)?;
    Ok(phase_increment(cf, a, fa, mid, fm, depth + 1)? + phase_increment(cf, mid, fm, b, fb, depth + 1)?)
}

/// `Δ²ₕ Ln f(t) = Ln f(t − h) + Ln f(t + h) − 2·Ln f(t)`.
pub fn second_difference(trace: &LogTrace, t: f64, h: f64) -> Result<Complex64, DlogError> {
    let k = trace.node(t)?;
    let j = lattice_index(h, trace.step).ok_or_else(|| trace.off_grid(h))?;
    let lo = trace.at_node(k - j).ok_or_else(|| trace.off_grid(t - h))?;
    let hi = trace.at_node(k + j).ok_or_else(|| trace.off_grid(t + h))?;
    let mid = trace.at_node(k).expect("node checked");
    Ok(lo + hi - mid * 2.0)
}

/// Telescoping sum `Σ_{k=1}^{n} (Σ_{j=1}^{k−1} d2[j] + d2[0]/2)`, where
/// `d2[j] = Δ²ₕ Ln f(jh)`. The result equals `Ln f(nh) − i·n·Arg f(h)`.
///
/// # Panics
///
/// If `n > 0` and `d2` holds fewer than `n` entries.
pub fn reconstruct_from_second_differences(d2: &[Complex64], n: usize) -> Complex64 {
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    assert!(d2.len() >= n, "need {n} second differences, got {}", d2.len());
    let half0 = d2[0] * 0.5;
    let mut inner = Complex64::new(0.0, 0.0);
    let mut total = Complex64::new(0.0, 0.0);
    for k in 1..=n {
        if k >= 2 {
            inner += d2[k - 1];
        }
        total += inner + half0;
    }
    total
}
