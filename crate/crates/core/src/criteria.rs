//! Second-difference and second-derivative criteria.
//!
//! For a candidate spectral function `G` the residuals
//!
//! ```text
//! a_k(h) = Δ²ₕ Ln f(kh) − 2∫ e^{ikhx}(cos hx − 1)(1 + x²)/x² dG(x)
//! b_k(h) = (exp{±Δ²ₕ Ln f(kh)} − 1) ∓ 2∫ …
//! ```
//!
//! are aggregated into weighted sums `S(t, l) = Σ_{k<n} (n − k)·|r_k(h_l)|`,
//! `n = ⌊t/h_l⌋`, over a decreasing step sequence `h_l`. Sums that shrink
//! towards zero are numerical evidence that `f` has the Lévy–Khinchine form
//! with this `G`; a non-decreasing `G` then upgrades the verdict from
//! quasi-infinitely divisible to infinitely divisible.
//!
//! The verdict is evidence on a finite probe set and step sequence, not a
//! proof of the limit statement.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dlog::{second_difference, DlogError, LogTrace};
use crate::lk::{lk_second_derivative, lk_second_difference_integral};
use crate::numeric::{exp_m1, ln1p_minus_identity};
use crate::recover::{factorize, Factorization};
use crate::spectral::{SpectralFunction, SpectralPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualKind {
    TheoremOne,
    TheoremTwoResiduals,
    TheoremTwoSquares,
}

/// Sign choice in `exp{±Δ²} − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualTrajectory {
    pub kind: ResidualKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<Sign>,
    pub h_sequence: Vec<f64>,
    pub t_probes: Vec<f64>,
    /// `counts[i][l] = ⌊t_probes[i] / h_sequence[l]⌋`.
    pub counts: Vec<Vec<usize>>,
    /// `weighted_sums[i][l] = S(t_probes[i], l)`.
    pub weighted_sums: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "reason", rename_all = "snake_case")]
pub enum Verdict {
    InfinitelyDivisible,
    QuasiOnly,
    Inconclusive,
    NotApplicable(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub h_sequence: Vec<f64>,
    pub t_probes: Vec<f64>,
    /// Outer step of the Richardson second-derivative estimate.
    pub h_fd: f64,
    /// The final weighted sum must be below `weighted_sum_tol·(1 + n)`.
    pub weighted_sum_tol: f64,
    pub derivative_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            h_sequence: dyadic_sequence(0.2, 0.5, 7),
            t_probes: vec![0.5, 1.0, 2.0],
            h_fd: 1e-2,
            weighted_sum_tol: 1e-6,
            derivative_tol: 1e-6,
        }
    }
}

/// `h_0·ratio^l` for `l = 0..count`.
pub fn dyadic_sequence(h0: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|l| h0 * ratio.powi(l as i32)).collect()
}

/// Outcome of checking `|Ln(1 + φ) − φ| ≤ |φ|²` on every `|φ| ≤ 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundCheck {
    pub checked: usize,
    pub violations: usize,
}

impl BoundCheck {
    fn merge(self, other: BoundCheck) -> BoundCheck {
        BoundCheck {
            checked: self.checked + other.checked,
            violations: self.violations + other.violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub verdict: Verdict,
    pub trajectories: Vec<ResidualTrajectory>,
    pub derivative_max_error: Option<f64>,
    pub pair: Option<SpectralPair>,
    pub factorization: Option<Factorization>,
    pub theorem_two_bound: Option<BoundCheck>,
    pub tolerances: Tolerances,
}

impl CriterionReport {
    pub fn not_applicable(reason: impl Into<String>, tolerances: &Tolerances) -> Self {
        CriterionReport {
            verdict: Verdict::NotApplicable(reason.into()),
            trajectories: Vec::new(),
            derivative_max_error: None,
            pair: None,
            factorization: None,
            theorem_two_bound: None,
            tolerances: tolerances.clone(),
        }
    }

    pub fn trajectory(&self, kind: ResidualKind, sign: Option<Sign>) -> Option<&ResidualTrajectory> {
        self.trajectories.iter().find(|t| t.kind == kind && t.sign == sign)
    }
}

/// `⌊t/h⌋`, tolerant to the representation error of decimal steps.
pub fn step_count(t: f64, h: f64) -> usize {
    let q = t / h;
    let n = q.round();
    if (q - n).abs() <= 1e-9 * q.abs().max(1.0) {
        n as usize
    } else {
        q.floor() as usize
    }
}

/// `a_k(h)` for `k = 0..=k_max`.
pub fn residuals_thm1(
    trace: &LogTrace,
    g: &SpectralFunction,
    h: f64,
    k_max: usize,
) -> Result<Vec<Complex64>, DlogError> {
    (0..=k_max)
        .map(|k| {
            let t = k as f64 * h;
            Ok(second_difference(trace, t, h)? - lk_second_difference_integral(g, t, h))
        })
        .collect()
}

/// `φ±(kh, h) = exp{±Δ²ₕ Ln f(kh)} − 1` for `k = 0..=k_max`.
pub fn phi_values(trace: &LogTrace, h: f64, k_max: usize, sign: Sign) -> Result<Vec<Complex64>, DlogError> {
    (0..=k_max)
        .map(|k| Ok(exp_m1(second_difference(trace, k as f64 * h, h)? * sign.value())))
        .collect()
}

/// `(b_k(h), |φ±(kh, h)|²)` for `k = 0..=k_max`.
pub fn residuals_thm2(
    trace: &LogTrace,
    g: &SpectralFunction,
    h: f64,
    k_max: usize,
    sign: Sign,
) -> Result<(Vec<Complex64>, Vec<f64>), DlogError> {
    let phi = phi_values(trace, h, k_max, sign)?;
    let b = phi
        .iter()
        .enumerate()
        .map(|(k, &p)| p - lk_second_difference_integral(g, k as f64 * h, h) * sign.value())
        .collect();
    let squares = phi.iter().map(|p| p.norm_sqr()).collect();
    Ok((b, squares))
}

/// `Some(holds)` for `|φ| ≤ 1/2`, where `holds` is `|Ln(1 + φ) − φ| ≤ |φ|²`
/// evaluated in floating point; `None` outside the disc.
pub fn log_remainder_bound(phi: Complex64) -> Option<bool> {
    let r = phi.norm();
    (r <= 0.5).then(|| ln1p_minus_identity(phi).norm() <= r * r)
}

fn bound_check(phis: &[Complex64]) -> BoundCheck {
    phis.iter()
        .filter_map(|&p| log_remainder_bound(p))
        .fold(BoundCheck::default(), |acc, ok| BoundCheck {
            checked: acc.checked + 1,
            violations: acc.violations + usize::from(!ok),
        })
}

/// Fills `S(t, l)` from a residual oracle `residual(k, h_l)`.
pub fn weighted_sum_trajectory<F>(
    mut residual: F,
    h_sequence: &[f64],
    t_probes: &[f64],
    kind: ResidualKind,
) -> ResidualTrajectory
where
    F: FnMut(usize, f64) -> Complex64,
{
    let mut counts = Vec::with_capacity(t_probes.len());
    let mut sums = Vec::with_capacity(t_probes.len());
    for &t in t_probes {
        let mut row_n = Vec::with_capacity(h_sequence.len());
        let mut row_s = Vec::with_capacity(h_sequence.len());
        for &h in h_sequence {
            let n = step_count(t, h);
            let s = (0..n).map(|k| (n - k) as f64 * residual(k, h).norm()).sum::<f64>();
            row_n.push(n);
            row_s.push(s);
        }
        counts.push(row_n);
        sums.push(row_s);
    }
    ResidualTrajectory {
        kind,
        sign: None,
        h_sequence: h_sequence.to_vec(),
        t_probes: t_probes.to_vec(),
        counts,
        weighted_sums: sums,
    }
}

/// `(4·D(h/2) − D(h))/3` with `D(h) = Δ²ₕ Ln f(t)/h²`.
pub fn richardson_second_derivative(trace: &LogTrace, t: f64, h: f64) -> Result<Complex64, DlogError> {
    let d = |h: f64| -> Result<Complex64, DlogError> { Ok(second_difference(trace, t, h)? / (h * h)) };
    Ok((d(0.5 * h)? * 4.0 - d(h)?) / 3.0)
}

/// Largest deviation between the numerical `(Ln f)″` and
/// `−∫ e^{itx}(1 + x²) dG(x)` over the probes.
pub fn check_thm3(trace: &LogTrace, g: &SpectralFunction, t_probes: &[f64], h_fd: f64) -> Result<f64, DlogError> {
    t_probes.iter().try_fold(0.0f64, |acc, &t| {
        let numeric = richardson_second_derivative(trace, t, h_fd)?;
        Ok(acc.max((numeric - lk_second_derivative(g, t)).norm()))
    })
}

/// Whether a weighted-sum row has converged: the last entry is below
/// `tol·(1 + n)` and the last three entries do not grow beyond that same
/// noise floor.
pub fn row_converged(sums: &[f64], counts: &[usize], tol: f64) -> bool {
    let Some(&last) = sums.last() else {
        return false;
    };
    let floor = |l: usize| tol * (1.0 + counts[l] as f64);
    if !(last < floor(sums.len() - 1)) {
        return false;
    }
    let start = sums.len().saturating_sub(3);
    (start + 1..sums.len()).all(|l| sums[l] <= sums[l - 1] + floor(l))
}

fn residual_table<F>(h_sequence: &[f64], k_needed: &[usize], mut f: F) -> Result<Vec<Vec<Complex64>>, DlogError>
where
    F: FnMut(f64, usize) -> Result<Vec<Complex64>, DlogError>,
{
    h_sequence
        .iter()
        .zip(k_needed)
        .map(|(&h, &n)| if n == 0 { Ok(Vec::new()) } else { f(h, n - 1) })
        .collect()
}

fn lookup<'a>(table: &'a [Vec<Complex64>], h_sequence: &'a [f64]) -> impl Fn(usize, f64) -> Complex64 + 'a {
    move |k, h| {
        let l = h_sequence.iter().position(|&x| x == h).expect("h from the sequence");
        table[l][k]
    }
}

/// Runs the second-difference and second-derivative diagnostics for `pair`
/// against `trace` and classifies the law.
pub fn classify(trace: &LogTrace, pair: &SpectralPair, tol: &Tolerances) -> CriterionReport {
    match run_diagnostics(trace, pair, tol) {
        Ok(report) => report,
        Err(e) => CriterionReport::not_applicable(e.to_string(), tol),
    }
}

fn run_diagnostics(trace: &LogTrace, pair: &SpectralPair, tol: &Tolerances) -> Result<CriterionReport, DlogError> {
    let hs = &tol.h_sequence;
    let probes = &tol.t_probes;
    let g = &pair.g;
    let k_needed: Vec<usize> = hs
        .iter()
        .map(|&h| probes.iter().map(|&t| step_count(t, h)).max().unwrap_or(0))
        .collect();

    let a = residual_table(hs, &k_needed, |h, k| residuals_thm1(trace, g, h, k))?;
    let thm1 = weighted_sum_trajectory(lookup(&a, hs), hs, probes, ResidualKind::TheoremOne);
    let mut trajectories = vec![thm1];

    let mut bound = BoundCheck::default();
    for sign in [Sign::Plus, Sign::Minus] {
        let mut squares = Vec::with_capacity(hs.len());
        let b = residual_table(hs, &k_needed, |h, k| {
            let (b, sq) = residuals_thm2(trace, g, h, k, sign)?;
            squares.push(sq.into_iter().map(|s| Complex64::new(s, 0.0)).collect());
            bound = bound.merge(bound_check(&phi_values(trace, h, k, sign)?));
            Ok(b)
        })?;
        // residual_table skips levels without summands; keep the table aligned.
        let squares: Vec<Vec<Complex64>> = {
            let mut it = squares.into_iter();
            k_needed
                .iter()
                .map(|&n| if n == 0 { Vec::new() } else { it.next().unwrap() })
                .collect()
        };
        let mut tb = weighted_sum_trajectory(lookup(&b, hs), hs, probes, ResidualKind::TheoremTwoResiduals);
        tb.sign = Some(sign);
        let mut ts = weighted_sum_trajectory(lookup(&squares, hs), hs, probes, ResidualKind::TheoremTwoSquares);
        ts.sign = Some(sign);
        trajectories.push(tb);
        trajectories.push(ts);
    }

    let derivative_error = check_thm3(trace, g, probes, tol.h_fd)?;

    let thm1 = &trajectories[0];
    let sums_ok = thm1
        .weighted_sums
        .iter()
        .zip(&thm1.counts)
        .all(|(s, n)| row_converged(s, n, tol.weighted_sum_tol));
    let derivative_ok = derivative_error < tol.derivative_tol;

    let verdict = if !(sums_ok && derivative_ok) {
        Verdict::Inconclusive
    } else if g.is_non_decreasing() {
        Verdict::InfinitelyDivisible
    } else {
        Verdict::QuasiOnly
    };
    let factorization = (verdict == Verdict::QuasiOnly).then(|| factorize(pair));

    Ok(CriterionReport {
        verdict,
        trajectories,
        derivative_max_error: Some(derivative_error),
        pair: Some(pair.clone()),
        factorization,
        theorem_two_bound: Some(bound),
        tolerances: tol.clone(),
    })
}
