//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero if
//! any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;

use common::{bernoulli_log_series, bernoulli_series_masses, oracles, random_pairs};
use num_complex::Complex64;
use quasiid::analysis::{analyze, AnalysisSettings};
use quasiid::criteria::{
    check_thm3, classify, log_remainder_bound, phi_values, residuals_thm1, ResidualKind, Sign, Tolerances,
};
use quasiid::dlog::{distinguished_log, reconstruct_from_second_differences, second_difference, LogTrace};
use quasiid::lk::lk_log_cf;
use quasiid::recover::{period_trace_step, recover_lattice_spectral};
use quasiid::{CharFn, SpectralPair, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
const ANALYSIS_STEP: f64 = 1.0 / 1600.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn second_difference_identity() -> Outcome {
    let mut worst = 0.0f64;
    for pair in random_pairs(SEED, 50) {
        // k ≤ 50 at h = 0.2 needs t up to 10.2.
        let trace = LogTrace::from_continuous_log(|t| lk_log_cf(&pair, t), 10.4, 0.05).map_err(|e| e.to_string())?;
        for h in [0.2, 0.1, 0.05] {
            let a = residuals_thm1(&trace, &pair.g, h, 50).map_err(|e| e.to_string())?;
            worst = a.iter().map(|r| r.norm()).fold(worst, f64::max);
        }
    }
    ensure(worst < 1e-9, || format!("max |a_k| = {worst:e}"))?;
    Ok(format!("max |a_k| = {worst:.2e}"))
}

fn round_trip() -> Outcome {
    let k_max = 8;
    let step = period_trace_step(k_max);
    let (mut dg, mut dm) = (0.0f64, 0.0f64);
    for pair in random_pairs(SEED, 50) {
        let trace =
            LogTrace::from_continuous_log(|t| lk_log_cf(&pair, t), PI + step, step).map_err(|e| e.to_string())?;
        let back = recover_lattice_spectral(&trace, k_max).map_err(|e| e.to_string())?;
        dg = dg.max((back.gamma - pair.gamma).abs());
        for k in -(k_max as i64)..=k_max as i64 {
            let x = k as f64;
            dm = dm.max((back.g.mass_at(x) - pair.g.mass_at(x)).abs());
        }
    }
    ensure(dg < 1e-8 && dm < 1e-7, || format!("|Δγ| = {dg:e}, |Δmass| = {dm:e}"))?;
    Ok(format!("|Δγ| = {dg:.2e}, |Δmass| = {dm:.2e}"))
}

fn bernoulli_oracle() -> Outcome {
    let cf = CharFn::bernoulli(0.3).map_err(|e| e.to_string())?;
    let report = analyze(&cf, &AnalysisSettings::default());
    ensure(report.verdict == Verdict::QuasiOnly, || {
        format!("verdict {:?}", report.verdict)
    })?;
    let pair = report.pair.as_ref().ok_or("no recovered pair")?;
    let mut dm = 0.0f64;
    for (k, exact) in bernoulli_series_masses(0.3, 8) {
        dm = dm.max((pair.g.mass_at(k) - exact).abs());
    }
    ensure(dm < 1e-7, || format!("|Δmass| = {dm:e}"))?;

    let fac = report.factorization.as_ref().ok_or("no factorization")?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut dl = 0.0f64;
    for _ in 0..1000 {
        let t = rng.gen_range(-10.0..10.0);
        let ln = lk_log_cf(&fac.numerator, t) - lk_log_cf(&fac.denominator, t);
        dl = dl.max((ln - bernoulli_log_series(0.3, t)).norm());
    }
    ensure(dl < 1e-10, || format!("|ΔLn f| = {dl:e}"))?;
    Ok(format!("|Δmass| = {dm:.2e}, |ΔLn f| = {dl:.2e}"))
}

fn id_oracles() -> Outcome {
    let settings = AnalysisSettings::default();
    let poisson = analyze(&CharFn::poisson(1.0).map_err(|e| e.to_string())?, &settings);
    ensure(poisson.verdict == Verdict::InfinitelyDivisible, || {
        format!("Poisson(1) verdict {:?}", poisson.verdict)
    })?;
    let p = poisson.pair.ok_or("Poisson(1): no pair")?;
    let dp = (p.gamma - 1f64.sin()).abs().max((p.g.mass_at(1.0) - 0.5).abs());
    ensure(p.g.atoms().len() == 1 && dp < 1e-8, || format!("Poisson(1) pair {p:?}"))?;

    let mut worst = dp;
    for (mu, var) in [(0.0, 1.0), (2.0, 0.5), (-1.25, 0.3)] {
        let r = analyze(&CharFn::gaussian(mu, var).map_err(|e| e.to_string())?, &settings);
        ensure(r.verdict == Verdict::InfinitelyDivisible, || {
            format!("Gaussian verdict {:?}", r.verdict)
        })?;
        let g = r.pair.ok_or("Gaussian: no pair")?;
        let d = (g.gamma - mu).abs().max((g.g.mass_at(0.0) - var).abs());
        ensure(g.g.atoms().len() == 1 && d < 1e-8, || {
            format!("Gaussian({mu}, {var}) pair {g:?}")
        })?;
        worst = worst.max(d);
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn derivative_comparator() -> Outcome {
    let probes: Vec<f64> = (-24..=24).map(|i| i as f64 * 0.125).collect();
    let mut worst = 0.0f64;
    for o in oracles() {
        let trace = distinguished_log(&o.cf, 4.0, ANALYSIS_STEP).map_err(|e| e.to_string())?;
        let err = check_thm3(&trace, &o.pair.g, &probes, 1e-2).map_err(|e| e.to_string())?;
        ensure(err < 1e-7, || format!("{}: {err:e}", o.name))?;
        worst = worst.max(err);
    }
    Ok(format!("max error {worst:.2e}"))
}

fn remainder_bound() -> Outcome {
    let mut checked = 0usize;
    for o in oracles() {
        let trace = distinguished_log(&o.cf, 4.0, ANALYSIS_STEP).map_err(|e| e.to_string())?;
        for h in Tolerances::default().h_sequence {
            let k_max = (3.0 / h).floor() as usize;
            for sign in [Sign::Plus, Sign::Minus] {
                for phi in phi_values(&trace, h, k_max, sign).map_err(|e| e.to_string())? {
                    if let Some(holds) = log_remainder_bound(phi) {
                        ensure(holds, || format!("{}: fails at φ = {phi}", o.name))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    // The bound evaluated directly through the principal logarithm.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..10_000 {
        let phi = Complex64::from_polar(rng.gen_range(0.0..=0.5), rng.gen_range(-PI..PI));
        let rem = ((Complex64::new(1.0, 0.0) + phi).ln() - phi).norm();
        ensure(rem <= phi.norm_sqr(), || format!("principal log fails at φ = {phi}"))?;
        checked += 1;
    }
    Ok(format!("{checked} values of φ checked"))
}

fn telescoping() -> Outcome {
    let mut worst = 0.0f64;
    for o in oracles() {
        let trace = distinguished_log(&o.cf, 10.0, 0.05).map_err(|e| e.to_string())?;
        for h in [0.1, 0.05] {
            let d2: Vec<Complex64> = (0..100)
                .map(|k| second_difference(&trace, k as f64 * h, h))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let arg_h = trace.value_at(h).map_err(|e| e.to_string())?.im;
            for n in 0..=100 {
                let lhs = reconstruct_from_second_differences(&d2, n);
                let rhs =
                    trace.value_at(n as f64 * h).map_err(|e| e.to_string())? - Complex64::new(0.0, n as f64 * arg_h);
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    ensure(worst < 1e-8, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.2e}"))
}

fn failure_paths() -> Outcome {
    let settings = AnalysisSettings::default();
    let fair = analyze(&CharFn::bernoulli(0.5).map_err(|e| e.to_string())?, &settings);
    match &fair.verdict {
        Verdict::NotApplicable(reason) if reason.starts_with("characteristic function vanishes") => {}
        v => return Err(format!("Bernoulli(0.5) verdict {v:?}")),
    }

    // Poisson(1) checked against G with twice the correct mass: the residuals
    // are O(h²) each, so the weighted sums grow like t² instead of vanishing.
    let trace = distinguished_log(&CharFn::poisson(1.0).map_err(|e| e.to_string())?, 4.0, ANALYSIS_STEP)
        .map_err(|e| e.to_string())?;
    let wrong = SpectralPair::new(1f64.sin(), common::atoms(&[(1.0, 1.0)]));
    let report = classify(&trace, &wrong, &settings.tolerances);
    ensure(report.verdict == Verdict::Inconclusive, || {
        format!("wrong G verdict {:?}", report.verdict)
    })?;
    let traj = report
        .trajectory(ResidualKind::TheoremOne, None)
        .ok_or("no residual trajectory")?;
    let mut smallest = f64::INFINITY;
    for row in &traj.weighted_sums {
        smallest = row.iter().copied().fold(smallest, f64::min);
    }
    ensure(smallest > 1e-2, || format!("weighted sum fell to {smallest:e}"))?;
    Ok(format!("ZeroCf reported; wrong G sums ≥ {smallest:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("second-difference identity on random pairs", second_difference_identity),
        ("round-trip spectral recovery", round_trip),
        ("Bernoulli(0.3) oracle and factorization", bernoulli_oracle),
        ("Poisson and Gaussian infinitely divisible oracles", id_oracles),
        ("second-derivative comparator", derivative_comparator),
        ("log-remainder bound", remainder_bound),
        ("telescoping reconstruction", telescoping),
        ("failure paths", failure_paths),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({detail})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
