//! End-to-end analysis of one distribution: distinguished log, spectral pair
//! recovery and classification.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::charfn::CharFn;
use crate::criteria::{classify, CriterionReport, Tolerances};
use crate::dlog::{distinguished_log, LogTrace};
use crate::recover::{period_trace_step, recover_gamma, recover_lattice_g, rescale_lattice_spectral, RecoverError};
use crate::spectral::SpectralPair;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSettings {
    /// Half-width of the analysis grid.
    pub t_max: f64,
    /// Spacing of the analysis grid; probes, `h_l` and `h_fd/2` must be
    /// multiples of it.
    pub step: f64,
    /// Largest `|k|` recovered on the unit lattice.
    pub k_max: usize,
    pub tolerances: Tolerances,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        AnalysisSettings {
            t_max: 4.0,
            step: 1.0 / 1600.0,
            k_max: 48,
            tolerances: Tolerances::default(),
        }
    }
}

/// Distinguished log of `cf` on the lattice-normalised period grid
/// `t_j = −π + 2πj/N`, `N = 4·k_max + 4`.
pub fn period_trace(cf: &CharFn, k_max: usize) -> Result<LogTrace, crate::dlog::DlogError> {
    let step = period_trace_step(k_max);
    distinguished_log(cf, PI + step, step)
}

/// Recovers `(γ, G)` for a law whose jump part lives on a shifted lattice.
/// `unit_trace` must contain `t = 1`.
pub fn recover_for(cf: &CharFn, unit_trace: &LogTrace, k_max: usize) -> Result<SpectralPair, RecoverError> {
    let spacing = match cf.jump_lattice() {
        Some(d) => d.unwrap_or(1.0),
        None => {
            return Err(RecoverError::NonLattice(
                "support is not contained in a shifted lattice".into(),
            ))
        }
    };
    let g = if spacing == 1.0 {
        recover_lattice_g(&period_trace(cf, k_max)?, k_max)?
    } else {
        let normalised = CharFn::scaled_shift(cf.clone(), 1.0 / spacing, 0.0)
            .map_err(|e| RecoverError::NonLattice(e.to_string()))?;
        let g_unit = recover_lattice_g(&period_trace(&normalised, k_max)?, k_max)?;
        rescale_lattice_spectral(&g_unit, spacing)?
    };
    Ok(SpectralPair::new(recover_gamma(unit_trace)?, g))
}

/// Full pipeline. Failures become `NotApplicable` verdicts.
pub fn analyze(cf: &CharFn, settings: &AnalysisSettings) -> CriterionReport {
    let tol = &settings.tolerances;
    let trace = match distinguished_log(cf, settings.t_max, settings.step) {
        Ok(t) => t,
        Err(e) => return CriterionReport::not_applicable(e.to_string(), tol),
    };
    analyze_trace(cf, &trace, settings)
}

/// As [`analyze`], for an already computed analysis trace of `cf`.
pub fn analyze_trace(cf: &CharFn, trace: &LogTrace, settings: &AnalysisSettings) -> CriterionReport {
    let tol = &settings.tolerances;
    match recover_for(cf, trace, settings.k_max) {
        Ok(pair) => classify(trace, &pair, tol),
        Err(e) => CriterionReport::not_applicable(format!("spectral pair unavailable: {e}"), tol),
    }
}
