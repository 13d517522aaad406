use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use quasiid::analysis::AnalysisSettings;
use quasiid::criteria::{dyadic_sequence, Tolerances};
use quasiid::numeric::lattice_index;
use quasiid::CharFn;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// The only config version understood by this build.
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub version: u32,
    pub distributions: Vec<NamedDistribution>,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default)]
    pub h_sequence: HSequence,
    #[serde(default = "default_probes")]
    pub t_probes: Vec<f64>,
    /// Largest `|k|` recovered on the unit lattice.
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    pub outputs: Outputs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedDistribution {
    /// Also the trace file stem, so restricted to `[A-Za-z0-9_.-]`.
    pub name: String,
    pub law: DistributionSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    Degenerate {
        at: f64,
    },
    Gaussian {
        mean: f64,
        variance: f64,
    },
    Poisson {
        rate: f64,
    },
    Bernoulli {
        p: f64,
    },
    Discrete {
        atoms: Vec<PointMass>,
    },
    Convolution {
        factors: Vec<DistributionSpec>,
    },
    ScaledShift {
        base: Box<DistributionSpec>,
        scale: f64,
        shift: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointMass {
    pub x: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub t_max: f64,
    pub step: f64,
}

impl Default for Grid {
    fn default() -> Self {
        let s = AnalysisSettings::default();
        Grid {
            t_max: s.t_max,
            step: s.step,
        }
    }
}

/// `h_l = h0·ratio^l`, `l = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HSequence {
    pub h0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl Default for HSequence {
    fn default() -> Self {
        HSequence {
            h0: 0.2,
            ratio: 0.5,
            count: 7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub h_fd: f64,
    pub weighted_sum_tol: f64,
    pub derivative_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        let t = Tolerances::default();
        ToleranceConfig {
            h_fd: t.h_fd,
            weighted_sum_tol: t.weighted_sum_tol,
            derivative_tol: t.derivative_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub report: PathBuf,
    /// Directory receiving `<name>.csv` for every distribution.
    #[serde(default)]
    pub traces: Option<PathBuf>,
}

fn default_probes() -> Vec<f64> {
    Tolerances::default().t_probes
}

fn default_k_max() -> usize {
    AnalysisSettings::default().k_max
}

impl AnalysisConfig {
    /// Parses and validates. Parse errors name the JSON path at fault.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: AnalysisConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "<root>".to_string() } else { path };
            CliError::config(field, e.into_inner().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            action: "read config",
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn h_values(&self) -> Vec<f64> {
        dyadic_sequence(self.h_sequence.h0, self.h_sequence.ratio, self.h_sequence.count)
    }

    pub fn settings(&self) -> AnalysisSettings {
        AnalysisSettings {
            t_max: self.grid.t_max,
            step: self.grid.step,
            k_max: self.k_max,
            tolerances: Tolerances {
                h_sequence: self.h_values(),
                t_probes: self.t_probes.clone(),
                h_fd: self.tolerances.h_fd,
                weighted_sum_tol: self.tolerances.weighted_sum_tol,
                derivative_tol: self.tolerances.derivative_tol,
            },
        }
    }

    /// Checks every invariant the analysis relies on: all evaluation points
    /// are grid nodes inside `[−t_max, t_max]`.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.version != CONFIG_VERSION {
            return Err(CliError::config(
                "version",
                format!("unsupported version {} (expected {CONFIG_VERSION})", self.version),
            ));
        }
        if self.distributions.is_empty() {
            return Err(CliError::config(
                "distributions",
                "at least one distribution is required",
            ));
        }
        let mut names = HashSet::new();
        for (i, d) in self.distributions.iter().enumerate() {
            let field = format!("distributions[{i}].name");
            let valid = !d.name.is_empty()
                && d.name.chars().all(|c| c.is_ascii_alphanumeric() || "_.-".contains(c))
                && !d.name.starts_with('.');
            if !valid {
                return Err(CliError::config(field, format!("`{}` is not a valid name", d.name)));
            }
            if !names.insert(d.name.as_str()) {
                return Err(CliError::config(field, format!("duplicate name `{}`", d.name)));
            }
            d.law.build(&format!("distributions[{i}].law"))?;
        }

        let Grid { t_max, step } = self.grid;
        if !(step.is_finite() && step > 0.0) {
            return Err(CliError::config("grid.step", "must be a positive number"));
        }
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(CliError::config("grid.t_max", "must be a positive number"));
        }
        if lattice_index(t_max, step).is_none() {
            return Err(CliError::config(
                "grid.step",
                format!("{step} does not divide grid.t_max = {t_max}"),
            ));
        }
        let on_grid = |t: f64| lattice_index(t, step).is_some() && t <= t_max * (1.0 + 1e-12);
        if !on_grid(1.0) {
            return Err(CliError::config(
                "grid.step",
                "t = 1 must be a grid node (the shift parameter is read off Ln f(1))",
            ));
        }

        let HSequence { h0, ratio, count } = self.h_sequence;
        if !(h0.is_finite() && h0 > 0.0) {
            return Err(CliError::config("h_sequence.h0", "must be a positive number"));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(CliError::config("h_sequence.ratio", "must lie in (0, 1)"));
        }
        if count == 0 {
            return Err(CliError::config("h_sequence.count", "must be at least 1"));
        }
        for (l, h) in self.h_values().into_iter().enumerate() {
            if lattice_index(h, step).is_none() || lattice_index(h, step) == Some(0) {
                return Err(CliError::config(
                    "h_sequence",
                    format!("h_{l} = {h} is not a positive integer multiple of grid.step = {step}"),
                ));
            }
        }

        let h_fd = self.tolerances.h_fd;
        if !(h_fd > 0.0) || lattice_index(0.5 * h_fd, step).is_none_or(|k| k == 0) {
            return Err(CliError::config(
                "tolerances.h_fd",
                format!("{h_fd} must be a positive even multiple of grid.step"),
            ));
        }
        for (name, v) in [
            ("tolerances.weighted_sum_tol", self.tolerances.weighted_sum_tol),
            ("tolerances.derivative_tol", self.tolerances.derivative_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::config(name, "must be a positive number"));
            }
        }

        if self.t_probes.is_empty() {
            return Err(CliError::config("t_probes", "at least one probe is required"));
        }
        for (i, &t) in self.t_probes.iter().enumerate() {
            if !(t > 0.0) || !on_grid(t) || !on_grid(t + h_fd) {
                return Err(CliError::config(
                    format!("t_probes[{i}]"),
                    format!("{t} must be a positive grid node with t + h_fd inside the grid"),
                ));
            }
        }
        if self.k_max == 0 {
            return Err(CliError::config("k_max", "must be at least 1"));
        }
        Ok(())
    }
}

impl DistributionSpec {
    /// Builds the law; `field` is the JSON path used in error messages.
    pub fn build(&self, field: &str) -> Result<CharFn, CliError> {
        let wrap = |r: Result<CharFn, quasiid::CharFnError>| r.map_err(|e| CliError::config(field, e.to_string()));
        match self {
            DistributionSpec::Degenerate { at } => wrap(CharFn::degenerate(*at)),
            DistributionSpec::Gaussian { mean, variance } => wrap(CharFn::gaussian(*mean, *variance)),
            DistributionSpec::Poisson { rate } => wrap(CharFn::poisson(*rate)),
            DistributionSpec::Bernoulli { p } => wrap(CharFn::bernoulli(*p)),
            DistributionSpec::Discrete { atoms } => wrap(CharFn::discrete(atoms.iter().map(|a| (a.x, a.p)).collect())),
            DistributionSpec::Convolution { factors } => {
                if factors.is_empty() {
                    return Err(CliError::config(
                        format!("{field}.factors"),
                        "at least one factor is required",
                    ));
                }
                let built = factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| f.build(&format!("{field}.factors[{i}]")))
                    .collect::<Result<_, _>>()?;
                Ok(CharFn::convolution(built))
            }
            DistributionSpec::ScaledShift { base, scale, shift } => {
                let base = base.build(&format!("{field}.base"))?;
                wrap(CharFn::scaled_shift(base, *scale, *shift))
            }
        }
    }
}
