//! Signed spectral functions of bounded variation.
//!
//! A spectral function `G` is stored through its increments `dG`: finitely
//! many atoms plus an optional density sampled on a uniform grid. Pointwise
//! values `G(x)` are not needed by any kernel integral and are not exposed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::simpson_uniform;

/// Locations closer than this to the origin use the kernel's limit value.
pub const ZERO_LOCATION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("atom at {x} has non-finite data (mass {mass})")]
    InvalidAtom { x: f64, mass: f64 },
    #[error("invalid density: {0}")]
    InvalidDensity(String),
}

/// Point increment of `G`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub mass: f64,
}

/// Absolutely continuous part of `dG`, sampled at `grid_min + i·grid_step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub grid_min: f64,
    pub grid_step: f64,
    pub values: Vec<f64>,
}

impl Density {
    pub fn new(grid_min: f64, grid_step: f64, values: Vec<f64>) -> Result<Self, SpectralError> {
        let d = Density {
            grid_min,
            grid_step,
            values,
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<(), SpectralError> {
        if !(self.grid_min.is_finite() && self.grid_step.is_finite() && self.grid_step > 0.0) {
            return Err(SpectralError::InvalidDensity(format!(
                "grid_min {} / grid_step {} must be finite with a positive step",
                self.grid_min, self.grid_step
            )));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(SpectralError::InvalidDensity(format!("non-finite value {v}")));
        }
        Ok(())
    }

    pub fn node(&self, i: usize) -> f64 {
        self.grid_min + i as f64 * self.grid_step
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Density {
        Density {
            grid_min: self.grid_min,
            grid_step: self.grid_step,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawSpectral")]
pub struct SpectralFunction {
    atoms: Vec<Atom>,
    #[serde(skip_serializing_if = "Option::is_none")]
    density: Option<Density>,
}

#[derive(Deserialize)]
struct RawSpectral {
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    density: Option<Density>,
}

impl TryFrom<RawSpectral> for SpectralFunction {
    type Error = SpectralError;

    fn try_from(raw: RawSpectral) -> Result<Self, Self::Error> {
        SpectralFunction::new(raw.atoms, raw.density)
    }
}

impl SpectralFunction {
    /// Zero-mass atoms are dropped.
    pub fn new(atoms: Vec<Atom>, density: Option<Density>) -> Result<Self, SpectralError> {
        for a in &atoms {
            if !(a.x.is_finite() && a.mass.is_finite()) {
                return Err(SpectralError::InvalidAtom { x: a.x, mass: a.mass });
            }
        }
        if let Some(d) = &density {
            d.validate()?;
        }
        Ok(SpectralFunction {
            atoms: atoms.into_iter().filter(|a| a.mass != 0.0).collect(),
            density,
        })
    }

    pub fn from_atoms<I>(atoms: I) -> Result<Self, SpectralError>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        Self::new(atoms.into_iter().map(|(x, mass)| Atom { x, mass }).collect(), None)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&Density> {
        self.density.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.density.as_ref().is_none_or(|d| d.values.is_empty())
    }

    /// Mass of the atom at `x` (summing duplicates), zero if there is none.
    pub fn mass_at(&self, x: f64) -> f64 {
        self.atoms.iter().filter(|a| a.x == x).map(|a| a.mass).sum()
    }

    /// `‖G‖`: absolute atom masses plus the Simpson integral of `|density|`.
    pub fn total_variation(&self) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass.abs()).sum();
        let dens = self.density.as_ref().map_or(0.0, |d| {
            let abs: Vec<f64> = d.values.iter().map(|v| v.abs()).collect();
            simpson_uniform(&abs, d.grid_step)
        });
        atoms + dens
    }

    /// Minimal Jordan split `G = G⁺ − G⁻` by sign.
    pub fn jordan_decompose(&self) -> (SpectralFunction, SpectralFunction) {
        let split = |keep: fn(f64) -> f64| SpectralFunction {
            atoms: self
                .atoms
                .iter()
                .filter_map(|a| {
                    let m = keep(a.mass);
                    (m > 0.0).then_some(Atom { x: a.x, mass: m })
                })
                .collect(),
            density: self.density.as_ref().map(|d| d.map(keep)),
        };
        (split(|m| m.max(0.0)), split(|m| (-m).max(0.0)))
    }

    /// Monotonicity up to round-off: every increment is `≥ −ε` with
    /// `ε = 1e−9·max(‖G‖, 1)`.
    pub fn is_non_decreasing(&self) -> bool {
        let eps = 1e-9 * self.total_variation().max(1.0);
        self.atoms.iter().all(|a| a.mass >= -eps)
            && self
                .density
                .as_ref()
                .is_none_or(|d| d.values.iter().all(|&v| v >= -eps))
    }

    /// `self − other`. Atoms at identical locations are merged; densities
    /// must share a grid.
    pub fn difference(&self, other: &SpectralFunction) -> Result<SpectralFunction, SpectralError> {
        let mut atoms = self.atoms.clone();
        for b in &other.atoms {
            match atoms.iter_mut().find(|a| a.x == b.x) {
                Some(a) => a.mass -= b.mass,
                None => atoms.push(Atom { x: b.x, mass: -b.mass }),
            }
        }
        let density = match (&self.density, &other.density) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.map(|v| -v)),
            (Some(a), Some(b)) => {
                if a.grid_min != b.grid_min || a.grid_step != b.grid_step || a.values.len() != b.values.len() {
                    return Err(SpectralError::InvalidDensity(
                        "densities live on different grids".into(),
                    ));
                }
                Some(Density {
                    grid_min: a.grid_min,
                    grid_step: a.grid_step,
                    values: a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect(),
                })
            }
        };
        Self::new(atoms, density)
    }
}

/// `∫ k(x) dG(x)`: atoms exactly, density by composite Simpson. At `x = 0`
/// the kernel is replaced by `kernel_at_zero`, its removable-singularity
/// limit.
pub fn integrate_kernel<K>(g: &SpectralFunction, kernel: K, kernel_at_zero: Complex64) -> Complex64
where
    K: Fn(f64) -> Complex64,
{
    let eval = |x: f64| {
        if x.abs() <= ZERO_LOCATION_TOL {
            kernel_at_zero
        } else {
            kernel(x)
        }
    };
    let atoms: Complex64 = g.atoms.iter().map(|a| eval(a.x) * a.mass).sum();
    let dens = g.density.as_ref().map_or(Complex64::new(0.0, 0.0), |d| {
        let samples: Vec<Complex64> = d.values.iter().enumerate().map(|(i, &v)| eval(d.node(i)) * v).collect();
        simpson_uniform(&samples, d.grid_step)
    });
    atoms + dens
}

/// The pair `(γ, G)` of a Lévy–Khinchine representation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SpectralPair {
    pub gamma: f64,
    #[serde(flatten)]
    pub g: SpectralFunction,
}

impl SpectralPair {
    pub fn new(gamma: f64, g: SpectralFunction) -> Self {
        SpectralPair { gamma, g }
    }
}
