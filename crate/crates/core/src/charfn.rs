//! Characteristic functions `f(t) = ∫ e^{itx} dF(x)` of model distributions.
//!
//! Gaussian and Poisson laws are evaluated in closed form; finite PMFs by
//! direct summation. Convolutions multiply, location-scale transforms act as
//! `e^{it·shift}·f(scale·t)`.

use num_complex::Complex64;
use thiserror::Error;

use crate::numeric::real_gcd;

/// Anything that can be evaluated as a characteristic function.
pub trait CharacteristicFunction {
    fn eval(&self, t: f64) -> Complex64;
}

impl<T: CharacteristicFunction + ?Sized> CharacteristicFunction for &T {
    fn eval(&self, t: f64) -> Complex64 {
        (**self).eval(t)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharFnError {
    #[error("gaussian variance must be finite and >= 0, got {0}")]
    InvalidVariance(f64),
    #[error("poisson rate must be finite and > 0, got {0}")]
    InvalidRate(f64),
    #[error("bernoulli success probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),
    #[error("pmf has no atoms")]
    EmptyPmf,
    #[error("pmf atom at {location} has invalid mass {mass}")]
    InvalidMass { location: f64, mass: f64 },
    #[error("pmf masses sum to {0}, expected 1")]
    MassNotNormalized(f64),
    #[error("non-finite parameter: {0}")]
    NonFinite(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CfKind {
    Degenerate { a: f64 },
    Gaussian { mean: f64, variance: f64 },
    Poisson { rate: f64 },
    DiscretePmf { atoms: Vec<(f64, f64)> },
    Convolution(Vec<CharFn>),
    ScaledShift { base: Box<CharFn>, scale: f64, shift: f64 },
}

/// A distribution together with its lattice metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CharFn {
    kind: CfKind,
    lattice: Option<f64>,
}

/// Lattice structure of the support up to translation.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Increments {
    /// Only a single point (plus, possibly, Gaussian smoothing).
    Point,
    /// Jump part lives on `shift + spacing·ℤ`.
    Spacing(f64),
    Irregular,
}

impl Increments {
    fn join(self, other: Increments) -> Increments {
        use Increments::*;
        match (self, other) {
            (Point, x) | (x, Point) => x,
            (Spacing(a), Spacing(b)) => real_gcd(a, b).map_or(Irregular, Spacing),
            _ => Irregular,
        }
    }
}

impl CharFn {
    fn from_kind(kind: CfKind) -> Self {
        let mut cf = CharFn { kind, lattice: None };
        cf.lattice = cf.absolute_lattice();
        cf
    }

    pub fn degenerate(a: f64) -> Result<Self, CharFnError> {
        if !a.is_finite() {
            return Err(CharFnError::NonFinite("degenerate location"));
        }
        Ok(Self::from_kind(CfKind::Degenerate { a }))
    }

    pub fn gaussian(mean: f64, variance: f64) -> Result<Self, CharFnError> {
        if !mean.is_finite() {
            return Err(CharFnError::NonFinite("gaussian mean"));
        }
        if !(variance.is_finite() && variance >= 0.0) {
            return Err(CharFnError::InvalidVariance(variance));
        }
        Ok(Self::from_kind(CfKind::Gaussian { mean, variance }))
    }

    pub fn poisson(rate: f64) -> Result<Self, CharFnError> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(CharFnError::InvalidRate(rate));
        }
        Ok(Self::from_kind(CfKind::Poisson { rate }))
    }

    /// Finite PMF. Masses must be strictly positive and sum to one within
    /// `1e−12`.
    pub fn discrete(atoms: Vec<(f64, f64)>) -> Result<Self, CharFnError> {
        if atoms.is_empty() {
            return Err(CharFnError::EmptyPmf);
        }
        for &(location, mass) in &atoms {
            if !location.is_finite() {
                return Err(CharFnError::NonFinite("pmf location"));
            }
            if !(mass.is_finite() && mass > 0.0) {
                return Err(CharFnError::InvalidMass { location, mass });
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(CharFnError::MassNotNormalized(total));
        }
        Ok(Self::from_kind(CfKind::DiscretePmf { atoms }))
    }

    /// Bernoulli law on {0, 1}; degenerate when `p` is 0 or 1.
    pub fn bernoulli(p: f64) -> Result<Self, CharFnError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(CharFnError::InvalidProbability(p));
        }
        let atoms: Vec<(f64, f64)> = [(0.0, 1.0 - p), (1.0, p)].into_iter().filter(|a| a.1 > 0.0).collect();
        Self::discrete(atoms)
    }

    pub fn convolution(components: Vec<CharFn>) -> Self {
        Self::from_kind(CfKind::Convolution(components))
    }

    /// Law of `scale·X + shift` where `X` has characteristic function `base`.
    pub fn scaled_shift(base: CharFn, scale: f64, shift: f64) -> Result<Self, CharFnError> {
        if !(scale.is_finite() && shift.is_finite()) {
            return Err(CharFnError::NonFinite("scale/shift"));
        }
        Ok(Self::from_kind(CfKind::ScaledShift {
            base: Box::new(base),
            scale,
            shift,
        }))
    }

    pub fn kind(&self) -> &CfKind {
        &self.kind
    }

    /// Spacing `d > 0` such that every support point is an integer multiple
    /// of `d`, if one exists. Laws with a Gaussian component have none.
    pub fn lattice(&self) -> Option<f64> {
        self.lattice
    }

    /// Spacing of the jump (non-Gaussian) part of the law modulo a
    /// translation. `Some(None)` means the jump part is a single point, and
    /// `None` that the support is not a lattice.
    pub fn jump_lattice(&self) -> Option<Option<f64>> {
        match self.increments() {
            Increments::Point => Some(None),
            Increments::Spacing(d) => Some(Some(d)),
            Increments::Irregular => None,
        }
    }

    fn increments(&self) -> Increments {
        match &self.kind {
            CfKind::Degenerate { .. } | CfKind::Gaussian { .. } => Increments::Point,
            CfKind::Poisson { .. } => Increments::Spacing(1.0),
            CfKind::DiscretePmf { atoms } => {
                let x0 = atoms[0].0;
                atoms.iter().skip(1).fold(Increments::Point, |acc, a| {
                    let d = (a.0 - x0).abs();
                    if d == 0.0 {
                        acc
                    } else {
                        acc.join(Increments::Spacing(d))
                    }
                })
            }
            CfKind::Convolution(parts) => parts.iter().fold(Increments::Point, |acc, p| acc.join(p.increments())),
            CfKind::ScaledShift { base, scale, .. } => match base.increments() {
                Increments::Spacing(d) if *scale != 0.0 => Increments::Spacing(d * scale.abs()),
                Increments::Spacing(_) => Increments::Point,
                other => other,
            },
        }
    }

    fn absolute_lattice(&self) -> Option<f64> {
        // Some(0.0) encodes "support is {0}" during the recursion.
        fn walk(cf: &CharFn) -> Option<f64> {
            let join = |a: Option<f64>, b: Option<f64>| match (a?, b?) {
                (x, 0.0) | (0.0, x) => Some(x),
                (x, y) => real_gcd(x, y),
            };
            match &cf.kind {
                CfKind::Degenerate { a } => Some(a.abs()),
                CfKind::Gaussian { variance, mean } => {
                    if *variance == 0.0 {
                        Some(mean.abs())
                    } else {
                        None
                    }
                }
                CfKind::Poisson { .. } => Some(1.0),
                CfKind::DiscretePmf { atoms } => atoms.iter().try_fold(0.0, |acc, a| join(Some(acc), Some(a.0.abs()))),
                CfKind::Convolution(parts) => parts.iter().try_fold(0.0, |acc, p| join(Some(acc), walk(p))),
                CfKind::ScaledShift { base, scale, shift } => {
                    let scaled = walk(base).map(|d| d * scale.abs());
                    join(scaled, Some(shift.abs()))
                }
            }
        }
        walk(self).map(|d| if d == 0.0 { 1.0 } else { d })
    }

    /// Minimum of `|f|` over the given grid.
    pub fn min_modulus_on(&self, grid: &[f64]) -> f64 {
        min_modulus_on(self, grid)
    }
}

/// `f(t)`.
pub fn eval_cf(cf: &CharFn, t: f64) -> Complex64 {
    match &cf.kind {
        CfKind::Degenerate { a } => Complex64::cis(t * a),
        CfKind::Gaussian { mean, variance } => Complex64::from_polar((-0.5 * variance * t * t).exp(), t * mean),
        CfKind::Poisson { rate } => Complex64::from_polar((rate * (t.cos() - 1.0)).exp(), rate * t.sin()),
        CfKind::DiscretePmf { atoms } => atoms.iter().map(|&(x, m)| Complex64::cis(t * x) * m).sum(),
        CfKind::Convolution(parts) => parts
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, p| acc * eval_cf(p, t)),
        CfKind::ScaledShift { base, scale, shift } => Complex64::cis(t * shift) * eval_cf(base, scale * t),
    }
}

impl CharacteristicFunction for CharFn {
    fn eval(&self, t: f64) -> Complex64 {
        eval_cf(self, t)
    }
}

/// Minimum of `|f|` over `grid`. Returns `+∞` on an empty grid.
pub fn min_modulus_on<C: CharacteristicFunction + ?Sized>(cf: &C, grid: &[f64]) -> f64 {
    grid.iter().map(|&t| cf.eval(t).norm()).fold(f64::INFINITY, f64::min)
}
