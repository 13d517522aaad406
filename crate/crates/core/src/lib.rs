//! Numerical evidence for rational infinite divisibility.
//!
//! A distribution `F` whose characteristic function never vanishes is
//! *rationally infinitely divisible* (quasi-infinitely divisible) when its
//! characteristic function admits a Lévy–Khinchine representation
//!
//! ```text
//! Ln f(t) = iγt + ∫ (e^{itx} − 1 − it·sin x)·(1 + x²)/x² dG(x)
//! ```
//!
//! with a spectral function `G` of bounded variation that need not be
//! monotone. The crate is organised bottom-up:
//!
//! - [`charfn`]: model characteristic functions (point masses, Gaussian,
//!   Poisson, finite PMFs, convolutions, location-scale transforms).
//! - [`dlog`]: the distinguished logarithm on a uniform grid, its second
//!   differences and the telescoping reconstruction.
//! - [`spectral`]: signed spectral functions, total variation, Jordan split,
//!   kernel integration with the removable singularity at `x = 0`.
//! - [`lk`]: forward Lévy–Khinchine evaluation and its derived kernels.
//! - [`criteria`]: second-difference residuals, weighted-sum trajectories,
//!   the second-derivative comparator and the classification verdict.
//! - [`recover`]: inverse direction for integer-lattice laws with a Gaussian
//!   component, and the factorisation into two infinitely divisible laws.

pub mod analysis;
pub mod charfn;
pub mod criteria;
pub mod dlog;
pub mod lk;
pub mod numeric;
pub mod recover;
pub mod spectral;

pub use charfn::{CharFn, CharFnError, CharacteristicFunction};
pub use criteria::{classify, CriterionReport, ResidualKind, ResidualTrajectory, Sign, Tolerances, Verdict};
pub use dlog::{distinguished_log, DlogError, LogTrace};
pub use lk::LkCharFn;
pub use recover::{factorize, Factorization, RecoverError};
pub use spectral::{Atom, Density, SpectralFunction, SpectralPair};

pub use num_complex::Complex64;
