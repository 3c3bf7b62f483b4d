//! Sharp supnorm estimates in the Sobolev spaces `H^s(R^n)`.
//!
//! For `s > n/2` every `u ∈ H^s(R^n)` is bounded and continuous, with
//!
//! ```text
//! ‖u‖_∞ ≤ C(n,s) ‖u‖_{H^s}                         (embedding)
//! ‖u‖_∞ ≤ K(n,s) ‖u‖_2^{1-n/2s} ‖u‖_{Ḣ^s}^{n/2s}   (Gagliardo–Nirenberg)
//! ```
//!
//! Both constants are sharp: the Bessel-potential profile
//! `ŵ(ξ) = c / (1 + |ξ|^{2s})` turns each of them into an equality.
//!
//! The crate is organised bottom-up:
//!
//! - [`special`]: Gamma, Beta, `sin(rπ)/(rπ)` and unit-sphere areas.
//! - [`constants`]: closed forms for `K`, `C`, the Young factor and the optimal dilation.
//! - [`quadrature`]: adaptive Gauss–Legendre evaluation of the radial integrals, used as
//!   an oracle against the closed forms.
//! - [`spectral`]: periodic-box grids, unitary Fourier transforms and the five norms.
//! - [`extremizer`]: the extremizing family and a small corpus of test functions.
//! - [`verifier`]: inequality reports, dilation sweeps and sharpness ratios.
//!
//! Fourier transforms use the unitary convention
//! `û(ξ) = (2π)^{-n/2} ∫ e^{-i x·ξ} u(x) dx`.

pub mod constants;
mod error;
pub mod extremizer;
pub mod quadrature;
pub mod report;
pub mod special;
pub mod spectral;
mod sum;
pub mod verifier;

pub use constants::SobolevIndex;
pub use error::{Error, Result};
pub use report::{GridMeta, InequalityId, InequalityReport};
pub use spectral::{GridFunction, GridSpec, NormBundle, SpectralField};

/// Library version recorded in every serialized report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
