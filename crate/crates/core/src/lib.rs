//! Coherent state transform `V = e^{−x₀D̲} ∘ e^{Δ/2}` for ℂₘ-valued functions.
//!
//! `V` sends square-integrable Clifford-valued functions on ℝᵐ (or the torus
//! 𝕋ᵐ) to monogenic functions on ℝ × ℝᵐ, i.e. solutions of the Weyl equation
//! `(∂₀ + D̲)F = 0`. The crate computes it two independent ways and checks
//! the results against each other:
//!
//! * [`spectral`]: a Fourier multiplier on sampled data,
//! * [`ck`]: a truncated Cauchy-Kowalevski series on the exact class of
//!   [`GaussianPolynomial`]s.
//!
//! [`verify`] turns the unitarity, basis and intertwining properties of `V`
//! into executable checks, and [`torus`] handles the periodic case.

pub mod ck;
pub mod clifford;
pub mod error;
pub mod gaussian_poly;
pub mod quadrature;
pub mod spectral;
pub mod torus;
pub mod verify;

pub use clifford::{BladeIndex, Multivector, OneVector};
pub use error::{CstError, Result};
pub use gaussian_poly::GaussianPolynomial;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/clifford.md")]
    mod clifford {}
    #[doc = include_str!("../../../book/src/gaussian-polynomials.md")]
    mod gaussian_polynomials {}
    #[doc = include_str!("../../../book/src/spectral-path.md")]
    mod spectral_path {}
    #[doc = include_str!("../../../book/src/cauchy-kowalevski.md")]
    mod cauchy_kowalevski {}
    #[doc = include_str!("../../../book/src/torus.md")]
    mod torus {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
