//! Numerical verification toolkit for the weight-k spectral theory of SU(2,1):
//! integral-transform chains, Plancherel densities, orbital integrals over
//! synthetic length spectra, zeta functions with their continuations, and the
//! contour-integral closed forms that tie them together.
//!
//! Every quantity is computed along at least two routes (closed form vs
//! quadrature, series vs integral, product vs log-derivative) and the crate's
//! public checks return [`report::VerificationReport`] records comparing them.

pub mod checks;
pub mod geometry;
pub mod operators;
pub mod plancherel;
pub mod quadrature;
pub mod report;
pub mod spectrum;
pub mod transforms;
pub mod zeta;

use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide numeric error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("series does not converge at z = {z} (|z| >= {limit})")]
    NonConvergent { z: Complex64, limit: f64 },
    #[error("hypergeometric parameter c = {c} is a non-positive integer")]
    PoleAtC { c: Complex64 },
    #[error("quadrature failed: requested {requested:.3e}, achieved {achieved:.3e}")]
    QuadratureFailure { value: f64, requested: f64, achieved: f64 },
    #[error("maximum subdivisions ({0}) exhausted")]
    MaxSubdivisions(usize),
    #[error("cannot certify infinite-interval tail: {0}")]
    UncertifiedTail(String),
    #[error("finite-difference step {0:.3e} underflows the supported range")]
    StepUnderflow(f64),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("rational test-function parameters violate 1 < Re a1 < Re a2 < Re b1 < Re b2")]
    ParameterOrdering,
    #[error("c2 = {0} is not a positive multiple of 3")]
    C2Invalid(i64),
    #[error("degenerate orbital denominator: norm {0} too close to 1")]
    DegenerateDenominator(f64),
    #[error("geometric-side tail cannot be bounded: {0}")]
    TailUnbounded(String),
    #[error("argument {arg} is within {dist:.3} of the pole lattice")]
    PoleProximity { arg: Complex64, dist: f64 },
    #[error("contour around {center} clashes with a pole at {pole}")]
    ContourPoleClash { center: Complex64, pole: Complex64 },
    #[error("endpoint singularity handling failed: {0}")]
    SingularityHandling(String),
    #[error("decay certificate missing or unusable: {0}")]
    DecayUncertified(String),
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shared shorthand for `num_complex::Complex64`.
pub type C64 = Complex64;
