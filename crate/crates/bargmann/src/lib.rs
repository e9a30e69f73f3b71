//! Phase-equivalent local potentials from rank-N separable potentials with
//! Laguerre form factors.
//!
//! The scattering problem for a finite-rank nonlocal potential is algebraic:
//! its Fredholm determinant is a rational function of the wave number k, so
//! the S-matrix admits a Bargmann parametrization with a finite set of pole
//! parameters {a_j}. This crate extracts those parameters from the
//! determinant (computed either directly or from the spectral data of the
//! truncated Hamiltonian), builds the degenerate Marchenko kernel in closed
//! form, solves the s-wave Marchenko equation per radius, and tabulates the
//! reconstructed local potential V(r). An independent Numerov integrator
//! checks that the reconstruction is phase-equivalent to the input.
//!
//! Pipeline: [`model::ModelPotential`] / [`model::SpectralData`]
//! → [`rational::RationalSMatrix`] → [`marchenko::LocalPotentialCurve`]
//! → [`schrodinger::compare_phases`].

pub mod marchenko;
pub mod model;
pub mod rational;
pub mod schrodinger;
pub mod series;
pub mod specfun;

pub use marchenko::{LocalPotentialCurve, MarchenkoKernel};
pub use model::{ModelPotential, PhysicalConstants, SpectralData};
pub use rational::{MonicPolynomial, RationalSMatrix};
pub use schrodinger::PhaseComparison;
pub use specfun::{BasisKind, BasisSpec, Branch, ThetaPoint};

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the pipeline.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("coupling matrix must be square and non-empty")]
    EmptyPotential,
    #[error("coupling matrix not symmetric: |V[{i},{j}] - V[{j},{i}]| = {delta:.3e}")]
    NonSymmetricCoupling { i: usize, j: usize, delta: f64 },
    #[error("scale parameter b must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("wave number must be positive, got {0}")]
    NonPositiveWaveNumber(f64),
    #[error("spectral weights not normalized: sum of Z^2 = {0} (must be 1 within 1e-6)")]
    UnnormalizedWeights(f64),
    #[error("eigenvalues not strictly increasing after sort: lambda[{0}] repeats")]
    DegenerateEigenvalues(usize),
    #[error("Fredholm determinant has a pole at k = -ib")]
    DeterminantPole,
    #[error("P-matrix pole: k^2 = {k2} coincides with lambda[{index}] = {lambda}")]
    PMatrixPole { index: usize, k2: f64, lambda: f64 },
    #[error("S-matrix denominator vanished at k = {0}")]
    VanishingDenominator(f64),
    #[error(
        "held-out residual {residual:.3e} at k = {node}: evaluator is not rational of degree {degree}"
    )]
    NotRational {
        residual: f64,
        node: f64,
        degree: usize,
    },
    #[error("leading coefficient {re}+{im}i deviates from 1 beyond 1e-10")]
    NotMonic { re: f64, im: f64 },
    #[error("numerator coefficients not conjugate-symmetric: residual {0:.3e}")]
    AsymmetricCoefficients(f64),
    #[error("bound-state parameter a = {0} (negative real): out of scope")]
    BoundStateParameter(f64),
    #[error("unpaired complex root a = {re}+{im}i")]
    UnpairedRoot { re: f64, im: f64 },
    #[error("parameter a = {re}+{im}i lies in the closed left half plane")]
    NonPhysicalParameter { re: f64, im: f64 },
    #[error("Marchenko reconstruction is s-wave only; got ell = {0}")]
    NotSWave(usize),
    #[error("Marchenko kernel coefficients not real: max |Im A| = {0:.3e} of scale {1:.3e}")]
    ComplexKernel(f64, f64),
    #[error("Marchenko linear system singular at r = {0}")]
    SingularSystem(f64),
    #[error("derivative not converged at r = {r}: Richardson ratio {ratio:.2} (expected ~16)")]
    DerivativeNonConvergence { r: f64, ratio: f64 },
    #[error("potential has not decayed at the grid end: |V({r})| = {v:.3e} MeV")]
    InsufficientDecay { r: f64, v: f64 },
    #[error("phase shift not converged under step halving at k = {k}: change {delta:.3e} rad")]
    StepNonConvergence { k: f64, delta: f64 },
    #[error("grid must be strictly increasing and positive")]
    InvalidGrid,
    #[error("schema violation: {0}")]
    Schema(String),
}
