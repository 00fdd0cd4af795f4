//! Periodic traveling waves of the cubic derivative NLS and the quintic NLS,
//! and their spectral stability with respect to co-periodic perturbations.
//!
//! The library has two independent routes to a stability verdict:
//!
//! * **Closed form** ([`closedform`]): elliptic-function expressions for the
//!   wave mass, `∫ 1/φ²`, the pairing `⟨L₊⁻¹ φ, φ⟩`, and the Gram entry
//!   `D₁₁`, combined with the instability index count.
//! * **Direct spectra** ([`hillspec`]): Fourier-collocation discretization of
//!   the linearized (Hill) operators, dense symmetric eigensolves for Morse
//!   indices and kernels, kernel-complement solves for the full `D` matrix,
//!   and the eigenvalues of the Hamiltonian problem `J L`.
//!
//! [`classify`] merges both routes into a [`classify::StabilityReport`]; the
//! `hillwave` binary exposes point reports, slice scans, winding quantization
//! and a self-verification battery on the command line.

pub mod classify;
pub mod closedform;
pub mod elliptic;
pub mod hillspec;
pub mod scan;
pub mod verify;
pub mod waves;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument left the domain of an elliptic special function.
    #[error("elliptic domain error: {what} = {value}")]
    EllipticDomain { what: &'static str, value: f64 },

    /// Parameters outside the admissible (g, kappa, mu) region.
    #[error("inadmissible parameters: {0}")]
    Inadmissible(waves::Violation),

    /// Validated parameters still produced a non-positive root product.
    #[error("internal: root product {which} = {value} <= 0 after validation")]
    NonPositiveRootProduct { which: &'static str, value: f64 },

    /// The solvability denominator is too close to zero to trust the
    /// closed-form resolvent.
    #[error("near-degenerate solvability denominator: |{value:.3e}| < 1e-8 * {scale:.3e}")]
    DegenerateDenominator { value: f64, scale: f64 },

    /// `4∫1/φ² + ⟨L₊⁻¹φ,φ⟩` vanished; the reduced kernel would gain an
    /// extra element, contradicting the two-dimensional kernel.
    #[error("degenerate kernel margin: 4*inv_sq + pairing = {value:.3e}")]
    DegenerateKernelMargin { value: f64 },

    /// Right-hand side has a component along the kernel: the equation
    /// `op x = rhs` violates the Fredholm solvability condition.
    #[error("Fredholm violation: rhs has relative kernel component {defect:.3e} > {tol:.1e}")]
    FredholmViolation { defect: f64, tol: f64 },

    /// An eigenvalue sits within 2x of the kernel tolerance band, so the
    /// kernel dimension cannot be decided at this resolution.
    #[error("ambiguous kernel: eigenvalue {eigenvalue:.3e} within 2x of tolerance {tol:.3e}")]
    AmbiguousKernel { eigenvalue: f64, tol: f64 },

    /// A dense linear solve failed or left too large a residual.
    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    /// A bracketing/root-finding search failed.
    #[error("no root: {0}")]
    NoRoot(String),

    /// Generic invalid argument (grid sizes, ranges, config parsing).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
