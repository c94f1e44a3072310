//! A numerical laboratory for the constructive side of quantum no-go territory.
//!
//! Everything here works with dense complex linear algebra over small Hilbert
//! spaces: rays (rank-one projectors), Kraus-form channels with postselection
//! semantics, reference-calibrated superposition protocols, unambiguous
//! discrimination POVMs, steering-to-signaling counterfactuals, and the
//! overlap-amplification recursion that would collapse Grover's lower bound
//! if unknown-state reflections came for free.
//!
//! The crate is organized so that each impossibility claim is exercised as a
//! falsifiable numerical property: gauge invariance of the calibrated
//! superposition, the linear-independence criterion for unambiguous
//! discrimination, exact success-probability laws, growth bounds of the
//! nonlinear overlap recursion, and the circle geometry of fixed qubit
//! superposers.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything can be shared freely across threads. Randomness is always
//! explicit: every sampler takes a seed and produces a bit-stable stream.

pub mod bloch;
pub mod channels;
pub mod grover;
pub mod hilbert;
pub mod lab;
pub mod linalg;
pub mod nogo;
pub mod signaling;
pub mod superposer;

pub use hilbert::{DensityOperator, GramMatrix, Ray, StateVector};

/// Default absolute tolerance for validity checks on unit-scale quantities.
///
/// Double precision keeps rounding well below this for the dimensions the
/// laboratory targets (dense storage, dims up to a few thousand).
pub const DEFAULT_TOL: f64 = 1e-10;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

/// Errors shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input sequence")]
    EmptyInput,

    #[error("vector is not normalized: |norm - 1| = {deviation:e}")]
    NotNormalized { deviation: f64 },

    #[error("zero or numerically vanishing vector (norm = {norm:e})")]
    ZeroVector { norm: f64 },

    #[error("matrix fails {property} check: deviation {deviation:e} exceeds tolerance {tol:e}")]
    InvalidOperator {
        property: &'static str,
        deviation: f64,
        tol: f64,
    },

    #[error("reference overlap vanishes: |<chi|.>|^2 = {overlap:e} below threshold")]
    VanishingReferenceOverlap { overlap: f64 },

    #[error("overlap promise violated: expected {expected}, measured {measured}")]
    PromiseViolated { expected: f64, measured: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("family is linearly dependent (smallest singular value {sigma_min:e})")]
    LinearlyDependent { sigma_min: f64 },

    #[error("channel output is not rank-one (eigenvalue ratio {ratio:e})")]
    NotRankOne { ratio: f64 },

    #[error("degenerate normalization: {norm:e}")]
    DegenerateNormalization { norm: f64 },

    #[error("target probability {target} unreachable within {cap} rounds")]
    TargetUnreachable { target: f64, cap: usize },

    #[error("ensembles incompatible: {reason}")]
    EnsembleMismatch { reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Derives a per-stream seed from a master seed.
///
/// The scheme is a fixed counter construction: stream `k` receives
/// `splitmix64(master ^ (k + 1) * 0x9E3779B97F4A7C15)`. Parallel sweeps hand
/// each scenario its own stream index, so the emitted bytes do not depend on
/// worker count or evaluation order.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(master ^ (stream.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
