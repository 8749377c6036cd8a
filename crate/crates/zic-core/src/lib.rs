//! Rate regions and constant-gap analysis for the two-user Gaussian
//! Z-interference channel with conferencing encoders.
//!
//! The channel is taken in standard form: receiver 1 sees only its own
//! transmitter, receiver 2 sees its own transmitter plus the cross signal
//! scaled by a gain `a`, and both noises have unit variance. The encoders
//! may exchange messages before transmission over orthogonal links of
//! capacities `c12` and `c21` bits per channel use.
//!
//! The crate provides four layers, each built on the previous one:
//!
//! * [`channel`]: parameter validation, the Gaussian capacity function,
//!   and the closed-form classification that picks an achievable scheme
//!   for a parameter tuple.
//! * [`polytope`]: exact polyhedral machinery shared by everything else,
//!   including Fourier-Motzkin elimination with LP-backed redundancy
//!   pruning and the two-dimensional rate-region geometry.
//! * [`bounds`] and [`schemes`]: the outer bound on the capacity region
//!   and the achievable inner regions, one constructor per scheme, each
//!   carrying its power allocation and (where applicable) the per-decoder
//!   constraint system it was projected from.
//! * [`analysis`]: gap measurement between outer and inner regions, grid
//!   sweeps that verify the per-regime gap claims, conferencing-capacity
//!   split optimization, and comparisons against the classical
//!   cognitive-relay baselines.
//!
//! All rates are in bits per channel use and all powers are linear (not
//! dB). Geometric comparisons default to an absolute tolerance of
//! [`DEFAULT_TOL`] bits.
//!
//! ## Example
//!
//! ```
//! use zic_core::{achievable_for, outer_bound, region_gap, ChannelParams};
//!
//! let params = ChannelParams::finite(10.0, 10.0, 1.0, 0.5, 0.5).unwrap();
//! let outer = outer_bound(&params).unwrap();
//! let inner = achievable_for(&params).unwrap();
//! let report = region_gap(&outer.region, &inner.region, inner.claimed_gap, 1e-6).unwrap();
//! assert!(report.pass);
//! ```

pub mod analysis;
pub mod bounds;
pub mod channel;
pub mod polytope;
pub mod schemes;

pub use analysis::{
    compare_to_crzc, optimize_split, region_gap, verify_claims, CrzcComparison, FacetDeltas,
    GapReport, SplitObjective, SplitResult, SweepGrid, SweepSummary, GAP_TOL,
};
pub use bounds::{
    crzc_type1_capacity, crzc_type2_outer_strong, crzc_type2_region, outer_bound, Envelope2,
    OuterBound,
};
pub use channel::{
    cap, cap_inv, classify_regime, classify_unidirectional_relay_case, ChannelParams,
    LinkCapacity, Regime, RelayCase,
};
pub use polytope::{HalfspaceSystem, Inequality, RateRegion2};
pub use schemes::{
    achievable_for, scheme_for_regime, scheme_relay_common, scheme_relay_noncoop,
    scheme_relay_private_common, scheme_zero_forcing, PowerAllocation, RawDecoderSystem,
    SchemeKind, SchemeOutput,
};

/// Absolute tolerance, in bits, used by geometric comparisons when no
/// explicit tolerance is passed.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Errors produced across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter failed validation (negative power, NaN, bad grid, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A scheme constructor was called outside the regime it is defined in.
    #[error("scheme applied outside its regime: {0}")]
    RegimeMismatch(String),
    /// A variable name was not found in a constraint system.
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    /// An operation that needs a bounded region got an unbounded one.
    #[error("rate region is unbounded: {0}")]
    UnboundedRegion(String),
    /// The internal linear-program solver failed or hit its safety fuse.
    #[error("linear program failed: {0}")]
    Lp(String),
    /// An inner region escaped its outer bound, which signals a scheme bug.
    #[error("achievable region not contained in outer bound: {0}")]
    NotContained(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
