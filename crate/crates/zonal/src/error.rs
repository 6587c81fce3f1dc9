//! Crate-wide error type.
//!
//! Every fallible operation reports which precondition or internal guarantee
//! failed; messages name the violated hypothesis so that callers (and the CLI)
//! can surface actionable diagnostics.

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by kernel construction, transformation and evaluation.
#[derive(Debug, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    /// Jacobi parameters outside the admissible open half-lines.
    #[error("jacobi parameters require alpha > -1 and beta > -1, got alpha = {alpha}, beta = {beta}")]
    InvalidParams {
        /// Offending first index.
        alpha: f64,
        /// Offending second index.
        beta: f64,
    },

    /// An argument had to lie strictly inside `(-1, 1)`.
    #[error("argument t = {t} must lie in the open interval (-1, 1)")]
    OutsideOpenInterval {
        /// Offending argument.
        t: f64,
    },

    /// An argument had to lie in `[-1, 1]`.
    #[error("argument t = {t} must lie in the closed interval [-1, 1]")]
    OutsideClosedInterval {
        /// Offending argument.
        t: f64,
    },

    /// A numeric input was NaN or infinite.
    #[error("{what} must be finite, got {value}")]
    NonFinite {
        /// Which input was rejected.
        what: &'static str,
        /// Offending value.
        value: f64,
    },

    /// The three-term derivative relation is only stated for degree `n >= 1`.
    #[error("the derivative triple requires degree n >= 1; the constant term has derivative zero")]
    TripleDegreeZero,

    /// Geometric tails must have ratio strictly inside `(0, 1)`.
    #[error("geometric tail ratio must lie strictly in (0, 1), got {ratio}")]
    InvalidTailRatio {
        /// Offending ratio.
        ratio: f64,
    },

    /// Coefficient sequences must carry at least one stored value.
    #[error("coefficient sequence must store at least one value")]
    EmptyCoefficients,

    /// The derivative decomposition requires `2*alpha >= alpha + beta >= -1`.
    #[error(
        "decomposition hypothesis violated: parameters must satisfy \
         2*alpha >= alpha + beta >= -1, got alpha = {alpha}, beta = {beta}"
    )]
    ParameterRegion {
        /// First index at the decomposition level.
        alpha: f64,
        /// Second index at the decomposition level.
        beta: f64,
    },

    /// A nonnegative-coefficient hypothesis was violated.
    #[error("nonnegativity hypothesis violated: coefficient {index} is {value}")]
    NegativeCoefficient {
        /// Index of the first offending coefficient.
        index: usize,
        /// Its value.
        value: f64,
    },

    /// A kernel operation required a positive definite coefficient sequence.
    #[error(
        "positive definiteness hypothesis violated: coefficient {index} is negative, \
         so the Gangolli nonnegativity test fails"
    )]
    NotPositiveDefinite {
        /// First index failing the nonnegativity test.
        index: usize,
    },

    /// A re-expanded sequence dipped below the consistency floor.
    #[error(
        "internal consistency failure: re-expanded coefficient {index} is {value}, \
         below the -1e-10 floor guaranteed for descent re-expansions"
    )]
    ReexpansionInconsistent {
        /// Offending index.
        index: usize,
        /// Offending value.
        value: f64,
    },

    /// Quadrature produced NaN or infinity (singular integrand).
    #[error("quadrature produced a non-finite value; the integrand is not admissible")]
    QuadratureFailure,

    /// Derivative order exceeding the guaranteed smoothness class.
    #[error(
        "derivative order {requested} exceeds the guaranteed smoothness class \
         C^{max_order} of {space}"
    )]
    OrderBeyondSmoothness {
        /// Requested derivative order.
        requested: u32,
        /// Largest guaranteed order for the space.
        max_order: u32,
        /// Space descriptor.
        space: String,
    },

    /// Derivative order zero is not a derivative.
    #[error("derivative order must be at least 1")]
    ZeroOrder,

    /// The space admits no descent step.
    #[error("{space} admits no descent to a smaller space")]
    NoDescent {
        /// Space descriptor.
        space: String,
    },

    /// The space has no coordinate point model.
    #[error("{space} has no coordinate point model; only coefficient-level operations are supported")]
    NoPointModel {
        /// Space descriptor.
        space: String,
    },

    /// Invalid dimension for a space family.
    #[error("invalid dimension {dim} for {kind}: {constraint}")]
    InvalidDimension {
        /// Family name.
        kind: &'static str,
        /// Offending dimension.
        dim: u32,
        /// Human-readable constraint.
        constraint: &'static str,
    },

    /// Unrecognized space descriptor string.
    #[error("unknown space descriptor `{text}` (expected sphere:d, rp:d, cp:d, hp:d or cayley)")]
    UnknownSpace {
        /// Offending descriptor.
        text: String,
    },

    /// A point's coordinate count does not match the space's model.
    #[error("point has {got} coordinates but the model of {space} expects {expected}")]
    PointDimensionMismatch {
        /// Space descriptor.
        space: String,
        /// Expected coordinate count.
        expected: usize,
        /// Actual coordinate count.
        got: usize,
    },

    /// Points must be unit vectors.
    #[error("point is not on the unit sphere of its model: |x| = {norm} (tolerance 1e-12)")]
    PointNotUnit {
        /// Euclidean norm of the rejected vector.
        norm: f64,
    },

    /// Gram matrices need at least one point.
    #[error("at least one point is required")]
    EmptyPointSet,

    /// Kernel coefficients must live at the space's indices.
    #[error(
        "coefficient parameters (alpha = {got_alpha}, beta = {got_beta}) do not match \
         the indices of {space} (alpha = {want_alpha}, beta = {want_beta})"
    )]
    SpaceParamsMismatch {
        /// Space descriptor.
        space: String,
        /// Expected first index.
        want_alpha: f64,
        /// Expected second index.
        want_beta: f64,
        /// Supplied first index.
        got_alpha: f64,
        /// Supplied second index.
        got_beta: f64,
    },

    /// Convergence-triple entries violated a sign constraint.
    #[error("convergence triple rejects {what}[{index}] = {value}: {constraint}")]
    TripleEntry {
        /// Which sequence (`b`, `lambda` or `xi`).
        what: &'static str,
        /// Offending index (0-based within the stored prefix).
        index: usize,
        /// Offending value.
        value: f64,
        /// Constraint description.
        constraint: &'static str,
    },

    /// Convergence-triple sequences with inconsistent lengths.
    #[error(
        "convergence triple needs b to extend gap = {gap} entries past lambda/xi: \
         b has {b_len}, lambda has {lambda_len}, xi has {xi_len}"
    )]
    TripleLength {
        /// Stored length of `b`.
        b_len: usize,
        /// Stored length of `lambda`.
        lambda_len: usize,
        /// Stored length of `xi`.
        xi_len: usize,
        /// Recurrence gap.
        gap: usize,
    },

    /// Report horizons must cover at least two indices.
    #[error("diagnostic horizon must be at least 2, got {horizon}")]
    HorizonTooSmall {
        /// Offending horizon.
        horizon: usize,
    },

    /// Malformed serialized document.
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
}
