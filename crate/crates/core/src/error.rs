use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An operation that needs at least one point was given an empty
    /// distribution.
    #[error("distribution is empty")]
    EmptyDistribution,

    /// An operation that quantifies over nonzero points found none, or too
    /// few of them.
    #[error("need at least {need} nonzero points, found {found}")]
    TooFewNonzeroPoints { need: usize, found: usize },

    /// `scale` requires a strictly positive factor.
    #[error("scale factor must be positive and finite, got {0}")]
    InvalidScale(f64),

    /// `difference(w, z)` requires `z ⊂ w`; reports one violating point.
    #[error("not a sub-distribution: point {re}{im:+}i has multiplicity {have} in the minuend but {need} in the subtrahend")]
    NotIncluded { re: f64, im: f64, have: u64, need: u64 },

    /// `upper_density_estimate` requires `0 < r_min < max |z|`.
    #[error("r_min = {r_min} is outside (0, {max_modulus}) (max modulus of the distribution)")]
    RMinOutOfRange { r_min: f64, max_modulus: f64 },

    /// Interval queries require `0 < r < R`.
    #[error("invalid interval: require 0 < r < R, got r = {r}, R = {big_r}")]
    InvalidInterval { r: f64, big_r: f64 },

    /// Tail statistics take a fraction in `(0, 1]`.
    #[error("tail fraction must lie in (0, 1], got {0}")]
    InvalidTailFraction(f64),

    /// The split threshold of `tail_split` must lie in `(0, 1]`.
    #[error("separation threshold must lie in (0, 1], got {0}")]
    InvalidSeparationThreshold(f64),

    /// A factor list does not describe a valid (nonzero, entire) model.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// An operation rejecting origin points was given one.
    #[error("{context}: the distribution must not contain the origin")]
    OriginNotAllowed { context: &'static str },

    /// A parameter fell outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Quadrature over an unbounded interval is not supported.
    #[error("quadrature requires a finite upper endpoint, got R = +inf")]
    UnboundedQuadrature,

    /// The integrand evaluated to a non-finite value away from every hinted
    /// singularity.
    #[error("integrand is not finite at y = {ordinate} (no singular hint nearby)")]
    NonFiniteIntegrand { ordinate: f64 },

    /// Adaptive refinement ran out of panels before reaching the tolerance.
    #[error("quadrature used more than {max} panels without reaching the tolerance")]
    PanelLimit { max: usize },

    /// The dyadic grid retains fewer than three usable levels.
    #[error("degenerate grid: only {usable} of {requested} dyadic levels fit under the data cap {cap}; enlarge the truncation or lower r0/levels")]
    DegenerateGrid { usable: u32, requested: u32, cap: f64 },

    /// Witness assembly could not produce a valid scaling constant.
    #[error("witness assembly failed: {0}")]
    Assembly(String),
}
