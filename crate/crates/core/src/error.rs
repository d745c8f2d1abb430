use thiserror::Error;

/// Errors raised by distribution construction, simulation and the asymptotic theory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid initial condition: {0}")]
    InvalidInitialCondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// R0 <= 1 where a supercritical regime is required.
    #[error("subcritical: R0 = {r0:.6} <= 1, no giant outbreak/component")]
    Subcritical { r0: f64 },

    /// The denominator of h(z) vanishes and the variance diverges.
    #[error("near-critical: variance diverges (|1 - pI f''(z)/mu| = {denominator:.3e})")]
    NearCritical { denominator: f64 },

    #[error("theorem condition violated: {0}")]
    ConditionViolated(String),

    #[error("step called with no infective half-edge")]
    NoInfectiveHalfEdge,

    #[error("quadrature did not converge: estimate {estimate:.6e}, error {error:.3e} after {intervals} intervals")]
    QuadratureNonConvergence {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("instance too large for exact enumeration: {half_edges} half-edges (max {max})")]
    InstanceTooLarge { half_edges: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
