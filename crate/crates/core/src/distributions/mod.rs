//! Degree distributions with exact finite-sum generating functions, and
//! infectious-period distributions described by their Laplace transform.

mod degree;
mod period;
mod spec;

pub use degree::{
    falling_factorial, pgf_derivative, polylog, DegreeDistribution, GeneratingFunction, ReducedPgf,
    DEFAULT_TAIL_TOL,
};
pub use period::{
    CustomPeriod, InfectiousPeriod, PeriodKind, TransmissionParams, TransmissionSampler,
};
pub use spec::{parse_degree_spec, parse_period_spec};
