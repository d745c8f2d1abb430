//! Independent checks of the closed forms: quadrature of the variance
//! integrals, the fluid limit against a Runge–Kutta integration, and exact
//! enumeration of tiny configuration-model instances.

mod enumerate;
mod fluid;
mod variance;
mod verify;

pub use enumerate::{enumerate_final_size, EnumerationPeriod, MAX_ENUMERATION_HALF_EDGES};
pub use fluid::{fluid_consistency_check, DeterministicPath, FluidReport};
pub use variance::{
    first_integral_closed_form, j_integral, j_integral_closed_form, site_variance_by_quadrature,
    variance_by_quadrature, variance_by_quadrature_direct, QuadratureVariance, Sensitivity,
};
pub use verify::{
    default_enumeration_cases, default_grid, enumeration_check, quadrature_check, run_verification,
    EnumerationCase, EnumerationRecord, FluidRecord, GridPoint, QuadratureRecord, VerifyConfig,
    VerifyReport, QUADRATURE_REL_TOL,
};
