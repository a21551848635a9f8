//! Forward problem: response of the web at rest to the load `g(t) f(rho, theta)`.

mod coefficients;
mod duhamel;
mod field;
mod project;
mod source;
mod time;

pub use coefficients::{Channel, ModalCoefficients};
pub use duhamel::{duhamel, DuhamelSeries};
pub use field::{
    evaluate_displacement, synthesize_ring, DisplacementField, MeasurementMeta, RingMeasurement, RingSpec,
};
pub use project::{
    energy_norm_squared, expansion_at, project_source, projection_angles, projection_error, reconstruct_at,
    reconstruct_field_from_coeffs, PolarField, PolarGrid,
};
pub use source::{Bump, SourceField};
pub use time::{differentiate, TimeProfile, TimeShape, MIN_SAMPLES};
