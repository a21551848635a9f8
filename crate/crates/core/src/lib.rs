//! Vibrations of a spider orb-web modelled as a pre-stressed fibrous membrane,
//! and recovery of an impact load from the response on a small ring around
//! the hub.
//!
//! The pieces, in pipeline order:
//!
//! * [`model`]: web parameters, pre-stress profiles, mass densities.
//! * [`spectral`]: radial eigenpairs for every angular class and the modal basis.
//! * [`forward`]: projection of a load onto the basis, Duhamel time stepping,
//!   displacement evaluation and synthetic ring measurements.
//! * [`inverse`]: Volterra deconvolution, angular separation, harmonic
//!   least squares and reconstruction of the load distribution.
//! * [`cli`]: config files and the `eigs`, `forward`, `invert`, `roundtrip` commands.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod forward;
pub mod inverse;
pub mod io;
pub mod model;
pub mod quadrature;
pub mod spectral;
pub mod spline;

pub use error::Error;
pub use model::{PrestressProfile, WebParameters};
