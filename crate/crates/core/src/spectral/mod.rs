//! Vibration spectrum of the web: radial eigenproblems per angular class,
//! the Liouville change of variables, and the assembled modal basis.

pub mod asymptotics;
mod basis;
mod grid;
mod solver;
pub mod tridiag;

pub use basis::{
    min_gap, normalize_basis, spectrum_gap_diagnostic, GapEntry, ModalBasis, Orthonormality, DEFAULT_NODES,
};
pub use grid::{
    build_liouville_transform, inner_product_gamma, inner_product_gamma_m, liouville_length, GridKind,
    LiouvilleTransform, RadialGrid, SingularPart, MIN_RESOLUTION,
};
pub use solver::{
    capacity, center_condition_residual, solve_radial, solve_radial_n, solve_radial_n0, RadialEigenpair,
    SpectralOptions,
};
