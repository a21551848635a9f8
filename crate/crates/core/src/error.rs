use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid web parameters: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("radius {rho} outside [0, {radius}]")]
    OutOfDomain { rho: f64, radius: f64 },
    #[error("surface mass density is singular at rho = {rho}")]
    Singular { rho: f64 },
    #[error("cannot parse web parameters: {0}")]
    Parse(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("resolution {got} below the minimum of {min} nodes")]
    Resolution { got: usize, min: usize },
    #[error("{requested} modes requested but the grid resolves at most {capacity}")]
    Capacity { requested: usize, capacity: usize },
    #[error("failed to bracket eigenvalue {index} of class n = {n}")]
    Bracket { n: usize, index: usize },
    #[error("non-finite coefficient data in the Liouville map at rho = {rho}")]
    NonIntegrable { rho: f64 },
    #[error("mode (n = {n}, m = {m}) has near-zero norm")]
    DegenerateMode { n: usize, m: usize },
    #[error("functions sampled on {got} nodes, grid has {expected}")]
    GridMismatch { got: usize, expected: usize },
    #[error("angular index n = {0} must be >= 1 for the singular classes")]
    AngularIndex(usize),
    #[error("mode count must be at least 1")]
    EmptyRequest,
}

#[derive(Debug, Error)]
pub enum ForwardError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("eigenvalue must be positive, got {0}")]
    NonPositiveEigenvalue(f64),
    #[error("source field is not finite at (rho = {rho}, theta = {theta})")]
    NonFiniteSource { rho: f64, theta: f64 },
    #[error("query ({rho}, {theta}, {t}) outside [0, {radius}] x [0, 2pi] x [0, {duration}]")]
    QueryOutOfRange { rho: f64, theta: f64, t: f64, radius: f64, duration: f64 },
    #[error("coefficients truncated at (n_theta = {coeff_theta}, n_rad = {coeff_rad}) do not fit basis (n_theta = {basis_theta}, n_rad = {basis_rad})")]
    Truncation { coeff_theta: usize, coeff_rad: usize, basis_theta: usize, basis_rad: usize },
    #[error("invalid time profile: {0}")]
    TimeProfile(String),
    #[error("invalid ring specification: {0}")]
    Ring(String),
}

#[derive(Debug, Error)]
pub enum InverseError {
    #[error("need at least {need} time samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error(
        "|g(0)| = {g0:e} is below {threshold:e} * max|g|; the source cannot be identified \
         unless the load is active at the onset (g(0) != 0)"
    )]
    VanishingOnset { g0: f64, threshold: f64 },
    #[error("time grids differ: measurement dt = {measurement}, load profile dt = {profile}")]
    TimeGridMismatch { measurement: f64, profile: f64 },
    #[error("{angles} sensor angles cannot resolve harmonics up to n = {n_theta} (need {need})")]
    Aliasing { angles: usize, n_theta: usize, need: usize },
    #[error(
        "sine design matrix condition number {condition:e} exceeds cap {cap:e}; \
         observe for longer than {duration} or enable ridge regularization"
    )]
    IllConditioned { condition: f64, cap: f64, duration: f64 },
    #[error("truncation (n_theta = {n_theta}, n_rad = {n_rad}) exceeds the basis")]
    Truncation { n_theta: usize, n_rad: usize },
    #[error("regularization weight must be >= 0, got {0}")]
    Regularization(f64),
    #[error("series length mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Forward(#[from] ForwardError),
}

/// Pipeline stage names used to tag errors raised by [`crate::inverse::invert`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Validation,
    TimeDerivative,
    Deconvolution,
    AngularDecomposition,
    AmplitudeFit,
    CoefficientRecovery,
    FieldReconstruction,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Validation => "validation",
            Stage::TimeDerivative => "time derivative",
            Stage::Deconvolution => "Volterra deconvolution",
            Stage::AngularDecomposition => "angular decomposition",
            Stage::AmplitudeFit => "amplitude fit",
            Stage::CoefficientRecovery => "coefficient recovery",
            Stage::FieldReconstruction => "field reconstruction",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
#[error("inversion failed during {stage}: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: InverseError,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("config: {0}")]
    Config(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-level error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Forward(#[from] ForwardError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Inverse(#[from] InverseError),
    #[error(transparent)]
    Io(#[from] IoError),
}

impl Error {
    /// Process exit code: 1 for numerical failures, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Model(_) | Error::Io(_) => 2,
            Error::Spectral(SpectralError::Model(_)) => 2,
            Error::Spectral(_) => 1,
            Error::Forward(ForwardError::Spectral(SpectralError::Model(_)))
            | Error::Forward(ForwardError::TimeProfile(_))
            | Error::Forward(ForwardError::Ring(_))
            | Error::Forward(ForwardError::QueryOutOfRange { .. }) => 2,
            Error::Forward(_) => 1,
            Error::Pipeline(p) => inverse_code(&p.source),
            Error::Inverse(e) => inverse_code(e),
        }
    }
}

fn inverse_code(e: &InverseError) -> i32 {
    match e {
        InverseError::VanishingOnset { .. }
        | InverseError::TimeGridMismatch { .. }
        | InverseError::Aliasing { .. }
        | InverseError::Truncation { .. }
        | InverseError::Regularization(_)
        | InverseError::Shape(_)
        | InverseError::TooFewSamples { .. } => 2,
        InverseError::IllConditioned { .. } | InverseError::Forward(_) => 1,
    }
}
