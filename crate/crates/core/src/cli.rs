//! Run configuration and the `eigs`, `forward`, `invert` and `roundtrip`
//! commands. Each command reads a TOML config, writes its files under an
//! output directory and returns a summary.
//!
//! ```toml
//! [web]            # flat web parameters
//! [grid]           # nodes, n_theta, n_rad
//! [forward]        # load, duration, dt, impact, ring, noise, seed, snapshots
//! [inverse]        # reconstruction settings and noise sweep levels
//! [output]         # dir
//! ```

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, IoError, ModelError};
use crate::forward::{
    project_source, reconstruct_field_from_coeffs, synthesize_ring, Bump, DisplacementField, ModalCoefficients,
    PolarField, PolarGrid, RingMeasurement, RingSpec, SourceField, TimeProfile, TimeShape,
};
use crate::inverse::{invert, recommended_dt, recommended_duration, ReconstructionConfig, ReconstructionResult};
use crate::io;
use crate::model::{WebParameters, WebParametersFile};
use crate::spectral::{liouville_length, spectrum_gap_diagnostic, GapEntry, ModalBasis, Orthonormality, DEFAULT_NODES};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub web: WebParametersFile,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub forward: ForwardSection,
    #[serde(default)]
    pub inverse: InverseSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub nodes: usize,
    pub n_theta: usize,
    pub n_rad: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection { nodes: DEFAULT_NODES, n_theta: 8, n_rad: 12 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForwardSection {
    pub load: TimeShape,
    /// Observation time; defaults to the condition-number rule.
    pub duration: Option<f64>,
    pub dt: Option<f64>,
    /// Gaussian bumps; defaults to one bump at `(R/3, pi/4)` of width `R/10`.
    pub impact: Option<Vec<Bump>>,
    pub ring_radii: Option<Vec<f64>>,
    pub ring_angles: Option<usize>,
    pub noise: f64,
    pub seed: u64,
    pub snapshot_times: Option<Vec<f64>>,
    pub snapshot_rho: usize,
    pub snapshot_theta: usize,
}

impl Default for ForwardSection {
    fn default() -> Self {
        ForwardSection {
            load: TimeShape::Exponential { amplitude: 1.0, rate: 1.0 },
            duration: None,
            dt: None,
            impact: None,
            ring_radii: None,
            ring_angles: None,
            noise: 0.0,
            seed: 0,
            snapshot_times: None,
            snapshot_rho: 25,
            snapshot_theta: 48,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InverseSection {
    pub n_theta: Option<usize>,
    pub n_rad: Option<usize>,
    pub ridge: Option<f64>,
    pub nodal_threshold: Option<f64>,
    pub derivative_order: Option<usize>,
    pub condition_cap: Option<f64>,
    pub onset_threshold: Option<f64>,
    pub out_rho: Option<usize>,
    pub out_theta: Option<usize>,
    pub tie_tolerance: Option<f64>,
    /// Noise levels relative to the peak displacement for the roundtrip sweep.
    pub noise_sweep: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Io(IoError::Config(msg.into()))
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, Error> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| config_error(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io(IoError::File { path: path.display().to_string(), source }))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Io(IoError::Config(msg)) => config_error(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Web parameters with violations reported under `web.<field>`.
    pub fn params(&self) -> Result<WebParameters, Error> {
        WebParameters::try_from(self.web.clone()).map_err(|e| match e {
            ModelError::Invalid(v) => config_error(v.iter().map(|v| format!("web.{v}")).collect::<Vec<_>>().join("; ")),
            other => Error::Model(other),
        })
    }

    /// Check every section, collecting all problems.
    pub fn validate(&self) -> Result<(), Error> {
        let params = self.params()?;
        let mut bad = Vec::new();
        let g = &self.grid;
        if g.nodes < crate::spectral::MIN_RESOLUTION {
            bad.push(format!("grid.nodes: need at least {}, got {}", crate::spectral::MIN_RESOLUTION, g.nodes));
        }
        if g.n_rad == 0 {
            bad.push("grid.n_rad: must be at least 1".into());
        }
        let f = &self.forward;
        for (key, v) in [("forward.duration", f.duration), ("forward.dt", f.dt)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    bad.push(format!("{key}: must be positive, got {v}"));
                }
            }
        }
        if !(f.noise >= 0.0 && f.noise.is_finite()) {
            bad.push(format!("forward.noise: must be >= 0, got {}", f.noise));
        }
        for b in f.impact.iter().flatten() {
            if !(b.width > 0.0) || !(b.rho >= 0.0 && b.rho <= params.radius) || !b.amplitude.is_finite() {
                bad.push(format!("forward.impact: invalid bump {b:?}"));
            }
        }
        for r in f.ring_radii.iter().flatten() {
            if !(*r > 0.0 && *r <= params.radius) {
                bad.push(format!("forward.ring_radii: {r} outside (0, {}]", params.radius));
            }
        }
        if let Some(a) = f.ring_angles {
            if a < 2 * g.n_theta + 1 {
                bad.push(format!("forward.ring_angles: {a} < 2 n_theta + 1 = {}", 2 * g.n_theta + 1));
            }
        }
        if f.snapshot_rho < 2 || f.snapshot_theta < 1 {
            bad.push("forward.snapshot_rho / snapshot_theta: grid too small".into());
        }
        let inv = &self.inverse;
        if inv.n_theta.is_some_and(|n| n > g.n_theta) {
            bad.push("inverse.n_theta: exceeds grid.n_theta".into());
        }
        if inv.n_rad.is_some_and(|n| n > g.n_rad || n == 0) {
            bad.push("inverse.n_rad: must be in 1..=grid.n_rad".into());
        }
        if inv.ridge.is_some_and(|r| !(r >= 0.0)) {
            bad.push("inverse.ridge: must be >= 0".into());
        }
        if inv.derivative_order.is_some_and(|o| o != 2 && o != 4) {
            bad.push("inverse.derivative_order: must be 2 or 4".into());
        }
        if inv.out_rho.is_some_and(|n| n < 2) || inv.out_theta.is_some_and(|n| n < 1) {
            bad.push("inverse.out_rho / out_theta: grid too small".into());
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(config_error(bad.join("; ")))
        }
    }

    /// Hash of the resolved configuration.
    pub fn digest(&self) -> String {
        io::digest_str(&serde_json::to_string(self).expect("config serializes"))
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        if let Some(s) = seed {
            self.forward.seed = s;
        }
        self
    }

    pub fn output_dir(&self, out: Option<&Path>) -> PathBuf {
        out.map(Path::to_path_buf).or_else(|| self.output.dir.clone()).unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn basis(&self) -> Result<ModalBasis, Error> {
        Ok(ModalBasis::build(&self.params()?, self.grid.nodes, self.grid.n_theta, self.grid.n_rad)?)
    }

    pub fn impacts(&self, radius: f64) -> Vec<Bump> {
        self.forward
            .impact
            .clone()
            .unwrap_or_else(|| vec![Bump { rho: radius / 3.0, theta: PI / 4.0, width: 0.1 * radius, amplitude: 1.0 }])
    }

    pub fn source(&self, radius: f64) -> SourceField {
        SourceField::Sum(self.impacts(radius).into_iter().map(SourceField::Bump).collect())
    }

    pub fn load_profile(&self, basis: &ModalBasis) -> Result<TimeProfile, Error> {
        let duration = self.forward.duration.unwrap_or_else(|| recommended_duration(basis));
        let dt = self.forward.dt.unwrap_or_else(|| recommended_dt(basis, self.grid.n_theta, self.grid.n_rad));
        Ok(TimeProfile::from_shape(self.forward.load, duration, dt)?)
    }

    pub fn ring(&self, radius: f64) -> RingSpec {
        let mut spec = RingSpec::default_for(radius, self.grid.n_theta);
        if let Some(r) = &self.forward.ring_radii {
            spec.radii = r.clone();
        }
        if let Some(a) = self.forward.ring_angles {
            spec.angles = a;
        }
        spec.noise = self.forward.noise;
        spec.seed = self.forward.seed;
        spec
    }

    pub fn reconstruction(&self) -> ReconstructionConfig {
        let d = ReconstructionConfig::default();
        let i = &self.inverse;
        ReconstructionConfig {
            n_theta: i.n_theta.unwrap_or(self.grid.n_theta),
            n_rad: i.n_rad.unwrap_or(self.grid.n_rad),
            ridge: i.ridge.unwrap_or(d.ridge),
            nodal_threshold: i.nodal_threshold.unwrap_or(d.nodal_threshold),
            derivative_order: i.derivative_order.unwrap_or(d.derivative_order),
            condition_cap: i.condition_cap.unwrap_or(d.condition_cap),
            onset_threshold: i.onset_threshold.unwrap_or(d.onset_threshold),
            out_rho: i.out_rho.unwrap_or(d.out_rho),
            out_theta: i.out_theta.unwrap_or(d.out_theta),
            tie_tolerance: i.tie_tolerance.unwrap_or(d.tie_tolerance),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModeRecord {
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub config_hash: String,
    pub params_hash: String,
    pub j: f64,
    pub nodes: usize,
    pub gaps: Vec<GapEntry>,
    pub orthonormality: Orthonormality,
    pub modes: Vec<ModeRecord>,
}

/// Eigenvalues, eigenfunctions and the spectrum summary.
pub fn cmd_eigs(cfg: &RunConfig, out: &Path) -> Result<SpectrumReport, Error> {
    let basis = cfg.basis()?;
    let report = SpectrumReport {
        config_hash: cfg.digest(),
        params_hash: basis.params.digest(),
        j: liouville_length(&basis.params)?,
        nodes: basis.grid.len(),
        gaps: spectrum_gap_diagnostic(&basis),
        orthonormality: basis.orthonormality()?,
        modes: basis
            .classes
            .iter()
            .flatten()
            .map(|p| ModeRecord { n: p.n, m: p.m, lambda: p.lambda, residual: p.residual })
            .collect(),
    };
    io::create_dir(out)?;
    io::write_eigenvalues(&out.join("eigenvalues.csv"), &basis)?;
    io::write_eigenfunctions(&out.join("eigenfunctions"), &basis)?;
    io::write_json(&out.join("spectrum.json"), &report)?;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientsFile<'a> {
    pub config_hash: String,
    pub params_hash: String,
    pub source: String,
    pub coefficients: &'a ModalCoefficients,
}

#[derive(Clone, Debug, Serialize)]
pub struct ForwardSummary {
    pub config_hash: String,
    pub seed: u64,
    pub duration: f64,
    pub dt: f64,
    pub steps: usize,
    pub peak_displacement: f64,
    pub warnings: Vec<String>,
}

struct ForwardRun {
    basis: ModalBasis,
    g: TimeProfile,
    source: SourceField,
    coeffs: ModalCoefficients,
    measurement: RingMeasurement,
}

fn run_forward(cfg: &RunConfig) -> Result<ForwardRun, Error> {
    let basis = cfg.basis()?;
    let g = cfg.load_profile(&basis)?;
    let source = cfg.source(basis.params.radius);
    let coeffs = project_source(&source, &basis)?;
    let measurement = synthesize_ring(&basis, &coeffs, &g, &cfg.ring(basis.params.radius))?;
    Ok(ForwardRun { basis, g, source, coeffs, measurement })
}

fn snapshot_times(cfg: &RunConfig, g: &TimeProfile) -> Vec<f64> {
    cfg.forward.snapshot_times.clone().unwrap_or_else(|| (0..5).map(|k| g.time(k * (g.len() - 1) / 4)).collect())
}

fn write_snapshots(path: &Path, run: &ForwardRun, cfg: &RunConfig) -> Result<(), Error> {
    let field = DisplacementField::new(&run.basis, &run.coeffs, &run.g)?;
    let grid = PolarGrid::uniform(run.basis.params.radius, cfg.forward.snapshot_rho, cfg.forward.snapshot_theta);
    let mut rows = Vec::new();
    for t in snapshot_times(cfg, &run.g) {
        for &r in &grid.rho {
            for &th in &grid.theta {
                rows.push([t, r, th, field.at(r, th, t)?]);
            }
        }
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| IoError::Csv(e.to_string()))?;
    w.write_record(["time", "rho", "theta", "u"]).map_err(|e| IoError::Csv(e.to_string()))?;
    for r in rows {
        w.write_record(r.iter().map(|v| v.to_string())).map_err(|e| IoError::Csv(e.to_string()))?;
    }
    w.flush().map_err(|source| IoError::File { path: path.display().to_string(), source })?;
    Ok(())
}

fn source_field(source: &SourceField, grid: &PolarGrid) -> PolarField {
    PolarField {
        grid: grid.clone(),
        values: grid.rho.iter().map(|&r| grid.theta.iter().map(|&t| source.value(r, t)).collect()).collect(),
    }
}

/// Synthetic ring measurement, displacement snapshots, source samples and
/// modal coefficients.
pub fn cmd_forward(cfg: &RunConfig, out: &Path) -> Result<ForwardSummary, Error> {
    let run = run_forward(cfg)?;
    let hash = cfg.digest();
    io::create_dir(out)?;
    io::write_measurement(&out.join("measurement.csv"), &run.measurement, &hash)?;
    write_snapshots(&out.join("snapshots.csv"), &run, cfg)?;
    let recon = cfg.reconstruction();
    let grid = PolarGrid::uniform(run.basis.params.radius, recon.out_rho, recon.out_theta);
    io::write_field(&out.join("source.csv"), &source_field(&run.source, &grid), "f")?;
    io::write_json(
        &out.join("coefficients.json"),
        &CoefficientsFile {
            config_hash: hash.clone(),
            params_hash: run.basis.params.digest(),
            source: run.source.support(),
            coefficients: &run.coeffs,
        },
    )?;
    Ok(ForwardSummary {
        config_hash: hash,
        seed: cfg.forward.seed,
        duration: run.g.duration(),
        dt: run.g.dt,
        steps: run.g.len(),
        peak_displacement: run.measurement.max_abs(),
        warnings: run.measurement.meta.warnings.clone(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InvertReport {
    pub config_hash: String,
    pub measurement_params_hash: String,
    pub params_hash: String,
    pub warnings: Vec<String>,
    pub gaps: Vec<GapEntry>,
    pub result: ReconstructionResult,
}

fn invert_measurement(
    cfg: &RunConfig,
    basis: &ModalBasis,
    g: &TimeProfile,
    m: &RingMeasurement,
) -> Result<ReconstructionResult, Error> {
    Ok(invert(m, basis, g, &cfg.reconstruction())?)
}

/// Reconstruct the load from a measurement file.
pub fn cmd_invert(cfg: &RunConfig, measurement: &Path, out: &Path) -> Result<InvertReport, Error> {
    let m = io::read_measurement(measurement)?;
    let basis = cfg.basis()?;
    let params_hash = basis.params.digest();
    let g = TimeProfile::on_grid(cfg.forward.load, m.dt, m.steps)?;
    let mut warnings = m.meta.warnings.clone();
    if m.meta.params_hash != params_hash {
        warnings.push("measurement was synthesized for different web parameters".into());
    }
    let result = invert_measurement(cfg, &basis, &g, &m)?;
    let report = InvertReport {
        config_hash: cfg.digest(),
        measurement_params_hash: m.meta.params_hash.clone(),
        params_hash,
        warnings,
        gaps: spectrum_gap_diagnostic(&basis),
        result,
    };
    io::create_dir(out)?;
    io::write_field(&out.join("reconstruction.csv"), &report.result.field, "f_hat")?;
    io::write_json(&out.join("report.json"), &report)?;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalizationCheck {
    pub estimate: Option<(f64, f64)>,
    pub target: (f64, f64),
    /// Distances in output-grid cells (radial, angular).
    pub cells: Option<(f64, f64)>,
    pub within_one_cell: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub level: f64,
    pub sigma: f64,
    pub coefficient_error: f64,
    pub field_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    pub config_hash: String,
    pub params_hash: String,
    pub seed: u64,
    pub duration: f64,
    pub dt: f64,
    pub steps: usize,
    pub gaps: Vec<GapEntry>,
    pub coefficient_error: f64,
    /// Against the reconstruction from the exact projected coefficients.
    pub field_error: f64,
    /// Against the configured load itself (includes truncation error).
    pub truncation_error: f64,
    pub localization: LocalizationCheck,
    pub max_condition: f64,
    pub skipped: usize,
    pub warnings: Vec<String>,
    pub noise_sweep: Vec<SweepRow>,
    pub sweep_monotone: Option<bool>,
    pub elapsed_seconds: f64,
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn relative_field_error(a: &PolarField, b: &PolarField) -> f64 {
    let norm = b.l2_norm();
    let diff = PolarField {
        grid: a.grid.clone(),
        values: a.values.iter().zip(&b.values).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect(),
    };
    if norm == 0.0 {
        diff.l2_norm()
    } else {
        diff.l2_norm() / norm
    }
}

/// Forward synthesis followed by inversion, with error metrics.
pub fn cmd_roundtrip(cfg: &RunConfig, out: &Path, noise_sweep: bool) -> Result<RoundtripReport, Error> {
    let start = Instant::now();
    let run = run_forward(cfg)?;
    let result = invert_measurement(cfg, &run.basis, &run.g, &run.measurement)?;
    let recon = cfg.reconstruction();
    let truth = run.coeffs.truncated(recon.n_theta, recon.n_rad);
    let grid = result.field.grid.clone();
    let truth_field = reconstruct_field_from_coeffs(&truth, &run.basis, &grid)?;
    let target_bump = cfg.impacts(run.basis.params.radius)[0];
    let cells = result.localization.peak.as_ref().map(|p| {
        (
            (p.rho - target_bump.rho).abs() / grid.rho_step(),
            angular_distance(p.theta, target_bump.theta) / grid.theta_step(),
        )
    });
    let localization = LocalizationCheck {
        estimate: result.localization.peak.as_ref().map(|p| (p.rho, p.theta)),
        target: (target_bump.rho, target_bump.theta),
        cells,
        within_one_cell: cells.is_some_and(|(a, b)| a <= 1.0 && b <= 1.0),
    };
    let mut sweep = Vec::new();
    if noise_sweep {
        let peak = run.measurement.max_abs();
        let levels = cfg.inverse.noise_sweep.clone().unwrap_or_else(|| vec![1e-4, 1e-3, 1e-2]);
        for level in levels {
            let mut spec = cfg.ring(run.basis.params.radius);
            spec.noise = level * peak;
            let noisy = synthesize_ring(&run.basis, &run.coeffs, &run.g, &spec)?;
            let r = invert_measurement(cfg, &run.basis, &run.g, &noisy)?;
            sweep.push(SweepRow {
                level,
                sigma: spec.noise,
                coefficient_error: r.coefficients.relative_error(&truth),
                field_error: relative_field_error(&r.field, &truth_field),
            });
        }
    }
    let sweep_monotone =
        (!sweep.is_empty()).then(|| sweep.windows(2).all(|w| w[1].coefficient_error >= w[0].coefficient_error));
    let report = RoundtripReport {
        config_hash: cfg.digest(),
        params_hash: run.basis.params.digest(),
        seed: cfg.forward.seed,
        duration: run.g.duration(),
        dt: run.g.dt,
        steps: run.g.len(),
        gaps: spectrum_gap_diagnostic(&run.basis),
        coefficient_error: result.coefficients.relative_error(&truth),
        field_error: relative_field_error(&result.field, &truth_field),
        truncation_error: relative_field_error(&result.field, &source_field(&run.source, &grid)),
        localization,
        max_condition: result.max_condition,
        skipped: result.skipped.len(),
        warnings: run.measurement.meta.warnings.clone(),
        noise_sweep: sweep,
        sweep_monotone,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    io::create_dir(out)?;
    io::write_field(&out.join("reconstruction.csv"), &result.field, "f_hat")?;
    io::write_json(&out.join("roundtrip.json"), &report)?;
    Ok(report)
}
