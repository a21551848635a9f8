//! Physical parameters of the orb-web membrane: thread densities, pre-stress
//! profiles and mass densities.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

use crate::error::ModelError;

/// Pre-stress profile of the web in its referential configuration.
///
/// Every variant satisfies the radial equilibrium `T_rho' = xi * T_theta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrestressProfile {
    /// Uniform circumferential pre-stress, affine radial pre-stress.
    Finished,
    /// Circumferential pre-stress proportional to the radial one with ratio `k`.
    Unfinished { k: f64 },
    /// Constant radial pre-stress and no circumferential pre-stress. Only used
    /// for constant-coefficient reference problems.
    Uniform,
}

/// Physical constants of the web. SI units throughout.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WebParameters {
    /// Radial threads per unit plane angle (1/rad).
    pub c_rho: f64,
    /// Circumferential threads per unit radial length (1/m).
    pub c_theta: f64,
    /// Linear mass density of a radial thread (kg/m).
    pub m_rho: f64,
    /// Linear mass density of a circumferential thread (kg/m).
    pub m_theta: f64,
    /// Radial pre-stress at the hub (N).
    pub t_hat: f64,
    /// Circumferential pre-stress constant of the finished web (N).
    pub t_script: f64,
    /// Web radius (m).
    pub radius: f64,
    /// Hub point mass (kg).
    pub hub_mass: f64,
    pub profile: PrestressProfile,
}

/// A single violated invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Flat key file layout: `c_rho, c_theta, m_rho, m_theta, t_hat, t_script,
/// radius, hub_mass, profile, k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WebParametersFile {
    pub c_rho: f64,
    pub c_theta: f64,
    pub m_rho: f64,
    pub m_theta: f64,
    pub t_hat: f64,
    #[serde(default)]
    pub t_script: f64,
    pub radius: f64,
    pub hub_mass: f64,
    pub profile: String,
    pub k: Option<f64>,
}

impl TryFrom<WebParametersFile> for WebParameters {
    type Error = ModelError;

    fn try_from(file: WebParametersFile) -> Result<Self, Self::Error> {
        let profile = match file.profile.as_str() {
            "finished" => PrestressProfile::Finished,
            "unfinished" => PrestressProfile::Unfinished {
                k: file.k.ok_or_else(|| {
                    ModelError::Invalid(vec![Violation {
                        field: "k",
                        message: "the unfinished profile requires k".into(),
                    }])
                })?,
            },
            "uniform" => PrestressProfile::Uniform,
            other => {
                return Err(ModelError::Invalid(vec![Violation {
                    field: "profile",
                    message: format!("unknown profile {other:?} (finished | unfinished | uniform)"),
                }]))
            }
        };
        if file.k.is_some() && !matches!(profile, PrestressProfile::Unfinished { .. }) {
            return Err(ModelError::Invalid(vec![Violation {
                field: "k",
                message: "k is only meaningful for the unfinished profile".into(),
            }]));
        }
        WebParameters {
            c_rho: file.c_rho,
            c_theta: file.c_theta,
            m_rho: file.m_rho,
            m_theta: file.m_theta,
            t_hat: file.t_hat,
            t_script: file.t_script,
            radius: file.radius,
            hub_mass: file.hub_mass,
            profile,
        }
        .validate()
    }
}

impl From<&WebParameters> for WebParametersFile {
    fn from(p: &WebParameters) -> Self {
        let (profile, k) = match p.profile {
            PrestressProfile::Finished => ("finished", None),
            PrestressProfile::Unfinished { k } => ("unfinished", Some(k)),
            PrestressProfile::Uniform => ("uniform", None),
        };
        WebParametersFile {
            c_rho: p.c_rho,
            c_theta: p.c_theta,
            m_rho: p.m_rho,
            m_theta: p.m_theta,
            t_hat: p.t_hat,
            t_script: p.t_script,
            radius: p.radius,
            hub_mass: p.hub_mass,
            profile: profile.to_string(),
            k,
        }
    }
}

impl WebParameters {
    /// Synthetic demonstration web with an order-one travel time across the
    /// radius. The numbers are illustrative, not measured.
    pub fn demo() -> Self {
        WebParameters {
            c_rho: 6.0,
            c_theta: 10.0,
            m_rho: 1.0,
            m_theta: 0.1,
            t_hat: 1.0,
            t_script: 0.009,
            radius: 1.0,
            hub_mass: 20.0,
            profile: PrestressProfile::Finished,
        }
    }

    /// Constant-coefficient web: `C_rho * T_rho = p0`, `gamma = r0`, no hub mass.
    pub fn constant_coefficients(p0: f64, r0: f64, radius: f64) -> Self {
        WebParameters {
            c_rho: 1.0,
            c_theta: 1.0,
            m_rho: r0,
            m_theta: 0.0,
            t_hat: p0,
            t_script: 0.0,
            radius,
            hub_mass: 0.0,
            profile: PrestressProfile::Uniform,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ModelError> {
        let file: WebParametersFile = toml::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
        file.try_into()
    }

    pub fn from_path(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path).map_err(|e| ModelError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&WebParametersFile::from(self)).expect("flat parameter table serializes")
    }

    /// `xi = C_theta / C_rho`.
    pub fn xi(&self) -> f64 {
        self.c_theta / self.c_rho
    }

    /// Check every invariant, collecting all violations.
    pub fn validate(self) -> Result<Self, ModelError> {
        let mut bad = Vec::new();
        let mut positive = |field: &'static str, v: f64| {
            if !(v.is_finite() && v > 0.0) {
                bad.push(Violation { field, message: format!("must be finite and > 0, got {v}") });
            }
        };
        positive("c_rho", self.c_rho);
        positive("c_theta", self.c_theta);
        positive("m_rho", self.m_rho);
        positive("t_hat", self.t_hat);
        positive("radius", self.radius);
        match self.profile {
            PrestressProfile::Finished => positive("t_script", self.t_script),
            PrestressProfile::Unfinished { k } => positive("k", k),
            PrestressProfile::Uniform => {}
        }
        let mut non_negative = |field: &'static str, v: f64| {
            if !(v.is_finite() && v >= 0.0) {
                bad.push(Violation { field, message: format!("must be finite and >= 0, got {v}") });
            }
        };
        non_negative("m_theta", self.m_theta);
        non_negative("hub_mass", self.hub_mass);
        if bad.is_empty() {
            Ok(self)
        } else {
            Err(ModelError::Invalid(bad))
        }
    }

    fn check_radius(&self, rho: f64) -> Result<(), ModelError> {
        if rho.is_finite() && (0.0..=self.radius).contains(&rho) {
            Ok(())
        } else {
            Err(ModelError::OutOfDomain { rho, radius: self.radius })
        }
    }

    /// Radial pre-stress `T_rho(rho)`.
    pub fn radial_prestress(&self, rho: f64) -> Result<f64, ModelError> {
        self.check_radius(rho)?;
        Ok(self.radial_prestress_unchecked(rho))
    }

    /// Circumferential pre-stress `T_theta(rho)`.
    pub fn circumferential_prestress(&self, rho: f64) -> Result<f64, ModelError> {
        self.check_radius(rho)?;
        Ok(self.circumferential_prestress_unchecked(rho))
    }

    /// `gamma(rho) = C_rho m_rho + rho C_theta m_theta`, the mass per unit
    /// plane angle and unit radius.
    pub fn linear_mass_density(&self, rho: f64) -> Result<f64, ModelError> {
        self.check_radius(rho)?;
        Ok(self.linear_mass_density_unchecked(rho))
    }

    /// Surface mass density `gamma(rho) / rho`; diverges at the hub.
    pub fn surface_mass_density(&self, rho: f64) -> Result<f64, ModelError> {
        self.check_radius(rho)?;
        if rho == 0.0 {
            return Err(ModelError::Singular { rho });
        }
        Ok(self.c_rho * self.m_rho / rho + self.c_theta * self.m_theta)
    }

    pub(crate) fn radial_prestress_unchecked(&self, rho: f64) -> f64 {
        match self.profile {
            PrestressProfile::Finished => self.t_hat + self.xi() * self.t_script * rho,
            PrestressProfile::Unfinished { k } => self.t_hat * (k * self.xi() * rho).exp(),
            PrestressProfile::Uniform => self.t_hat,
        }
    }

    #[cfg(test)]
    pub(crate) fn radial_prestress_slope(&self, rho: f64) -> f64 {
        self.xi() * self.circumferential_prestress_unchecked(rho)
    }

    pub(crate) fn circumferential_prestress_unchecked(&self, rho: f64) -> f64 {
        match self.profile {
            PrestressProfile::Finished => self.t_script,
            PrestressProfile::Unfinished { k } => k * self.radial_prestress_unchecked(rho),
            PrestressProfile::Uniform => 0.0,
        }
    }

    pub(crate) fn linear_mass_density_unchecked(&self, rho: f64) -> f64 {
        self.c_rho * self.m_rho + rho * self.c_theta * self.m_theta
    }

    /// Radial stiffness `p(rho) = C_rho T_rho(rho)`.
    pub(crate) fn stiffness(&self, rho: f64) -> f64 {
        self.c_rho * self.radial_prestress_unchecked(rho)
    }

    /// Coefficient of the Coulomb-like term, `C_theta T_theta(rho)`; the
    /// radial equation for angular index `n` carries `n^2 * this / rho`.
    pub(crate) fn hoop_stiffness(&self, rho: f64) -> f64 {
        self.c_theta * self.circumferential_prestress_unchecked(rho)
    }

    /// Stable digest of the parameter set, used to tie output files together.
    pub fn digest(&self) -> String {
        crate::io::digest_str(&self.to_toml_string())
    }
}
