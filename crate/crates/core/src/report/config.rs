//! TOML run configuration. Every physical value comes from the file; unknown
//! keys are rejected.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{BathSpec, ModeCoupling, SpinPoly, SpinSymbol, TimeGrid};
use crate::linalg::CMatrix;
use crate::rep::{BaseOverrides, Preset};

/// Largest register accepted; the operators are dense `2ⁿ × 2ⁿ`.
pub const MAX_QUBITS: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("configuration has no [{0}] section")]
    Missing(&'static str),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub tolerances: Tolerances,
    pub bath: Option<BathSpec>,
    #[serde(default)]
    pub coupling: Vec<ModeCoupling>,
    pub system_hamiltonian: Option<SystemHamiltonian>,
    pub time: Option<TimeGrid>,
    pub initial: Option<InitialState>,
    pub evolve: Option<EvolveConfig>,
    pub sweep: Option<SweepGrid>,
    pub output: Option<OutputConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub preset: Preset,
    pub mu: f64,
    pub n_qubits: usize,
    pub verbatim_base: Option<VerbatimBase>,
}

/// Single-qubit base operators replacing the verbatim preset defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerbatimBase {
    pub k3: Option<MatrixEntry>,
    pub k1: Option<MatrixEntry>,
    pub k2: Option<MatrixEntry>,
}

/// A complex matrix as row-major real and (optional) imaginary parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub re: Vec<Vec<f64>>,
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixEntry {
    pub fn to_matrix(&self) -> Result<CMatrix, ConfigError> {
        let rows = self.re.len();
        let cols = self.re.first().map_or(0, Vec::len);
        if self.re.iter().any(|r| r.len() != cols) {
            return Err(ConfigError::Invalid("ragged matrix rows".into()));
        }
        if let Some(im) = &self.im {
            if im.len() != rows || im.iter().any(|r| r.len() != cols) {
                return Err(ConfigError::Invalid(
                    "imaginary part shape differs from real part".into(),
                ));
            }
        }
        Ok(CMatrix::from_fn(rows, cols, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            Complex64::new(self.re[i][j], im)
        }))
    }
}

/// `h_S` as a list of words in `K3`, `K+`, `K-` (empty word = identity).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemHamiltonian {
    pub terms: Vec<SystemTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemTerm {
    pub coefficient: [f64; 2],
    pub word: Vec<String>,
}

impl SystemHamiltonian {
    pub fn to_poly(&self) -> Result<SpinPoly, ConfigError> {
        let mut p = SpinPoly::zero();
        for t in &self.terms {
            let word = t
                .word
                .iter()
                .map(|s| match s.as_str() {
                    "K3" => Ok(SpinSymbol::K3),
                    "K+" => Ok(SpinSymbol::KPlus),
                    "K-" => Ok(SpinSymbol::KMinus),
                    other => Err(ConfigError::Invalid(format!("unknown spin symbol {other:?}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            p = p.plus(SpinPoly::word(
                Complex64::new(t.coefficient[0], t.coefficient[1]),
                &word,
            ));
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    pub register: RegisterInit,
    pub bath: BathInit,
}

/// `"singlet"`, `"triplet+"`, `"triplet0"`, `"triplet-"`, `"kernel"`, a
/// product pattern such as `"+-"`, explicit amplitudes, or a mixture of the
/// invariant basis projectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RegisterInit {
    Named(String),
    Amplitudes(Amplitudes),
    Mixture(KernelMixture),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Amplitudes {
    /// `[re, im]` pairs.
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelMixture {
    pub kernel_mixture: Vec<f64>,
}

/// `"ground"`, `{ thermal = β }`, `{ fock = [n₀, n₁, …] }` or amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BathInit {
    Named(String),
    Thermal(Thermal),
    Fock(Fock),
    Amplitudes(Amplitudes),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thermal {
    pub thermal: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fock {
    pub fock: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    /// The register state must be invariant; theorem checks are asserted.
    Invariant,
    /// Informational run; nothing is asserted.
    Contrast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub expect: Expectation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative singular-value cutoff for the joint kernel.
    pub kernel_rel_tol: f64,
    /// Largest `‖K v‖` accepted for an invariant register vector.
    pub invariance: f64,
    /// Largest `1 − fidelity` accepted in theorem runs.
    pub fidelity: f64,
    pub trace_distance: f64,
    /// Largest `‖ρ − PρP‖_F` accepted for an invariant register state.
    pub leakage: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    pub mu: Vec<f64>,
    pub n_qubits: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text).map_err(|e| match e {
            ConfigError::Parse { message, .. } => ConfigError::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: PathBuf::from("<string>"),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let m = &self.model;
        if !m.mu.is_finite() || m.mu == 0.0 {
            return Err(ConfigError::Invalid(format!(
                "mu must be finite and nonzero (got {})",
                m.mu
            )));
        }
        check_qubits(m.n_qubits)?;
        if m.verbatim_base.is_some() && m.preset != Preset::PaperVerbatim {
            return Err(ConfigError::Invalid(
                "verbatim_base requires preset \"paper-verbatim\"".into(),
            ));
        }
        self.overrides()?;
        let t = &self.tolerances;
        for (name, v) in [
            ("kernel_rel_tol", t.kernel_rel_tol),
            ("invariance", t.invariance),
            ("fidelity", t.fidelity),
            ("trace_distance", t.trace_distance),
            ("leakage", t.leakage),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "tolerance {name} must be positive (got {v})"
                )));
            }
        }
        if let Some(time) = &self.time {
            if !(time.t_max.is_finite() && time.t_max >= 0.0) || time.points == 0 {
                return Err(ConfigError::Invalid(
                    "time grid needs t_max ≥ 0 and at least one point".into(),
                ));
            }
        }
        if let Some(bath) = &self.bath {
            if self.coupling.len() > bath.modes() {
                return Err(ConfigError::Invalid(format!(
                    "{} coupling entries for {} bath modes",
                    self.coupling.len(),
                    bath.modes()
                )));
            }
        }
        if let Some(sweep) = &self.sweep {
            for &n in &sweep.n_qubits {
                check_qubits(n)?;
            }
            if sweep.mu.iter().any(|mu| !mu.is_finite() || *mu == 0.0) {
                return Err(ConfigError::Invalid(
                    "sweep mu values must be finite and nonzero".into(),
                ));
            }
        }
        if let Some(sh) = &self.system_hamiltonian {
            sh.to_poly()?;
        }
        Ok(())
    }

    pub fn overrides(&self) -> Result<BaseOverrides, ConfigError> {
        let Some(vb) = &self.model.verbatim_base else {
            return Ok(BaseOverrides::default());
        };
        let conv = |e: &Option<MatrixEntry>| e.as_ref().map(MatrixEntry::to_matrix).transpose();
        Ok(BaseOverrides {
            k3: conv(&vb.k3)?,
            k1: conv(&vb.k1)?,
            k2: conv(&vb.k2)?,
        })
    }

    pub fn system_poly(&self) -> Result<SpinPoly, ConfigError> {
        self.system_hamiltonian
            .as_ref()
            .map_or(Ok(SpinPoly::zero()), SystemHamiltonian::to_poly)
    }
}

fn check_qubits(n: usize) -> Result<(), ConfigError> {
    if n == 0 || n > MAX_QUBITS {
        return Err(ConfigError::Invalid(format!(
            "n_qubits must be in 1..={MAX_QUBITS} (got {n})"
        )));
    }
    Ok(())
}
