//! Flat run configuration shared by every subcommand.
//!
//! Precedence: built-in defaults, then the TOML file, then command-line flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{ModelKind, Valley};
use crate::spectral::{DEFAULT_GROUP_TOL, MAX_FIT_TAU};
use crate::units::{ConstantsSet, UnitSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Both,
}

impl OutputFormat {
    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ModelChoice {
    #[default]
    Dirac,
    PaperLabeled,
}

fn parse_enum<T: for<'de> Deserialize<'de>>(s: &str, what: &str) -> std::result::Result<T, String> {
    T::deserialize(serde::de::value::StrDeserializer::<serde::de::value::Error>::new(s))
        .map_err(|_| format!("unknown {what} '{s}'"))
}

macro_rules! from_str_via_serde {
    ($t:ty, $what:literal) => {
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                parse_enum(s, $what)
            }
        }
    };
}

from_str_via_serde!(OutputFormat, "format");
from_str_via_serde!(ModelChoice, "model");
from_str_via_serde!(UnitSystem, "unit system");
from_str_via_serde!(ConstantsSet, "constants set");
from_str_via_serde!(Valley, "valley");

/// Every key the configuration file accepts. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub out: PathBuf,
    pub format: OutputFormat,
    pub units: UnitSystem,
    pub constants: ConstantsSet,
    pub ncut: usize,
    pub model: ModelChoice,
    pub valley: Valley,
    /// Tesla; used with physical units.
    pub field: f64,
    /// Θ: `l_B²` in natural units, m² in physical units.
    pub theta: f64,
    /// τ: `l_B⁻²` in natural units, m⁻² in physical units.
    pub tau: f64,
    pub max_level: usize,
    pub group_tol: f64,
    pub level: i64,
    pub tau_samples: Vec<f64>,
    pub cutoffs: Vec<usize>,
    pub algebra_tol: f64,
    /// Energy resolution for the τ bound, eV.
    pub delta_e: f64,
    /// Overrides the magnetic length derived from `field`, meters.
    pub l_b: Option<f64>,
    pub e_f: f64,
    pub shift: f64,
    pub degeneracy: f64,
    pub eos_samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            out: PathBuf::from("out"),
            format: OutputFormat::Both,
            units: UnitSystem::Natural,
            constants: ConstantsSet::Codata,
            ncut: 40,
            model: ModelChoice::Dirac,
            valley: Valley::K,
            field: 1.0,
            theta: 0.0,
            tau: 0.0,
            max_level: 3,
            group_tol: DEFAULT_GROUP_TOL,
            level: 0,
            tau_samples: vec![1e-4, 2e-4, 4e-4, 7e-4, 1e-3],
            cutoffs: vec![10, 20, 40],
            algebra_tol: 1e-10,
            delta_e: 1e-3,
            l_b: None,
            e_f: 1.0,
            shift: -0.01,
            degeneracy: 2.0,
            eos_samples: 100,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn model_kind(&self) -> ModelKind {
        match self.model {
            ModelChoice::Dirac => ModelKind::Dirac(self.valley),
            ModelChoice::PaperLabeled => ModelKind::PaperLabeled,
        }
    }

    /// Checks that hold for every subcommand.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.ncut < 1 {
            return bad("ncut must be >= 1 (the spinor problem needs N_cut >= 1)".into());
        }
        for (name, v) in [
            ("field", self.field),
            ("group_tol", self.group_tol),
            ("algebra_tol", self.algebra_tol),
            ("delta_e", self.delta_e),
            ("e_f", self.e_f),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if let Some(l) = self.l_b {
            if !(l.is_finite() && l > 0.0) {
                return bad(format!("l_b must be positive, got {l}"));
            }
        }
        for (name, v) in [("theta", self.theta), ("tau", self.tau), ("shift", self.shift)] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        if !(self.degeneracy.is_finite() && self.degeneracy >= 1.0) {
            return bad(format!("degeneracy must be >= 1, got {}", self.degeneracy));
        }
        if self.tau_samples.iter().any(|t| !t.is_finite()) {
            return bad("tau_samples must be finite".into());
        }
        if self.cutoffs.is_empty() || self.cutoffs.windows(2).any(|w| w[0] >= w[1]) {
            return bad("cutoffs must be non-empty and strictly ascending".into());
        }
        if self.eos_samples == 0 {
            return bad("eos_samples must be >= 1".into());
        }
        Ok(())
    }

    /// Largest natural-unit τ the perturbative reports are meant for.
    pub fn perturbative_window() -> f64 {
        MAX_FIT_TAU
    }
}
