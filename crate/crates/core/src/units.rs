//! Physical constants sets and conversion between natural and physical units.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::PhysParams;

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ConstantsSet {
    /// Rounded values used for the quoted bound estimate: ħ = 6e-15 eV·s,
    /// ħc = 200 MeV·fm, l_B = 2.5e-8 m at 1 T.
    Paper,
    #[default]
    Codata,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    #[default]
    Natural,
    Physical,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub name: ConstantsSet,
    /// eV·s.
    pub hbar: f64,
    /// MeV·fm.
    pub hbar_c: f64,
    /// m/s.
    pub v_f: f64,
}

impl ConstantsSet {
    pub fn constants(self) -> Constants {
        match self {
            ConstantsSet::Paper => Constants {
                name: self,
                hbar: 6e-15,
                hbar_c: 200.0,
                v_f: 1e6,
            },
            ConstantsSet::Codata => Constants {
                name: self,
                hbar: 6.582_119_569e-16,
                hbar_c: 197.326_980_4,
                v_f: 1e6,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConstantsSet::Paper => "paper",
            ConstantsSet::Codata => "codata",
        }
    }
}

impl Constants {
    /// Magnetic length in meters for a field in tesla.
    ///
    /// CODATA: `√(ħ/(eB))`, i.e. `√(ħ[eV·s]/B)`. The rounded set uses its quoted
    /// `2.5e-8 m` at 1 T, scaled as `B^{-1/2}`.
    pub fn magnetic_length(&self, b_tesla: f64) -> Result<f64> {
        if !(b_tesla.is_finite() && b_tesla > 0.0) {
            return Err(Error::InvalidInput(format!("field must be positive, got {b_tesla} T")));
        }
        Ok(match self.name {
            ConstantsSet::Paper => 2.5e-8 / b_tesla.sqrt(),
            ConstantsSet::Codata => (self.hbar / b_tesla).sqrt(),
        })
    }

    /// Converts an inverse length in m⁻¹ to eV via `ħc`.
    pub fn inverse_meters_to_ev(&self, k: f64) -> f64 {
        // 1 m⁻¹ = 1e-15 fm⁻¹
        k * 1e-15 * self.hbar_c * 1e6
    }
}

impl PhysParams {
    /// Physical parameters (eV, m) for a field in tesla.
    pub fn from_field(b_tesla: f64, constants: &Constants, n_cut: usize) -> Result<Self> {
        Ok(Self {
            l_b: constants.magnetic_length(b_tesla)?,
            v_f: constants.v_f,
            hbar: constants.hbar,
            theta: 0.0,
            tau: 0.0,
            valley: crate::hamiltonian::Valley::K,
            n_cut,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::closed_form_spectrum;

    #[test]
    fn codata_magnetic_length() {
        let c = ConstantsSet::Codata.constants();
        let l = c.magnetic_length(1.0).unwrap();
        assert!((l - 2.5656e-8).abs() < 1e-11, "{l}");
        assert!((c.magnetic_length(4.0).unwrap() - l / 2.0).abs() < 1e-20);
        assert!(c.magnetic_length(0.0).is_err());
    }

    #[test]
    fn first_landau_level_at_one_tesla() {
        let c = ConstantsSet::Codata.constants();
        let p = PhysParams::from_field(1.0, &c, 4).unwrap();
        let (e, _) = closed_form_spectrum(1, &p);
        assert!((e - 0.0363).abs() < 1e-4, "{e}");
    }

    #[test]
    fn inverse_length_conversion() {
        let c = ConstantsSet::Paper.constants();
        // 1 fm⁻¹ ↔ 200 MeV
        assert!((c.inverse_meters_to_ev(1e15) - 2e8).abs() < 1e-6);
    }
}
