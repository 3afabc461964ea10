//! Closed-form outputs: upper bound on τ from the energy resolution, minimal
//! length and momentum, and T = 0 extreme-relativistic equations of state.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::units::Constants;

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be non-negative, got {v}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundInput {
    /// eV.
    pub delta_e: f64,
    /// m.
    pub l_b: f64,
    /// m/s.
    pub v_f: f64,
    /// eV·s.
    pub hbar: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundResult {
    /// `Γ = 1/(√2 l_B)`, m⁻¹.
    pub gamma: f64,
    /// m⁻².
    pub tau_max: f64,
    /// m⁻¹.
    pub sqrt_tau_max_m: f64,
    /// `√τ_max · ħc`, eV.
    pub sqrt_tau_max_ev: f64,
}

/// Largest τ whose second-order energy shift `(ħ v_F/Γ³) τ²` stays below `ΔE`:
/// `τ_max = √(ΔE Γ³ / (ħ v_F))`.
pub fn tau_upper_bound(input: &BoundInput, constants: &Constants) -> Result<BoundResult> {
    positive("delta_E", input.delta_e)?;
    positive("l_B", input.l_b)?;
    positive("v_F", input.v_f)?;
    positive("hbar", input.hbar)?;
    let gamma = 1.0 / (2f64.sqrt() * input.l_b);
    let tau_max = (input.delta_e * gamma.powi(3) / (input.hbar * input.v_f)).sqrt();
    let sqrt_tau_max_m = tau_max.sqrt();
    Ok(BoundResult {
        gamma,
        tau_max,
        sqrt_tau_max_m,
        sqrt_tau_max_ev: constants.inverse_meters_to_ev(sqrt_tau_max_m),
    })
}

/// `ΔX_min = Θ√τ √(1 + τ⟨Y⟩²)`.
pub fn minimal_length(theta: f64, tau: f64, y_mean: f64) -> Result<f64> {
    non_negative("theta", theta)?;
    non_negative("tau", tau)?;
    Ok(theta * tau.sqrt() * (1.0 + tau * y_mean * y_mean).sqrt())
}

/// `Δ(P_y)_min = ħ√τ √(1 + τ⟨Y⟩²)`.
pub fn minimal_momentum(tau: f64, y_mean: f64, hbar: f64) -> Result<f64> {
    non_negative("tau", tau)?;
    positive("hbar", hbar)?;
    Ok(hbar * tau.sqrt() * (1.0 + tau * y_mean * y_mean).sqrt())
}

/// T = 0 extreme-relativistic Fermi gas at Fermi momentum `p_f`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EosState {
    pub p_f: f64,
    pub n: f64,
    pub u: f64,
    pub mu: f64,
    pub p: f64,
    pub dp_dn: f64,
    pub gamma: f64,
}

pub fn eos(p_f: f64, g: f64, hbar: f64, c: f64) -> Result<EosState> {
    non_negative("p_F", p_f)?;
    if !(g.is_finite() && g >= 1.0) {
        return Err(Error::InvalidInput(format!("degeneracy g must be >= 1, got {g}")));
    }
    positive("hbar", hbar)?;
    positive("c", c)?;
    let h3 = hbar.powi(3);
    let n = g * p_f.powi(3) / (6.0 * PI * PI * h3);
    let u = g * c * p_f.powi(4) / (8.0 * PI * PI * h3);
    let mu = p_f * c;
    Ok(EosState {
        p_f,
        n,
        u,
        mu,
        p: u / 3.0,
        dp_dn: mu / 3.0,
        gamma: 4.0 / 3.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Less,
    #[serde(rename = "=")]
    Equal,
    #[serde(rename = ">")]
    Greater,
}

impl Relation {
    fn of(dnc: f64, commutative: f64) -> Self {
        match dnc.partial_cmp(&commutative) {
            Some(std::cmp::Ordering::Less) => Relation::Less,
            Some(std::cmp::Ordering::Greater) => Relation::Greater,
            _ => Relation::Equal,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Less => "<",
            Relation::Equal => "=",
            Relation::Greater => ">",
        }
    }
}

/// One quantity compared between the deformed (τ ≠ 0) and commutative branches.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderingRow {
    pub quantity: &'static str,
    pub commutative: f64,
    pub dnc: f64,
    /// `dnc ? commutative`, computed.
    pub relation: Relation,
    /// Direction claimed for a negative shift.
    pub claimed: Relation,
    /// `None` when the shift is zero and the claimed direction does not apply.
    pub consistent: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderingTable {
    pub e_f: f64,
    pub shift: f64,
    pub commutative: EosState,
    pub dnc: EosState,
    pub rows: Vec<OrderingRow>,
}

impl OrderingTable {
    pub fn row(&self, quantity: &str) -> Option<&OrderingRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }
}

/// Both equation-of-state branches at Fermi energies `E_F` and `E_F + shift`
/// (`p_F = E_F / c`) and the direction of every inequality.
pub fn ordering_table(e_f: f64, shift: f64, g: f64, hbar: f64, c: f64) -> Result<OrderingTable> {
    positive("E_F", e_f)?;
    if !shift.is_finite() || shift > 0.0 {
        return Err(Error::InvalidInput(format!(
            "the second-order shift must be <= 0, got {shift}"
        )));
    }
    if e_f + shift < 0.0 {
        return Err(Error::InvalidInput(format!(
            "shift {shift} exceeds the Fermi energy {e_f}"
        )));
    }
    let a = eos(e_f / c, g, hbar, c)?;
    let b = eos((e_f + shift) / c, g, hbar, c)?;
    use Relation::*;
    let entries: [(&'static str, f64, f64, Relation); 7] = [
        ("n", a.n, b.n, Less),
        ("u", a.u, b.u, Less),
        ("mu", a.mu, b.mu, Less),
        ("P", a.p, b.p, Less),
        ("dP/dn", a.dp_dn, b.dp_dn, Greater),
        ("gamma", a.gamma, b.gamma, Equal),
        ("dn/dP", 1.0 / a.dp_dn, 1.0 / b.dp_dn, Greater),
    ];
    let rows = entries
        .into_iter()
        .map(|(quantity, commutative, dnc, claimed)| {
            let relation = Relation::of(dnc, commutative);
            OrderingRow {
                quantity,
                commutative,
                dnc,
                relation,
                claimed,
                consistent: (shift < 0.0).then_some(relation == claimed),
            }
        })
        .collect();
    Ok(OrderingTable {
        e_f,
        shift,
        commutative: a,
        dnc: b,
        rows,
    })
}
