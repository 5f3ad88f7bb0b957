//! Pseudo-Hermiticity constraints and the two constrained parameter families:
//! an active mechanical resonator with passive cavities, and an active
//! cavity 1 (the PT-symmetric case).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Scenario, ScenarioParams};
use crate::scalar::Real;

/// Residuals of the three pseudo-Hermiticity conditions (κ₂ = 1):
///
/// * r₁ = γ_m + (1 + η)
/// * r₂ = ηΔ₁ + Δ₂
/// * r₃ = (1 + ηλ²)G₁² + γ_m(Δ₁² + 1)η
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionResiduals<T> {
    pub r1: T,
    pub r2: T,
    pub r3: T,
}

impl<T: Real> ConditionResiduals<T> {
    pub fn max_abs(&self) -> T {
        self.r1.abs().max(self.r2.abs()).max(self.r3.abs())
    }
}

/// Sign of the detuning root Δ₁ = ±√(…) in the mechanical-gain family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    /// Negative detuning for symmetric cavities, positive otherwise.
    pub fn default_for_eta<T: Real>(eta: T) -> Self {
        if eta == T::one() {
            Branch::Minus
        } else {
            Branch::Plus
        }
    }
}

impl From<Branch> for i8 {
    fn from(b: Branch) -> i8 {
        match b {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Branch {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Branch::Plus),
            -1 => Ok(Branch::Minus),
            other => Err(format!("branch must be +1 or -1, got {other}")),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+1",
            Branch::Minus => "-1",
        })
    }
}

pub fn check_conditions<T: Real>(sp: &ScenarioParams<T>) -> ConditionResiduals<T> {
    let one = T::one();
    let d1 = sp.delta1_norm;
    ConditionResiduals {
        r1: sp.gamma_m_norm + (one + sp.eta),
        r2: d1 * sp.eta + sp.delta2_norm,
        r3: (one + sp.eta * sp.lambda * sp.lambda) * sp.g1_norm * sp.g1_norm
            + sp.gamma_m_norm * (d1 * d1 + one) * sp.eta,
    }
}

/// Smallest G₁ for which the mechanical-gain family has a real detuning:
/// √(η(1+η)/(1+ηλ²)).
pub fn feasible<T: Real>(eta: T, lambda: T) -> Result<T> {
    if !(eta > T::zero()) {
        return Err(Error::Domain(format!(
            "the mechanical-gain family needs eta > 0, got {eta}"
        )));
    }
    let one = T::one();
    Ok((eta * (one + eta) / (one + eta * lambda * lambda)).sqrt())
}

/// Mechanical-gain record with all three conditions enforced.
///
/// γ_m = −(1+η), Δ₂ = −ηΔ₁ and Δ₁ = branch·√((1+ηλ²)G₁²/(η(1+η)) − 1).
pub fn from_mechanical_gain<T: Real>(
    eta: T,
    lambda: T,
    g1_norm: T,
    branch: Branch,
) -> Result<ScenarioParams<T>> {
    let g1_min = feasible(eta, lambda)?;
    if !g1_norm.is_finite() || !lambda.is_finite() {
        return Err(Error::Domain("couplings must be finite".into()));
    }
    let one = T::one();
    let lead = (one + eta * lambda * lambda) * g1_norm * g1_norm / (eta * (one + eta));
    let mut radicand = lead - one;
    if radicand < T::zero() {
        // g1 computed as feasible(eta, lambda) may undershoot by an ulp
        if radicand >= -T::lit(8.0) * T::epsilon() * lead.max(one) {
            radicand = T::zero();
        } else {
            return Err(Error::Infeasible {
                g1: g1_norm.to_f64_lossy(),
                g1_min: g1_min.to_f64_lossy(),
            });
        }
    }
    let delta1 = branch.sign::<T>() * radicand.sqrt();
    Ok(ScenarioParams {
        eta,
        lambda,
        g1_norm,
        delta1_norm: delta1,
        delta2_norm: -eta * delta1,
        gamma_m_norm: -(one + eta),
        omega_m_offset: T::zero(),
        scenario: Scenario::MechanicalGain,
    })
}

/// PT-symmetric record: η = −1, γ_m = 0, Δ₂ = Δ₁.
///
/// The third condition reduces to (1 − λ²)G₁² = 0, so only λ = 1 gives a
/// pseudo-Hermitian matrix; other λ are accepted for exploration.
pub fn from_cavity_gain<T: Real>(delta1_norm: T, lambda: T, g1_norm: T) -> ScenarioParams<T> {
    ScenarioParams {
        eta: -T::one(),
        lambda,
        g1_norm,
        delta1_norm,
        delta2_norm: delta1_norm,
        gamma_m_norm: T::zero(),
        omega_m_offset: T::zero(),
        scenario: Scenario::CavityGainPT,
    }
}
