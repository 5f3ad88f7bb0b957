//! Parameter families: a base point plus the rule that turns a handful of
//! free parameters into a full [`ScenarioParams`] record.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Scenario, ScenarioParams};
use crate::pseudo_hermitian::{from_cavity_gain, from_mechanical_gain, Branch};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Active mechanics, passive cavities; Δ₁ follows from the third
    /// pseudo-Hermitian condition.
    MechanicalGain,
    /// Active cavity 1 with η = −1, γ_m = 0 and Δ₂ = Δ₁.
    CavityGainPT,
    /// No constraint; every field is taken as given.
    General,
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mech" | "mechanical" | "mechanical_gain" => Ok(FamilyKind::MechanicalGain),
            "pt" | "cavity_gain_pt" => Ok(FamilyKind::CavityGainPT),
            "general" => Ok(FamilyKind::General),
            other => Err(Error::Usage(format!(
                "unknown family '{other}' (expected mech, pt or general)"
            ))),
        }
    }
}

/// A free parameter of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Eta,
    Lambda,
    G1,
    /// Sets G₂ directly; λ becomes G₂/G₁.
    G2,
    Delta1,
    Delta2,
    GammaM,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::Eta => "eta",
            Param::Lambda => "lambda",
            Param::G1 => "g1",
            Param::G2 => "g2",
            Param::Delta1 => "delta1",
            Param::Delta2 => "delta2",
            Param::GammaM => "gamma_m",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "eta" => Param::Eta,
            "lambda" => Param::Lambda,
            "g1" => Param::G1,
            "g2" => Param::G2,
            "delta1" => Param::Delta1,
            "delta2" => Param::Delta2,
            "gamma_m" => Param::GammaM,
            other => return Err(Error::Usage(format!("unknown parameter '{other}'"))),
        })
    }
}

/// Base point of a parameter family. Fields a family derives (Δ₁ for the
/// mechanical-gain family, η for PT) are ignored when building records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Family<T> {
    pub kind: FamilyKind,
    pub eta: T,
    pub lambda: T,
    pub g1: T,
    /// Explicit G₂; overrides `lambda` when set.
    pub g2: Option<T>,
    pub delta1: T,
    pub delta2: T,
    pub gamma_m: T,
    pub branch: Branch,
}

impl<T: Real> Family<T> {
    pub fn mechanical_gain(eta: T, lambda: T, g1: T, branch: Branch) -> Self {
        Family {
            kind: FamilyKind::MechanicalGain,
            eta,
            lambda,
            g1,
            g2: None,
            delta1: T::zero(),
            delta2: T::zero(),
            gamma_m: -(T::one() + eta),
            branch,
        }
    }

    pub fn cavity_gain(delta1: T, lambda: T, g1: T) -> Self {
        Family {
            kind: FamilyKind::CavityGainPT,
            eta: -T::one(),
            lambda,
            g1,
            g2: None,
            delta1,
            delta2: delta1,
            gamma_m: T::zero(),
            branch: Branch::Plus,
        }
    }

    pub fn general(sp: &ScenarioParams<T>) -> Self {
        Family {
            kind: FamilyKind::General,
            eta: sp.eta,
            lambda: sp.lambda,
            g1: sp.g1_norm,
            g2: None,
            delta1: sp.delta1_norm,
            delta2: sp.delta2_norm,
            gamma_m: sp.gamma_m_norm,
            branch: Branch::Plus,
        }
    }

    /// Copy with one parameter replaced.
    pub fn with(&self, param: Param, value: T) -> Self {
        let mut f = *self;
        match param {
            Param::Eta => f.eta = value,
            Param::Lambda => {
                f.lambda = value;
                f.g2 = None;
            }
            Param::G1 => f.g1 = value,
            Param::G2 => f.g2 = Some(value),
            Param::Delta1 => f.delta1 = value,
            Param::Delta2 => f.delta2 = value,
            Param::GammaM => f.gamma_m = value,
        }
        f
    }

    pub fn get(&self, param: Param) -> T {
        match param {
            Param::Eta => self.eta,
            Param::Lambda => self.lambda,
            Param::G1 => self.g1,
            Param::G2 => self.g2.unwrap_or(self.lambda * self.g1),
            Param::Delta1 => self.delta1,
            Param::Delta2 => self.delta2,
            Param::GammaM => self.gamma_m,
        }
    }

    pub fn effective_lambda(&self) -> Result<T> {
        match self.g2 {
            None => Ok(self.lambda),
            Some(g2) if self.g1 != T::zero() => Ok(g2 / self.g1),
            Some(g2) if g2 == T::zero() => Ok(T::zero()),
            Some(_) => Err(Error::Domain(
                "G1 = 0 with G2 != 0 leaves lambda = G2/G1 undefined".into(),
            )),
        }
    }

    /// Builds the normalized record for this point.
    pub fn scenario(&self) -> Result<ScenarioParams<T>> {
        let lambda = self.effective_lambda()?;
        match self.kind {
            FamilyKind::MechanicalGain => {
                from_mechanical_gain(self.eta, lambda, self.g1, self.branch)
            }
            FamilyKind::CavityGainPT => Ok(from_cavity_gain(self.delta1, lambda, self.g1)),
            FamilyKind::General => {
                let sp = ScenarioParams {
                    scenario: Scenario::General,
                    ..ScenarioParams::general(
                        self.eta,
                        lambda,
                        self.g1,
                        self.delta1,
                        self.delta2,
                        self.gamma_m,
                    )
                };
                sp.validate()?;
                Ok(sp)
            }
        }
    }

    /// The branch recorded in EP reports; PT and general records have none.
    pub fn report_branch(&self) -> Option<Branch> {
        match self.kind {
            FamilyKind::MechanicalGain => Some(self.branch),
            _ => None,
        }
    }
}
