//! Parameter records and unit conventions.
//!
//! Everything downstream works in units of the cavity-2 rate κ₂ with the
//! mechanical frequency ω_m as the zero of the frequency axis. Eigenvalues are
//! therefore offsets from ω_m measured in κ₂.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Reduced Planck constant in SI units [J s].
pub const HBAR_SI: f64 = 1.054_571_817e-34;

/// Dimensional inputs as they appear in the laboratory frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams<T> {
    pub omega1: T,
    pub omega2: T,
    pub omega_m: T,
    pub omega0: T,
    pub g1: T,
    pub g2: T,
    pub p1: T,
    pub p2: T,
    pub kappa1: T,
    pub kappa2: T,
    pub gamma_m: T,
    pub alpha1: Complex<T>,
    pub alpha2: Complex<T>,
    pub beta: Complex<T>,
}

/// Dimensional effective rates of the linearized model: enhanced couplings,
/// effective detunings from ω_m and the signed loss rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveRates<T> {
    pub kappa1: T,
    pub kappa2: T,
    pub gamma_m: T,
    pub coupling1: T,
    pub coupling2: T,
    pub delta1: T,
    pub delta2: T,
    pub omega_m: T,
}

/// Which constrained family a parameter record belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario<T> {
    General,
    MechanicalGain,
    #[serde(rename = "cavity_gain_pt")]
    CavityGainPT,
    /// Frequency shift ε applied to cavity 1.
    Perturbed(T),
}

impl<T: Real> Scenario<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::General => "general",
            Scenario::MechanicalGain => "mechanical_gain",
            Scenario::CavityGainPT => "cavity_gain_pt",
            Scenario::Perturbed(_) => "perturbed",
        }
    }

    pub fn epsilon(&self) -> T {
        match self {
            Scenario::Perturbed(e) => *e,
            _ => T::zero(),
        }
    }
}

/// Normalized model parameters (κ₂ = 1, ω_m = 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams<T> {
    /// κ₁/κ₂; negative when cavity 1 has gain.
    pub eta: T,
    /// G₂/G₁.
    pub lambda: T,
    pub g1_norm: T,
    pub delta1_norm: T,
    pub delta2_norm: T,
    pub gamma_m_norm: T,
    pub omega_m_offset: T,
    pub scenario: Scenario<T>,
}

impl<T: Real> ScenarioParams<T> {
    /// Unconstrained record; no pseudo-Hermiticity is implied.
    pub fn general(eta: T, lambda: T, g1: T, delta1: T, delta2: T, gamma_m: T) -> Self {
        ScenarioParams {
            eta,
            lambda,
            g1_norm: g1,
            delta1_norm: delta1,
            delta2_norm: delta2,
            gamma_m_norm: gamma_m,
            omega_m_offset: T::zero(),
            scenario: Scenario::General,
        }
    }

    pub fn g2_norm(&self) -> T {
        self.lambda * self.g1_norm
    }

    /// Same record tagged as perturbed by a cavity-1 shift `epsilon`.
    pub fn perturbed(&self, epsilon: T) -> Self {
        ScenarioParams {
            scenario: Scenario::Perturbed(epsilon),
            ..*self
        }
    }

    /// Checks the invariants implied by the scenario tag.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            self.eta,
            self.lambda,
            self.g1_norm,
            self.delta1_norm,
            self.delta2_norm,
            self.gamma_m_norm,
            self.omega_m_offset,
            self.scenario.epsilon(),
        ];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("scenario parameters must be finite".into()));
        }
        if self.omega_m_offset != T::zero() {
            return Err(Error::Domain("omega_m_offset is fixed to 0".into()));
        }
        let tol = T::lit(1e-12);
        let close = |a: T, b: T| (a - b).abs() <= tol * T::one().max(a.abs()).max(b.abs());
        match self.scenario {
            Scenario::MechanicalGain => {
                if !close(self.gamma_m_norm, -(T::one() + self.eta)) {
                    return Err(Error::Domain(
                        "mechanical-gain records need gamma_m = -(1 + eta)".into(),
                    ));
                }
                if !close(self.delta2_norm, -self.eta * self.delta1_norm) {
                    return Err(Error::Domain(
                        "mechanical-gain records need delta2 = -eta * delta1".into(),
                    ));
                }
            }
            Scenario::CavityGainPT => {
                if !close(self.eta, -T::one())
                    || self.gamma_m_norm != T::zero()
                    || !close(self.delta2_norm, self.delta1_norm)
                {
                    return Err(Error::Domain(
                        "PT records need eta = -1, gamma_m = 0 and delta2 = delta1".into(),
                    ));
                }
            }
            Scenario::General | Scenario::Perturbed(_) => {}
        }
        Ok(())
    }
}

impl<T: Real> PhysicalParams<T> {
    /// Effective detunings and enhanced couplings.
    ///
    /// G₁ = −g₁α₁ and G₂ = +g₂α₂ must be real (the laser phases are assumed
    /// tuned so); a complex coupling is a domain error.
    pub fn effective_rates(&self) -> Result<EffectiveRates<T>> {
        for (name, w) in [
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("omega_m", self.omega_m),
            ("omega0", self.omega0),
        ] {
            if !(w > T::zero()) {
                return Err(Error::Domain(format!("{name} must be positive")));
            }
        }
        if self.kappa2 == T::zero() {
            return Err(Error::ZeroUnit);
        }
        let c1 = -self.alpha1 * self.g1;
        let c2 = self.alpha2 * self.g2;
        let real_tol = T::lit(1e-12);
        for (name, c) in [("G1", c1), ("G2", c2)] {
            if c.im.abs() > real_tol * c.norm().max(T::tiny()) {
                return Err(Error::Domain(format!(
                    "{name} = {c} is not real; choose laser phases giving real couplings"
                )));
            }
        }
        let delta1 = effective_frequency(self.omega1 - self.omega0, self.g1, self.beta, 1);
        let delta2 = effective_frequency(self.omega2 - self.omega0, self.g2, self.beta, -1);
        Ok(EffectiveRates {
            kappa1: self.kappa1,
            kappa2: self.kappa2,
            gamma_m: self.gamma_m,
            coupling1: c1.re,
            coupling2: c2.re,
            delta1: delta1 - self.omega_m,
            delta2: delta2 - self.omega_m,
            omega_m: self.omega_m,
        })
    }
}

/// Maps laboratory parameters onto the normalized model.
pub fn normalize<T: Real>(p: &PhysicalParams<T>) -> Result<ScenarioParams<T>> {
    normalize_rates(&p.effective_rates()?)
}

/// Divides every rate by κ₂. Inverse of [`denormalize`].
pub fn normalize_rates<T: Real>(r: &EffectiveRates<T>) -> Result<ScenarioParams<T>> {
    if r.kappa2 == T::zero() {
        return Err(Error::ZeroUnit);
    }
    let lambda = if r.coupling1 != T::zero() {
        r.coupling2 / r.coupling1
    } else if r.coupling2 == T::zero() {
        T::zero()
    } else {
        return Err(Error::Domain(
            "G1 = 0 with G2 != 0 leaves lambda = G2/G1 undefined".into(),
        ));
    };
    let k = r.kappa2;
    Ok(ScenarioParams {
        eta: r.kappa1 / k,
        lambda,
        g1_norm: r.coupling1 / k,
        delta1_norm: r.delta1 / k,
        delta2_norm: r.delta2 / k,
        gamma_m_norm: r.gamma_m / k,
        omega_m_offset: T::zero(),
        scenario: Scenario::General,
    })
}

/// Restores dimensional rates from a normalized record.
pub fn denormalize<T: Real>(
    sp: &ScenarioParams<T>,
    kappa2: T,
    omega_m: T,
) -> Result<EffectiveRates<T>> {
    if kappa2 == T::zero() {
        return Err(Error::ZeroUnit);
    }
    Ok(EffectiveRates {
        kappa1: sp.eta * kappa2,
        kappa2,
        gamma_m: sp.gamma_m_norm * kappa2,
        coupling1: sp.g1_norm * kappa2,
        coupling2: sp.g2_norm() * kappa2,
        delta1: sp.delta1_norm * kappa2,
        delta2: sp.delta2_norm * kappa2,
        omega_m,
    })
}

/// Drive amplitude Ω = √(Pκ/ħω) with the SI value of ħ.
pub fn drive_amplitude<T: Real>(power: T, kappa: T, omega: T) -> Result<T> {
    drive_amplitude_with_hbar(power, kappa, omega, T::lit(HBAR_SI))
}

pub fn drive_amplitude_with_hbar<T: Real>(power: T, kappa: T, omega: T, hbar: T) -> Result<T> {
    if !(power >= T::zero()) {
        return Err(Error::Domain("drive power must be nonnegative".into()));
    }
    if !(kappa > T::zero()) || !(omega > T::zero()) || !(hbar > T::zero()) {
        return Err(Error::Domain(
            "kappa, omega and hbar must be positive".into(),
        ));
    }
    Ok((power * kappa / (hbar * omega)).sqrt())
}

/// Cavity frequency shifted by the static mechanical displacement:
/// `delta - sign * g * (beta* + beta)`.
pub fn effective_frequency<T: Real>(delta: T, g: T, beta: Complex<T>, sign: i8) -> T {
    let s = if sign >= 0 { T::one() } else { -T::one() };
    delta - s * g * (beta.re + beta.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn lab(kappa1: f64) -> PhysicalParams<f64> {
        PhysicalParams {
            omega1: 2.0e15,
            omega2: 2.1e15,
            omega_m: 1.0e7,
            omega0: 1.99e15,
            g1: 1.0e3,
            g2: 2.0e3,
            p1: 1e-3,
            p2: 1e-3,
            kappa1,
            kappa2: 1.0e6,
            gamma_m: -2.0e6,
            alpha1: Complex::new(-10.0, 0.0),
            alpha2: Complex::new(20.0, 0.0),
            beta: Complex::new(0.0, 3.0),
        }
    }

    #[test]
    fn identity_case() {
        let rates = EffectiveRates {
            kappa1: 1.0,
            kappa2: 1.0,
            gamma_m: 0.0,
            coupling1: 0.0,
            coupling2: 0.0,
            delta1: 0.0,
            delta2: 0.0,
            omega_m: 1.0,
        };
        let sp = normalize_rates(&rates).unwrap();
        assert_eq!(sp.eta, 1.0);
        assert_eq!(sp.delta1_norm, 0.0);
        assert_eq!(sp.g1_norm, 0.0);
    }

    #[test]
    fn eta_is_kappa_ratio() {
        let sp = normalize(&lab(2.0e6)).unwrap();
        assert_eq!(sp.eta, 2.0);
        assert_relative_eq!(sp.lambda, 4.0, max_relative = 1e-15);
        // purely imaginary beta leaves the detuning untouched
        assert_relative_eq!(
            sp.delta1_norm,
            (1.0e13 - 1.0e7) / 1.0e6,
            max_relative = 1e-12
        );
    }

    #[test]
    fn zero_kappa2_is_unit_error() {
        let mut p = lab(1.0);
        p.kappa2 = 0.0;
        assert_eq!(normalize(&p), Err(Error::ZeroUnit));
    }

    #[test]
    fn complex_coupling_rejected() {
        let mut p = lab(1.0e6);
        p.alpha1 = Complex::new(1.0, 1.0);
        assert!(matches!(normalize(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn drive_amplitude_examples() {
        assert_eq!(drive_amplitude(0.0, 1.0, 1.0).unwrap(), 0.0);
        let a = drive_amplitude(1e-3, 1e6, 1e15).unwrap();
        let b = drive_amplitude(2e-3, 1e6, 1e15).unwrap();
        assert_relative_eq!(b / a, 2f64.sqrt(), max_relative = 1e-14);

        let (p, k, w) = (
            1e-12,
            2.0 * std::f64::consts::PI * 1e6,
            2.0 * std::f64::consts::PI * 200e12,
        );
        let expected = (p * k / (HBAR_SI * w)).sqrt();
        assert_relative_eq!(
            drive_amplitude(p, k, w).unwrap(),
            expected,
            max_relative = 1e-15
        );
        assert_relative_eq!(expected, 6.886e6, max_relative = 1e-3);

        assert!(drive_amplitude(-1.0, 1.0, 1.0).is_err());
        assert!(drive_amplitude(1.0, 0.0, 1.0).is_err());
        assert!(drive_amplitude(1.0, 1.0, -1.0).is_err());
        assert_eq!(drive_amplitude_with_hbar(4.0, 1.0, 1.0, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn effective_frequency_examples() {
        assert_eq!(
            effective_frequency(1.5, 0.3, Complex::new(0.0, 0.0), 1),
            1.5
        );
        assert_eq!(
            effective_frequency(1.5, 0.3, Complex::new(0.0, 7.0), -1),
            1.5
        );
        assert_relative_eq!(
            effective_frequency(1.0, 0.1, Complex::new(0.5, 0.0), 1),
            0.9,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            effective_frequency(1.0, 0.1, Complex::new(0.5, 0.0), -1),
            1.1,
            max_relative = 1e-15
        );
    }

    #[test]
    fn validate_scenarios() {
        let mut sp = ScenarioParams::general(1.0, 1.0, 1.0, 0.5, -0.5, -2.0);
        assert!(sp.validate().is_ok());
        sp.scenario = Scenario::MechanicalGain;
        assert!(sp.validate().is_ok());
        sp.delta2_norm = 0.5;
        assert!(sp.validate().is_err());
        let mut pt = ScenarioParams::general(-1.0, 1.0, 1.0, 0.5, 0.5, 0.0);
        pt.scenario = Scenario::CavityGainPT;
        assert!(pt.validate().is_ok());
        pt.gamma_m_norm = 0.1;
        assert!(pt.validate().is_err());
    }

    #[test]
    fn json_field_names() {
        let sp = ScenarioParams::general(1.0, 2.0, 0.5, 0.1, -0.1, -2.0).perturbed(1e-3);
        let v = serde_json::to_value(sp).unwrap();
        for key in [
            "eta",
            "lambda",
            "g1_norm",
            "delta1_norm",
            "delta2_norm",
            "gamma_m_norm",
            "omega_m_offset",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["scenario"]["perturbed"], 1e-3);
        let back: ScenarioParams<f64> = serde_json::from_value(v).unwrap();
        assert_eq!(back, sp);
    }
}
