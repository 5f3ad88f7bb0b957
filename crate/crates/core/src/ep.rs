//! Exceptional points: the closed-form EP3 locus of the mechanical-gain
//! family and bracketed EP2 search along one parameter.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::cubic::{
    characteristic_coeffs, classify, discriminant, CubicCoeffs, Scales, SpectralClass,
    DEFAULT_CLASSIFY_TOL,
};
use crate::error::{Error, Result};
use crate::family::{Family, Param};
use crate::model::{Scenario, ScenarioParams};
use crate::pseudo_hermitian::{from_mechanical_gain, Branch};
use crate::scalar::{re, Real};

/// Below this, max(|A|/s', |B|/s'') at a located Δ = 0 point means the
/// bisection has converged onto a triple root rather than a double one.
pub const EP3_PROXIMITY: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpLocus<T> {
    pub eta: T,
    pub lambda: T,
    pub g1: T,
    pub delta1: T,
    pub branch: Option<Branch>,
}

/// |Δ|, |A| and |B| divided by their magnitude scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpResiduals<T> {
    pub delta: T,
    pub a: T,
    pub b: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpReport<T> {
    pub order: u8,
    pub family: Scenario<T>,
    pub locus: EpLocus<T>,
    /// Coalesced eigenvalue, offset from ω_m.
    pub omega_ep: Complex<T>,
    pub residuals: EpResiduals<T>,
    pub params: ScenarioParams<T>,
}

/// Scaled discriminant residuals. Δ is measured against
/// max(|B|², |4AC|, s'³) so the ratio stays meaningful at a triple root,
/// where |B|² and |4AC| vanish together with Δ.
pub fn scaled_residuals<T: Real>(c: &CubicCoeffs<T>) -> EpResiduals<T> {
    let d = discriminant(c);
    let s = Scales::of(c, &d);
    let s_delta = s.delta.max(s.a * s.a * s.a);
    EpResiduals {
        delta: d.delta.norm() / s_delta,
        a: d.a.norm() / s.a,
        b: d.b.norm() / s.b,
    }
}

/// |A|/s' + |B|/s'': vanishes exactly at a triple root.
pub fn ep3_defect<T: Real>(c: &CubicCoeffs<T>) -> T {
    let r = scaled_residuals(c);
    r.a + r.b
}

/// λ at which the mechanical-gain family has an EP3: [(1+2η)/((2+η)η)]^{3/2}.
pub fn lambda_ep3<T: Real>(eta: T) -> Result<T> {
    if !(eta > T::zero()) {
        return Err(Error::Domain(format!("EP3 locus needs eta > 0, got {eta}")));
    }
    let one = T::one();
    let two = T::lit(2.0);
    Ok(((one + two * eta) / ((two + eta) * eta)).powf(T::lit(1.5)))
}

/// G₁ at the EP3: 2[3(1+λ²)/(1+η+η²) + (1+ηλ²)/((1+η)η)]^{−1/2}.
pub fn g1_ep3<T: Real>(eta: T) -> Result<T> {
    let lam = lambda_ep3(eta)?;
    let one = T::one();
    let l2 = lam * lam;
    let inv =
        T::lit(3.0) * (one + l2) / (one + eta + eta * eta) + (one + eta * l2) / ((one + eta) * eta);
    Ok(T::lit(2.0) / inv.sqrt())
}

/// Closed-form EP3 of the mechanical-gain family with the default detuning
/// branch (negative for η = 1, positive otherwise).
pub fn ep3_analytic<T: Real>(eta: T) -> Result<EpReport<T>> {
    ep3_analytic_with_branch(eta, Branch::default_for_eta(eta))
}

pub fn ep3_analytic_with_branch<T: Real>(eta: T, branch: Branch) -> Result<EpReport<T>> {
    let lambda = lambda_ep3(eta)?;
    let g1 = g1_ep3(eta)?;
    let sp = from_mechanical_gain(eta, lambda, g1, branch)?;
    let omega = (T::one() - eta) * sp.delta1_norm / T::lit(3.0);
    let c = characteristic_coeffs(&sp, T::zero());
    let class = classify(&c, T::lit(DEFAULT_CLASSIFY_TOL))?;
    if class != SpectralClass::Ep3 {
        return Err(Error::Domain(format!(
            "closed-form EP3 at eta = {eta} does not classify as EP3 ({})",
            class.label()
        )));
    }
    Ok(EpReport {
        order: 3,
        family: sp.scenario,
        locus: locus_of(&sp, Some(branch)),
        omega_ep: re(omega),
        residuals: scaled_residuals(&c),
        params: sp,
    })
}

fn locus_of<T: Real>(sp: &ScenarioParams<T>, branch: Option<Branch>) -> EpLocus<T> {
    EpLocus {
        eta: sp.eta,
        lambda: sp.lambda,
        g1: sp.g1_norm,
        delta1: sp.delta1_norm,
        branch,
    }
}

/// EP2 of `family` along `param` inside (lo, hi).
pub fn ep2_find<T: Real>(family: &Family<T>, param: Param, lo: T, hi: T) -> Result<EpReport<T>> {
    ep2_find_with(
        |x| family.with(param, x).scenario(),
        lo,
        hi,
        family.report_branch(),
    )
}

/// Bisection on the sign of the discriminant of `build(x)`.
///
/// Bisects until the bracket cannot be split any further, far below the
/// 1e-10 target; the two nearly coalesced roots then sit about √ulp apart.
/// The double root is −B/(2A) at the final midpoint.
pub fn ep2_find_with<T, F>(build: F, lo: T, hi: T, branch: Option<Branch>) -> Result<EpReport<T>>
where
    T: Real,
    F: Fn(T) -> Result<ScenarioParams<T>>,
{
    if !(lo < hi) {
        return Err(Error::Usage(format!("empty bracket [{lo}, {hi}]")));
    }
    let eval = |x: T| -> Result<(ScenarioParams<T>, CubicCoeffs<T>, T)> {
        let sp = build(x)?;
        let c = characteristic_coeffs(&sp, T::zero());
        let scale = T::one().max(c.c2.norm()).max(c.c1.norm()).max(c.c0.norm());
        if c.max_imag() > T::lit(DEFAULT_CLASSIFY_TOL) * scale {
            return Err(Error::ComplexCoefficients {
                max_imag: c.max_imag().to_f64_lossy(),
            });
        }
        let delta = discriminant(&c).delta.re;
        Ok((sp, c, delta))
    };

    let (mut a, mut b) = (lo, hi);
    let fa = eval(a)?.2;
    let fb = eval(b)?.2;
    if fa == T::zero() {
        b = a;
    } else if fb == T::zero() {
        a = b;
    } else if (fa > T::zero()) == (fb > T::zero()) {
        return Err(Error::NoSignChange {
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
        });
    }
    let two = T::lit(2.0);
    let mut fa_pos = fa > T::zero();
    for _ in 0..2200 {
        let m = a + (b - a) / two;
        if m <= a || m >= b {
            break;
        }
        let fm = eval(m)?.2;
        if fm == T::zero() {
            a = m;
            b = m;
            break;
        }
        if (fm > T::zero()) == fa_pos {
            a = m;
            fa_pos = fm > T::zero();
        } else {
            b = m;
        }
    }
    let x = a + (b - a) / two;
    let (sp, c, _) = eval(x)?;
    let res = scaled_residuals(&c);
    if res.a.max(res.b) < T::lit(EP3_PROXIMITY) {
        return Err(Error::Ep3InsideBracket {
            at: x.to_f64_lossy(),
        });
    }
    let d = discriminant(&c);
    let omega = -d.b / (d.a * two);
    Ok(EpReport {
        order: 2,
        family: sp.scenario,
        locus: locus_of(&sp, branch),
        omega_ep: omega,
        residuals: res,
        params: sp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::cardano_roots;
    use crate::pseudo_hermitian::feasible;

    #[test]
    fn symmetric_ep3() {
        let r = ep3_analytic(1.0f64).unwrap();
        assert_eq!(r.order, 3);
        assert!((r.locus.lambda - 1.0).abs() < 1e-15);
        assert!((r.locus.g1 - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((r.locus.delta1 + 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.omega_ep, Complex::new(0.0, 0.0));
        assert_eq!(r.locus.branch, Some(Branch::Minus));
    }

    #[test]
    fn asymmetric_ep3_numbers() {
        let r = ep3_analytic(2.0f64).unwrap();
        assert!((r.locus.lambda - 0.494).abs() < 5e-4);
        assert!((r.locus.g1 - 2.263).abs() < 1e-3);
        assert!((r.omega_ep.re + 0.173).abs() < 1e-3);
        assert!(r.residuals.a < 1e-6 && r.residuals.b < 1e-6 && r.residuals.delta < 1e-6);
    }

    #[test]
    fn ep3_locus_classifies_for_all_eta() {
        for k in 0..50 {
            let eta = 0.2 + 4.8 * k as f64 / 49.0;
            for branch in [Branch::Plus, Branch::Minus] {
                let r = ep3_analytic_with_branch(eta, branch).unwrap();
                let c = characteristic_coeffs(&r.params, 0.0);
                assert_eq!(
                    classify(&c, 1e-9).unwrap(),
                    SpectralClass::Ep3,
                    "eta = {eta}"
                );
                // coalesced root equals (1 − η)Δ₁/3
                assert!((-c.c2 / 3.0 - r.omega_ep).norm() < 1e-10);
                for z in cardano_roots(&c) {
                    assert!((z - r.omega_ep).norm() < 1e-4);
                }
                assert!(r.locus.g1 >= feasible(eta, r.locus.lambda).unwrap());
            }
        }
        let p = ep3_analytic_with_branch(2.5, Branch::Plus).unwrap();
        let m = ep3_analytic_with_branch(2.5, Branch::Minus).unwrap();
        assert_eq!(p.omega_ep, -m.omega_ep);
    }

    #[test]
    fn ep3_rejects_nonpositive_eta() {
        assert!(matches!(ep3_analytic(0.0), Err(Error::Domain(_))));
        assert!(ep3_analytic(-1.0).is_err());
    }

    #[test]
    fn asymmetric_ep2() {
        let lam = lambda_ep3(2.0f64).unwrap();
        let fam = Family::mechanical_gain(2.0, lam, 2.3, Branch::Plus);
        let r = ep2_find(&fam, Param::G1, 2.3, 2.5).unwrap();
        assert_eq!(r.order, 2);
        assert!((r.locus.g1 - 2.40).abs() < 0.01, "{}", r.locus.g1);
        assert!((r.omega_ep.re + 0.842).abs() < 0.005, "{}", r.omega_ep);
        assert!(r.residuals.delta < 1e-6);
        assert!(r.residuals.a.max(r.residuals.b) > 1e-3);
        let roots = cardano_roots(&characteristic_coeffs(&r.params, 0.0));
        let near: Vec<_> = roots
            .iter()
            .filter(|z| (**z - r.omega_ep).norm() < 1e-4)
            .collect();
        assert_eq!(near.len(), 2);
    }

    #[test]
    fn pt_ep2_along_g1() {
        let fam = Family::cavity_gain(2.0f64, 1.0, 1.5);
        let r = ep2_find(&fam, Param::G1, 1.5, 2.0).unwrap();
        assert!((r.locus.g1 - 1.692).abs() < 0.005);
        assert!((r.omega_ep.re - 2.755).abs() < 0.005);
        assert_eq!(r.locus.branch, None);
    }

    #[test]
    fn bracket_errors() {
        let fam = Family::mechanical_gain(1.0, 1.0, 1.0, Branch::Minus);
        // Δ = 12c₁³ keeps one sign on either side of 2/√3
        assert!(matches!(
            ep2_find(&fam, Param::G1, 1.2, 1.5),
            Err(Error::NoSignChange { .. })
        ));
        match ep2_find(&fam, Param::G1, 1.0, 1.5) {
            Err(Error::Ep3InsideBracket { at }) => assert!((at - 2.0 / 3f64.sqrt()).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        assert!(ep2_find(&fam, Param::G1, 1.5, 1.0).unwrap_err().is_usage());
    }
}
