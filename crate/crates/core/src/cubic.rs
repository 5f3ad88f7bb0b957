//! Characteristic cubic of the effective Hamiltonian: coefficients, roots and
//! the discriminant-based spectral classification.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Scenario, ScenarioParams};
use crate::scalar::{cx, re, Real};

/// Default relative tolerance for [`classify`].
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// Monic cubic x³ + c₂x² + c₁x + c₀ in the variable x = Ω − ω_m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCoeffs<T> {
    pub c2: Complex<T>,
    pub c1: Complex<T>,
    pub c0: Complex<T>,
}

impl<T: Real> CubicCoeffs<T> {
    pub fn new(c2: Complex<T>, c1: Complex<T>, c0: Complex<T>) -> Self {
        CubicCoeffs { c2, c1, c0 }
    }

    pub fn real(c2: T, c1: T, c0: T) -> Self {
        CubicCoeffs::new(re(c2), re(c1), re(c0))
    }

    /// Monic cubic with the given roots.
    pub fn from_roots(r: [Complex<T>; 3]) -> Self {
        CubicCoeffs::new(
            -(r[0] + r[1] + r[2]),
            r[0] * r[1] + r[0] * r[2] + r[1] * r[2],
            -(r[0] * r[1] * r[2]),
        )
    }

    pub fn eval(&self, x: Complex<T>) -> Complex<T> {
        ((x + self.c2) * x + self.c1) * x + self.c0
    }

    pub fn eval_derivative(&self, x: Complex<T>) -> Complex<T> {
        (x * T::lit(3.0) + self.c2 * T::lit(2.0)) * x + self.c1
    }

    pub fn max_imag(&self) -> T {
        self.c2.im.abs().max(self.c1.im.abs()).max(self.c0.im.abs())
    }

    /// Magnitude against which root residuals are judged.
    pub fn residual_scale(&self) -> T {
        T::one()
            .max(self.c2.norm().powi(3))
            .max(self.c1.norm().powf(T::lit(1.5)))
            .max(self.c0.norm())
    }

    /// Coefficients of the polynomial in y = x − shift.
    pub fn shifted(&self, shift: Complex<T>) -> Self {
        let three = T::lit(3.0);
        CubicCoeffs::new(
            self.c2 + shift * three,
            self.c1 + self.c2 * shift * T::lit(2.0) + shift * shift * three,
            self.eval(shift),
        )
    }
}

impl<T: Real> std::ops::Sub for CubicCoeffs<T> {
    type Output = CubicCoeffs<T>;

    fn sub(self, o: Self) -> Self {
        CubicCoeffs::new(self.c2 - o.c2, self.c1 - o.c1, self.c0 - o.c0)
    }
}

/// Cardano discriminant data: A = c₂² − 3c₁, B = c₁c₂ − 9c₀,
/// C = c₁² − 3c₀c₂ and Δ = B² − 4AC.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantData<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub delta: Complex<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralClass {
    ThreeRealDistinct,
    OneRealConjugatePair,
    Ep3,
    Ep2,
}

impl SpectralClass {
    pub fn label(&self) -> &'static str {
        match self {
            SpectralClass::ThreeRealDistinct => "three_real",
            SpectralClass::OneRealConjugatePair => "conjugate_pair",
            SpectralClass::Ep3 => "ep3",
            SpectralClass::Ep2 => "ep2",
        }
    }
}

/// Magnitude scales that make the tolerance tests of [`classify`] unit-free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scales<T> {
    /// max(|B|², |4AC|, tiny): scale of Δ.
    pub delta: T,
    /// max(|c₂|², 3|c₁|, 1): scale of A.
    pub a: T,
    /// max(|c₁c₂|, 9|c₀|, 1): scale of B.
    pub b: T,
}

impl<T: Real> Scales<T> {
    pub fn of(c: &CubicCoeffs<T>, d: &DiscriminantData<T>) -> Self {
        let four = T::lit(4.0);
        Scales {
            delta: d.b.norm_sqr().max((d.a * d.c).norm() * four).max(T::tiny()),
            a: c.c2.norm_sqr().max(c.c1.norm() * T::lit(3.0)).max(T::one()),
            b: (c.c1 * c.c2)
                .norm()
                .max(c.c0.norm() * T::lit(9.0))
                .max(T::one()),
        }
    }
}

pub fn discriminant<T: Real>(c: &CubicCoeffs<T>) -> DiscriminantData<T> {
    let three = T::lit(3.0);
    let a = c.c2 * c.c2 - c.c1 * three;
    let b = c.c1 * c.c2 - c.c0 * T::lit(9.0);
    let cc = c.c1 * c.c1 - c.c0 * c.c2 * three;
    DiscriminantData {
        a,
        b,
        c: cc,
        delta: b * b - a * cc * T::lit(4.0),
    }
}

/// Classifies a real characteristic cubic.
///
/// A triple root (A ≈ 0 and B ≈ 0) is recognised first, because at an EP3
/// the scale of Δ collapses together with Δ itself. Otherwise the sign of Δ
/// decides, with |Δ| ≤ tol·s meaning a double root.
pub fn classify<T: Real>(c: &CubicCoeffs<T>, tol: T) -> Result<SpectralClass> {
    let coeff_scale = T::one().max(c.c2.norm()).max(c.c1.norm()).max(c.c0.norm());
    if c.max_imag() > tol * coeff_scale {
        return Err(Error::ComplexCoefficients {
            max_imag: c.max_imag().to_f64_lossy(),
        });
    }
    let d = discriminant(c);
    let s = Scales::of(c, &d);
    if d.a.norm() <= tol * s.a && d.b.norm() <= tol * s.b {
        return Ok(SpectralClass::Ep3);
    }
    let delta = d.delta.re;
    Ok(if delta < -tol * s.delta {
        SpectralClass::ThreeRealDistinct
    } else if delta > tol * s.delta {
        SpectralClass::OneRealConjugatePair
    } else {
        SpectralClass::Ep2
    })
}

/// The three roots of a monic cubic with complex coefficients.
///
/// Depressed-cubic substitution, principal cube root of the larger-magnitude
/// Cardano term, partner term from u·v = −p/3, then one guarded Newton step
/// per root on the original polynomial.
pub fn cardano_roots<T: Real>(c: &CubicCoeffs<T>) -> [Complex<T>; 3] {
    let third = T::one() / T::lit(3.0);
    let half = T::lit(0.5);
    let shift = c.c2 * third;
    let p = c.c1 - c.c2 * shift;
    let q = shift * shift * shift * T::lit(2.0) - shift * c.c1 + c.c0;

    let half_q = q * half;
    let p3 = p * third;
    let s = (half_q * half_q + p3 * p3 * p3).sqrt();
    let w1 = -half_q + s;
    let w2 = -half_q - s;
    let w = if w1.norm_sqr() >= w2.norm_sqr() {
        w1
    } else {
        w2
    };

    let zero = Complex::new(T::zero(), T::zero());
    let (u, v) = if w.norm_sqr() == T::zero() {
        (zero, zero)
    } else {
        let u = w.cbrt();
        (u, -p3 / u)
    };

    let rot = cx(-half, T::lit(3.0).sqrt() * half);
    let rot2 = rot.conj();
    let mut roots = [u + v, rot * u + rot2 * v, rot2 * u + rot * v].map(|y| y - shift);
    for r in roots.iter_mut() {
        *r = newton_polish(c, *r);
    }
    roots
}

fn newton_polish<T: Real>(c: &CubicCoeffs<T>, x: Complex<T>) -> Complex<T> {
    let fx = c.eval(x);
    let dfx = c.eval_derivative(x);
    if fx.norm_sqr() == T::zero() || dfx.norm_sqr() == T::zero() {
        return x;
    }
    let cand = x - fx / dfx;
    let fc = c.eval(cand);
    if !fc.norm().is_finite() || fc.norm() >= fx.norm() {
        x
    } else {
        cand
    }
}

/// Characteristic coefficients of the (possibly perturbed) Hamiltonian.
///
/// Records that satisfy the gain–loss balance γ_m = −(1+η) and Δ₂ = −ηΔ₁
/// (mechanical-gain and PT families) use the reduced closed form, which is
/// exactly real whenever the third pseudo-Hermitian condition holds; the
/// residual r₃ of that condition enters as −i·r₃ in c₀. Other records use the
/// full 3×3 expansion.
pub fn characteristic_coeffs<T: Real>(sp: &ScenarioParams<T>, epsilon: T) -> CubicCoeffs<T> {
    match sp.scenario {
        Scenario::MechanicalGain | Scenario::CavityGainPT => reduced_coeffs(sp, epsilon),
        Scenario::General | Scenario::Perturbed(_) => general_coeffs(sp, epsilon),
    }
}

fn reduced_coeffs<T: Real>(sp: &ScenarioParams<T>, eps: T) -> CubicCoeffs<T> {
    let one = T::one();
    let eta = sp.eta;
    let d1 = sp.delta1_norm;
    let g1sq = sp.g1_norm * sp.g1_norm;
    let lam2 = sp.lambda * sp.lambda;
    let r3 = (one + eta * lam2) * g1sq + sp.gamma_m_norm * (d1 * d1 + one) * eta;

    let c2 = re((eta - one) * d1 - eps);
    let c1 = cx(
        one + eta + eta * eta - eta * d1 * (d1 + eps) - (one + lam2) * g1sq,
        eta * eps,
    );
    let c0_static = (lam2 - eta) * g1sq * d1 - (one + eta) * (one - eta * eta) * d1;
    let c0 = cx(
        c0_static + eps * (lam2 * g1sq - (one + eta)),
        eps * eta * (one + eta) * d1 - r3,
    );
    CubicCoeffs::new(c2, c1, c0)
}

fn general_coeffs<T: Real>(sp: &ScenarioParams<T>, eps: T) -> CubicCoeffs<T> {
    // det(ΩI − H) = (Ω−a)(Ω−b)(Ω−c) − G₁²(Ω−b) − G₂²(Ω−a)
    let a = cx(sp.delta1_norm + eps, -sp.eta);
    let b = cx(sp.delta2_norm, -T::one());
    let c = cx(T::zero(), -sp.gamma_m_norm);
    let g1sq = sp.g1_norm * sp.g1_norm;
    let g2sq = sp.g2_norm() * sp.g2_norm();
    CubicCoeffs::new(
        -(a + b + c),
        a * b + b * c + c * a - re(g1sq + g2sq),
        -(a * b * c) + b * g1sq + a * g2sq,
    )
}
