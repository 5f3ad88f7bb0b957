//! The 3×3 effective Hamiltonian over the basis (cavity 1, cavity 2, mechanics).

use num_complex::Complex;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::cubic::CubicCoeffs;
use crate::error::{Error, Result};
use crate::model::{Scenario, ScenarioParams};
use crate::scalar::{cx, re, Real};

/// Mode ordering of the matrix rows and columns.
pub const BASIS: [&str; 3] = ["cavity1", "cavity2", "mechanical"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian3<T> {
    pub entries: [[Complex<T>; 3]; 3],
}

impl<T: Real> Hamiltonian3<T> {
    pub fn from_entries(entries: [[Complex<T>; 3]; 3]) -> Self {
        Hamiltonian3 { entries }
    }

    /// Effective Hamiltonian in κ₂ units with ω_m = 0.
    ///
    /// Diagonal: (Δ₁ + ε − iκ₁, Δ₂ − iκ₂, −iγ_m); the cavities couple only
    /// through the mechanics with real couplings G₁, G₂. A nonzero `epsilon`
    /// is accepted only for records tagged [`Scenario::Perturbed`].
    pub fn build(sp: &ScenarioParams<T>, epsilon: T) -> Result<Self> {
        if epsilon != T::zero() && !matches!(sp.scenario, Scenario::Perturbed(_)) {
            return Err(Error::Usage(format!(
                "epsilon = {epsilon} requires a perturbed scenario, got {}",
                sp.scenario.name()
            )));
        }
        sp.validate()?;
        let z = Complex::new(T::zero(), T::zero());
        let g1 = re(sp.g1_norm);
        let g2 = re(sp.g2_norm());
        Ok(Hamiltonian3 {
            entries: [
                [cx(sp.delta1_norm + epsilon, -sp.eta), z, g1],
                [z, cx(sp.delta2_norm, -T::one()), g2],
                [g1, g2, cx(T::zero(), -sp.gamma_m_norm)],
            ],
        })
    }

    /// Builds with the perturbation carried by the scenario tag.
    pub fn from_scenario(sp: &ScenarioParams<T>) -> Result<Self> {
        Self::build(sp, sp.scenario.epsilon())
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i][j]
    }

    pub fn trace(&self) -> Complex<T> {
        self.entries[0][0] + self.entries[1][1] + self.entries[2][2]
    }

    pub fn determinant(&self) -> Complex<T> {
        let m = &self.entries;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn adjoint(&self) -> Self {
        let mut out = self.entries;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.entries[j][i].conj();
            }
        }
        Hamiltonian3 { entries: out }
    }

    pub fn shifted(&self, omega: Complex<T>) -> Self {
        let mut out = self.entries;
        for (i, row) in out.iter_mut().enumerate() {
            row[i] -= omega;
        }
        Hamiltonian3 { entries: out }
    }

    pub fn apply(&self, v: &[Complex<T>; 3]) -> [Complex<T>; 3] {
        let m = &self.entries;
        [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
    }

    pub fn frobenius_norm(&self) -> T {
        self.entries
            .iter()
            .flatten()
            .fold(T::zero(), |acc, e| acc + e.norm_sqr())
            .sqrt()
    }

    /// Coefficients of det(ΩI − H) = Ω³ + c₂Ω² + c₁Ω + c₀ for an arbitrary
    /// matrix: c₂ = −tr H, c₁ = sum of principal 2×2 minors, c₀ = −det H.
    pub fn char_coeffs(&self) -> CubicCoeffs<T> {
        let m = &self.entries;
        let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
            + m[1][1] * m[2][2]
            - m[1][2] * m[2][1];
        CubicCoeffs::new(-self.trace(), minors, -self.determinant())
    }
}

/// Max-norm of H − H†; zero iff H is Hermitian.
pub fn hermiticity_defect<T: Real>(h: &Hamiltonian3<T>) -> T {
    let adj = h.adjoint();
    let mut worst = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max((h.entries[i][j] - adj.entries[i][j]).norm());
        }
    }
    worst
}

#[derive(Serialize, Deserialize)]
struct MatrixJson<T> {
    basis: Vec<String>,
    entries: Vec<[T; 2]>,
}

// Row-major list of [re, im] pairs.
impl<T: Real> Serialize for Hamiltonian3<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            basis: BASIS.iter().map(|s| s.to_string()).collect(),
            entries: self
                .entries
                .iter()
                .flatten()
                .map(|z| [z.re, z.im])
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for Hamiltonian3<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::<T>::deserialize(deserializer)?;
        if raw.entries.len() != 9 {
            return Err(de::Error::invalid_length(
                raw.entries.len(),
                &"9 [re, im] pairs",
            ));
        }
        if raw.basis.iter().map(String::as_str).ne(BASIS) {
            return Err(de::Error::custom("unexpected basis ordering"));
        }
        let mut entries = [[Complex::new(T::zero(), T::zero()); 3]; 3];
        for (k, [a, b]) in raw.entries.into_iter().enumerate() {
            entries[k / 3][k % 3] = Complex::new(a, b);
        }
        Ok(Hamiltonian3 { entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudo_hermitian::{from_cavity_gain, from_mechanical_gain, Branch};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn max_diff(a: &Hamiltonian3<f64>, b: &[[Complex<f64>; 3]; 3]) -> f64 {
        let mut d = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((a.entries[i][j] - b[i][j]).norm());
            }
        }
        d
    }

    #[test]
    fn symmetric_ep3_matrix() {
        let s3 = 3f64.sqrt();
        let sp = from_mechanical_gain(1.0, 1.0, 2.0 / s3, Branch::Minus).unwrap();
        let h = Hamiltonian3::build(&sp, 0.0).unwrap();
        let expected = [
            [c(-1.0 / s3, -1.0), c(0.0, 0.0), c(2.0 / s3, 0.0)],
            [c(0.0, 0.0), c(1.0 / s3, -1.0), c(2.0 / s3, 0.0)],
            [c(2.0 / s3, 0.0), c(2.0 / s3, 0.0), c(0.0, 2.0)],
        ];
        assert!(max_diff(&h, &expected) < 1e-14);
        assert!((hermiticity_defect(&h) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn pt_ep3_matrix() {
        let r = 2f64.sqrt() / 2.0;
        let sp = from_cavity_gain(0.0, 1.0, r);
        let h = Hamiltonian3::build(&sp, 0.0).unwrap();
        let expected = [
            [c(0.0, 1.0), c(0.0, 0.0), c(r, 0.0)],
            [c(0.0, 0.0), c(0.0, -1.0), c(r, 0.0)],
            [c(r, 0.0), c(r, 0.0), c(0.0, 0.0)],
        ];
        assert_eq!(max_diff(&h, &expected), 0.0);
        assert_eq!(hermiticity_defect(&h), 2.0);
    }

    #[test]
    fn real_diagonal_is_hermitian() {
        let z = c(0.0, 0.0);
        let h = Hamiltonian3::from_entries([
            [c(0.3, 0.0), z, z],
            [z, c(-0.7, 0.0), z],
            [z, z, c(0.0, 0.0)],
        ]);
        assert_eq!(hermiticity_defect(&h), 0.0);
        // Decoupled, lossless cavity 1 and mechanics: only the κ₂ unit remains.
        let sp = ScenarioParams::general(0.0, 0.0, 0.0, 0.3, -0.7, 0.0);
        let h = Hamiltonian3::build(&sp, 0.0).unwrap();
        assert_eq!(hermiticity_defect(&h), 2.0);
        assert_eq!(h.entries[0][0], c(0.3, 0.0));
        assert_eq!(h.entries[2][2], c(0.0, 0.0));
    }

    #[test]
    fn epsilon_needs_perturbed_tag() {
        let sp = from_mechanical_gain(1.0, 1.0, 1.2, Branch::Plus).unwrap();
        assert!(matches!(
            Hamiltonian3::build(&sp, 1e-3),
            Err(Error::Usage(_))
        ));
        let h = Hamiltonian3::build(&sp.perturbed(1e-3), 1e-3).unwrap();
        let h0 = Hamiltonian3::build(&sp, 0.0).unwrap();
        assert!((h.entries[0][0] - h0.entries[0][0] - c(1e-3, 0.0)).norm() < 1e-15);
        assert_eq!(h.entries[1][1], h0.entries[1][1]);
        assert_eq!(Hamiltonian3::from_scenario(&sp.perturbed(1e-3)).unwrap(), h);
    }

    #[test]
    fn structure_of_constrained_families() {
        for sp in [
            from_mechanical_gain(2.0, 0.7, 2.5, Branch::Plus).unwrap(),
            from_mechanical_gain(0.5, 1.3, 1.9, Branch::Minus).unwrap(),
            from_cavity_gain(0.4, 1.0, -0.8),
        ] {
            let h = Hamiltonian3::build(&sp, 0.0).unwrap();
            assert_eq!(h.entries[0][1], c(0.0, 0.0));
            assert_eq!(h.entries[1][0], c(0.0, 0.0));
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(h.entries[i][j].re, h.entries[j][i].re);
                    if i != j {
                        assert_eq!(h.entries[i][j].im, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn pt_invariance() {
        let sp = from_cavity_gain(1.3, 1.0, 0.9);
        let h = Hamiltonian3::build(&sp, 0.0).unwrap();
        let swap = [1usize, 0, 2];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h.entries[swap[i]][swap[j]].conj(), h.entries[i][j]);
            }
        }
    }

    #[test]
    fn json_is_row_major_pairs() {
        let sp = from_cavity_gain(2.0, 1.0, 1.692);
        let h = Hamiltonian3::build(&sp, 0.0).unwrap();
        let v = serde_json::to_value(h).unwrap();
        assert_eq!(v["entries"].as_array().unwrap().len(), 9);
        assert_eq!(v["entries"][0], serde_json::json!([2.0, 1.0]));
        assert_eq!(v["entries"][2], serde_json::json!([1.692, 0.0]));
        let back: Hamiltonian3<f64> = serde_json::from_value(v).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<Hamiltonian3<f64>>(
            r#"{"basis":["cavity1","cavity2","mechanical"],"entries":[[1,0]]}"#
        )
        .is_err());
    }
}
