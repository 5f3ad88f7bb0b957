//! Eigenvalues and eigenvectors of the effective Hamiltonian, eigenvector
//! coalescence, and branch-tracked parameter sweeps.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cubic::{
    cardano_roots, classify, discriminant, CubicCoeffs, DiscriminantData, SpectralClass,
    DEFAULT_CLASSIFY_TOL,
};
use crate::ep::{ep2_find_with, ep3_defect, EpReport};
use crate::error::{Error, Result};
use crate::family::{Family, Param};
use crate::hamiltonian::Hamiltonian3;
use crate::scalar::{cx, Real};

/// Relative threshold below which every adjugate candidate counts as zero.
pub const ADJUGATE_TOL: f64 = 1e-14;

type Vec3<T> = [Complex<T>; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult<T> {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: [Complex<T>; 3],
    /// Unit norm; the first component of largest modulus is real and ≥ 0.
    pub eigenvectors: [Vec3<T>; 3],
    /// Dimension of the null space of H − ΩI found for each eigenvalue.
    pub null_dims: [usize; 3],
    /// `None` when the characteristic coefficients are not real.
    pub class: Option<SpectralClass>,
    pub coefficients: CubicCoeffs<T>,
    pub residuals: DiscriminantData<T>,
}

impl<T: Real> SpectrumResult<T> {
    pub fn overlaps(&self) -> [T; 3] {
        coalescence(&self.eigenvectors)
    }
}

fn ordering<T: Real>(a: &Complex<T>, b: &Complex<T>) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}

/// Full eigendecomposition of `h`.
///
/// Eigenvalues are the Cardano roots of the characteristic cubic; when the
/// cubic classifies as a triple root they are set to −c₂/3 exactly.
/// Eigenvectors come from the adjugate of H − ΩI. At a defective
/// eigenvalue every copy receives the same (single) eigendirection.
pub fn eigensystem<T: Real>(h: &Hamiltonian3<T>) -> SpectrumResult<T> {
    let coeffs = h.char_coeffs();
    let residuals = discriminant(&coeffs);
    let class = classify(&coeffs, T::lit(DEFAULT_CLASSIFY_TOL)).ok();
    let mut eigenvalues = if class == Some(SpectralClass::Ep3) {
        [-coeffs.c2 / T::lit(3.0); 3]
    } else {
        cardano_roots(&coeffs)
    };
    eigenvalues.sort_by(ordering);

    let hnorm = h.frobenius_norm().max(T::tiny());
    let mut eigenvectors = [[Complex::new(T::zero(), T::zero()); 3]; 3];
    let mut null_dims = [1usize; 3];
    for i in 0..3 {
        let basis = null_basis(&h.shifted(eigenvalues[i]), hnorm);
        // repeated eigenvalues with a degenerate null space take successive basis vectors
        let same = (0..i)
            .filter(|&j| (eigenvalues[j] - eigenvalues[i]).norm() <= T::lit(1e-12) * hnorm)
            .count();
        null_dims[i] = basis.len();
        eigenvectors[i] = phase_fix(basis[same.min(basis.len() - 1)]);
    }
    SpectrumResult {
        eigenvalues,
        eigenvectors,
        null_dims,
        class,
        coefficients: coeffs,
        residuals,
    }
}

fn cross<T: Real>(u: &Vec3<T>, w: &Vec3<T>) -> Vec3<T> {
    [
        u[1] * w[2] - u[2] * w[1],
        u[2] * w[0] - u[0] * w[2],
        u[0] * w[1] - u[1] * w[0],
    ]
}

fn norm<T: Real>(v: &Vec3<T>) -> T {
    (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt()
}

fn scale<T: Real>(v: &Vec3<T>, s: Complex<T>) -> Vec3<T> {
    [v[0] * s, v[1] * s, v[2] * s]
}

fn inner<T: Real>(u: &Vec3<T>, w: &Vec3<T>) -> Complex<T> {
    u[0].conj() * w[0] + u[1].conj() * w[1] + u[2].conj() * w[2]
}

/// Orthonormal basis of {v : Mv = 0}, with rank decided against `hnorm`.
fn null_basis<T: Real>(m: &Hamiltonian3<T>, hnorm: T) -> Vec<Vec3<T>> {
    let rows = m.entries;
    let tol = T::lit(ADJUGATE_TOL);
    let candidates = [
        cross(&rows[0], &rows[1]),
        cross(&rows[0], &rows[2]),
        cross(&rows[1], &rows[2]),
    ];
    let best = candidates
        .iter()
        .max_by(|a, b| {
            norm(a)
                .partial_cmp(&norm(b))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .copied()
        .unwrap_or(candidates[0]);
    let n = norm(&best);
    if n > tol * hnorm * hnorm {
        return vec![scale(&best, cx(T::one() / n, T::zero()))];
    }

    // Rank ≤ 1: the null space is the Hermitian complement of the conjugated
    // rows, which are all parallel to the largest one.
    let (row, rnorm) = rows
        .iter()
        .map(|r| (*r, norm(r)))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or((rows[0], T::zero()));
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let unit = [[one, zero, zero], [zero, one, zero], [zero, zero, one]];
    let mut spanned: Vec<Vec3<T>> = Vec::new();
    if rnorm > tol * hnorm {
        let r = row.map(|z| z.conj() / rnorm);
        spanned.push(r);
    }
    let mut basis = Vec::new();
    for e in unit {
        let mut v = e;
        for s in spanned.iter() {
            let p = inner(s, &v);
            for k in 0..3 {
                v[k] -= s[k] * p;
            }
        }
        let vn = norm(&v);
        if vn > T::lit(1e-8) {
            let v = scale(&v, cx(T::one() / vn, T::zero()));
            spanned.push(v);
            basis.push(v);
        }
        if spanned.len() == 3 {
            break;
        }
    }
    basis
}

/// Rotates `v` so that its first component of largest modulus is real and
/// nonnegative; moduli within a relative 1e-9 count as tied.
pub fn phase_fix<T: Real>(v: Vec3<T>) -> Vec3<T> {
    let n = norm(&v);
    if n == T::zero() {
        return v;
    }
    let max = v.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (T::one() - T::lit(1e-9)))
        .unwrap_or(0);
    let p = v[pivot];
    let rot = p.conj() / (p.norm() * n);
    let mut out = scale(&v, rot);
    out[pivot] = cx(out[pivot].re, T::zero());
    out
}

/// Overlaps |⟨vᵢ, vⱼ⟩| for the pairs (0,1), (0,2), (1,2).
pub fn coalescence<T: Real>(vectors: &[Vec3<T>; 3]) -> [T; 3] {
    let one = T::one();
    [(0, 1), (0, 2), (1, 2)].map(|(i, j)| inner(&vectors[i], &vectors[j]).norm().min(one))
}

/// One sample of a sweep; `spectrum` is `None` when the point is infeasible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint<T> {
    pub param: T,
    pub spectrum: Option<SpectrumResult<T>>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpMarker<T> {
    pub order: u8,
    pub param: T,
    pub omega: Complex<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCurve<T> {
    pub parameter: Param,
    pub points: Vec<SweepPoint<T>>,
    /// Eigenvalues per sample in branch order; NaN at infeasible samples.
    pub tracks: Vec<[Complex<T>; 3]>,
    pub markers: Vec<EpMarker<T>>,
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Permutation of `next` closest to `prev` in total squared distance.
pub fn match_branches<T: Real>(prev: &[Complex<T>; 3], next: &[Complex<T>; 3]) -> [Complex<T>; 3] {
    let cost =
        |p: &[usize; 3]| (0..3).fold(T::zero(), |acc, k| acc + (next[p[k]] - prev[k]).norm_sqr());
    let mut best = PERMS[0];
    let mut best_cost = cost(&best);
    for p in PERMS.iter().skip(1) {
        let c = cost(p);
        if c < best_cost {
            best = *p;
            best_cost = c;
        }
    }
    best.map(|k| next[k])
}

/// Samples `family` at `n` evenly spaced values of `param` in [lo, hi].
///
/// Infeasible samples are kept with their error message. EP2 markers come
/// from sign changes of Δ between consecutive samples, refined by
/// bisection; EP3 markers from local minima of |A|/s' + |B|/s'' refined by
/// golden-section search and accepted below 1e-6.
pub fn sweep<T: Real>(
    family: &Family<T>,
    param: Param,
    lo: T,
    hi: T,
    n: usize,
) -> Result<SweepCurve<T>> {
    if n < 2 {
        return Err(Error::Usage("a sweep needs at least 2 samples".into()));
    }
    if !(lo < hi) {
        return Err(Error::Usage(format!("empty sweep range [{lo}, {hi}]")));
    }
    let values: Vec<T> = (0..n)
        .map(|i| lo + (hi - lo) * T::lit(i as f64) / T::lit((n - 1) as f64))
        .collect();
    let points: Vec<SweepPoint<T>> = values
        .par_iter()
        .map(|&x| {
            match family
                .with(param, x)
                .scenario()
                .and_then(|sp| Hamiltonian3::build(&sp, T::zero()))
            {
                Ok(h) => SweepPoint {
                    param: x,
                    spectrum: Some(eigensystem(&h)),
                    error: None,
                },
                Err(e) => SweepPoint {
                    param: x,
                    spectrum: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let nan = Complex::new(T::nan(), T::nan());
    let mut tracks = Vec::with_capacity(n);
    let mut prev: Option<[Complex<T>; 3]> = None;
    for p in &points {
        let row = match (&p.spectrum, prev) {
            (Some(s), Some(pr)) => match_branches(&pr, &s.eigenvalues),
            (Some(s), None) => s.eigenvalues,
            (None, _) => [nan; 3],
        };
        prev = p.spectrum.as_ref().map(|_| row);
        tracks.push(row);
    }

    let markers = find_markers(family, param, &points);
    Ok(SweepCurve {
        parameter: param,
        points,
        tracks,
        markers,
    })
}

fn find_markers<T: Real>(
    family: &Family<T>,
    param: Param,
    points: &[SweepPoint<T>],
) -> Vec<EpMarker<T>> {
    let build = |x: T| family.with(param, x).scenario();
    let real_delta = |p: &SweepPoint<T>| -> Option<T> {
        let s = p.spectrum.as_ref()?;
        s.class?;
        Some(s.residuals.delta.re)
    };
    let mut markers: Vec<EpMarker<T>> = Vec::new();
    for w in points.windows(2) {
        let (Some(da), Some(db)) = (real_delta(&w[0]), real_delta(&w[1])) else {
            continue;
        };
        let straddles = (da > T::zero() && db < T::zero()) || (da < T::zero() && db > T::zero());
        if !straddles {
            continue;
        }
        match ep2_find_with(build, w[0].param, w[1].param, family.report_branch()) {
            Ok(r) => markers.push(marker_from(&r, param)),
            Err(Error::Ep3InsideBracket { at }) => {
                let x = T::lit(at);
                if let Ok(sp) = build(x) {
                    let c = crate::cubic::characteristic_coeffs(&sp, T::zero());
                    markers.push(EpMarker {
                        order: 3,
                        param: x,
                        omega: -c.c2 / T::lit(3.0),
                    });
                }
            }
            Err(_) => {}
        }
    }

    let defect = |x: T| -> Option<(T, Complex<T>)> {
        let sp = build(x).ok()?;
        let c = crate::cubic::characteristic_coeffs(&sp, T::zero());
        Some((ep3_defect(&c), -c.c2 / T::lit(3.0)))
    };
    let f: Vec<Option<T>> = points
        .iter()
        .map(|p| p.spectrum.as_ref().map(|s| ep3_defect(&s.coefficients)))
        .collect();
    let spacing = (points[1].param - points[0].param).abs();
    for i in 1..points.len() - 1 {
        let (Some(l), Some(m), Some(r)) = (f[i - 1], f[i], f[i + 1]) else {
            continue;
        };
        if !(m <= l && m <= r) {
            continue;
        }
        let Some((x, val)) = golden_min(
            |x| defect(x).map(|d| d.0),
            points[i - 1].param,
            points[i + 1].param,
        ) else {
            continue;
        };
        if val >= T::lit(1e-6) {
            continue;
        }
        if markers
            .iter()
            .any(|m| m.order == 3 && (m.param - x).abs() <= spacing)
        {
            continue;
        }
        if let Some((_, omega)) = defect(x) {
            markers.push(EpMarker {
                order: 3,
                param: x,
                omega,
            });
        }
    }
    markers.sort_by(|a, b| {
        a.param
            .partial_cmp(&b.param)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    markers
}

fn marker_from<T: Real>(r: &EpReport<T>, param: Param) -> EpMarker<T> {
    let x = match param {
        Param::Eta => r.params.eta,
        Param::Lambda => r.params.lambda,
        Param::G1 => r.params.g1_norm,
        Param::G2 => r.params.g2_norm(),
        Param::Delta1 => r.params.delta1_norm,
        Param::Delta2 => r.params.delta2_norm,
        Param::GammaM => r.params.gamma_m_norm,
    };
    EpMarker {
        order: r.order,
        param: x,
        omega: r.omega_ep,
    }
}

/// Golden-section minimization of `f` on [a, b].
pub(crate) fn golden_min<T: Real, F: Fn(T) -> Option<T>>(
    f: F,
    mut a: T,
    mut b: T,
) -> Option<(T, T)> {
    let g = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if (b - a).abs() <= T::lit(1e-14) * T::one().max(a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Some(if fc < fd { (c, fc) } else { (d, fd) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudo_hermitian::{from_cavity_gain, from_mechanical_gain, Branch};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn eigen_residual(h: &Hamiltonian3<f64>, s: &SpectrumResult<f64>) -> f64 {
        (0..3)
            .map(|k| norm(&h.shifted(s.eigenvalues[k]).apply(&s.eigenvectors[k])))
            .fold(0.0, f64::max)
    }

    /// Rescales so the third component is 1.
    fn third_is_one(v: &Vec3<f64>) -> Vec3<f64> {
        let s = v[2].inv();
        scale(v, s)
    }

    #[test]
    fn symmetric_ep3_eigensystem() {
        let sp = from_mechanical_gain(1.0, 1.0, 2.0 / 3f64.sqrt(), Branch::Minus).unwrap();
        let h = Hamiltonian3::build(&sp, 0.0).unwrap();
        let s = eigensystem(&h);
        assert_eq!(s.class, Some(SpectralClass::Ep3));
        for z in s.eigenvalues {
            assert!(z.norm() < 1e-12);
        }
        let want = [c(0.5, -0.866025), c(-0.5, -0.866025), c(1.0, 0.0)];
        for v in s.eigenvectors {
            let v = third_is_one(&v);
            for k in 0..3 {
                assert!((v[k] - want[k]).norm() < 1e-5, "{v:?}");
            }
        }
        assert!(s.overlaps().iter().all(|o| *o > 1.0 - 1e-12));
        assert!(eigen_residual(&h, &s) < 1e-8 * h.frobenius_norm());
    }

    #[test]
    fn pt_ep3_eigensystem() {
        let sp = from_cavity_gain(0.0, 1.0, 0.5f64.sqrt());
        let h = Hamiltonian3::build(&sp, 0.0).unwrap();
        let s = eigensystem(&h);
        assert_eq!(s.class, Some(SpectralClass::Ep3));
        let want = [c(0.0, 0.707), c(0.0, -0.707), c(1.0, 0.0)];
        for v in s.eigenvectors {
            let v = third_is_one(&v);
            for k in 0..3 {
                assert!((v[k] - want[k]).norm() < 1e-3);
            }
        }
    }

    #[test]
    fn pt_ep2_eigensystem() {
        // the printed G₁ = 1.692 is rounded; the exact EP2 sits at 1.69249
        let ep2 =
            crate::ep::ep2_find(&Family::cavity_gain(2.0, 1.0, 1.5), Param::G1, 1.5, 2.0).unwrap();
        let h = Hamiltonian3::build(&ep2.params, 0.0).unwrap();
        let s = eigensystem(&h);
        assert!((s.eigenvalues[0] - c(-1.510, 0.0)).norm() < 2e-3);
        for k in 1..3 {
            assert!((s.eigenvalues[k].re - 2.755).abs() < 2e-3);
        }
        // |a₁| = |a₂| in both vectors, so compare up to a global phase
        let aligned = |v: Vec3<f64>, want: Vec3<f64>| {
            let p = inner(&v, &want);
            scale(&v, p / p.norm())
        };
        let want = [c(0.626, 0.0), c(-0.172, -0.602), c(0.279, -0.370)];
        let v = aligned(s.eigenvectors[1], want);
        for (got, want) in v.iter().zip(want) {
            assert!((got - want).norm() < 1e-2, "{v:?}");
        }
        let want0 = [c(-0.373, 0.106), c(-0.373, -0.106), c(0.836, 0.0)];
        let v0 = aligned(s.eigenvectors[0], want0);
        for (got, want) in v0.iter().zip(want0) {
            assert!((got - want).norm() < 1e-2, "{v0:?}");
        }
    }

    #[test]
    fn identity_has_orthogonal_eigenvectors() {
        let one = c(1.0, 0.0);
        let z = c(0.0, 0.0);
        let h = Hamiltonian3::from_entries([[one, z, z], [z, one, z], [z, z, one]]);
        let s = eigensystem(&h);
        assert_eq!(s.null_dims, [3, 3, 3]);
        assert_eq!(s.overlaps(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn decoupled_pt_spectrum() {
        let sp = from_cavity_gain(0.0, 1.0, 0.0);
        let s = eigensystem(&Hamiltonian3::build(&sp, 0.0).unwrap());
        let got: Vec<_> = s.eigenvalues.to_vec();
        for want in [c(0.0, -1.0), c(0.0, 0.0), c(0.0, 1.0)] {
            assert!(got.iter().any(|z| (z - want).norm() < 1e-15));
        }
        assert_eq!(s.overlaps(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn phase_convention() {
        let v = phase_fix([c(0.0, 0.6), c(0.0, -0.8), c(0.0, 0.0)]);
        assert_eq!(v[1], c(0.8, 0.0));
        assert!((v[0] - c(-0.6, 0.0)).norm() < 1e-15);
        // ties resolve to the first index
        let v = phase_fix([c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(v[0].im == 0.0 && v[0].re > 0.0);
    }

    #[test]
    fn branch_matching_picks_nearest() {
        let prev = [c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
        let next = [c(2.1, 0.0), c(-0.1, 0.0), c(0.9, 0.0)];
        assert_eq!(
            match_branches(&prev, &next),
            [c(-0.1, 0.0), c(0.9, 0.0), c(2.1, 0.0)]
        );
    }

    #[test]
    fn symmetric_sweep() {
        let fam = Family::mechanical_gain(1.0, 1.0, 1.0, Branch::Minus);
        let curve = sweep(&fam, Param::G1, 1.0, 1.5, 51).unwrap();
        let s3 = 2.0 / 3f64.sqrt();
        for p in &curve.points {
            let s = p.spectrum.as_ref().unwrap();
            assert!(s.eigenvalues.iter().any(|z| z.norm() < 1e-7));
            let class = s.class.unwrap();
            if p.param < s3 - 1e-9 {
                assert_eq!(class, SpectralClass::OneRealConjugatePair);
            } else if p.param > s3 + 1e-9 {
                assert_eq!(class, SpectralClass::ThreeRealDistinct);
            }
        }
        assert_eq!(curve.markers.len(), 1);
        assert_eq!(curve.markers[0].order, 3);
        assert!((curve.markers[0].param - s3).abs() < 1e-8);
    }

    #[test]
    fn infeasible_points_are_not_fatal() {
        let fam = Family::mechanical_gain(1.0f64, 1.0, 1.0, Branch::Minus);
        let curve = sweep(&fam, Param::G1, 0.5, 1.5, 11).unwrap();
        assert!(curve.points[0].error.is_some());
        assert!(curve.tracks[0][0].re.is_nan());
        assert!(curve.points[10].spectrum.is_some());
    }

    #[test]
    fn pt_delta_sweep_markers() {
        let fam = Family::cavity_gain(0.0f64, 1.0, 1.0);
        let curve = sweep(&fam, Param::Delta1, -1.0, 1.0, 201).unwrap();
        let ep2: Vec<_> = curve.markers.iter().filter(|m| m.order == 2).collect();
        assert_eq!(ep2.len(), 2);
        assert!((ep2[0].param + 0.300).abs() < 0.01);
        assert!((ep2[1].param - 0.300).abs() < 0.01);
        assert!(ep2[0].omega.re < 0.0 && ep2[1].omega.re > 0.0);
    }
}
