//! Cross-checks against independent numerical routes: nalgebra's Schur
//! decomposition and matrix exponential, and determinant interpolation.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use epspectra::cubic::CubicCoeffs;
use epspectra::dynamics::{integrate_matrix, Trajectory};
use epspectra::hamiltonian::Hamiltonian3;
use epspectra::model::ScenarioParams;
use epspectra::pseudo_hermitian::{feasible, from_cavity_gain, from_mechanical_gain, Branch};
use epspectra::spectra::eigensystem;
use epspectra::{cardano_roots, characteristic_coeffs, perturbed_spectrum};

type C = Complex<f64>;

fn to_na(h: &Hamiltonian3<f64>) -> Matrix3<C> {
    Matrix3::from_fn(|i, j| h.get(i, j))
}

fn schur_eigenvalues(m: Matrix3<C>) -> [C; 3] {
    let ev = m
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular");
    [ev[0], ev[1], ev[2]]
}

/// Largest distance from a root in `a` to its best match in `b`, matching
/// greedily without reuse.
fn multiset_distance(a: &[C; 3], b: &[C; 3]) -> f64 {
    let mut used = [false; 3];
    let mut worst: f64 = 0.0;
    for z in a {
        let (k, d) = (0..3)
            .filter(|k| !used[*k])
            .map(|k| (k, (b[k] - z).norm()))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

fn companion(c: &CubicCoeffs<f64>) -> Matrix3<C> {
    let (o, z) = (C::new(1.0, 0.0), C::new(0.0, 0.0));
    Matrix3::new(-c.c2, -c.c1, -c.c0, o, z, z, z, o, z)
}

fn random_c(rng: &mut StdRng, r: f64) -> C {
    C::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

/// Minimum distance between roots, used to skip ill-conditioned samples.
fn min_gap(r: &[C; 3]) -> f64 {
    (r[0] - r[1])
        .norm()
        .min((r[0] - r[2]).norm())
        .min((r[1] - r[2]).norm())
}

#[test]
fn cardano_matches_companion_matrix() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0;
    for _ in 0..10_000 {
        let c = CubicCoeffs::new(
            random_c(&mut rng, 3.0),
            random_c(&mut rng, 3.0),
            random_c(&mut rng, 3.0),
        );
        let ours = cardano_roots(&c);
        let theirs = schur_eigenvalues(companion(&c));
        // a root cluster of width g moves by ~ulp/g under either method
        let tol = 1e-10 * c.residual_scale().max(1.0) / min_gap(&theirs).min(1.0);
        let d = multiset_distance(&ours, &theirs);
        assert!(d < tol.max(1e-10), "{c:?}: {ours:?} vs {theirs:?}");
        checked += 1;
    }
    assert_eq!(checked, 10_000);
}

#[test]
fn cardano_matches_companion_on_real_cubics_with_close_roots() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..2_000 {
        let a = rng.gen_range(-2.0..2.0);
        let sep = 10f64.powf(rng.gen_range(-3.0..0.0));
        let roots = [
            C::new(a, 0.0),
            C::new(a + sep, 0.0),
            C::new(rng.gen_range(-2.0..2.0), 0.0),
        ];
        let c = CubicCoeffs::from_roots(roots);
        let ours = cardano_roots(&c);
        let theirs = schur_eigenvalues(companion(&c));
        let tol = 1e-10 / min_gap(&roots).min(1.0);
        assert!(
            multiset_distance(&ours, &theirs) < tol,
            "{roots:?}: {ours:?} vs {theirs:?}"
        );
    }
}

/// Coefficients of det(zI − H) from its values at z = 0, ±1.
fn interpolated_coeffs(h: &Hamiltonian3<f64>) -> [C; 3] {
    let m = to_na(h);
    let p = |z: f64| (Matrix3::from_diagonal_element(C::new(z, 0.0)) - m).determinant();
    let c0 = p(0.0);
    let (p1, pm1) = (p(1.0), p(-1.0));
    let c2 = (p1 + pm1) / 2.0 - c0;
    let c1 = (p1 - pm1) / 2.0 - 1.0;
    [c2, c1, c0]
}

fn random_records(rng: &mut StdRng, n: usize) -> Vec<ScenarioParams<f64>> {
    (0..n)
        .map(|k| match k % 3 {
            0 => {
                let eta = rng.gen_range(0.2..5.0);
                let lambda = rng.gen_range(0.1..3.0);
                let g1 = feasible(eta, lambda).unwrap() + rng.gen_range(0.0..2.0);
                let b = if rng.gen_bool(0.5) {
                    Branch::Plus
                } else {
                    Branch::Minus
                };
                from_mechanical_gain(eta, lambda, g1, b).unwrap()
            }
            1 => from_cavity_gain(
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.1..3.0),
                rng.gen_range(-3.0..3.0),
            ),
            _ => ScenarioParams::general(
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            ),
        })
        .collect()
}

#[test]
fn characteristic_coeffs_match_determinant() {
    let mut rng = StdRng::seed_from_u64(3);
    for sp in random_records(&mut rng, 3_000) {
        let eps = rng.gen_range(0.0..0.1);
        let h = Hamiltonian3::build(&sp.perturbed(eps), eps).unwrap();
        let want = interpolated_coeffs(&h);
        let got = characteristic_coeffs(&sp, eps);
        let s = h.frobenius_norm().max(1.0);
        for (g, w, p) in [
            (got.c2, want[0], 1),
            (got.c1, want[1], 2),
            (got.c0, want[2], 3),
        ] {
            assert!(
                (g - w).norm() < 1e-12 * s.powi(p),
                "{sp:?} eps={eps}: {g} vs {w}"
            );
        }
    }
}

#[test]
fn perturbed_roots_match_matrix_eigenvalues() {
    let mut rng = StdRng::seed_from_u64(5);
    let mut checked = 0;
    for sp in random_records(&mut rng, 3_000) {
        let eps = rng.gen_range(0.0..0.1);
        let h = Hamiltonian3::build(&sp.perturbed(eps), eps).unwrap();
        let theirs = schur_eigenvalues(to_na(&h));
        if min_gap(&theirs) < 1e-3 {
            continue;
        }
        let ours = perturbed_spectrum(&sp, eps);
        let tol = 1e-10 * h.frobenius_norm().max(1.0) / min_gap(&theirs).min(1.0);
        assert!(
            multiset_distance(&ours, &theirs) < tol,
            "{sp:?}: {ours:?} vs {theirs:?}"
        );
        checked += 1;
    }
    assert!(checked > 2_500);
}

fn expm_state(h: &Hamiltonian3<f64>, v0: [C; 3], t: f64) -> [C; 3] {
    let u = (to_na(h) * C::new(0.0, -t)).exp();
    let v = u * Vector3::new(v0[0], v0[1], v0[2]);
    [v[0], v[1], v[2]]
}

fn state_err(a: &[C; 3], b: &[C; 3]) -> f64 {
    let d: f64 = (0..3).map(|k| (a[k] - b[k]).norm_sqr()).sum::<f64>().sqrt();
    let n: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    d / n
}

#[test]
fn rk4_matches_spectral_decomposition() {
    let mut rng = StdRng::seed_from_u64(13);
    let v0 = [C::new(1.0, 0.0), C::new(0.3, -0.2), C::new(0.0, 0.5)];
    for sp in random_records(&mut rng, 30) {
        let h = Hamiltonian3::from_scenario(&sp).unwrap();
        let s = eigensystem(&h);
        if min_gap(&s.eigenvalues) < 0.05 {
            continue;
        }
        let norm = h.frobenius_norm();
        let t_end = 20.0 / norm;
        let tr = integrate_matrix(&h, v0, t_end, 1e-3 / norm).unwrap();
        // v(t) = Σ c_k e^{−iΩ_k t} v_k with V c = v0
        let vm = Matrix3::from_fn(|i, k| s.eigenvectors[k][i]);
        let c = vm.lu().solve(&Vector3::new(v0[0], v0[1], v0[2])).unwrap();
        for (t, state) in tr.times.iter().zip(&tr.states).step_by(97) {
            let mut want = [C::new(0.0, 0.0); 3];
            for k in 0..3 {
                let phase = (C::new(0.0, -1.0) * s.eigenvalues[k] * *t).exp();
                for i in 0..3 {
                    want[i] += c[k] * phase * s.eigenvectors[k][i];
                }
            }
            assert!(state_err(state, &want) < 1e-6, "{sp:?} t={t}");
            assert!(state_err(state, &expm_state(&h, v0, *t)) < 1e-6);
        }
    }
}

fn final_error(h: &Hamiltonian3<f64>, v0: [C; 3], t_end: f64, dt: f64) -> f64 {
    let tr: Trajectory<f64> = integrate_matrix(h, v0, t_end, dt).unwrap();
    state_err(tr.states.last().unwrap(), &expm_state(h, v0, t_end))
}

#[test]
fn rk4_is_fourth_order() {
    let sp = from_mechanical_gain(2.0, 0.5, 2.5, Branch::Plus).unwrap();
    let h = Hamiltonian3::from_scenario(&sp).unwrap();
    let v0 = [C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)];
    let dt = 0.04 / h.frobenius_norm();
    let e1 = final_error(&h, v0, 5.0, dt);
    let e2 = final_error(&h, v0, 5.0, dt / 2.0);
    let ratio = e1 / e2;
    assert!(
        (13.0..19.0).contains(&ratio),
        "error ratio {ratio} ({e1:e} -> {e2:e})"
    );
}
