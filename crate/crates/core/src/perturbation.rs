//! Spectra under a cavity-1 frequency shift ε, Newton–Puiseux coefficients
//! at an EP3 and power-law fits of the eigenvalue splitting.
//!
//! Near an EP3 the roots behave as Ω̃ₖ = Ω_EP + d₁ε^{1/3} + d₂ε^{2/3} + …;
//! near an EP2 the coalesced pair splits as ε^{1/2}.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cubic::{
    cardano_roots, characteristic_coeffs, classify, CubicCoeffs, SpectralClass,
    DEFAULT_CLASSIFY_TOL,
};
use crate::error::{Error, Result};
use crate::model::ScenarioParams;
use crate::scalar::{cx, Real};
use crate::spectra::match_branches;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PuiseuxBranch<T> {
    /// 1, 2 or 3.
    pub index: u8,
    pub omega_ep: Complex<T>,
    pub d1: Complex<T>,
    pub d2: Complex<T>,
}

impl<T: Real> PuiseuxBranch<T> {
    /// Two-term series Ω_EP + d₁ε^{1/3} + d₂ε^{2/3}.
    pub fn eval(&self, epsilon: T) -> Complex<T> {
        let e13 = epsilon.cbrt();
        self.omega_ep + self.d1 * e13 + self.d2 * (e13 * e13)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingFit<T> {
    pub exponent: T,
    pub prefactor: T,
    pub r_squared: T,
    pub epsilon_grid: Vec<T>,
    /// Branch pair (i, j) whose real-part gap was fitted.
    pub pair: (usize, usize),
    pub gaps: Vec<T>,
}

/// Sorted roots of the characteristic cubic with cavity 1 shifted by ε.
pub fn perturbed_spectrum<T: Real>(sp: &ScenarioParams<T>, epsilon: T) -> [Complex<T>; 3] {
    let mut r = cardano_roots(&characteristic_coeffs(sp, epsilon));
    r.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    r
}

/// ε-linear part of the characteristic polynomial, P_ε(x) = q₂x² + q₁x + q₀.
fn epsilon_part<T: Real>(sp: &ScenarioParams<T>) -> CubicCoeffs<T> {
    characteristic_coeffs(sp, T::one()) - characteristic_coeffs(sp, T::zero())
}

fn eval_quadratic<T: Real>(q: &CubicCoeffs<T>, x: Complex<T>) -> Complex<T> {
    (q.c2 * x + q.c1) * x + q.c0
}

/// Leading coefficients of the three Puiseux branches at an EP3.
///
/// d₁ solves d₁³ = −P_ε(Ω_EP) exactly (branches k = 0, 1, 2 are the
/// principal cube root times e^{2πik/3}); d₂ is the intercept of a
/// least-squares fit of (Ω̃ − Ω_EP − d₁ε^{1/3})/ε^{2/3} against ε^{1/3} over
/// 25 log-spaced ε in [1e-8, 1e-4].
pub fn puiseux_coefficients<T: Real>(sp: &ScenarioParams<T>) -> Result<[PuiseuxBranch<T>; 3]> {
    let c0 = characteristic_coeffs(sp, T::zero());
    match classify(&c0, T::lit(DEFAULT_CLASSIFY_TOL)) {
        Ok(SpectralClass::Ep3) => {}
        Ok(other) => {
            return Err(Error::Usage(format!(
                "Puiseux coefficients need an EP3, the record classifies as {}",
                other.label()
            )))
        }
        Err(e) => {
            return Err(Error::Usage(format!(
                "Puiseux coefficients need an EP3: {e}"
            )))
        }
    }
    let omega = -c0.c2 / T::lit(3.0);
    let q0 = eval_quadratic(&epsilon_part(sp), omega);
    let d1_cubed = -q0;
    let modulus = d1_cubed.norm().cbrt();
    let phase = d1_cubed.arg() / T::lit(3.0);
    let turn = T::lit(2.0) * T::PI() / T::lit(3.0);
    let d1 = [0, 1, 2].map(|k| Complex::from_polar(modulus, phase + turn * T::lit(k as f64)));

    let n = 25;
    let (lo, hi) = (T::lit(1e-8).ln(), T::lit(1e-4).ln());
    let grid: Vec<T> = (0..n)
        .map(|i| (lo + (hi - lo) * T::lit(i as f64) / T::lit((n - 1) as f64)).exp())
        .collect();
    let samples: Vec<[Complex<T>; 3]> = grid.iter().map(|&e| perturbed_spectrum(sp, e)).collect();

    let mut out = [PuiseuxBranch {
        index: 1,
        omega_ep: omega,
        d1: d1[0],
        d2: Complex::new(T::zero(), T::zero()),
    }; 3];
    for k in 0..3 {
        let mut xs = Vec::with_capacity(n);
        let mut ys = Vec::with_capacity(n);
        for (&e, roots) in grid.iter().zip(&samples) {
            let e13 = e.cbrt();
            let guess = omega + d1[k] * e13;
            let root = roots
                .iter()
                .min_by(|a, b| {
                    (**a - guess)
                        .norm()
                        .partial_cmp(&(**b - guess).norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .copied()
                .unwrap_or(guess);
            xs.push(e13);
            ys.push((root - guess) / (e13 * e13));
        }
        let (re0, _) = line_fit(&xs, &ys.iter().map(|z| z.re).collect::<Vec<_>>());
        let (im0, _) = line_fit(&xs, &ys.iter().map(|z| z.im).collect::<Vec<_>>());
        out[k] = PuiseuxBranch {
            index: (k + 1) as u8,
            omega_ep: omega,
            d1: d1[k],
            d2: cx(re0, im0),
        };
    }
    Ok(out)
}

/// Ordinary least squares y = a + b·x; returns (a, b).
fn line_fit<T: Real>(x: &[T], y: &[T]) -> (T, T) {
    let n = T::lit(x.len() as f64);
    let mx = x.iter().fold(T::zero(), |a, &v| a + v) / n;
    let my = y.iter().fold(T::zero(), |a, &v| a + v) / n;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for (&xi, &yi) in x.iter().zip(y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx) * (xi - mx);
    }
    let b = if sxx > T::zero() {
        sxy / sxx
    } else {
        T::zero()
    };
    (my - b * mx, b)
}

/// Coefficient of determination of the fit y = a + b·x.
fn r_squared<T: Real>(x: &[T], y: &[T], a: T, b: T) -> T {
    let n = T::lit(y.len() as f64);
    let my = y.iter().fold(T::zero(), |acc, &v| acc + v) / n;
    let mut ss_res = T::zero();
    let mut ss_tot = T::zero();
    for (&xi, &yi) in x.iter().zip(y) {
        let r = yi - (a + b * xi);
        ss_res += r * r;
        ss_tot += (yi - my) * (yi - my);
    }
    if ss_tot == T::zero() {
        return if ss_res == T::zero() {
            T::one()
        } else {
            T::zero()
        };
    }
    (T::one() - ss_res / ss_tot).max(T::zero()).min(T::one())
}

/// 25 log-spaced points in [1e-6, 1e-2].
pub fn default_epsilon_grid<T: Real>() -> Vec<T> {
    log_grid(T::lit(1e-6), T::lit(1e-2), 25)
}

pub fn log_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    let (a, b) = (lo.ln(), hi.ln());
    let last = T::lit((n.max(2) - 1) as f64);
    (0..n)
        .map(|i| (a + (b - a) * T::lit(i as f64) / last).exp())
        .collect()
}

fn check_grid<T: Real>(grid: &[T]) -> Result<()> {
    if grid.len() < 3 {
        return Err(Error::Usage("epsilon grid needs at least 3 points".into()));
    }
    if grid.iter().any(|&e| !(e > T::zero())) || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Usage(
            "epsilon grid must be positive and strictly increasing".into(),
        ));
    }
    let slack = T::lit(1e-9);
    let (first, last) = (grid[0], grid[grid.len() - 1]);
    if first < T::lit(1e-8) * (T::one() - slack) || last > T::lit(1e-2) * (T::one() + slack) {
        return Err(Error::Usage(
            "epsilon grid must lie within [1e-8, 1e-2]".into(),
        ));
    }
    if last / first < T::lit(1e3) * (T::one() - slack) {
        return Err(Error::Usage(
            "epsilon grid must span at least 3 decades".into(),
        ));
    }
    Ok(())
}

/// Roots at each ε, branch-matched starting from the unperturbed roots.
fn tracked_roots<T: Real>(
    sp: &ScenarioParams<T>,
    grid: &[T],
) -> (Vec<[Complex<T>; 3]>, [Complex<T>; 3]) {
    let base = perturbed_spectrum(sp, T::zero());
    let raw: Vec<[Complex<T>; 3]> = grid
        .par_iter()
        .map(|&e| perturbed_spectrum(sp, e))
        .collect();
    let mut prev = base;
    let tracked = raw
        .iter()
        .map(|r| {
            prev = match_branches(&prev, r);
            prev
        })
        .collect();
    (tracked, base)
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Power-law fits of the real-part gap change for all three branch pairs.
///
/// The gap of pair (i, j) is |Re(Ω̃ᵢ − Ω̃ⱼ)(ε) − Re(Ωᵢ − Ωⱼ)(0)|. Exponent
/// and r² come from a log-log least-squares fit. The prefactor is the
/// intercept of gap/ε^{1/n} fitted against ε^{1/n}, with n = round(1/exponent)
/// clamped to 1..3, so that the next order of the series does not bias it.
pub fn splitting_fits<T: Real>(
    sp: &ScenarioParams<T>,
    epsilon_grid: &[T],
) -> Result<[SplittingFit<T>; 3]> {
    check_grid(epsilon_grid)?;
    let (tracked, base) = tracked_roots(sp, epsilon_grid);
    let logs: Vec<T> = epsilon_grid.iter().map(|e| e.ln()).collect();
    Ok(PAIRS.map(|(i, j)| {
        let gap0 = (base[i] - base[j]).re;
        let gaps: Vec<T> = tracked
            .iter()
            .map(|r| ((r[i] - r[j]).re - gap0).abs())
            .collect();
        fit_pair(epsilon_grid, &logs, gaps, (i, j))
    }))
}

fn fit_pair<T: Real>(
    grid: &[T],
    logs: &[T],
    gaps: Vec<T>,
    pair: (usize, usize),
) -> SplittingFit<T> {
    if gaps.iter().any(|g| !(*g > T::zero())) {
        return SplittingFit {
            exponent: T::nan(),
            prefactor: T::nan(),
            r_squared: T::zero(),
            epsilon_grid: grid.to_vec(),
            pair,
            gaps,
        };
    }
    let ly: Vec<T> = gaps.iter().map(|g| g.ln()).collect();
    let (a, b) = line_fit(logs, &ly);
    let r2 = r_squared(logs, &ly, a, b);
    let order = (T::one() / b).round().max(T::one()).min(T::lit(3.0));
    let inv = T::one() / order;
    let xs: Vec<T> = grid.iter().map(|e| e.powf(inv)).collect();
    let ys: Vec<T> = gaps.iter().zip(&xs).map(|(g, x)| *g / *x).collect();
    let (prefactor, _) = line_fit(&xs, &ys);
    SplittingFit {
        exponent: b,
        prefactor,
        r_squared: r2,
        epsilon_grid: grid.to_vec(),
        pair,
        gaps,
    }
}

/// The branch-pair fit with the highest r²; errors when r² < 0.99.
pub fn splitting_fit<T: Real>(
    sp: &ScenarioParams<T>,
    epsilon_grid: &[T],
) -> Result<SplittingFit<T>> {
    let fits = splitting_fits(sp, epsilon_grid)?;
    let best = fits
        .into_iter()
        .max_by(|a, b| {
            a.r_squared
                .partial_cmp(&b.r_squared)
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .ok_or_else(|| Error::Domain("no branch pair to fit".into()))?;
    if !(best.r_squared >= T::lit(0.99)) {
        return Err(Error::FitQuality {
            r_squared: best.r_squared.to_f64_lossy(),
        });
    }
    Ok(best)
}
