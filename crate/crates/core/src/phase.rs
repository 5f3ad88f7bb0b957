//! Two-parameter phase diagrams of the discriminant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cubic::{
    characteristic_coeffs, classify, discriminant, CubicCoeffs, SpectralClass, DEFAULT_CLASSIFY_TOL,
};
use crate::ep::ep3_defect;
use crate::error::{Error, Result};
use crate::family::{Family, Param};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis<T> {
    pub param: Param,
    pub lo: T,
    pub hi: T,
    pub n: usize,
}

impl<T: Real> Axis<T> {
    pub fn new(param: Param, lo: T, hi: T, n: usize) -> Self {
        Axis { param, lo, hi, n }
    }

    pub fn value(&self, i: usize) -> T {
        self.lo + (self.hi - self.lo) * T::lit(i as f64) / T::lit((self.n - 1) as f64)
    }

    pub fn step(&self) -> T {
        (self.hi - self.lo) / T::lit((self.n - 1) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellClass {
    Spectral(SpectralClass),
    /// The family has no record at this point (e.g. Δ₁² < 0).
    Infeasible,
    /// The record exists but its characteristic cubic is not real.
    NonReal,
}

impl CellClass {
    pub fn label(&self) -> &'static str {
        match self {
            CellClass::Spectral(c) => c.label(),
            CellClass::Infeasible => "infeasible",
            CellClass::NonReal => "non_real",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell<T> {
    pub x: T,
    pub y: T,
    pub class: CellClass,
    /// Real parts of Δ, A and B; NaN when infeasible.
    pub delta: T,
    pub a: T,
    pub b: T,
    pub feasible: bool,
}

/// Cells are stored row by row: index = iy·nx + ix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagramGrid<T> {
    pub x_axis: Axis<T>,
    pub y_axis: Axis<T>,
    pub cells: Vec<PhaseCell<T>>,
    /// Points on the Δ = 0 curve between neighbouring cells of opposite sign.
    pub boundary_points: Vec<(T, T)>,
    /// Points where A = B = 0.
    pub ep3_markers: Vec<(T, T)>,
}

impl<T: Real> PhaseDiagramGrid<T> {
    pub fn cell(&self, ix: usize, iy: usize) -> &PhaseCell<T> {
        &self.cells[iy * self.x_axis.n + ix]
    }
}

/// Characteristic cubic of `family` at (x, y).
fn coeffs_at<T: Real>(
    family: &Family<T>,
    xa: &Axis<T>,
    ya: &Axis<T>,
    x: T,
    y: T,
) -> Result<CubicCoeffs<T>> {
    let sp = family.with(xa.param, x).with(ya.param, y).scenario()?;
    Ok(characteristic_coeffs(&sp, T::zero()))
}

/// Classifies the point (x, y) exactly as a grid cell would.
pub fn classify_point<T: Real>(
    family: &Family<T>,
    xa: &Axis<T>,
    ya: &Axis<T>,
    x: T,
    y: T,
) -> PhaseCell<T> {
    let nan = T::nan();
    match coeffs_at(family, xa, ya, x, y) {
        Err(_) => PhaseCell {
            x,
            y,
            class: CellClass::Infeasible,
            delta: nan,
            a: nan,
            b: nan,
            feasible: false,
        },
        Ok(c) => {
            let d = discriminant(&c);
            let class = match classify(&c, T::lit(DEFAULT_CLASSIFY_TOL)) {
                Ok(k) => CellClass::Spectral(k),
                Err(_) => CellClass::NonReal,
            };
            PhaseCell {
                x,
                y,
                class,
                delta: d.delta.re,
                a: d.a.re,
                b: d.b.re,
                feasible: true,
            }
        }
    }
}

/// Classifies every grid point, then extracts the Δ = 0 boundary and the
/// A = B = 0 crossings.
///
/// Boundary points use linear interpolation of Δ along each grid edge whose
/// end cells have opposite signs, followed by one secant step. EP3 markers
/// start from every 2×2 block in which both A and B change sign and are
/// refined by Newton's method on (A, B).
pub fn phase_diagram<T: Real>(
    family: &Family<T>,
    x_axis: Axis<T>,
    y_axis: Axis<T>,
) -> Result<PhaseDiagramGrid<T>> {
    if x_axis.n < 2 || y_axis.n < 2 {
        return Err(Error::Usage("each axis needs at least 2 samples".into()));
    }
    if !(x_axis.lo < x_axis.hi) || !(y_axis.lo < y_axis.hi) {
        return Err(Error::Usage("axis ranges must be increasing".into()));
    }
    if x_axis.param == y_axis.param {
        return Err(Error::Usage(
            "the two axes must be different parameters".into(),
        ));
    }
    let (nx, ny) = (x_axis.n, y_axis.n);
    let cells: Vec<PhaseCell<T>> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            classify_point(
                family,
                &x_axis,
                &y_axis,
                x_axis.value(idx % nx),
                y_axis.value(idx / nx),
            )
        })
        .collect();

    let real = |c: &PhaseCell<T>| matches!(c.class, CellClass::Spectral(_));
    let delta_at = |x: T, y: T| -> Option<T> {
        let c = coeffs_at(family, &x_axis, &y_axis, x, y).ok()?;
        Some(discriminant(&c).delta.re)
    };

    let mut edges = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let i = iy * nx + ix;
            if ix + 1 < nx {
                edges.push((i, i + 1));
            }
            if iy + 1 < ny {
                edges.push((i, i + nx));
            }
        }
    }
    let boundary_points: Vec<(T, T)> = edges
        .par_iter()
        .filter_map(|&(i, j)| {
            let (p, q) = (&cells[i], &cells[j]);
            if !real(p)
                || !real(q)
                || !((p.delta > T::zero()) != (q.delta > T::zero()))
                || p.delta == T::zero()
                || q.delta == T::zero()
            {
                return None;
            }
            Some(refine_crossing(p, q, &delta_at))
        })
        .collect();

    let mut blocks = Vec::new();
    for iy in 0..ny - 1 {
        for ix in 0..nx - 1 {
            let ids = [
                iy * nx + ix,
                iy * nx + ix + 1,
                (iy + 1) * nx + ix,
                (iy + 1) * nx + ix + 1,
            ];
            if ids.iter().any(|&k| !real(&cells[k])) {
                continue;
            }
            let spans = |f: fn(&PhaseCell<T>) -> T| {
                let v = ids.map(|k| f(&cells[k]));
                v.iter().any(|x| *x <= T::zero()) && v.iter().any(|x| *x >= T::zero())
            };
            if spans(|c| c.a) && spans(|c| c.b) {
                blocks.push((ix, iy));
            }
        }
    }
    let candidates: Vec<(T, T)> = blocks
        .par_iter()
        .filter_map(|&(ix, iy)| newton_ep3(family, &x_axis, &y_axis, ix, iy))
        .collect();
    let (hx, hy) = (x_axis.step(), y_axis.step());
    let mut ep3_markers: Vec<(T, T)> = Vec::new();
    for p in candidates {
        if !ep3_markers
            .iter()
            .any(|q| (q.0 - p.0).abs() <= hx && (q.1 - p.1).abs() <= hy)
        {
            ep3_markers.push(p);
        }
    }

    Ok(PhaseDiagramGrid {
        x_axis,
        y_axis,
        cells,
        boundary_points,
        ep3_markers,
    })
}

fn refine_crossing<T: Real, F: Fn(T, T) -> Option<T>>(
    p: &PhaseCell<T>,
    q: &PhaseCell<T>,
    delta_at: &F,
) -> (T, T) {
    let lerp = |t: T| (p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t);
    let t1 = p.delta / (p.delta - q.delta);
    let Some(f1) = ({
        let (x, y) = lerp(t1);
        delta_at(x, y)
    }) else {
        return lerp(t1);
    };
    // secant through the new point and the endpoint on the other side of zero
    let (t0, f0) = if (f1 > T::zero()) != (p.delta > T::zero()) {
        (T::zero(), p.delta)
    } else {
        (T::one(), q.delta)
    };
    if f1 == f0 {
        return lerp(t1);
    }
    let t2 = (t1 - f1 * (t1 - t0) / (f1 - f0))
        .max(T::zero())
        .min(T::one());
    lerp(t2)
}

/// Newton iteration for A = B = 0 from the centre of block (ix, iy).
fn newton_ep3<T: Real>(
    family: &Family<T>,
    xa: &Axis<T>,
    ya: &Axis<T>,
    ix: usize,
    iy: usize,
) -> Option<(T, T)> {
    let ab = |x: T, y: T| -> Option<(T, T)> {
        let c = coeffs_at(family, xa, ya, x, y).ok()?;
        let d = discriminant(&c);
        Some((d.a.re, d.b.re))
    };
    let (hx, hy) = (xa.step(), ya.step());
    let half = T::lit(0.5);
    let (mut x, mut y) = (xa.value(ix) + hx * half, ya.value(iy) + hy * half);
    for _ in 0..50 {
        let (fa, fb) = ab(x, y)?;
        let ex = T::lit(1e-7) * T::one().max(x.abs());
        let ey = T::lit(1e-7) * T::one().max(y.abs());
        let (ax1, bx1) = ab(x + ex, y)?;
        let (ax0, bx0) = ab(x - ex, y)?;
        let (ay1, by1) = ab(x, y + ey)?;
        let (ay0, by0) = ab(x, y - ey)?;
        let two = T::lit(2.0);
        let (jax, jbx) = ((ax1 - ax0) / (two * ex), (bx1 - bx0) / (two * ex));
        let (jay, jby) = ((ay1 - ay0) / (two * ey), (by1 - by0) / (two * ey));
        let det = jax * jby - jay * jbx;
        if det == T::zero() || !det.is_finite() {
            return None;
        }
        let dx = (fa * jby - fb * jay) / det;
        let dy = (jax * fb - jbx * fa) / det;
        x -= dx;
        y -= dy;
        if dx.abs() <= T::lit(1e-14) * T::one().max(x.abs())
            && dy.abs() <= T::lit(1e-14) * T::one().max(y.abs())
        {
            break;
        }
    }
    let inside = x >= xa.value(ix) - hx
        && x <= xa.value(ix) + T::lit(2.0) * hx
        && y >= ya.value(iy) - hy
        && y <= ya.value(iy) + T::lit(2.0) * hy;
    let c = coeffs_at(family, xa, ya, x, y).ok()?;
    (inside && ep3_defect(&c) < T::lit(1e-6)).then_some((x, y))
}
