//! Mean-field dynamics dv/dt = −iHv of the linearized modes (a₁, a₂, b).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian3;
use crate::model::ScenarioParams;
use crate::scalar::{cx, Real};

/// Largest allowed dt·‖H‖_F.
pub const STABILITY_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<[Complex<T>; 3]>,
}

/// 0.01/max(1, ‖H‖_F).
pub fn default_dt<T: Real>(h: &Hamiltonian3<T>) -> T {
    T::lit(0.01) / T::one().max(h.frobenius_norm())
}

/// Classical RK4 from t = 0 to `t_end`. The step is `dt` shortened
/// uniformly so that an integer number of steps lands on `t_end`.
pub fn integrate<T: Real>(
    sp: &ScenarioParams<T>,
    v0: [Complex<T>; 3],
    t_end: T,
    dt: T,
) -> Result<Trajectory<T>> {
    let h = Hamiltonian3::from_scenario(sp)?;
    integrate_matrix(&h, v0, t_end, dt)
}

pub fn integrate_matrix<T: Real>(
    h: &Hamiltonian3<T>,
    v0: [Complex<T>; 3],
    t_end: T,
    dt: T,
) -> Result<Trajectory<T>> {
    if !(dt > T::zero()) || !(t_end > T::zero()) {
        return Err(Error::Usage("dt and t_end must be positive".into()));
    }
    let load = dt * h.frobenius_norm();
    if !(load < T::lit(STABILITY_LIMIT)) {
        return Err(Error::StepTooLarge(load.to_f64_lossy()));
    }
    let steps = (t_end / dt - T::lit(1e-9)).ceil().max(T::one());
    let n = steps
        .to_usize()
        .ok_or_else(|| Error::Usage("too many time steps".into()))?;
    let step = t_end / steps;

    let minus_i = cx(T::zero(), -T::one());
    let f = |v: &[Complex<T>; 3]| h.apply(v).map(|z| z * minus_i);
    let axpy = |v: &[Complex<T>; 3], k: &[Complex<T>; 3], a: T| {
        [v[0] + k[0] * a, v[1] + k[1] * a, v[2] + k[2] * a]
    };

    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut v = v0;
    times.push(T::zero());
    states.push(v);
    let half = step / T::lit(2.0);
    let sixth = step / T::lit(6.0);
    let two = T::lit(2.0);
    for i in 1..=n {
        let k1 = f(&v);
        let k2 = f(&axpy(&v, &k1, half));
        let k3 = f(&axpy(&v, &k2, half));
        let k4 = f(&axpy(&v, &k3, step));
        for j in 0..3 {
            v[j] += (k1[j] + k2[j] * two + k3[j] * two + k4[j]) * sixth;
        }
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain(format!(
                "state overflowed at t = {}",
                step * T::lit(i as f64)
            )));
        }
        times.push(step * T::lit(i as f64));
        states.push(v);
    }
    Ok(Trajectory { times, states })
}

/// Least-squares slope of ln‖v(t)‖ over t ∈ [t0, t1].
pub fn growth_rate<T: Real>(traj: &Trajectory<T>, window: (T, T)) -> Result<T> {
    let (t0, t1) = window;
    let range_err = || Error::Range {
        t0: t0.to_f64_lossy(),
        t1: t1.to_f64_lossy(),
    };
    let (first, last) = match (traj.times.first(), traj.times.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(range_err()),
    };
    let slack = T::lit(1e-9) * T::one().max(last.abs());
    if !(t0 < t1) || t0 < first - slack || t1 > last + slack {
        return Err(range_err());
    }
    let mut n = T::zero();
    let (mut sx, mut sy, mut sxx, mut sxy) = (T::zero(), T::zero(), T::zero(), T::zero());
    for (t, v) in traj.times.iter().zip(&traj.states) {
        if *t < t0 - slack || *t > t1 + slack {
            continue;
        }
        let norm = (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt();
        if !(norm > T::zero()) {
            return Err(Error::Domain(format!("state vanished at t = {t}")));
        }
        let y = norm.ln();
        n += T::one();
        sx += *t;
        sy += y;
        sxx += *t * *t;
        sxy += *t * y;
    }
    if n < T::lit(2.0) {
        return Err(range_err());
    }
    let den = n * sxx - sx * sx;
    Ok((n * sxy - sx * sy) / den)
}
