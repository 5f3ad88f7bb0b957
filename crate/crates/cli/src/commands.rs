//! One handler per subcommand. Each returns its one-line summary.

use std::f64::consts::PI;
use std::path::Path;

use epspectra::dynamics::default_dt;
use epspectra::ep::{ep3_analytic_with_branch, g1_ep3, lambda_ep3, EpResiduals};
use epspectra::export::{write_gaps_csv, write_grid_csv, write_sweep_csv, write_trajectory_csv};
use epspectra::perturbation::{default_epsilon_grid, log_grid};
use epspectra::phase::{Axis, CellClass};
use epspectra::spectra::EpMarker;
use epspectra::{
    characteristic_coeffs, check_conditions, classify, eigensystem, ep2_find, growth_rate,
    hermiticity_defect, integrate, phase_diagram, puiseux_coefficients, splitting_fit,
    splitting_fits, sweep, Branch, Complex, ConditionResiduals, CubicCoeffs, DiscriminantData,
    EpReport, Family, FamilyKind, Hamiltonian, Param, PuiseuxBranch, ScenarioParams, SpectralClass,
    SplittingFit, DEFAULT_CLASSIFY_TOL,
};
use serde::Serialize;

use crate::args::{
    ConfigFile, Ep2Args, Ep3Args, FamilyArgs, Format, IoArgs, PerturbArgs, PhaseArgs, SimulateArgs,
    SpectrumArgs, SweepArgs,
};
use crate::output::{emit, resolve_format, write_json, write_key_value};
use crate::CliError;

/// Physical-unit view of the main results: rates and frequencies in Hz
/// (value × κ₂/2π), times in seconds.
#[derive(Debug, Serialize)]
struct Physical {
    kappa2_hz: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    values_hz: Vec<(String, f64)>,
}

fn physical(kappa2_hz: Option<f64>, values: &[(&str, f64)]) -> Option<Physical> {
    kappa2_hz.map(|k| Physical {
        kappa2_hz: k,
        values_hz: values.iter().map(|(n, v)| (n.to_string(), v * k)).collect(),
    })
}

fn hz_suffix(kappa2_hz: Option<f64>, v: f64) -> String {
    kappa2_hz.map_or(String::new(), |k| format!(" ({:.6e} Hz)", v * k))
}

fn param(name: &str) -> Result<Param, CliError> {
    Ok(name.parse::<Param>()?)
}

fn branch(v: Option<i8>, eta: f64) -> Result<Branch, CliError> {
    match v {
        None => Ok(Branch::default_for_eta(eta)),
        Some(s) => Branch::try_from(s).map_err(CliError::Usage),
    }
}

fn derived(kind: &str, names: &[(&str, Option<f64>)]) -> Result<(), CliError> {
    match names.iter().find(|(_, v)| v.is_some()) {
        Some((n, _)) => Err(CliError::Usage(format!(
            "{n} is fixed by the {kind} family and cannot be set"
        ))),
        None => Ok(()),
    }
}

/// Family with defaults: the symmetric EP3 point for `mech`, the PT EP3
/// for `pt`, and a lossy unit-coupling point for `general`.
pub fn build_family(a: &FamilyArgs) -> Result<Family, CliError> {
    let kind: FamilyKind = a.family.as_deref().unwrap_or("mech").parse()?;
    let fam = match kind {
        FamilyKind::MechanicalGain => {
            derived(
                "mechanical-gain",
                &[
                    ("delta1", a.delta1),
                    ("delta2", a.delta2),
                    ("gamma_m", a.gamma_m),
                ],
            )?;
            let eta = a.eta.unwrap_or(1.0);
            let lambda = match a.lambda {
                Some(l) => l,
                None => lambda_ep3(eta)?,
            };
            let g1 = match a.g1 {
                Some(g) => g,
                None => g1_ep3(eta)?,
            };
            Family::mechanical_gain(eta, lambda, g1, branch(a.branch, eta)?)
        }
        FamilyKind::CavityGainPT => {
            derived(
                "PT",
                &[("eta", a.eta), ("delta2", a.delta2), ("gamma_m", a.gamma_m)],
            )?;
            if a.branch.is_some() {
                return Err(CliError::Usage(
                    "branch only applies to the mechanical-gain family".into(),
                ));
            }
            Family::cavity_gain(
                a.delta1.unwrap_or(0.0),
                a.lambda.unwrap_or(1.0),
                a.g1.unwrap_or(0.5f64.sqrt()),
            )
        }
        FamilyKind::General => {
            if a.branch.is_some() {
                return Err(CliError::Usage(
                    "branch only applies to the mechanical-gain family".into(),
                ));
            }
            Family::general(&ScenarioParams::general(
                a.eta.unwrap_or(1.0),
                a.lambda.unwrap_or(1.0),
                a.g1.unwrap_or(1.0),
                a.delta1.unwrap_or(0.0),
                a.delta2.unwrap_or(0.0),
                a.gamma_m.unwrap_or(1.0),
            ))
        }
    };
    Ok(match a.g2 {
        Some(g2) => fam.with(Param::G2, g2),
        None => fam,
    })
}

fn finish_io(cfg: &ConfigFile, io: IoArgs) -> Result<IoArgs, CliError> {
    cfg.fill(io)
}

fn out_path(io: &IoArgs) -> Option<&Path> {
    io.out.as_deref()
}

#[derive(Debug, Serialize)]
struct SpectrumOut {
    params: ScenarioParams,
    epsilon: f64,
    eigenvalues: [Complex; 3],
    eigenvectors: [[Complex; 3]; 3],
    null_dims: [usize; 3],
    class: Option<&'static str>,
    /// |⟨v0|v1⟩|, |⟨v0|v2⟩|, |⟨v1|v2⟩|.
    overlaps: [f64; 3],
    coefficients: CubicCoeffs,
    discriminant: DiscriminantData,
    #[serde(skip_serializing_if = "Option::is_none")]
    physical: Option<Physical>,
}

pub fn spectrum(
    cfg: &ConfigFile,
    io: IoArgs,
    fam: FamilyArgs,
    opts: SpectrumArgs,
) -> Result<String, CliError> {
    let io = finish_io(cfg, io)?;
    let fam = build_family(&cfg.fill(fam)?)?;
    let opts = cfg.fill(opts)?;
    let eps = opts.epsilon.unwrap_or(0.0);
    let sp = fam.scenario()?;
    let sp = if eps == 0.0 { sp } else { sp.perturbed(eps) };
    let h = Hamiltonian::build(&sp, eps)?;
    let s = eigensystem(&h);
    let ev = s.eigenvalues;
    let out = SpectrumOut {
        params: sp,
        epsilon: eps,
        eigenvalues: ev,
        eigenvectors: s.eigenvectors,
        null_dims: s.null_dims,
        class: s.class.map(|c| c.label()),
        overlaps: s.overlaps(),
        coefficients: s.coefficients,
        discriminant: s.residuals,
        physical: physical(
            io.kappa2_hz,
            &[
                ("re_omega0", ev[0].re),
                ("im_omega0", ev[0].im),
                ("re_omega1", ev[1].re),
                ("im_omega1", ev[1].im),
                ("re_omega2", ev[2].re),
                ("im_omega2", ev[2].im),
            ],
        ),
    };
    let format = resolve_format(io.format, out_path(&io), Format::Json);
    emit(out_path(&io), |w| match format {
        Format::Json => write_json(&out, w),
        Format::Csv => {
            writeln!(
                w,
                "index,re,im,re_v0,im_v0,re_v1,im_v1,re_v2,im_v2,null_dim"
            )?;
            for k in 0..3 {
                let v = &out.eigenvectors[k];
                let f = epspectra::export::sci;
                writeln!(
                    w,
                    "{k},{},{},{},{},{},{},{},{},{}",
                    f(ev[k].re),
                    f(ev[k].im),
                    f(v[0].re),
                    f(v[0].im),
                    f(v[1].re),
                    f(v[1].im),
                    f(v[2].re),
                    f(v[2].im),
                    out.null_dims[k]
                )?;
            }
            Ok(())
        }
    })?;
    let o = out.overlaps;
    Ok(format!(
        "spectrum: class={} omega=[{:.6}{:+.6}i, {:.6}{:+.6}i, {:.6}{:+.6}i] overlaps=[{:.6}, {:.6}, {:.6}]",
        out.class.unwrap_or("non_real"),
        ev[0].re,
        ev[0].im,
        ev[1].re,
        ev[1].im,
        ev[2].re,
        ev[2].im,
        o[0],
        o[1],
        o[2]
    ))
}

/// Returns `lo`, `hi` or a usage error naming the missing one.
fn bounds(
    lo: Option<f64>,
    hi: Option<f64>,
    lo_name: &str,
    hi_name: &str,
) -> Result<(f64, f64), CliError> {
    let lo = lo.ok_or_else(|| CliError::Usage(format!("--{lo_name} is required")))?;
    let hi = hi.ok_or_else(|| CliError::Usage(format!("--{hi_name} is required")))?;
    if !(lo < hi) {
        return Err(CliError::Usage(format!(
            "need {lo_name} < {hi_name}, got {lo} and {hi}"
        )));
    }
    Ok((lo, hi))
}

#[derive(Debug, Serialize)]
struct SweepSummary<'a> {
    #[serde(flatten)]
    curve: &'a epspectra::SweepCurve,
    #[serde(skip_serializing_if = "Option::is_none")]
    physical: Option<Physical>,
}

fn marker_list(markers: &[EpMarker<f64>]) -> String {
    let items: Vec<String> = markers
        .iter()
        .map(|m| {
            format!(
                "EP{}@{:.6}->{:.6}{:+.6}i",
                m.order, m.param, m.omega.re, m.omega.im
            )
        })
        .collect();
    format!("[{}]", items.join(", "))
}

pub fn sweep_cmd(
    cfg: &ConfigFile,
    io: IoArgs,
    fam: FamilyArgs,
    opts: SweepArgs,
) -> Result<String, CliError> {
    let io = finish_io(cfg, io)?;
    let fam = build_family(&cfg.fill(fam)?)?;
    let opts = cfg.fill(opts)?;
    let p = param(opts.param.as_deref().unwrap_or("g1"))?;
    let (lo, hi) = bounds(
        Some(opts.lo.unwrap_or(0.0)),
        Some(opts.hi.unwrap_or(3.0)),
        "lo",
        "hi",
    )?;
    let n = opts.n.unwrap_or(301);
    let curve = sweep(&fam, p, lo, hi, n)?;
    let marker_values: Vec<(String, f64)> = curve
        .markers
        .iter()
        .enumerate()
        .flat_map(|(i, m)| {
            [
                (format!("marker{i}_re_omega"), m.omega.re),
                (format!("marker{i}_im_omega"), m.omega.im),
            ]
        })
        .collect();
    let refs: Vec<(&str, f64)> = marker_values
        .iter()
        .map(|(n, v)| (n.as_str(), *v))
        .collect();
    let summary = SweepSummary {
        curve: &curve,
        physical: physical(io.kappa2_hz, &refs),
    };
    let format = resolve_format(io.format, out_path(&io), Format::Csv);
    emit(out_path(&io), |w| match format {
        Format::Json => write_json(&summary, w),
        Format::Csv => write_sweep_csv(&curve, w),
    })?;
    let infeasible = curve.points.iter().filter(|p| p.spectrum.is_none()).count();
    Ok(format!(
        "sweep: {} samples of {} in [{lo}, {hi}], {infeasible} infeasible, markers {}",
        n,
        p,
        marker_list(&curve.markers)
    ))
}

#[derive(Debug, Serialize)]
struct PhaseSummary<'a> {
    #[serde(flatten)]
    grid: &'a epspectra::PhaseDiagramGrid,
    #[serde(skip_serializing_if = "Option::is_none")]
    physical: Option<Physical>,
}

pub fn phase_cmd(
    cfg: &ConfigFile,
    io: IoArgs,
    fam: FamilyArgs,
    opts: PhaseArgs,
) -> Result<String, CliError> {
    let io = finish_io(cfg, io)?;
    let fam = build_family(&cfg.fill(fam)?)?;
    let o = cfg.fill(opts)?;
    let (dx, dy) = match fam.kind {
        FamilyKind::CavityGainPT => (("g1", -2.0, 2.0), ("delta1", -3.0, 3.0)),
        _ => (("g1", 0.0, 3.0), ("g2", 0.0, 3.0)),
    };
    let xp = param(o.x.as_deref().unwrap_or(dx.0))?;
    let yp = param(o.y.as_deref().unwrap_or(dy.0))?;
    let (x_lo, x_hi) = bounds(
        Some(o.x_lo.unwrap_or(dx.1)),
        Some(o.x_hi.unwrap_or(dx.2)),
        "x-lo",
        "x-hi",
    )?;
    let (y_lo, y_hi) = bounds(
        Some(o.y_lo.unwrap_or(dy.1)),
        Some(o.y_hi.unwrap_or(dy.2)),
        "y-lo",
        "y-hi",
    )?;
    let grid = phase_diagram(
        &fam,
        Axis::new(xp, x_lo, x_hi, o.nx.unwrap_or(100)),
        Axis::new(yp, y_lo, y_hi, o.ny.unwrap_or(100)),
    )?;
    let summary = PhaseSummary {
        grid: &grid,
        physical: physical(io.kappa2_hz, &[]),
    };
    let format = resolve_format(io.format, out_path(&io), Format::Csv);
    emit(out_path(&io), |w| match format {
        Format::Json => write_json(&summary, w),
        Format::Csv => write_grid_csv(&grid, w),
    })?;
    let count = |c: CellClass| grid.cells.iter().filter(|x| x.class == c).count();
    let markers: Vec<String> = grid
        .ep3_markers
        .iter()
        .map(|(x, y)| format!("({x:.6}, {y:.6})"))
        .collect();
    Ok(format!(
        "phase-diagram: {}x{} cells, three_real={} conjugate_pair={} infeasible={} boundary_points={} ep3=[{}]",
        grid.x_axis.n,
        grid.y_axis.n,
        count(CellClass::Spectral(SpectralClass::ThreeRealDistinct)),
        count(CellClass::Spectral(SpectralClass::OneRealConjugatePair)),
        count(CellClass::Infeasible),
        grid.boundary_points.len(),
        markers.join(", ")
    ))
}

#[derive(Debug, Serialize)]
struct EpOut {
    order: u8,
    family: &'static str,
    eta: f64,
    lambda: f64,
    g1: f64,
    g2: f64,
    delta1: f64,
    branch: Option<Branch>,
    omega_ep: Complex,
    /// Scaled |Δ|, |A|, |B| at the located point.
    residuals: EpResiduals<f64>,
    /// Pairwise eigenvector overlaps at the located point.
    overlaps: [f64; 3],
    params: ScenarioParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    physical: Option<Physical>,
}

fn ep_out(r: &EpReport, kappa2_hz: Option<f64>) -> Result<EpOut, CliError> {
    let h = Hamiltonian::from_scenario(&r.params)?;
    let overlaps = eigensystem(&h).overlaps();
    Ok(EpOut {
        order: r.order,
        family: r.family.name(),
        eta: r.locus.eta,
        lambda: r.locus.lambda,
        g1: r.locus.g1,
        g2: r.params.g2_norm(),
        delta1: r.locus.delta1,
        branch: r.locus.branch,
        omega_ep: r.omega_ep,
        residuals: r.residuals,
        overlaps,
        params: r.params,
        physical: physical(
            kappa2_hz,
            &[
                ("g1", r.locus.g1),
                ("g2", r.params.g2_norm()),
                ("delta1", r.locus.delta1),
                ("re_omega_ep", r.omega_ep.re),
            ],
        ),
    })
}

fn write_ep(io: &IoArgs, out: &EpOut) -> Result<(), CliError> {
    let format = resolve_format(io.format, out_path(io), Format::Json);
    emit(out_path(io), |w| match format {
        Format::Json => write_json(out, w),
        Format::Csv => write_key_value(out, w),
    })
}

pub fn ep3(cfg: &ConfigFile, io: IoArgs, opts: Ep3Args) -> Result<String, CliError> {
    let io = finish_io(cfg, io)?;
    let o = cfg.fill(opts)?;
    let eta = o.eta.unwrap_or(1.0);
    let r = ep3_analytic_with_branch(eta, branch(o.branch, eta)?)?;
    let out = ep_out(&r, io.kappa2_hz)?;
    write_ep(&io, &out)?;
    Ok(format!(
        "ep3: eta={eta} lambda={:.6} g1={:.6} delta1={:.6} omega_ep={:.6}{}",
        out.lambda,
        out.g1,
        out.delta1,
        out.omega_ep.re,
        hz_suffix(io.kappa2_hz, out.omega_ep.re)
    ))
}

pub fn ep2(
    cfg: &ConfigFile,
    io: IoArgs,
    fam: FamilyArgs,
    opts: Ep2Args,
) -> Result<String, CliError> {
    let io = finish_io(cfg, io)?;
    let fam = build_family(&cfg.fill(fam)?)?;
    let o = cfg.fill(opts)?;
    let p = param(o.sweep.as_deref().unwrap_or("g1"))?;
    let (lo, hi) = bounds(o.lo, o.hi, "lo", "hi")?;
    let r = ep2_find(&fam, p, lo, hi)?;
    let out = ep_out(&r, io.kappa2_hz)?;
    write_ep(&io, &out)?;
    Ok(format!(
        "ep2-find: {}={:.6} omega_ep={:.6}{} overlaps=[{:.6}, {:.6}, {:.6}]",
        p,
        located(&r, p),
        out.omega_ep.re,
        hz_suffix(io.kappa2_hz, out.omega_ep.re),
        out.overlaps[0],
        out.overlaps[1],
        out.overlaps[2]
    ))
}

/// Value of `p` in the located record.
fn located(r: &EpReport, p: Param) -> f64 {
    let s = &r.params;
    match p {
        Param::Eta => s.eta,
        Param::Lambda => s.lambda,
        Param::G1 => s.g1_norm,
        Param::G2 => s.g2_norm(),
        Param::Delta1 => s.delta1_norm,
        Param::Delta2 => s.delta2_norm,
        Param::GammaM => s.gamma_m_norm,
    }
}

#[derive(Debug, Serialize)]
struct PerturbOut<'a> {
    params: ScenarioParams,
    class: Option<&'static str>,
    /// Present only at an EP3.
    puiseux: Option<[PuiseuxBranch; 3]>,
    best: &'a SplittingFit,
    fits: &'a [SplittingFit; 3],
}

pub fn perturb(
    cfg: &ConfigFile,
    io: IoArgs,
    fam: FamilyArgs,
    opts: PerturbArgs,
) -> Result<String, CliError> {
    let io = finish_io(cfg, io)?;
    let fam = build_family(&cfg.fill(fam)?)?;
    let o = cfg.fill(opts)?;
    let sp = fam.scenario()?;
    let grid = match (o.eps_lo, o.eps_hi, o.n_eps) {
        (None, None, None) => default_epsilon_grid(),
        (lo, hi, n) => {
            let (lo, hi) = bounds(
                Some(lo.unwrap_or(1e-8)),
                Some(hi.unwrap_or(1e-2)),
                "eps-lo",
                "eps-hi",
            )?;
            log_grid(lo, hi, n.unwrap_or(61))
        }
    };
    let class = classify(&characteristic_coeffs(&sp, 0.0), DEFAULT_CLASSIFY_TOL).ok();
    let puiseux = match class {
        Some(SpectralClass::Ep3) => Some(puiseux_coefficients(&sp)?),
        _ => None,
    };
    let best = splitting_fit(&sp, &grid)?;
    let fits = splitting_fits(&sp, &grid)?;
    let out = PerturbOut {
        params: sp,
        class: class.map(|c| c.label()),
        puiseux,
        best: &best,
        fits: &fits,
    };
    let format = resolve_format(io.format, out_path(&io), Format::Json);
    emit(out_path(&io), |w| match format {
        Format::Json => write_json(&out, w),
        Format::Csv => write_gaps_csv(&fits, w),
    })?;
    let d1 = puiseux.map_or(String::new(), |p| {
        format!(" |d1|={:.6} |d2|={:.6}", p[0].d1.norm(), p[0].d2.norm())
    });
    Ok(format!(
        "perturb-fit: class={} exponent={:.6} prefactor={:.6} r2={:.8} pair=({}, {}){d1}",
        out.class.unwrap_or("non_real"),
        best.exponent,
        best.prefactor,
        best.r_squared,
        best.pair.0,
        best.pair.1
    ))
}

#[derive(Debug, Serialize)]
struct SimulateOut<'a> {
    params: ScenarioParams,
    dt: f64,
    t_end: f64,
    window: (f64, f64),
    growth_rate: f64,
    /// Largest imaginary part of the spectrum, for comparison.
    max_imag_eigenvalue: f64,
    stride: usize,
    times: Vec<f64>,
    states: Vec<&'a [Complex; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    physical: Option<Physical>,
}

pub fn simulate(
    cfg: &ConfigFile,
    io: IoArgs,
    fam: FamilyArgs,
    opts: SimulateArgs,
) -> Result<String, CliError> {
    let io = finish_io(cfg, io)?;
    let fam = build_family(&cfg.fill(fam)?)?;
    let o = cfg.fill(opts)?;
    let sp = fam.scenario()?;
    let h = Hamiltonian::from_scenario(&sp)?;
    let t_end = o.t_end.unwrap_or(20.0);
    let dt = o.dt.unwrap_or_else(|| default_dt(&h));
    let v0 = match o.v0.as_deref() {
        None => [
            Complex::new(1.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
        ],
        Some([a, b, c, d, e, f]) => [
            Complex::new(*a, *b),
            Complex::new(*c, *d),
            Complex::new(*e, *f),
        ],
        Some(v) => {
            return Err(CliError::Usage(format!(
                "v0 needs 6 numbers, got {}",
                v.len()
            )))
        }
    };
    let window = match o.window.as_deref() {
        None => (t_end / 2.0, t_end),
        Some([a, b]) => (*a, *b),
        Some(v) => {
            return Err(CliError::Usage(format!(
                "window needs 2 numbers, got {}",
                v.len()
            )))
        }
    };
    let stride = o.stride.unwrap_or(1).max(1);
    let traj = integrate(&sp, v0, t_end, dt)?;
    let rate = growth_rate(&traj, window)?;
    let max_imag = eigensystem(&h)
        .eigenvalues
        .iter()
        .map(|z| z.im)
        .fold(f64::NEG_INFINITY, f64::max);
    let last = traj.times.len() - 1;
    let keep: Vec<usize> = (0..=last)
        .filter(|i| i % stride == 0 || *i == last)
        .collect();
    let out = SimulateOut {
        params: sp,
        dt,
        t_end,
        window,
        growth_rate: rate,
        max_imag_eigenvalue: max_imag,
        stride,
        times: keep.iter().map(|&i| traj.times[i]).collect(),
        states: keep.iter().map(|&i| &traj.states[i]).collect(),
        physical: io.kappa2_hz.map(|k| Physical {
            kappa2_hz: k,
            values_hz: vec![
                ("growth_rate".into(), rate * k),
                ("t_end_s".into(), t_end / (2.0 * PI * k)),
            ],
        }),
    };
    let format = resolve_format(io.format, out_path(&io), Format::Csv);
    emit(out_path(&io), |w| match format {
        Format::Json => write_json(&out, w),
        Format::Csv => write_trajectory_csv(&traj, stride, w),
    })?;
    Ok(format!(
        "simulate: {} steps of dt={:.6e}, growth_rate={:.6}{} max Im(omega)={:.6}",
        last,
        traj.times[1] - traj.times[0],
        rate,
        hz_suffix(io.kappa2_hz, rate),
        max_imag
    ))
}

#[derive(Debug, Serialize)]
struct CheckOut {
    params: ScenarioParams,
    conditions: ConditionResiduals,
    pseudo_hermitian: bool,
    hermiticity_defect: f64,
    coefficients: CubicCoeffs,
    max_imag_coefficient: f64,
    class: Option<&'static str>,
}

/// Residual bound for declaring the conditions satisfied.
const CONDITION_TOL: f64 = 1e-10;

pub fn check(cfg: &ConfigFile, io: IoArgs, fam: FamilyArgs) -> Result<String, CliError> {
    let io = finish_io(cfg, io)?;
    let fam = build_family(&cfg.fill(fam)?)?;
    let sp = fam.scenario()?;
    let h = Hamiltonian::from_scenario(&sp)?;
    let cond = check_conditions(&sp);
    let c = characteristic_coeffs(&sp, 0.0);
    let out = CheckOut {
        params: sp,
        conditions: cond,
        pseudo_hermitian: cond.max_abs() < CONDITION_TOL,
        hermiticity_defect: hermiticity_defect(&h),
        coefficients: c,
        max_imag_coefficient: c.max_imag(),
        class: classify(&c, DEFAULT_CLASSIFY_TOL).ok().map(|k| k.label()),
    };
    let format = resolve_format(io.format, out_path(&io), Format::Json);
    emit(out_path(&io), |w| match format {
        Format::Json => write_json(&out, w),
        Format::Csv => write_key_value(&out, w),
    })?;
    Ok(format!(
        "check: pseudo_hermitian={} max|r|={:.3e} class={}",
        out.pseudo_hermitian,
        cond.max_abs(),
        out.class.unwrap_or("non_real")
    ))
}
