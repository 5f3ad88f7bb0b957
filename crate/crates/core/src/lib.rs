//! Spectral analysis of a two-cavity optomechanical system coupled through
//! one mechanical resonator: effective non-Hermitian Hamiltonian,
//! pseudo-Hermitian parameter families, exceptional points of order two and
//! three, perturbative splitting near them and the linear dynamics.
//!
//! All rates are in units of κ₂ and frequencies are offsets from ω_m. The
//! numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

// `!(x > 0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cubic;
pub mod dynamics;
pub mod ep;
pub mod error;
pub mod export;
pub mod family;
pub mod hamiltonian;
pub mod model;
pub mod perturbation;
pub mod phase;
pub mod pseudo_hermitian;
pub mod scalar;
pub mod spectra;

pub use cubic::{
    cardano_roots, characteristic_coeffs, classify, discriminant, SpectralClass,
    DEFAULT_CLASSIFY_TOL,
};
pub use dynamics::{growth_rate, integrate};
pub use ep::{ep2_find, ep3_analytic};
pub use error::{Error, Result};
pub use family::{FamilyKind, Param};
pub use hamiltonian::hermiticity_defect;
pub use model::{denormalize, drive_amplitude, effective_frequency, normalize, Scenario};
pub use perturbation::{perturbed_spectrum, puiseux_coefficients, splitting_fit, splitting_fits};
pub use phase::phase_diagram;
pub use pseudo_hermitian::{
    check_conditions, feasible, from_cavity_gain, from_mechanical_gain, Branch,
};
pub use scalar::{Cx, Real};
pub use spectra::{coalescence, eigensystem, sweep};

pub type Complex = num_complex::Complex<f64>;
pub type Hamiltonian = hamiltonian::Hamiltonian3<f64>;
pub type ScenarioParams = model::ScenarioParams<f64>;
pub type PhysicalParams = model::PhysicalParams<f64>;
pub type CubicCoeffs = cubic::CubicCoeffs<f64>;
pub type DiscriminantData = cubic::DiscriminantData<f64>;
pub type ConditionResiduals = pseudo_hermitian::ConditionResiduals<f64>;
pub type Family = family::Family<f64>;
pub type EpReport = ep::EpReport<f64>;
pub type SpectrumResult = spectra::SpectrumResult<f64>;
pub type SweepCurve = spectra::SweepCurve<f64>;
pub type PhaseDiagramGrid = phase::PhaseDiagramGrid<f64>;
pub type PuiseuxBranch = perturbation::PuiseuxBranch<f64>;
pub type SplittingFit = perturbation::SplittingFit<f64>;
pub type Trajectory = dynamics::Trajectory<f64>;
