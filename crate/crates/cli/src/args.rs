//! Command-line arguments and the JSON config file that backs them.
//!
//! Every option is an `Option` so that a flag can be told apart from a
//! missing value; [`Merge::or`] fills the gaps from the config file and the
//! command handlers supply defaults last.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "epspectra",
    version,
    about = "Exceptional points of a two-cavity optomechanical system"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues, eigenvectors and class at one parameter point.
    Spectrum {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        opts: SpectrumArgs,
    },
    /// Branch-tracked eigenvalues along one parameter.
    Sweep {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        opts: SweepArgs,
    },
    /// Sign of the discriminant over a two-parameter grid.
    PhaseDiagram {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        opts: PhaseArgs,
    },
    /// Closed-form EP3 of the mechanical-gain family.
    Ep3 {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        opts: Ep3Args,
    },
    /// Bisection for an EP2 along one parameter.
    Ep2Find {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        opts: Ep2Args,
    },
    /// Eigenvalue splitting under a cavity-1 frequency shift.
    PerturbFit {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        opts: PerturbArgs,
    },
    /// RK4 integration of the linearized mode amplitudes.
    Simulate {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        opts: SimulateArgs,
    },
    /// Pseudo-Hermitian condition residuals at one parameter point.
    Check {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        family: FamilyArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Fills unset fields from `other`.
pub trait Merge: Sized {
    const KEYS: &'static [&'static str];
    fn or(self, other: Self) -> Self;
}

macro_rules! mergeable {
    ($t:ty { $($f:ident),* $(,)? }) => {
        impl Merge for $t {
            const KEYS: &'static [&'static str] = &[$(stringify!($f)),*];
            fn or(mut self, other: Self) -> Self {
                $(if self.$f.is_none() { self.$f = other.$f; })*
                self
            }
        }
    };
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct IoArgs {
    /// JSON file with default values for any flag (snake_case keys).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// κ₂/2π in Hz; adds physical-unit values to the report.
    #[arg(long)]
    pub kappa2_hz: Option<f64>,
}
mergeable!(IoArgs {
    out,
    format,
    kappa2_hz
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct FamilyArgs {
    /// mech, pt or general.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_m: Option<f64>,
    /// Sign of the Δ₁ root in the mechanical-gain family (+1 or -1).
    #[arg(long, allow_negative_numbers = true, value_parser = parse_branch)]
    pub branch: Option<i8>,
}
mergeable!(FamilyArgs {
    family,
    eta,
    lambda,
    g1,
    g2,
    delta1,
    delta2,
    gamma_m,
    branch
});

fn parse_branch(s: &str) -> Result<i8, String> {
    match s {
        "1" | "+1" | "+" | "plus" => Ok(1),
        "-1" | "-" | "minus" => Ok(-1),
        other => Err(format!("expected +1 or -1, got '{other}'")),
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct SpectrumArgs {
    /// Frequency shift of cavity 1.
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
}
mergeable!(SpectrumArgs { epsilon });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct SweepArgs {
    /// Swept parameter: eta, lambda, g1, g2, delta1, delta2 or gamma_m.
    #[arg(long)]
    pub param: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub hi: Option<f64>,
    /// Number of samples.
    #[arg(long)]
    pub n: Option<usize>,
}
mergeable!(SweepArgs { param, lo, hi, n });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct PhaseArgs {
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_hi: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub y_lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y_hi: Option<f64>,
    #[arg(long)]
    pub ny: Option<usize>,
}
mergeable!(PhaseArgs {
    x,
    x_lo,
    x_hi,
    nx,
    y,
    y_lo,
    y_hi,
    ny
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct Ep3Args {
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    #[arg(long, allow_negative_numbers = true, value_parser = parse_branch)]
    pub branch: Option<i8>,
}
mergeable!(Ep3Args { eta, branch });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct Ep2Args {
    /// Parameter searched along.
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub hi: Option<f64>,
}
mergeable!(Ep2Args { sweep, lo, hi });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct PerturbArgs {
    #[arg(long)]
    pub eps_lo: Option<f64>,
    #[arg(long)]
    pub eps_hi: Option<f64>,
    /// Number of log-spaced ε values.
    #[arg(long)]
    pub n_eps: Option<usize>,
}
mergeable!(PerturbArgs {
    eps_lo,
    eps_hi,
    n_eps
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct SimulateArgs {
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Initial state as six numbers: re/im of a₁, a₂, b.
    #[arg(
        long,
        num_args = 6,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub v0: Option<Vec<f64>>,
    /// Time window t0,t1 for the growth-rate fit.
    #[arg(long, num_args = 2, value_delimiter = ',')]
    pub window: Option<Vec<f64>>,
    /// Keep every k-th sample in the output.
    #[arg(long)]
    pub stride: Option<usize>,
}
mergeable!(SimulateArgs {
    t_end,
    dt,
    v0,
    window,
    stride
});

/// The config file, already checked for unknown keys.
#[derive(Debug, Default)]
pub struct ConfigFile(serde_json::Map<String, serde_json::Value>);

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        let serde_json::Value::Object(map) = value else {
            return Err(CliError::Usage(
                "config file must hold a JSON object".into(),
            ));
        };
        let known: BTreeSet<&str> = [
            IoArgs::KEYS,
            FamilyArgs::KEYS,
            SpectrumArgs::KEYS,
            SweepArgs::KEYS,
            PhaseArgs::KEYS,
            Ep3Args::KEYS,
            Ep2Args::KEYS,
            PerturbArgs::KEYS,
            SimulateArgs::KEYS,
        ]
        .concat()
        .into_iter()
        .collect();
        if let Some(bad) = map.keys().find(|k| !known.contains(k.as_str())) {
            return Err(CliError::Usage(format!("unknown config key '{bad}'")));
        }
        Ok(ConfigFile(map))
    }

    /// `flags` with unset fields taken from the file.
    pub fn fill<T: Merge + DeserializeOwned>(&self, flags: T) -> Result<T, CliError> {
        let subset: serde_json::Map<_, _> = self
            .0
            .iter()
            .filter(|(k, _)| T::KEYS.contains(&k.as_str()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let from_file: T = serde_json::from_value(serde_json::Value::Object(subset))
            .map_err(|e| CliError::Usage(format!("config: {e}")))?;
        Ok(flags.or(from_file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let flags = FamilyArgs {
            eta: Some(1.0),
            ..Default::default()
        };
        let file = FamilyArgs {
            eta: Some(2.0),
            g1: Some(3.0),
            ..Default::default()
        };
        let m = flags.or(file);
        assert_eq!(m.eta, Some(1.0));
        assert_eq!(m.g1, Some(3.0));
        assert_eq!(m.lambda, None);
    }

    #[test]
    fn branch_spellings() {
        assert_eq!(parse_branch("+1"), Ok(1));
        assert_eq!(parse_branch("minus"), Ok(-1));
        assert!(parse_branch("2").is_err());
    }

    #[test]
    fn file_values_fill_only_their_struct() {
        let mut map = serde_json::Map::new();
        map.insert("lo".into(), 1.5.into());
        map.insert("eta".into(), 2.0.into());
        let cfg = ConfigFile(map);
        let s = cfg.fill(SweepArgs::default()).unwrap();
        assert_eq!(s.lo, Some(1.5));
        let f = cfg.fill(FamilyArgs::default()).unwrap();
        assert_eq!(f.eta, Some(2.0));
    }
}
