//! Command-line arguments. Every struct here also serializes into the
//! `config` block of the JSON output, so defaults appear materialized.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ookwire_core::{LinkGeometry, Mode, PhysicalParams};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "ookwire", version, about = "Secrecy planning for OOK free-space optical wiretap links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Physical parameters in user units.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Physical {
    /// Average transmit power budget [mW].
    #[arg(long, default_value_t = 10.0)]
    pub power_mw: f64,
    /// Bob's dark count rate plus background [counts/s].
    #[arg(long, default_value_t = 1e4)]
    pub dcr_bob_cps: f64,
    /// Eve's dark count rate plus background [counts/s].
    #[arg(long, default_value_t = 1.0)]
    pub dcr_eve_cps: f64,
    /// Slot width [ns].
    #[arg(long, default_value_t = 1.0)]
    pub slot_ns: f64,
    /// Pulse width [ns]; must be shorter than the slot.
    #[arg(long, default_value_t = 0.1)]
    pub pulse_ns: f64,
    /// Optical carrier frequency [THz].
    #[arg(long, default_value_t = 200.0)]
    pub f0_thz: f64,
    /// Eve's transmittance relative to Bob's, `ηz/ηy`.
    #[arg(long, default_value_t = 0.9)]
    pub eta_zy: f64,
    /// Write the JSON object to this file instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

impl Physical {
    pub fn params(&self) -> PhysicalParams {
        PhysicalParams {
            power_watts: self.power_mw * 1e-3,
            dcr_bob: self.dcr_bob_cps,
            dcr_eve: self.dcr_eve_cps,
            slot_seconds: self.slot_ns * 1e-9,
            pulse_seconds: self.pulse_ns * 1e-9,
            optical_freq_hz: self.f0_thz * 1e12,
        }
    }

    pub fn geometry(&self, alpha_db: f64) -> ookwire_core::Result<LinkGeometry> {
        LinkGeometry::new(alpha_db, self.eta_zy)
    }
}

/// An explicit `(q, n_A)`; when absent the secrecy-rate optimum is used.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Point {
    /// Input probability `P(X=1)`.
    #[arg(long, requires = "n_a")]
    pub q: Option<f64>,
    /// Transmitted mean photon number per on-pulse.
    #[arg(long, requires = "q")]
    pub n_a: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CodingRate {
    /// Coding rate R_B [bps].
    #[arg(long, conflicts_with = "rb_frac")]
    pub rb_bps: Option<f64>,
    /// Coding rate as a fraction of the secrecy rate at the operating point.
    #[arg(long, default_value_t = 0.5)]
    pub rb_frac: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Capacity,
    Secrecy,
    SecrecyAux,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Capacity => Mode::Capacity,
            ModeArg::Secrecy => Mode::Secrecy,
            ModeArg::SecrecyAux => Mode::SecrecyAux,
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Channel matrices and mutual informations at one operating point.
    Channel {
        #[command(flatten)]
        #[serde(flatten)]
        phys: Physical,
        #[arg(long, default_value_t = 70.0)]
        alpha_db: f64,
        #[command(flatten)]
        #[serde(flatten)]
        point: Point,
    },
    /// Power-constrained channel capacity of the main link.
    Capacity {
        #[command(flatten)]
        #[serde(flatten)]
        phys: Physical,
        #[arg(long, default_value_t = 70.0)]
        alpha_db: f64,
    },
    /// Secrecy rate without auxiliary randomization.
    SecrecyRate {
        #[command(flatten)]
        #[serde(flatten)]
        phys: Physical,
        #[arg(long, default_value_t = 70.0)]
        alpha_db: f64,
    },
    /// Secrecy capacity, optimizing the auxiliary channel too.
    SecrecyCapacity {
        #[command(flatten)]
        #[serde(flatten)]
        phys: Physical,
        #[arg(long, default_value_t = 70.0)]
        alpha_db: f64,
    },
    /// Attenuation at which the optimized secrecy rate falls below a floor.
    Threshold {
        #[command(flatten)]
        #[serde(flatten)]
        phys: Physical,
        /// Optimize the auxiliary channel as well.
        #[arg(long)]
        aux: bool,
        #[arg(long, default_value_t = 1.0)]
        floor_bps: f64,
    },
    /// Optimum over a range of attenuations, one CSV row per attenuation.
    Sweep {
        #[command(flatten)]
        #[serde(flatten)]
        phys: Physical,
        #[arg(long, value_enum, default_value_t = ModeArg::Secrecy)]
        mode: ModeArg,
        /// Shorthand for `--mode secrecy-aux`.
        #[arg(long)]
        aux: bool,
        /// `start:stop:step`, a comma list or a single value [dB].
        #[arg(long, default_value = "0:160:1")]
        alpha_db: String,
        /// CSV output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Error and secrecy exponents at given coding and randomness rates.
    Exponents {
        #[command(flatten)]
        #[serde(flatten)]
        phys: Physical,
        #[arg(long, default_value_t = 70.0)]
        alpha_db: f64,
        #[command(flatten)]
        #[serde(flatten)]
        point: Point,
        #[command(flatten)]
        #[serde(flatten)]
        rate: CodingRate,
        /// Randomness rate R_E [bps]; the balanced rate when absent.
        #[arg(long)]
        re_bps: Option<f64>,
    },
    /// Randomness rate at which the error and secrecy exponents are equal.
    Balance {
        #[command(flatten)]
        #[serde(flatten)]
        phys: Physical,
        #[arg(long, default_value_t = 70.0)]
        alpha_db: f64,
        #[command(flatten)]
        #[serde(flatten)]
        point: Point,
        #[command(flatten)]
        #[serde(flatten)]
        rate: CodingRate,
    },
    /// Code length needed for target error and leakage bounds.
    Codelength {
        #[command(flatten)]
        #[serde(flatten)]
        phys: Physical,
        #[arg(long, default_value_t = 70.0)]
        alpha_db: f64,
        #[command(flatten)]
        #[serde(flatten)]
        point: Point,
        #[command(flatten)]
        #[serde(flatten)]
        rate: CodingRate,
        /// Randomness rate R_E [bps]; the balanced rate when absent.
        #[arg(long)]
        re_bps: Option<f64>,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
        #[arg(long, default_value_t = 1e-9)]
        delta: f64,
        /// CSV table of both bounds against code length.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Monte Carlo click simulation checked against the analytic channel.
    Simulate {
        #[command(flatten)]
        #[serde(flatten)]
        phys: Physical,
        #[arg(long, default_value_t = 70.0)]
        alpha_db: f64,
        #[command(flatten)]
        #[serde(flatten)]
        point: Point,
        #[arg(long, default_value_t = 1_000_000)]
        slots: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

impl Command {
    pub fn physical(&self) -> &Physical {
        match self {
            Command::Channel { phys, .. }
            | Command::Capacity { phys, .. }
            | Command::SecrecyRate { phys, .. }
            | Command::SecrecyCapacity { phys, .. }
            | Command::Threshold { phys, .. }
            | Command::Sweep { phys, .. }
            | Command::Exponents { phys, .. }
            | Command::Balance { phys, .. }
            | Command::Codelength { phys, .. }
            | Command::Simulate { phys, .. } => phys,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Simulate { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}
