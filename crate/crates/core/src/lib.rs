//! Information-theoretic link planning for on-off-keying (OOK) free-space
//! optical wiretap channels.
//!
//! Alice sends laser pulses (symbol 1) or vacuum (symbol 0) under an average
//! power budget; Bob and Eve each observe the slots with a photon-counting
//! on-off detector that also fires on dark counts and background light. The
//! crate computes:
//!
//! * the channel matrices and mutual informations of the two links
//!   ([`channel`], [`strategy`]),
//! * power-constrained capacity, secrecy rate and secrecy capacity together
//!   with attenuation sweeps and zero-secrecy thresholds ([`optimize`]),
//! * Gallager-type error and secrecy exponents with a transmit-cost
//!   constraint, the finite-length bounds they imply and the code length
//!   needed to meet a target ([`exponent`]),
//! * a Monte Carlo click simulator used to validate the analytic channel
//!   model ([`montecarlo`]).
//!
//! The crate is `no_std` and only needs `alloc`. Rates are carried in nats
//! per channel use internally; bits and bits per second are boundary views
//! on [`RateValue`].

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channel;
mod error;
pub mod exponent;
mod math;
pub mod montecarlo;
pub mod optimize;
pub mod params;
pub mod strategy;

pub use channel::{
    binary_entropy, build_channels, click_probability, concatenate, input_marginal,
    mutual_information, BinaryChannel,
};
pub use error::{Error, Result};
pub use exponent::{
    balance_randomness_rate, bounds_at_length, error_exponent, exponent_report, phi_bob,
    phi_eve, required_length, secrecy_exponent, Balance, ExponentReport, ExponentTerm,
    FiniteLengthBound, OperatingPoint, RatePair,
};
pub use montecarlo::{
    empirical_mutual_information, simulate_clicks, ClickRecord, ClickTally, MiEstimate,
    Simulation,
};
pub use optimize::{
    find_zero_threshold, maximize_capacity, maximize_secrecy_capacity, maximize_secrecy_rate,
    sweep_attenuation, Mode, OptResult, Regime, Solver, SweepRow,
};
pub use params::{LinkGeometry, PhysicalParams, RateValue, PLANCK};
pub use strategy::{power_used, secrecy_objective, AuxChannel, InputStrategy};
