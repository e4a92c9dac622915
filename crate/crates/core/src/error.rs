use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("probability `{name}` = {value} is outside [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },

    #[error("no randomness rate balances the exponents: {0}")]
    Infeasible(&'static str),

    #[error("target cannot be reached: {0}")]
    Unattainable(&'static str),

    #[error("rate at 0 dB ({rate_bps} bps) is already below the floor of {floor_bps} bps")]
    BracketFailure { rate_bps: f64, floor_bps: f64 },

    #[error("degenerate click tally: {0}")]
    DegenerateTally(&'static str),
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if value.is_nan() || !(0.0..=1.0).contains(&value) {
        return Err(Error::ProbabilityOutOfRange { name, value });
    }
    Ok(value)
}

pub(crate) fn check_finite_nonneg(name: &'static str, value: f64) -> Result<f64> {
    if value.is_nan() {
        return Err(Error::InvalidParameter {
            name,
            reason: "NaN",
        });
    }
    if value < 0.0 || value.is_infinite() {
        return Err(Error::InvalidParameter {
            name,
            reason: "must be finite and non-negative",
        });
    }
    Ok(value)
}
