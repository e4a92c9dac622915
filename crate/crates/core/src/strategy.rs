//! Alice's transmission strategy, its power cost and the secrecy objective.

use crate::channel::{build_channels, concatenate, input_marginal, mutual_information_nats};
use crate::error::{check_finite_nonneg, check_probability, Result};
use crate::params::{LinkGeometry, PhysicalParams, RateValue};

/// Auxiliary randomizing channel `P_{X|V}` with `a = P(X=1|V=0)` and
/// `b = P(X=1|V=1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxChannel {
    pub a: f64,
    pub b: f64,
}

impl AuxChannel {
    /// `X = V`.
    pub const IDENTITY: AuxChannel = AuxChannel { a: 0.0, b: 1.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_probability("aux.a", a)?;
        check_probability("aux.b", b)?;
        Ok(AuxChannel { a, b })
    }

    /// Probability of turning an off symbol into a pulse, `P(X=1|V=0)`.
    pub fn off_to_on(&self) -> f64 {
        self.a
    }

    /// Probability of suppressing a pulse, `P(X=0|V=1) = 1 - b`.
    pub fn on_to_off(&self) -> f64 {
        1.0 - self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputStrategy {
    /// Probability of encoding symbol 1 (of `V` when `aux` is present).
    pub q_on: f64,
    /// Mean photon number of an on-pulse at the transmitter.
    pub n_a: f64,
    pub aux: Option<AuxChannel>,
}

impl InputStrategy {
    pub fn new(q_on: f64, n_a: f64, aux: Option<AuxChannel>) -> Result<Self> {
        let s = InputStrategy { q_on, n_a, aux };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("q_on", self.q_on)?;
        check_finite_nonneg("n_a", self.n_a)?;
        if let Some(aux) = self.aux {
            AuxChannel::new(aux.a, aux.b)?;
        }
        Ok(())
    }

    /// `P(X=1)`, the fraction of slots that actually carry a pulse.
    pub fn pulse_probability(&self) -> f64 {
        match self.aux {
            Some(aux) => input_marginal(self.q_on, aux),
            None => self.q_on,
        }
    }
}

/// Average transmit power `q_x n_a h f0 / Δ` [W].
pub fn power_used(q_x: f64, n_a: f64, params: &PhysicalParams) -> f64 {
    q_x * n_a * params.photon_energy() / params.slot_seconds
}

/// `I(V;Y) - I(V;Z)` (or `I(X;Y) - I(X;Z)` without auxiliary channel).
///
/// May be negative when Eve's channel is the better one at this strategy.
pub fn secrecy_objective(
    params: &PhysicalParams,
    geom: &LinkGeometry,
    strategy: &InputStrategy,
) -> RateValue {
    let (bob, eve) = build_channels(params, geom, strategy.n_a);
    let (bob, eve) = match strategy.aux {
        Some(aux) => (concatenate(aux, &bob), concatenate(aux, &eve)),
        None => (bob, eve),
    };
    RateValue::from_nats(
        mutual_information_nats(&bob, strategy.q_on) - mutual_information_nats(&eve, strategy.q_on),
    )
}
