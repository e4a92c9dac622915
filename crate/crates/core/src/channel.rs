//! Binary photon-counting channels and their information measures.

use crate::error::{check_probability, Error, Result};
use crate::math::{expm1, log1p, xlogx};
use crate::params::{LinkGeometry, PhysicalParams, RateValue};
use crate::strategy::AuxChannel;

/// A binary-input, binary-output channel given by its click probabilities.
///
/// Row `x` of the stochastic matrix is `(1 - p(1|x), p(1|x))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryChannel {
    pub p1_given_0: f64,
    pub p1_given_1: f64,
}

impl BinaryChannel {
    pub fn new(p1_given_0: f64, p1_given_1: f64) -> Result<Self> {
        check_probability("p1_given_0", p1_given_0)?;
        check_probability("p1_given_1", p1_given_1)?;
        Ok(BinaryChannel {
            p1_given_0,
            p1_given_1,
        })
    }

    /// `W(y|x)`.
    pub fn transition(&self, x: u8, y: u8) -> f64 {
        let p1 = if x == 0 { self.p1_given_0 } else { self.p1_given_1 };
        if y == 1 {
            p1
        } else {
            1.0 - p1
        }
    }

    /// Click probability at the output for on-probability `q`.
    pub fn output_click_probability(&self, q: f64) -> f64 {
        (1.0 - q) * self.p1_given_0 + q * self.p1_given_1
    }
}

#[inline]
pub(crate) fn click_probability_unchecked(mean_counts: f64) -> f64 {
    -expm1(-mean_counts)
}

/// Probability that an on-off detector fires in a slot: `1 - exp(-(η n + λ Δ))`.
///
/// With `n_a = 0` this is the dark-click probability.
pub fn click_probability(eta: f64, n_a: f64, lambda: f64, delta: f64) -> Result<f64> {
    for (name, v) in [("eta", eta), ("n_a", n_a), ("lambda", lambda), ("delta", delta)] {
        if v.is_nan() {
            return Err(Error::InvalidParameter { name, reason: "NaN" });
        }
        if v < 0.0 {
            return Err(Error::InvalidParameter {
                name,
                reason: "must be non-negative",
            });
        }
    }
    Ok(click_probability_unchecked(eta * n_a + lambda * delta))
}

/// Main channel `W_B` and wiretapper channel `W_E` for `n_a` photons per
/// on-pulse at the transmitter.
pub fn build_channels(
    params: &PhysicalParams,
    geom: &LinkGeometry,
    n_a: f64,
) -> (BinaryChannel, BinaryChannel) {
    channels_from_received(
        params.dark_mean_bob(),
        params.dark_mean_eve(),
        geom.eta_bob() * n_a,
        geom.eta_eve() * n_a,
    )
}

#[inline]
pub(crate) fn channels_from_received(
    dark_bob: f64,
    dark_eve: f64,
    n_b: f64,
    n_e: f64,
) -> (BinaryChannel, BinaryChannel) {
    let bob = BinaryChannel {
        p1_given_0: click_probability_unchecked(dark_bob),
        p1_given_1: click_probability_unchecked(n_b + dark_bob),
    };
    let eve = BinaryChannel {
        p1_given_0: click_probability_unchecked(dark_eve),
        p1_given_1: click_probability_unchecked(n_e + dark_eve),
    };
    (bob, eve)
}

#[inline]
pub(crate) fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -xlogx(p) - (1.0 - p) * log1p(-p)
}

/// Binary entropy in nats, `-p ln p - (1-p) ln(1-p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_probability("p", p)?;
    Ok(h2(p))
}

#[inline]
pub(crate) fn mutual_information_nats(ch: &BinaryChannel, q: f64) -> f64 {
    let out = h2(ch.output_click_probability(q));
    let cond = (1.0 - q) * h2(ch.p1_given_0) + q * h2(ch.p1_given_1);
    // Cancellation can leave a tiny negative residue.
    (out - cond).max(0.0)
}

/// `I(X;Y) = H(Y) - H(Y|X)` for input distribution `P(X=1) = q`.
pub fn mutual_information(ch: &BinaryChannel, q: f64) -> RateValue {
    RateValue::from_nats(mutual_information_nats(ch, q))
}

/// The channel `V -> Y` obtained by prefixing `ch` with the auxiliary
/// channel `P_{X|V}`.
pub fn concatenate(aux: AuxChannel, ch: &BinaryChannel) -> BinaryChannel {
    let AuxChannel { a, b } = aux;
    BinaryChannel {
        p1_given_0: (1.0 - a) * ch.p1_given_0 + a * ch.p1_given_1,
        p1_given_1: (1.0 - b) * ch.p1_given_0 + b * ch.p1_given_1,
    }
}

/// `P(X=1)` when `V` is on with probability `q` and passes through `aux`.
pub fn input_marginal(q: f64, aux: AuxChannel) -> f64 {
    (1.0 - q) * aux.a + q * aux.b
}
