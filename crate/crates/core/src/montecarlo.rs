//! Slot-by-slot click simulator for the two detectors.
//!
//! Each slot draws the code symbol `V ~ Bernoulli(q_on)`, passes it through
//! the auxiliary channel when one is configured to obtain the pulse symbol
//! `X`, and then draws Bob's and Eve's clicks independently given `X`, each
//! as a Bernoulli trial with the on-off detector click probability.
//!
//! Slots are split into [`BLOCKS`] contiguous blocks. Block `k` uses its own
//! ChaCha8 stream (`stream = k`, key from the 64-bit seed), so tallies are
//! bit-identical for a given seed no matter how blocks are scheduled, and the
//! blocks double as the jackknife groups for the standard error of the
//! mutual-information estimate.

use alloc::vec::Vec;
use core::ops::AddAssign;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{build_channels, h2};
use crate::error::{Error, Result};
use crate::params::{LinkGeometry, PhysicalParams, RateValue};
use crate::strategy::InputStrategy;

/// Number of independent substreams and jackknife groups.
pub const BLOCKS: usize = 100;

/// Name of the generator, recorded in output metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3), one stream per block";

/// Counts `n_xy` of input symbol `x` and click outcome `y`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClickTally {
    pub n00: u64,
    pub n01: u64,
    pub n10: u64,
    pub n11: u64,
}

impl ClickTally {
    /// Slots in which symbol `x` was sent.
    pub fn trials(&self, x: u8) -> u64 {
        if x == 0 {
            self.n00 + self.n01
        } else {
            self.n10 + self.n11
        }
    }

    pub fn total(&self) -> u64 {
        self.trials(0) + self.trials(1)
    }

    fn record(&mut self, x: bool, y: bool) {
        match (x, y) {
            (false, false) => self.n00 += 1,
            (false, true) => self.n01 += 1,
            (true, false) => self.n10 += 1,
            (true, true) => self.n11 += 1,
        }
    }

    /// Empirical `P(click | x)`.
    pub fn click_rate(&self, x: u8) -> Option<f64> {
        let t = self.trials(x);
        if t == 0 {
            return None;
        }
        let clicks = if x == 0 { self.n01 } else { self.n11 };
        Some(clicks as f64 / t as f64)
    }
}

impl AddAssign for ClickTally {
    fn add_assign(&mut self, o: Self) {
        self.n00 += o.n00;
        self.n01 += o.n01;
        self.n10 += o.n10;
        self.n11 += o.n11;
    }
}

impl core::ops::Sub for ClickTally {
    type Output = ClickTally;
    fn sub(self, o: Self) -> ClickTally {
        ClickTally {
            n00: self.n00 - o.n00,
            n01: self.n01 - o.n01,
            n10: self.n10 - o.n10,
            n11: self.n11 - o.n11,
        }
    }
}

/// Per-block tallies of one detector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClickRecord {
    pub blocks: Vec<ClickTally>,
}

impl ClickRecord {
    pub fn total(&self) -> ClickTally {
        let mut t = ClickTally::default();
        for b in &self.blocks {
            t += *b;
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    /// Tallies indexed by the code symbol `V` (equal to `X` without aux).
    pub bob: ClickRecord,
    pub eve: ClickRecord,
    /// `joint[x][y][z]`, indexed by the pulse symbol `X`.
    pub joint: [[[u64; 2]; 2]; 2],
    pub n_slots: u64,
    pub seed: u64,
    pub algorithm: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    pub rate: RateValue,
    /// Jackknife standard error, nats per use.
    pub std_error_nats: f64,
}

impl MiEstimate {
    pub fn std_error_bits(&self) -> f64 {
        self.std_error_nats / core::f64::consts::LN_2
    }
}

fn block_len(n_slots: u64, k: usize) -> u64 {
    let base = n_slots / BLOCKS as u64;
    base + u64::from((k as u64) < n_slots % BLOCKS as u64)
}

pub fn simulate_clicks(
    params: &PhysicalParams,
    geom: &LinkGeometry,
    strategy: &InputStrategy,
    n_slots: u64,
    seed: u64,
) -> Result<Simulation> {
    params.validate()?;
    geom.validate()?;
    strategy.validate()?;
    if n_slots == 0 {
        return Err(Error::InvalidParameter {
            name: "n_slots",
            reason: "at least one slot is required",
        });
    }
    let (bob_ch, eve_ch) = build_channels(params, geom, strategy.n_a);
    let click_b = [bob_ch.p1_given_0, bob_ch.p1_given_1];
    let click_e = [eve_ch.p1_given_0, eve_ch.p1_given_1];
    let aux = strategy.aux.map(|a| [a.a, a.b]);

    let mut bob = Vec::with_capacity(BLOCKS);
    let mut eve = Vec::with_capacity(BLOCKS);
    let mut joint = [[[0u64; 2]; 2]; 2];
    for k in 0..BLOCKS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let (mut tb, mut te) = (ClickTally::default(), ClickTally::default());
        for _ in 0..block_len(n_slots, k) {
            let v = rng.gen::<f64>() < strategy.q_on;
            let x = match aux {
                Some(p) => rng.gen::<f64>() < p[v as usize],
                None => v,
            };
            let y = rng.gen::<f64>() < click_b[x as usize];
            let z = rng.gen::<f64>() < click_e[x as usize];
            tb.record(v, y);
            te.record(v, z);
            joint[x as usize][y as usize][z as usize] += 1;
        }
        bob.push(tb);
        eve.push(te);
    }
    Ok(Simulation {
        bob: ClickRecord { blocks: bob },
        eve: ClickRecord { blocks: eve },
        joint,
        n_slots,
        seed,
        algorithm: RNG_ALGORITHM,
    })
}

/// Plug-in `I(X;Y)` of the empirical joint, in nats.
fn plug_in(t: &ClickTally) -> f64 {
    let n = t.total() as f64;
    let (t0, t1) = (t.trials(0) as f64, t.trials(1) as f64);
    let q = t1 / n;
    let ones = (t.n01 + t.n11) as f64 / n;
    let cond = (t0 / n) * h2(t.n01 as f64 / t0) + q * h2(t.n11 as f64 / t1);
    (h2(ones) - cond).max(0.0)
}

/// Plug-in mutual information with a delete-one-block jackknife standard
/// error.
pub fn empirical_mutual_information(record: &ClickRecord) -> Result<MiEstimate> {
    let total = record.total();
    if total.trials(0) == 0 || total.trials(1) == 0 {
        return Err(Error::DegenerateTally("a symbol was never sent"));
    }
    let full = plug_in(&total);
    let mut leave_out = Vec::with_capacity(record.blocks.len());
    for b in &record.blocks {
        let rest = total - *b;
        if rest.trials(0) > 0 && rest.trials(1) > 0 {
            leave_out.push(plug_in(&rest));
        }
    }
    let g = leave_out.len();
    let std_error_nats = if g < 2 {
        f64::NAN
    } else {
        let mean = leave_out.iter().sum::<f64>() / g as f64;
        let ss: f64 = leave_out.iter().map(|v| (v - mean) * (v - mean)).sum();
        libm::sqrt((g as f64 - 1.0) / g as f64 * ss)
    };
    Ok(MiEstimate {
        rate: RateValue::from_nats(full),
        std_error_nats,
    })
}

