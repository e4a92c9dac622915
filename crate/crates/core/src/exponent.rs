//! Error and secrecy exponents of OOK wiretap codes under the transmit-power
//! cost constraint, and the finite-length bounds they give.
//!
//! For a code of length `n` with coding rate `R_B` and randomness rate `R_E`
//! there exists a code with
//!
//! ```text
//! error probability  ≤ 2 exp(-n F_c),   leaked information ≤ 2 exp(-n H_c)
//! F_c = sup_{r≥0} sup_{0≤ρ≤1} [ φ(ρ|W_B,q,r)  - ρ (R_B + R_E) ]
//! H_c = sup_{r≥0} sup_{0<ρ<1} [ φ(-ρ|W_E,q,r) + ρ R_E ]
//! ```
//!
//! The φ functions are evaluated in nats. The reported exponents
//! ([`ExponentTerm::value`], [`ExponentReport::f_c`]) are the base-2 values,
//! `sup[...] / ln 2`, which is the unit the reference exponent tables for
//! this channel are given in; [`bounds_at_length`] and [`required_length`]
//! take exponents in that unit.

use core::f64::consts::LN_2;

use crate::channel::{build_channels, mutual_information_nats, BinaryChannel};
use crate::error::{check_finite_nonneg, check_probability, Error, Result};
use crate::math::{ceil, exp, golden_max, log, log1p, log_add_exp};
use crate::params::{LinkGeometry, PhysicalParams, RateValue};

/// Points on the ρ grid before golden-section refinement.
const RHO_GRID: usize = 200;
/// Eve's ρ range is open; these are the clamps used in its place.
const RHO_EVE_MIN: f64 = 1e-9;
const RHO_EVE_MAX: f64 = 1.0 - 1e-6;
/// Doublings of the `r` bracket before giving up on further growth.
const R_DOUBLINGS: usize = 60;

/// The `(q, n_A)` the exponents are evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub q: f64,
    pub n_a: f64,
}

impl OperatingPoint {
    pub fn new(q: f64, n_a: f64) -> Result<Self> {
        check_probability("q", q)?;
        check_finite_nonneg("n_a", n_a)?;
        Ok(OperatingPoint { q, n_a })
    }
}

/// Coding rate `R_B = m/n` and randomness rate `R_E = l/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub r_b: RateValue,
    pub r_e: RateValue,
}

impl RatePair {
    pub fn new(r_b: RateValue, r_e: RateValue) -> Result<Self> {
        check_finite_nonneg("r_b", r_b.nats())?;
        check_finite_nonneg("r_e", r_e.nats())?;
        if (r_b + r_e).bits_per_use() > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter {
                name: "rates",
                reason: "R_B + R_E exceeds 1 bit per use",
            });
        }
        Ok(RatePair { r_b, r_e })
    }

    pub fn total(&self) -> RateValue {
        self.r_b + self.r_e
    }
}

/// One exponent together with the `(ρ, r)` attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentTerm {
    /// Supremum in nats per channel use.
    pub nats: f64,
    pub rho: f64,
    /// Cost multiplier, per watt.
    pub r: f64,
}

impl ExponentTerm {
    /// Exponent in base-2 units (bits per channel use).
    pub fn value(&self) -> f64 {
        self.nats / LN_2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentReport {
    pub operating_point: OperatingPoint,
    pub rates: RatePair,
    pub error: ExponentTerm,
    pub secrecy: ExponentTerm,
    pub i_bob: RateValue,
    pub i_eve: RateValue,
}

impl ExponentReport {
    /// Error exponent `F_c` (base 2).
    pub fn f_c(&self) -> f64 {
        self.error.value()
    }

    /// Secrecy exponent `H_c` (base 2).
    pub fn h_c(&self) -> f64 {
        self.secrecy.value()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteLengthBound {
    pub n: u64,
    pub eps_bound: f64,
    pub delta_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Balance {
    /// Randomness rate at which `F_c = H_c`.
    pub r_e: RateValue,
    pub error: ExponentTerm,
    pub secrecy: ExponentTerm,
}

/// Channels and cost weights shared by the φ evaluations.
struct Setup {
    bob: BinaryChannel,
    eve: BinaryChannel,
    q: f64,
    power: f64,
    pulse_power: f64,
}

impl Setup {
    fn new(params: &PhysicalParams, geom: &LinkGeometry, op: OperatingPoint) -> Self {
        let (bob, eve) = build_channels(params, geom, op.n_a);
        Setup {
            bob,
            eve,
            q: op.q,
            power: params.power_watts,
            pulse_power: op.n_a * params.photon_energy() / params.slot_seconds,
        }
    }
}

fn ln_prob(p: f64) -> f64 {
    if p <= 0.0 {
        f64::NEG_INFINITY
    } else {
        log(p)
    }
}

fn ln_complement(p: f64) -> f64 {
    if p >= 1.0 {
        f64::NEG_INFINITY
    } else {
        log1p(-p)
    }
}

/// `-ln Σ_y (q W(y|1)^s w1 + (1-q) W(y|0)^s w0)^t` in log domain, with
/// `w1 = e^{r(P - c1)}` and `w0 = e^{rP}`.
fn gallager_phi(ch: &BinaryChannel, q: f64, s: f64, t: f64, r: f64, power: f64, pulse_power: f64) -> f64 {
    let lq1 = ln_prob(q) + r * (power - pulse_power);
    let lq0 = ln_complement(q) + r * power;
    let scaled = |lw: f64| if lw == f64::NEG_INFINITY { lw } else { s * lw };
    let inner = |l1: f64, l0: f64| log_add_exp(lq1 + scaled(l1), lq0 + scaled(l0));
    let click = inner(ln_prob(ch.p1_given_1), ln_prob(ch.p1_given_0));
    let dark = inner(ln_complement(ch.p1_given_1), ln_complement(ch.p1_given_0));
    -log_add_exp(t * click, t * dark)
}

/// `φ(ρ|W_B,q,r)` in nats, `ρ ∈ [0, 1]`, `r ≥ 0` per watt.
pub fn phi_bob(rho: f64, params: &PhysicalParams, geom: &LinkGeometry, op: OperatingPoint, r: f64) -> f64 {
    let s = Setup::new(params, geom, op);
    phi_bob_at(&s, rho, r)
}

fn phi_bob_at(s: &Setup, rho: f64, r: f64) -> f64 {
    gallager_phi(&s.bob, s.q, 1.0 / (1.0 + rho), 1.0 + rho, r, s.power, s.pulse_power)
}

/// `φ(-ρ|W_E,q,r)` in nats, `ρ ∈ (0, 1)`; ρ is clamped to `1 - 1e-6`.
pub fn phi_eve(rho: f64, params: &PhysicalParams, geom: &LinkGeometry, op: OperatingPoint, r: f64) -> f64 {
    let s = Setup::new(params, geom, op);
    phi_eve_at(&s, rho, r)
}

fn phi_eve_at(s: &Setup, rho: f64, r: f64) -> f64 {
    let rho = rho.min(RHO_EVE_MAX);
    gallager_phi(&s.eve, s.q, 1.0 / (1.0 - rho), 1.0 - rho, r, s.power, s.pulse_power)
}

/// Grid plus golden-section maximization over ρ; ties go to smaller ρ.
fn sup_rho<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> (f64, f64) {
    let step = (hi - lo) / (RHO_GRID - 1) as f64;
    let at = |i: usize| if i == RHO_GRID - 1 { hi } else { lo + i as f64 * step };
    let mut best_i = 0;
    let mut best_v = f(lo);
    for i in 1..RHO_GRID {
        let v = f(at(i));
        if v > best_v {
            best_i = i;
            best_v = v;
        }
    }
    let a = at(best_i.saturating_sub(1));
    let b = at((best_i + 1).min(RHO_GRID - 1));
    let (rho, v) = golden_max(&f, a, b, 1e-12);
    if v > best_v {
        (rho, v)
    } else {
        (at(best_i), best_v)
    }
}

/// `sup_{r≥0} g(r)` by doubling from `r0 = 1/P`, then golden refinement
/// around the best bracket point. Returns `(r, (ρ, value))`.
fn sup_r<G: Fn(f64) -> (f64, f64)>(g: G, power: f64) -> (f64, (f64, f64)) {
    let r0 = 1.0 / power;
    let mut best = (0.0, g(0.0));
    let mut prev_r = 0.0;
    let mut r = r0;
    let mut lower = 0.0;
    let mut upper = r0;
    for _ in 0..R_DOUBLINGS {
        let v = g(r);
        if v.1 > best.1 .1 {
            best = (r, v);
            lower = prev_r;
            upper = 2.0 * r;
        } else {
            break;
        }
        prev_r = r;
        r *= 2.0;
    }
    let (r_ref, _) = golden_max(|r| g(r).1, lower, upper, 1e-9 * upper);
    let refined = g(r_ref);
    if refined.1 > best.1 .1 {
        (r_ref, refined)
    } else {
        best
    }
}

fn error_term(s: &Setup, total_rate: f64) -> ExponentTerm {
    let (r, (rho, v)) = sup_r(|r| sup_rho(|rho| phi_bob_at(s, rho, r) - rho * total_rate, 0.0, 1.0), s.power);
    if v > 0.0 {
        ExponentTerm { nats: v, rho, r }
    } else {
        ExponentTerm { nats: 0.0, rho: 0.0, r: 0.0 }
    }
}

fn secrecy_term(s: &Setup, r_e: f64) -> ExponentTerm {
    let (r, (rho, v)) = sup_r(
        |r| sup_rho(|rho| phi_eve_at(s, rho, r) + rho * r_e, RHO_EVE_MIN, RHO_EVE_MAX),
        s.power,
    );
    if v > 0.0 {
        ExponentTerm { nats: v, rho, r }
    } else {
        ExponentTerm { nats: 0.0, rho: 0.0, r: 0.0 }
    }
}

/// Error exponent `F_c(q, R_B, R_E)`; zero once `R_B + R_E ≥ I(X;Y)`.
pub fn error_exponent(
    params: &PhysicalParams,
    geom: &LinkGeometry,
    op: OperatingPoint,
    rates: RatePair,
) -> Result<ExponentTerm> {
    params.validate()?;
    Ok(error_term(&Setup::new(params, geom, op), rates.total().nats()))
}

/// Secrecy exponent `H_c(q, R_E)`; zero while `R_E ≤ I(X;Z)`.
pub fn secrecy_exponent(
    params: &PhysicalParams,
    geom: &LinkGeometry,
    op: OperatingPoint,
    r_e: RateValue,
) -> Result<ExponentTerm> {
    params.validate()?;
    check_finite_nonneg("r_e", r_e.nats())?;
    Ok(secrecy_term(&Setup::new(params, geom, op), r_e.nats()))
}

pub fn exponent_report(
    params: &PhysicalParams,
    geom: &LinkGeometry,
    op: OperatingPoint,
    rates: RatePair,
) -> Result<ExponentReport> {
    params.validate()?;
    let s = Setup::new(params, geom, op);
    Ok(ExponentReport {
        operating_point: op,
        rates,
        error: error_term(&s, rates.total().nats()),
        secrecy: secrecy_term(&s, rates.r_e.nats()),
        i_bob: RateValue::from_nats(mutual_information_nats(&s.bob, op.q)),
        i_eve: RateValue::from_nats(mutual_information_nats(&s.eve, op.q)),
    })
}

fn check_exponent(name: &'static str, v: f64) -> Result<f64> {
    check_finite_nonneg(name, v)
}

/// `(2 e^{-n F_c}, 2 e^{-n H_c})`.
pub fn bounds_at_length(f_c: f64, h_c: f64, n: u64) -> Result<FiniteLengthBound> {
    check_exponent("f_c", f_c)?;
    check_exponent("h_c", h_c)?;
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "code length must be at least 1",
        });
    }
    Ok(FiniteLengthBound {
        n,
        eps_bound: 2.0 * exp(-(n as f64) * f_c),
        delta_bound: 2.0 * exp(-(n as f64) * h_c),
    })
}

/// Smallest `n` with `2 e^{-n F_c} ≤ eps` and `2 e^{-n H_c} ≤ delta`.
pub fn required_length(f_c: f64, h_c: f64, eps: f64, delta: f64) -> Result<u64> {
    check_exponent("f_c", f_c)?;
    check_exponent("h_c", h_c)?;
    let side = |name: &'static str, exponent: f64, target: f64| -> Result<f64> {
        if target.is_nan() || target <= 0.0 {
            return Err(Error::InvalidParameter {
                name,
                reason: "target must be strictly positive",
            });
        }
        if target >= 2.0 {
            return Ok(1.0);
        }
        if exponent == 0.0 {
            return Err(Error::Unattainable("exponent is zero, the bound never drops below 2"));
        }
        Ok(ceil(log(2.0 / target) / exponent).max(1.0))
    };
    let n = side("eps", f_c, eps)?.max(side("delta", h_c, delta)?);
    if n > u64::MAX as f64 {
        return Err(Error::Unattainable("required length overflows u64"));
    }
    Ok(n as u64)
}

/// Randomness rate `R_E*` at which the error and secrecy exponents are
/// equal, for a fixed coding rate `r_b`.
pub fn balance_randomness_rate(
    params: &PhysicalParams,
    geom: &LinkGeometry,
    op: OperatingPoint,
    r_b: RateValue,
) -> Result<Balance> {
    params.validate()?;
    check_finite_nonneg("r_b", r_b.nats())?;
    let s = Setup::new(params, geom, op);
    let i_bob = mutual_information_nats(&s.bob, op.q);
    let i_eve = mutual_information_nats(&s.eve, op.q);
    let (mut lo, mut hi) = (i_eve, i_bob - r_b.nats());
    if hi <= lo {
        return Err(Error::Infeasible("I(X;Z) ≥ I(X;Y) - R_B at this operating point"));
    }
    let gap = |r_e: f64| error_term(&s, r_b.nats() + r_e).nats - secrecy_term(&s, r_e).nats;
    while hi - lo > 1e-7 * hi {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r_e = 0.5 * (lo + hi);
    Ok(Balance {
        r_e: RateValue::from_nats(r_e),
        error: error_term(&s, r_b.nats() + r_e),
        secrecy: secrecy_term(&s, r_e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::mutual_information;
    use proptest::prelude::*;

    fn reference() -> (PhysicalParams, LinkGeometry, OperatingPoint) {
        (
            PhysicalParams::default(),
            LinkGeometry::new(70.0, 0.9).unwrap(),
            OperatingPoint::new(0.544, 1.94e7).unwrap(),
        )
    }

    /// Direct summation of the φ expression with ordinary powers.
    fn phi_oracle(ch: &BinaryChannel, q: f64, rho_signed: f64, r: f64, power: f64, pulse: f64) -> f64 {
        let s = 1.0 / (1.0 + rho_signed);
        let w1 = (r * (power - pulse)).exp();
        let w0 = (r * power).exp();
        let term = |p1: f64, p0: f64| (q * p1.powf(s) * w1 + (1.0 - q) * p0.powf(s) * w0).powf(1.0 + rho_signed);
        -(term(ch.p1_given_1, ch.p1_given_0) + term(1.0 - ch.p1_given_1, 1.0 - ch.p1_given_0)).ln()
    }

    #[test]
    fn phi_vanishes_at_origin() {
        let (p, g, op) = reference();
        assert!(phi_bob(0.0, &p, &g, op, 0.0).abs() < 1e-15);
        assert!(phi_eve(1e-12, &p, &g, op, 0.0).abs() < 1e-11);
    }

    #[test]
    fn phi_slopes_give_mutual_information() {
        let (p, g, op) = reference();
        let (bob, eve) = build_channels(&p, &g, op.n_a);
        let eps = 1e-6;
        let slope_b = (phi_bob(eps, &p, &g, op, 0.0) - phi_bob(0.0, &p, &g, op, 0.0)) / eps;
        let i_b = mutual_information(&bob, op.q).nats();
        assert!((slope_b - i_b).abs() / i_b < 1e-4, "{slope_b} vs {i_b}");
        let slope_e = phi_eve(eps, &p, &g, op, 0.0) / eps;
        let i_e = mutual_information(&eve, op.q).nats();
        assert!((slope_e + i_e).abs() / i_e < 1e-4, "{slope_e} vs {i_e}");
    }

    #[test]
    fn phi_matches_direct_summation_at_reference() {
        let (p, g, op) = reference();
        let s = Setup::new(&p, &g, op);
        let b = phi_oracle(&s.bob, op.q, 1.0, 0.0, s.power, s.pulse_power);
        assert!((phi_bob(1.0, &p, &g, op, 0.0) - b).abs() <= 1e-12 * b.abs());
        let e = phi_oracle(&s.eve, op.q, -0.5, 0.0, s.power, s.pulse_power);
        assert!((phi_eve(0.5, &p, &g, op, 0.0) - e).abs() <= 1e-12 * e.abs());
    }

    #[test]
    fn exponents_vanish_outside_their_regions() {
        let (p, g, op) = reference();
        let (bob, eve) = build_channels(&p, &g, op.n_a);
        let i_b = mutual_information(&bob, op.q);
        let i_e = mutual_information(&eve, op.q);
        let rates = RatePair::new(RateValue::from_nats(0.1), i_b - RateValue::from_nats(0.1)).unwrap();
        assert!(error_exponent(&p, &g, op, rates).unwrap().nats < 1e-12);
        assert!(secrecy_exponent(&p, &g, op, i_e * 0.99).unwrap().nats < 1e-12);
        assert!(secrecy_exponent(&p, &g, op, i_e * 1.01).unwrap().nats > 0.0);
    }

    #[test]
    fn bounds_examples() {
        let b = bounds_at_length(0.0, 0.0, 12345).unwrap();
        assert_eq!((b.eps_bound, b.delta_bound), (2.0, 2.0));
        let b = bounds_at_length(1.59e-4, 0.0, 135_000).unwrap();
        assert!((b.eps_bound - 2.0 * (-21.465f64).exp()).abs() < 1e-12);
        assert!((b.eps_bound.log10() + 9.0).abs() < 0.05);
        let b = bounds_at_length(1.59e-4, 1.59e-4, 10_000).unwrap();
        assert!((b.eps_bound - 0.4079).abs() < 1e-3);
        assert!(bounds_at_length(1e-4, 1e-4, 0).is_err());
        assert!(bounds_at_length(-1e-4, 1e-4, 10).is_err());
    }

    #[test]
    fn required_length_examples() {
        let n = required_length(1.59e-4, 1.59e-4, 1e-9, 1e-9).unwrap();
        assert_eq!(n, (2e9f64.ln() / 1.59e-4).ceil() as u64);
        assert_eq!(n, 134_695);
        assert_eq!(required_length(1e-4, 1e-4, 2.0, 2.0).unwrap(), 1);
        let n = required_length(4.00e-4, 0.29e-4, 1e-9, 1e-9).unwrap();
        assert_eq!(n, (2e9f64.ln() / 0.29e-4).ceil() as u64);
        assert!((n as f64 - 7.4e5).abs() < 0.02e5);
        assert!(matches!(required_length(0.0, 1e-4, 1e-9, 1e-9), Err(Error::Unattainable(_))));
        // A vacuous target needs no exponent.
        assert_eq!(required_length(0.0, 1e-4, 2.0, 2.0).unwrap(), 1);
    }

    #[test]
    fn balance_rejects_empty_interval() {
        let (p, g, op) = reference();
        let (bob, eve) = build_channels(&p, &g, op.n_a);
        let r_b = mutual_information(&bob, op.q) - mutual_information(&eve, op.q);
        assert!(matches!(
            balance_randomness_rate(&p, &g, op, r_b),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn exponent_gap_brackets_the_balance() {
        let (p, g, op) = reference();
        let (bob, eve) = build_channels(&p, &g, op.n_a);
        let i_b = mutual_information(&bob, op.q).nats();
        let i_e = mutual_information(&eve, op.q).nats();
        let r_b = RateValue::from_bps(22.1e6, 1e-9);
        let eps = 1e-4;
        let low = RateValue::from_nats(i_e + eps);
        let high = RateValue::from_nats(i_b - r_b.nats() - eps);
        let gap = |r_e: RateValue| {
            let rates = RatePair::new(r_b, r_e).unwrap();
            error_exponent(&p, &g, op, rates).unwrap().nats - secrecy_exponent(&p, &g, op, r_e).unwrap().nats
        };
        assert!(gap(low) > 0.0);
        assert!(gap(high) < 0.0);
    }

    #[test]
    fn rate_pair_validation() {
        assert!(RatePair::new(RateValue::from_bits(0.6), RateValue::from_bits(0.6)).is_err());
        assert!(RatePair::new(RateValue::from_nats(-0.1), RateValue::ZERO).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn phi_matches_oracle(
            rho in 0.01..1.0f64,
            r in 0.0..2000.0f64,
            p0 in 1e-9..0.5f64,
            p1 in 0.0..1.0f64,
            q in 0.01..0.99f64,
            pulse in 0.0..0.05f64,
        ) {
            let ch = BinaryChannel::new(p0, p1).unwrap();
            let power = 0.01;
            let b = phi_oracle(&ch, q, rho, r, power, pulse);
            let ours = gallager_phi(&ch, q, 1.0 / (1.0 + rho), 1.0 + rho, r, power, pulse);
            prop_assert!((ours - b).abs() <= 1e-12 * b.abs().max(1e-3), "{} vs {}", ours, b);
            let rho_e = rho.min(0.99);
            let e = phi_oracle(&ch, q, -rho_e, r, power, pulse);
            let ours = gallager_phi(&ch, q, 1.0 / (1.0 - rho_e), 1.0 - rho_e, r, power, pulse);
            prop_assert!((ours - e).abs() <= 1e-12 * e.abs().max(1e-3), "{} vs {}", ours, e);
        }
    }
}
