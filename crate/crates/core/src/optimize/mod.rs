//! Power-constrained maximization of capacity, secrecy rate and secrecy
//! capacity, attenuation sweeps and zero-secrecy thresholds.
//!
//! The objective depends on the attenuation only through the received
//! photon numbers `ηy n_A` and `ηz n_A`. A [`Solver`] therefore solves the
//! power-free problem once, in received-photon units, and reuses it at every
//! attenuation: whenever that optimum fits the power budget it *is* the
//! constrained optimum (the loss-independent region). Otherwise a grid
//! search with projection onto the power boundary seeds a simplex
//! refinement in `(ln n_A, logit q[, logit a, logit b])`.

mod search;
mod simplex;

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::fabs;
use crate::params::{LinkGeometry, PhysicalParams, RateValue};
use crate::strategy::{power_used, AuxChannel, InputStrategy};
use search::{GridSpec, Landscape, Point};

/// Relative distance to the budget below which the power constraint counts
/// as active.
pub const BOUNDARY_TOL: f64 = 1e-6;

/// Relative distance to the power-free optimum within which a boundary
/// optimum still belongs to the loss-independent plateau.
const PLATEAU_TOL: f64 = 1e-6;

/// Bracket searched by [`find_zero_threshold`], in dB.
pub const THRESHOLD_BRACKET_DB: (f64, f64) = (0.0, 200.0);

/// Bisection resolution of [`find_zero_threshold`], in dB.
pub const THRESHOLD_RESOLUTION_DB: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `max I(X;Y)`.
    Capacity,
    /// `max I(X;Y) - I(X;Z)`.
    Secrecy,
    /// `max I(V;Y) - I(V;Z)` over an auxiliary channel as well.
    SecrecyAux,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// The optimum does not depend on the attenuation; power is to spare.
    LossIndependent,
    /// The optimum is pinned to the power boundary and degrades with loss.
    NoiseLimited,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptResult {
    pub mode: Mode,
    /// Optimized rate, floored at zero for the secrecy modes.
    pub objective: RateValue,
    /// Value at `strategy`; negative when no strategy gives positive secrecy.
    pub raw_objective: RateValue,
    pub strategy: InputStrategy,
    /// Mean photons per pulse at Bob, `ηy n_A*`.
    pub n_b_star: f64,
    /// Mean photons per pulse at Eve, `ηz n_A*`.
    pub n_e_star: f64,
    pub power_used: f64,
    pub boundary_active: bool,
    pub regime: Regime,
    pub geometry: LinkGeometry,
}

impl OptResult {
    pub fn rate_bps(&self, params: &PhysicalParams) -> f64 {
        self.objective.bits_per_second(params.slot_seconds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub attenuation_db: f64,
    pub rate_bps: f64,
    pub rate_bits_per_use: f64,
    pub q_star: f64,
    pub n_a_star: f64,
    pub n_b_star: f64,
    pub power_used_w: f64,
    pub boundary_active: bool,
    pub regime: Regime,
    pub aux: Option<AuxChannel>,
}

impl SweepRow {
    pub fn from_result(r: &OptResult, params: &PhysicalParams) -> Self {
        SweepRow {
            attenuation_db: r.geometry.attenuation_db,
            rate_bps: r.rate_bps(params),
            rate_bits_per_use: r.objective.bits_per_use(),
            q_star: r.strategy.q_on,
            n_a_star: r.strategy.n_a,
            n_b_star: r.n_b_star,
            power_used_w: r.power_used,
            boundary_active: r.boundary_active,
            regime: r.regime,
            aux: r.strategy.aux,
        }
    }
}

/// Optimizer for one objective at fixed physical parameters and relative
/// transmittance; reusable across attenuations.
#[derive(Debug, Clone)]
pub struct Solver {
    params: PhysicalParams,
    eta_zy: f64,
    mode: Mode,
    /// Optimum without power limit, `n` in photons received by Bob.
    power_free: (f64, Point),
    /// The no-auxiliary solver, used to seed the auxiliary search.
    base: Option<Box<Solver>>,
}

impl Solver {
    pub fn new(params: &PhysicalParams, eta_zy: f64, mode: Mode) -> Result<Self> {
        params.validate()?;
        LinkGeometry::new(0.0, eta_zy)?;
        let base = match mode {
            Mode::SecrecyAux => Some(Box::new(Solver::new(params, eta_zy, Mode::Secrecy)?)),
            _ => None,
        };
        let land = Landscape::new(
            mode,
            1.0,
            eta_zy,
            params.dark_mean_bob(),
            params.dark_mean_eve(),
            f64::INFINITY,
        );
        let seeds: Vec<Point> = base.iter().map(|b| b.power_free.1).collect();
        let power_free = search::search(&land, &GridSpec::power_free(mode), &seeds);
        Ok(Solver {
            params: *params,
            eta_zy,
            mode,
            power_free,
            base,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    /// Optimum of the objective when power is unlimited, in nats per use.
    pub fn power_free_optimum(&self) -> RateValue {
        RateValue::from_nats(self.power_free.0)
    }

    fn landscape(&self, geom: &LinkGeometry) -> Landscape {
        Landscape::new(
            self.mode,
            geom.eta_bob(),
            geom.eta_eve(),
            self.params.dark_mean_bob(),
            self.params.dark_mean_eve(),
            self.params.max_photons_per_slot(),
        )
    }

    fn solve_point(&self, geom: &LinkGeometry) -> (f64, Point) {
        let land = self.landscape(geom);
        if self.mode == Mode::Capacity {
            // I(X;Y) never decreases with pulse energy, so the optimum can
            // always be taken on the power boundary.
            return search::search_boundary(&land, &GridSpec::constrained(self.mode));
        }
        let (_, pf) = self.power_free;
        let candidate = Point {
            n: pf.n / geom.eta_bob(),
            ..pf
        };
        if land.is_feasible(&candidate) {
            return (land.value(&candidate), candidate);
        }
        let mut seeds = alloc::vec![candidate];
        if let Some(base) = &self.base {
            seeds.push(base.solve_point(geom).1);
        }
        search::search(&land, &GridSpec::constrained(self.mode), &seeds)
    }

    pub fn solve(&self, attenuation_db: f64) -> Result<OptResult> {
        let geom = LinkGeometry::new(attenuation_db, self.eta_zy)?;
        let (value, p) = self.solve_point(&geom);
        let aux = match self.mode {
            Mode::SecrecyAux => Some(AuxChannel { a: p.a, b: p.b }),
            _ => None,
        };
        let strategy = InputStrategy {
            q_on: p.q,
            n_a: p.n,
            aux,
        };
        let power = power_used(p.pulse_probability(), p.n, &self.params);
        let boundary_active = fabs(power - self.params.power_watts) / self.params.power_watts < BOUNDARY_TOL;
        let plateau = self.power_free.0;
        let on_plateau = plateau > 0.0 && value >= plateau * (1.0 - PLATEAU_TOL);
        // Interior optima coincide with the power-free optimum, so plateau
        // membership alone separates the regimes. Collapsed rows far past
        // the threshold can be interior yet sit well below the plateau.
        let regime = if on_plateau {
            Regime::LossIndependent
        } else {
            Regime::NoiseLimited
        };
        let objective = match self.mode {
            Mode::Capacity => value,
            _ => value.max(0.0),
        };
        Ok(OptResult {
            mode: self.mode,
            objective: RateValue::from_nats(objective),
            raw_objective: RateValue::from_nats(value),
            strategy,
            n_b_star: geom.eta_bob() * p.n,
            n_e_star: geom.eta_eve() * p.n,
            power_used: power,
            boundary_active,
            regime,
            geometry: geom,
        })
    }

    pub fn rate_bps(&self, attenuation_db: f64) -> Result<f64> {
        Ok(self.solve(attenuation_db)?.rate_bps(&self.params))
    }
}

/// Power-constrained capacity `C = max I(X;Y)` of the main channel.
pub fn maximize_capacity(params: &PhysicalParams, geom: &LinkGeometry) -> Result<OptResult> {
    Solver::new(params, geom.relative_transmittance, Mode::Capacity)?.solve(geom.attenuation_db)
}

/// Secrecy rate `R_S = max I(X;Y) - I(X;Z)` without auxiliary randomization.
pub fn maximize_secrecy_rate(params: &PhysicalParams, geom: &LinkGeometry) -> Result<OptResult> {
    Solver::new(params, geom.relative_transmittance, Mode::Secrecy)?.solve(geom.attenuation_db)
}

/// Secrecy capacity `C_S`, optimizing the auxiliary channel `P_{X|V}` too.
pub fn maximize_secrecy_capacity(params: &PhysicalParams, geom: &LinkGeometry) -> Result<OptResult> {
    Solver::new(params, geom.relative_transmittance, Mode::SecrecyAux)?.solve(geom.attenuation_db)
}

/// One optimum per attenuation, sorted by attenuation with duplicates removed.
pub fn sweep_attenuation(
    params: &PhysicalParams,
    alphas: &[f64],
    mode: Mode,
    eta_zy: f64,
) -> Result<Vec<SweepRow>> {
    let alphas = sorted_attenuations(alphas)?;
    let solver = Solver::new(params, eta_zy, mode)?;
    alphas
        .iter()
        .map(|&a| solver.solve(a).map(|r| SweepRow::from_result(&r, params)))
        .collect()
}

/// Validate, sort and deduplicate an attenuation list.
pub fn sorted_attenuations(alphas: &[f64]) -> Result<Vec<f64>> {
    if alphas.is_empty() {
        return Err(Error::InvalidParameter {
            name: "alphas",
            reason: "must not be empty",
        });
    }
    if alphas.iter().any(|a| a.is_nan() || *a < 0.0 || a.is_infinite()) {
        return Err(Error::InvalidParameter {
            name: "alphas",
            reason: "attenuations must be finite and non-negative",
        });
    }
    let mut v = alphas.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
    Ok(v)
}

/// Largest attenuation (to [`THRESHOLD_RESOLUTION_DB`]) at which the
/// optimized rate is still at least `floor_bps`.
///
/// Returns `None` when the rate stays above the floor over the whole
/// bracket.
pub fn find_zero_threshold(
    params: &PhysicalParams,
    eta_zy: f64,
    mode: Mode,
    floor_bps: f64,
) -> Result<Option<f64>> {
    if floor_bps.is_nan() || floor_bps <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "floor_bps",
            reason: "must be strictly positive",
        });
    }
    let solver = Solver::new(params, eta_zy, mode)?;
    let (mut lo, mut hi) = THRESHOLD_BRACKET_DB;
    let at_lo = solver.rate_bps(lo)?;
    if at_lo < floor_bps {
        return Err(Error::BracketFailure {
            rate_bps: at_lo,
            floor_bps,
        });
    }
    if solver.rate_bps(hi)? >= floor_bps {
        return Ok(None);
    }
    while hi - lo > THRESHOLD_RESOLUTION_DB {
        let mid = 0.5 * (lo + hi);
        if solver.rate_bps(mid)? >= floor_bps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}
