//! Grid + simplex search over Alice's strategy for one objective landscape.

use alloc::vec::Vec;

use super::simplex::{self, SimplexOptions};
use super::Mode;
use crate::channel::{click_probability_unchecked, concatenate, mutual_information_nats, BinaryChannel};
use crate::math::{exp, log, logit, pow, sigmoid};
use crate::strategy::AuxChannel;

/// Logits are clamped here; `sigmoid(36) = 1 - 2.3e-16`.
const LOGIT_LIMIT: f64 = 36.0;
const TOP_K: usize = 5;

/// A candidate strategy. `n` is photons per on-pulse in the landscape's own
/// photon unit (at the transmitter, or at Bob for the power-free landscape).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Point {
    pub q: f64,
    pub n: f64,
    pub a: f64,
    pub b: f64,
}

impl Point {
    pub fn no_aux(q: f64, n: f64) -> Self {
        Point { q, n, a: 0.0, b: 1.0 }
    }

    pub fn pulse_probability(&self) -> f64 {
        (1.0 - self.q) * self.a + self.q * self.b
    }
}

/// Objective as a function of the strategy at one attenuation.
///
/// `photon_budget` is `P Δ / (h f0)`: the constraint reads
/// `P(X=1) · n ≤ photon_budget`. An infinite budget gives the power-free
/// problem whose optimum is independent of attenuation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Landscape {
    pub mode: Mode,
    pub eta_bob: f64,
    pub eta_eve: f64,
    pub dark_bob: f64,
    pub dark_eve: f64,
    pub photon_budget: f64,
    a_bob: f64,
    a_eve: f64,
}

impl Landscape {
    pub fn new(mode: Mode, eta_bob: f64, eta_eve: f64, dark_bob: f64, dark_eve: f64, photon_budget: f64) -> Self {
        Landscape {
            mode,
            eta_bob,
            eta_eve,
            dark_bob,
            dark_eve,
            photon_budget,
            a_bob: click_probability_unchecked(dark_bob),
            a_eve: click_probability_unchecked(dark_eve),
        }
    }

    pub fn value(&self, p: &Point) -> f64 {
        let bob = BinaryChannel {
            p1_given_0: self.a_bob,
            p1_given_1: click_probability_unchecked(self.eta_bob * p.n + self.dark_bob),
        };
        match self.mode {
            Mode::Capacity => mutual_information_nats(&bob, p.q),
            Mode::Secrecy | Mode::SecrecyAux => {
                let eve = BinaryChannel {
                    p1_given_0: self.a_eve,
                    p1_given_1: click_probability_unchecked(self.eta_eve * p.n + self.dark_eve),
                };
                if self.mode == Mode::SecrecyAux {
                    let aux = AuxChannel { a: p.a, b: p.b };
                    mutual_information_nats(&concatenate(aux, &bob), p.q)
                        - mutual_information_nats(&concatenate(aux, &eve), p.q)
                } else {
                    mutual_information_nats(&bob, p.q) - mutual_information_nats(&eve, p.q)
                }
            }
        }
    }

    pub fn boundary_n(&self, p: &Point) -> f64 {
        self.photon_budget / p.pulse_probability()
    }

    pub fn is_feasible(&self, p: &Point) -> bool {
        p.pulse_probability() * p.n <= self.photon_budget
    }

    /// Pull an infeasible point back onto the power boundary along `n`.
    pub fn project(&self, mut p: Point) -> Point {
        if !self.is_feasible(&p) {
            p.n = self.boundary_n(&p);
        }
        p
    }
}

/// Grid resolution for one search.
pub(crate) struct GridSpec {
    pub q: Vec<f64>,
    pub n: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

fn log_grid(lo_exp: f64, hi_exp: f64, per_decade: usize) -> impl Iterator<Item = f64> {
    let steps = libm::round((hi_exp - lo_exp) * per_decade as f64) as usize;
    (0..=steps).map(move |i| pow(10.0, lo_exp + i as f64 / per_decade as f64))
}

/// `q` log-spaced on `[1e-9, 0.1]`, then linear on `(0.1, 1]`.
fn q_grid(per_decade: usize, linear_step: f64) -> Vec<f64> {
    let mut q: Vec<f64> = log_grid(-9.0, -1.0, per_decade).collect();
    let steps = libm::round(0.9 / linear_step) as usize;
    q.extend((1..=steps).map(|i| 0.1 + i as f64 * linear_step));
    if let Some(last) = q.last_mut() {
        *last = 1.0;
    }
    q
}

impl GridSpec {
    /// Transmitter photon numbers `[1e-3, 1e12]` at 20 points/decade.
    pub fn constrained(mode: Mode) -> Self {
        match mode {
            Mode::SecrecyAux => GridSpec {
                q: q_grid(10, 0.05),
                n: log_grid(-3.0, 12.0, 10).collect(),
                a: aux_a_grid(),
                b: aux_b_grid(),
            },
            _ => GridSpec {
                q: q_grid(20, 0.01),
                n: log_grid(-3.0, 12.0, 20).collect(),
                a: alloc::vec![0.0],
                b: alloc::vec![1.0],
            },
        }
    }

    /// Received photon numbers `[1e-6, 1e6]` for the power-free landscape.
    pub fn power_free(mode: Mode) -> Self {
        match mode {
            Mode::SecrecyAux => GridSpec {
                q: q_grid(10, 0.05),
                n: log_grid(-6.0, 6.0, 10).collect(),
                a: aux_a_grid(),
                b: aux_b_grid(),
            },
            _ => GridSpec {
                q: q_grid(20, 0.01),
                n: log_grid(-6.0, 6.0, 20).collect(),
                a: alloc::vec![0.0],
                b: alloc::vec![1.0],
            },
        }
    }
}

fn aux_a_grid() -> Vec<f64> {
    let mut a = alloc::vec![0.0];
    a.extend(log_grid(-8.0, -0.5, 2));
    a
}

fn aux_b_grid() -> Vec<f64> {
    alloc::vec![1.0, 0.999, 0.99, 0.9, 0.5]
}

/// Ordering used everywhere: larger value wins, then smaller `n`, then
/// smaller `q`, `a` and larger `b`.
pub(crate) fn better(v1: f64, p1: &Point, v2: f64, p2: &Point) -> bool {
    if v1 != v2 {
        return v1 > v2;
    }
    (p1.n, p1.q, p1.a, -p1.b) < (p2.n, p2.q, p2.a, -p2.b)
}

struct TopK {
    items: Vec<(f64, Point)>,
}

impl TopK {
    fn new() -> Self {
        TopK { items: Vec::with_capacity(TOP_K + 1) }
    }

    fn offer(&mut self, v: f64, p: Point) {
        if !v.is_finite() || self.items.iter().any(|(_, q)| *q == p) {
            return;
        }
        if self.items.len() == TOP_K {
            let (lv, lp) = self.items[TOP_K - 1];
            if !better(v, &p, lv, &lp) {
                return;
            }
            self.items.pop();
        }
        let pos = self
            .items
            .iter()
            .position(|(w, q)| better(v, &p, *w, q))
            .unwrap_or(self.items.len());
        self.items.insert(pos, (v, p));
    }
}

/// Coordinates the simplex works in.
#[derive(Clone, Copy)]
enum Coords {
    /// `logit q`, with `n` pinned to the power boundary.
    Boundary,
    /// `(ln n, logit q)`.
    Plain,
    /// `(ln n, logit q, logit a, logit b)`.
    Aux,
}

fn clamp_logit(p: f64) -> f64 {
    if p <= 0.0 {
        -LOGIT_LIMIT
    } else if p >= 1.0 {
        LOGIT_LIMIT
    } else {
        logit(p).clamp(-LOGIT_LIMIT, LOGIT_LIMIT)
    }
}

fn unclamp(x: f64) -> f64 {
    sigmoid(x.clamp(-LOGIT_LIMIT, LOGIT_LIMIT))
}

fn encode(c: Coords, p: &Point) -> Vec<f64> {
    match c {
        Coords::Boundary => alloc::vec![clamp_logit(p.q)],
        Coords::Plain => alloc::vec![log(p.n), clamp_logit(p.q)],
        Coords::Aux => alloc::vec![log(p.n), clamp_logit(p.q), clamp_logit(p.a), clamp_logit(p.b)],
    }
}

fn decode(c: Coords, land: &Landscape, x: &[f64]) -> Point {
    match c {
        Coords::Boundary => {
            let mut p = Point::no_aux(unclamp(x[0]), 0.0);
            p.n = land.boundary_n(&p);
            p
        }
        Coords::Plain => land.project(Point::no_aux(unclamp(x[1]), exp(x[0]))),
        Coords::Aux => land.project(Point {
            q: unclamp(x[1]),
            n: exp(x[0]),
            a: unclamp(x[2]),
            b: unclamp(x[3]),
        }),
    }
}

fn steps(c: Coords) -> &'static [f64] {
    match c {
        Coords::Boundary => &[0.5],
        Coords::Plain => &[0.5, 0.5],
        Coords::Aux => &[0.5, 0.5, 1.0, 1.0],
    }
}

fn refine(land: &Landscape, coords: Coords, seeds: &[(f64, Point)]) -> (f64, Point) {
    let mut best = seeds[0];
    for &(v0, seed) in seeds {
        if better(v0, &seed, best.0, &best.1) {
            best = (v0, seed);
        }
        let x0 = encode(coords, &seed);
        let (x, _) = simplex::maximize(
            |x| land.value(&decode(coords, land, x)),
            &x0,
            steps(coords),
            &SimplexOptions::default(),
        );
        let p = decode(coords, land, &x);
        let v = land.value(&p);
        if better(v, &p, best.0, &best.1) {
            best = (v, p);
        }
    }
    best
}

/// Maximize along the power boundary only (valid when the objective is
/// nondecreasing in `n`, as for the main-channel capacity).
pub(crate) fn search_boundary(land: &Landscape, grid: &GridSpec) -> (f64, Point) {
    let mut top = TopK::new();
    for &q in &grid.q {
        let mut p = Point::no_aux(q, 0.0);
        p.n = land.boundary_n(&p);
        top.offer(land.value(&p), p);
    }
    refine(land, Coords::Boundary, &top.items)
}

/// Full search: grid with projection onto the boundary, then simplex
/// refinement of the best `TOP_K` grid points and any extra seeds.
pub(crate) fn search(land: &Landscape, grid: &GridSpec, extra_seeds: &[Point]) -> (f64, Point) {
    let mut top = TopK::new();
    for &a in &grid.a {
        for &b in &grid.b {
            for &q in &grid.q {
                let base = Point { q, n: 0.0, a, b };
                let budget_n = land.boundary_n(&base);
                for &n in &grid.n {
                    if n >= budget_n {
                        break;
                    }
                    let p = Point { n, ..base };
                    top.offer(land.value(&p), p);
                }
                if budget_n.is_finite() {
                    let p = Point { n: budget_n, ..base };
                    top.offer(land.value(&p), p);
                }
            }
        }
    }
    let mut seeds = top.items;
    for s in extra_seeds {
        let p = land.project(*s);
        seeds.push((land.value(&p), p));
    }
    let coords = if land.mode == Mode::SecrecyAux { Coords::Aux } else { Coords::Plain };
    refine(land, coords, &seeds)
}
