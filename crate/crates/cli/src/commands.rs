use std::path::Path;

use anyhow::{Context, Result};
use ookwire_core::montecarlo::RNG_ALGORITHM;
use ookwire_core::optimize::{sorted_attenuations, THRESHOLD_RESOLUTION_DB};
use ookwire_core::{
    balance_randomness_rate, bounds_at_length, build_channels, empirical_mutual_information,
    exponent_report, find_zero_threshold, maximize_capacity, maximize_secrecy_capacity,
    maximize_secrecy_rate, mutual_information, power_used, required_length, secrecy_objective,
    simulate_clicks, BinaryChannel, ClickRecord, ExponentTerm, InputStrategy, Mode, OperatingPoint,
    OptResult, PhysicalParams, RatePair, RateValue, Regime, Solver, SweepRow,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{CodingRate, Command, ModeArg, Physical, Point};
use crate::output::{emit_json, envelope, sci, write_csv};
use crate::range::parse_values;
use crate::svg::{LinePlot, Series};
use crate::UsageError;

pub const SWEEP_HEADER: [&str; 8] = [
    "alpha_db",
    "rate_bps",
    "rate_bits_per_use",
    "q_star",
    "n_a_star",
    "n_b_star",
    "power_used_w",
    "boundary_active",
];
pub const CODELENGTH_HEADER: [&str; 3] = ["n", "eps_bound", "delta_bound"];

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::LossIndependent => "loss-independent",
        Regime::NoiseLimited => "noise-limited",
    }
}

fn channel_json(ch: &BinaryChannel) -> Value {
    json!({ "p1_given_0": ch.p1_given_0, "p1_given_1": ch.p1_given_1 })
}

fn rate_json(r: RateValue, params: &PhysicalParams) -> Value {
    json!({
        "bps": r.bits_per_second(params.slot_seconds),
        "bits_per_use": r.bits_per_use(),
        "nats_per_use": r.nats(),
    })
}

fn opt_json(r: &OptResult, params: &PhysicalParams) -> Value {
    let mut v = json!({
        "alpha_db": r.geometry.attenuation_db,
        "eta_zy": r.geometry.relative_transmittance,
        "rate_bps": r.rate_bps(params),
        "rate_bits_per_use": r.objective.bits_per_use(),
        "q_star": r.strategy.q_on,
        "n_a_star": r.strategy.n_a,
        "n_b_star": r.n_b_star,
        "n_e_star": r.n_e_star,
        "power_used_w": r.power_used,
        "boundary_active": r.boundary_active,
        "regime": regime_name(r.regime),
    });
    if let Some(aux) = r.strategy.aux {
        v["aux"] = json!({
            "p_x1_given_v0": aux.off_to_on(),
            "p_x0_given_v1": aux.on_to_off(),
        });
    }
    v
}

fn term_json(t: &ExponentTerm) -> Value {
    json!({ "value": t.value(), "nats": t.nats, "rho": t.rho, "r": t.r })
}

/// Operating point from flags, or the secrecy-rate optimum.
fn operating_point(phys: &Physical, alpha_db: f64, point: &Point) -> Result<(OperatingPoint, Value)> {
    let params = phys.params();
    let geom = phys.geometry(alpha_db)?;
    match (point.q, point.n_a) {
        (Some(q), Some(n_a)) => Ok((OperatingPoint::new(q, n_a)?, json!("flags"))),
        _ => {
            let r = maximize_secrecy_rate(&params, &geom)?;
            let op = OperatingPoint::new(r.strategy.q_on, r.strategy.n_a)?;
            Ok((op, json!({ "secrecy_rate_optimum": opt_json(&r, &params) })))
        }
    }
}

fn coding_rate(phys: &Physical, alpha_db: f64, op: OperatingPoint, rate: &CodingRate) -> Result<RateValue> {
    let params = phys.params();
    if let Some(bps) = rate.rb_bps {
        if !(bps >= 0.0 && bps.is_finite()) {
            return Err(UsageError("--rb-bps must be finite and non-negative".into()).into());
        }
        return Ok(RateValue::from_bps(bps, params.slot_seconds));
    }
    if !(0.0..=1.0).contains(&rate.rb_frac) {
        return Err(UsageError("--rb-frac must lie in [0, 1]".into()).into());
    }
    let s = InputStrategy::new(op.q, op.n_a, None)?;
    let r_s = secrecy_objective(&params, &phys.geometry(alpha_db)?, &s);
    Ok(RateValue::from_nats(r_s.nats().max(0.0) * rate.rb_frac))
}

fn randomness_rate(params: &PhysicalParams, re_bps: f64) -> Result<RateValue> {
    if !(re_bps >= 0.0 && re_bps.is_finite()) {
        return Err(UsageError("--re-bps must be finite and non-negative".into()).into());
    }
    Ok(RateValue::from_bps(re_bps, params.slot_seconds))
}

fn write_svg(path: &Path, plot: LinePlot) -> Result<()> {
    std::fs::write(path, plot.render()).with_context(|| format!("writing {}", path.display()))
}

fn finish(cmd: &Command, result: Value, extra: Option<Value>) -> Result<()> {
    emit_json(&envelope(cmd, result, extra), cmd.physical().json.as_deref())
}

pub fn run(cmd: &Command) -> Result<()> {
    let params = cmd.physical().params();
    params.validate()?;
    match cmd {
        Command::Channel { phys, alpha_db, point } => {
            let geom = phys.geometry(*alpha_db)?;
            let (op, source) = operating_point(phys, *alpha_db, point)?;
            let (bob, eve) = build_channels(&params, &geom, op.n_a);
            let i_b = mutual_information(&bob, op.q);
            let i_e = mutual_information(&eve, op.q);
            let result = json!({
                "q": op.q,
                "n_a": op.n_a,
                "operating_point_source": source,
                "eta_y": geom.eta_bob(),
                "eta_z": geom.eta_eve(),
                "w_bob": channel_json(&bob),
                "w_eve": channel_json(&eve),
                "i_bob": rate_json(i_b, &params),
                "i_eve": rate_json(i_e, &params),
                "secrecy_objective": rate_json(i_b - i_e, &params),
                "power_used_w": power_used(op.q, op.n_a, &params),
            });
            finish(cmd, result, None)
        }
        Command::Capacity { phys, alpha_db } => {
            let r = maximize_capacity(&params, &phys.geometry(*alpha_db)?)?;
            finish(cmd, opt_json(&r, &params), None)
        }
        Command::SecrecyRate { phys, alpha_db } => {
            let r = maximize_secrecy_rate(&params, &phys.geometry(*alpha_db)?)?;
            finish(cmd, opt_json(&r, &params), None)
        }
        Command::SecrecyCapacity { phys, alpha_db } => {
            let r = maximize_secrecy_capacity(&params, &phys.geometry(*alpha_db)?)?;
            finish(cmd, opt_json(&r, &params), None)
        }
        Command::Threshold { phys, aux, floor_bps } => {
            let mode = if *aux { Mode::SecrecyAux } else { Mode::Secrecy };
            let t = find_zero_threshold(&params, phys.eta_zy, mode, *floor_bps)?;
            let result = json!({
                "threshold_db": t,
                "mode": if *aux { "secrecy-aux" } else { "secrecy" },
                "floor_bps": floor_bps,
                "resolution_db": THRESHOLD_RESOLUTION_DB,
                "note": if t.is_none() { Some("rate stays above the floor over the whole bracket") } else { None },
            });
            finish(cmd, result, None)
        }
        Command::Sweep {
            phys,
            mode,
            aux,
            alpha_db,
            out,
            svg,
        } => {
            let mode = if *aux { ModeArg::SecrecyAux } else { *mode };
            let alphas = parse_values(alpha_db).map_err(|e| UsageError(format!("--alpha-db: {e}")))?;
            let alphas = sorted_attenuations(&alphas)?;
            let solver = Solver::new(&params, phys.eta_zy, mode.into())?;
            // Indexed parallel collect keeps the rows in attenuation order.
            let rows: Vec<SweepRow> = alphas
                .par_iter()
                .map(|&a| solver.solve(a).map(|r| SweepRow::from_result(&r, &params)))
                .collect::<ookwire_core::Result<_>>()?;
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        sci(r.attenuation_db),
                        sci(r.rate_bps),
                        sci(r.rate_bits_per_use),
                        sci(r.q_star),
                        sci(r.n_a_star),
                        sci(r.n_b_star),
                        sci(r.power_used_w),
                        r.boundary_active.to_string(),
                    ]
                })
                .collect();
            write_csv(out.as_deref(), &SWEEP_HEADER, &cells)?;
            let name = match mode {
                ModeArg::Capacity => "capacity",
                ModeArg::Secrecy => "secrecy rate",
                ModeArg::SecrecyAux => "secrecy capacity",
            };
            if let Some(path) = svg {
                write_svg(
                    path,
                    LinePlot {
                        title: format!("{name}, ηzy = {}", phys.eta_zy),
                        x_label: "attenuation α [dB]".into(),
                        y_label: format!("{name} [bps]"),
                        x_log: false,
                        y_log: true,
                        series: vec![Series {
                            name: name.into(),
                            points: rows.iter().map(|r| (r.attenuation_db, r.rate_bps)).collect(),
                        }],
                    },
                )?;
            }
            // CSV owns stdout unless it went to a file or JSON has its own.
            if out.is_some() || phys.json.is_some() {
                let json_rows: Vec<Value> = rows
                    .iter()
                    .map(|r| {
                        let mut v = json!({
                            "alpha_db": r.attenuation_db,
                            "rate_bps": r.rate_bps,
                            "rate_bits_per_use": r.rate_bits_per_use,
                            "q_star": r.q_star,
                            "n_a_star": r.n_a_star,
                            "n_b_star": r.n_b_star,
                            "power_used_w": r.power_used_w,
                            "boundary_active": r.boundary_active,
                            "regime": regime_name(r.regime),
                        });
                        if let Some(a) = r.aux {
                            v["aux"] = json!({ "p_x1_given_v0": a.off_to_on(), "p_x0_given_v1": a.on_to_off() });
                        }
                        v
                    })
                    .collect();
                let result = json!({
                    "rows": json_rows,
                    "power_free_optimum": rate_json(solver.power_free_optimum(), &params),
                });
                finish(cmd, result, None)?;
            }
            Ok(())
        }
        Command::Exponents {
            phys,
            alpha_db,
            point,
            rate,
            re_bps,
        } => {
            let geom = phys.geometry(*alpha_db)?;
            let (op, source) = operating_point(phys, *alpha_db, point)?;
            let r_b = coding_rate(phys, *alpha_db, op, rate)?;
            let (r_e, balanced) = match re_bps {
                Some(bps) => (randomness_rate(&params, *bps)?, false),
                None => (balance_randomness_rate(&params, &geom, op, r_b)?.r_e, true),
            };
            let rep = exponent_report(&params, &geom, op, RatePair::new(r_b, r_e)?)?;
            let result = json!({
                "q": op.q,
                "n_a": op.n_a,
                "operating_point_source": source,
                "r_b": rate_json(r_b, &params),
                "r_e": rate_json(r_e, &params),
                "r_e_is_balanced": balanced,
                "f_c": rep.f_c(),
                "h_c": rep.h_c(),
                "error_exponent": term_json(&rep.error),
                "secrecy_exponent": term_json(&rep.secrecy),
                "exponent_units": "value: bits per channel use (log base 2); nats: natural log",
                "i_bob": rate_json(rep.i_bob, &params),
                "i_eve": rate_json(rep.i_eve, &params),
            });
            finish(cmd, result, None)
        }
        Command::Balance {
            phys,
            alpha_db,
            point,
            rate,
        } => {
            let geom = phys.geometry(*alpha_db)?;
            let (op, source) = operating_point(phys, *alpha_db, point)?;
            let r_b = coding_rate(phys, *alpha_db, op, rate)?;
            let bal = balance_randomness_rate(&params, &geom, op, r_b)?;
            let result = json!({
                "q": op.q,
                "n_a": op.n_a,
                "operating_point_source": source,
                "r_b": rate_json(r_b, &params),
                "r_e_star": rate_json(bal.r_e, &params),
                "r_e_star_bps": bal.r_e.bits_per_second(params.slot_seconds),
                "f_c": bal.error.value(),
                "h_c": bal.secrecy.value(),
                "error_exponent": term_json(&bal.error),
                "secrecy_exponent": term_json(&bal.secrecy),
            });
            finish(cmd, result, None)
        }
        Command::Codelength {
            phys,
            alpha_db,
            point,
            rate,
            re_bps,
            eps,
            delta,
            out,
            svg,
        } => {
            let geom = phys.geometry(*alpha_db)?;
            let (op, source) = operating_point(phys, *alpha_db, point)?;
            let r_b = coding_rate(phys, *alpha_db, op, rate)?;
            let (r_e, balanced) = match re_bps {
                Some(bps) => (randomness_rate(&params, *bps)?, false),
                None => (balance_randomness_rate(&params, &geom, op, r_b)?.r_e, true),
            };
            let rep = exponent_report(&params, &geom, op, RatePair::new(r_b, r_e)?)?;
            let (f, h) = (rep.f_c(), rep.h_c());
            let table: Vec<u64> = (0..=80).map(|k| 10f64.powf(3.0 + k as f64 / 20.0).round() as u64).collect();
            if out.is_some() || svg.is_some() {
                let bounds = table
                    .iter()
                    .map(|&n| bounds_at_length(f, h, n))
                    .collect::<ookwire_core::Result<Vec<_>>>()?;
                if let Some(path) = out {
                    let cells: Vec<Vec<String>> = bounds
                        .iter()
                        .map(|b| vec![b.n.to_string(), sci(b.eps_bound), sci(b.delta_bound)])
                        .collect();
                    write_csv(Some(path), &CODELENGTH_HEADER, &cells)?;
                }
                if let Some(path) = svg {
                    write_svg(
                        path,
                        LinePlot {
                            title: "finite-length bounds".into(),
                            x_label: "code length n".into(),
                            y_label: "bound".into(),
                            x_log: true,
                            y_log: true,
                            series: vec![
                                Series {
                                    name: "2 exp(-n F_c)".into(),
                                    points: bounds.iter().map(|b| (b.n as f64, b.eps_bound)).collect(),
                                },
                                Series {
                                    name: "2 exp(-n H_c)".into(),
                                    points: bounds.iter().map(|b| (b.n as f64, b.delta_bound)).collect(),
                                },
                            ],
                        },
                    )?;
                }
            }
            let n = required_length(f, h, *eps, *delta)?;
            let at_n = bounds_at_length(f, h, n)?;
            let side = |exp: f64, target: f64| {
                if target >= 2.0 {
                    Value::from(1u64)
                } else if exp > 0.0 {
                    Value::from(((2.0 / target).ln() / exp).ceil())
                } else {
                    Value::Null
                }
            };
            let result = json!({
                "n": n,
                "n_eps_side": side(f, *eps),
                "n_delta_side": side(h, *delta),
                "eps_bound_at_n": at_n.eps_bound,
                "delta_bound_at_n": at_n.delta_bound,
                "q": op.q,
                "n_a": op.n_a,
                "operating_point_source": source,
                "r_b": rate_json(r_b, &params),
                "r_e": rate_json(r_e, &params),
                "r_e_is_balanced": balanced,
                "f_c": f,
                "h_c": h,
            });
            finish(cmd, result, None)
        }
        Command::Simulate {
            phys,
            alpha_db,
            point,
            slots,
            seed,
        } => {
            let geom = phys.geometry(*alpha_db)?;
            let (op, source) = operating_point(phys, *alpha_db, point)?;
            let strategy = InputStrategy::new(op.q, op.n_a, None)?;
            let sim = simulate_clicks(&params, &geom, &strategy, *slots, *seed)?;
            let (bob, eve) = build_channels(&params, &geom, op.n_a);
            let side = |rec: &ClickRecord, ch: &BinaryChannel| -> Value {
                let t = rec.total();
                let mi = empirical_mutual_information(rec).ok();
                json!({
                    "tally": { "n00": t.n00, "n01": t.n01, "n10": t.n10, "n11": t.n11 },
                    "empirical": { "p1_given_0": t.click_rate(0), "p1_given_1": t.click_rate(1) },
                    "analytic": channel_json(ch),
                    "mi_bits": mi.map(|m| m.rate.bits_per_use()),
                    "mi_std_error_bits": mi.map(|m| m.std_error_bits()),
                    "analytic_mi_bits": mutual_information(ch, op.q).bits_per_use(),
                })
            };
            let result = json!({
                "q": op.q,
                "n_a": op.n_a,
                "operating_point_source": source,
                "slots": sim.n_slots,
                "bob": side(&sim.bob, &bob),
                "eve": side(&sim.eve, &eve),
                "joint_xyz": sim.joint,
            });
            finish(cmd, result, Some(json!({ "rng": RNG_ALGORITHM })))
        }
    }
}
