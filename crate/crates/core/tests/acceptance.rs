//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.
//!
//! Run with `cargo test -p ookwire-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ookwire_core::{
    balance_randomness_rate, build_channels, concatenate, empirical_mutual_information,
    exponent_report, find_zero_threshold, input_marginal, maximize_secrecy_rate, mutual_information,
    phi_bob, phi_eve, required_length, simulate_clicks, sweep_attenuation, AuxChannel,
    BinaryChannel, InputStrategy, LinkGeometry, Mode, OperatingPoint, PhysicalParams, RatePair,
    RateValue, Regime,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Rate below which secrecy is treated as collapsed.
const FLOOR_BPS: f64 = 1.0;

fn within(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target.abs()
}

fn check(ok: bool, msg: String, failures: &mut Vec<String>) {
    if !ok {
        failures.push(msg);
    }
}

fn finish(summary: String, failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {}", failures.join("; ")))
    }
}

fn reference() -> (PhysicalParams, LinkGeometry) {
    (PhysicalParams::default(), LinkGeometry::new(70.0, 0.9).unwrap())
}

fn operating_point() -> (PhysicalParams, LinkGeometry, OperatingPoint, f64) {
    let (p, g) = reference();
    let r = maximize_secrecy_rate(&p, &g).unwrap();
    let op = OperatingPoint::new(r.strategy.q_on, r.strategy.n_a).unwrap();
    (p, g, op, r.rate_bps(&p))
}

fn crit1() -> Outcome {
    let (p, g) = reference();
    let r = maximize_secrecy_rate(&p, &g).map_err(|e| e.to_string())?;
    let bps = r.rate_bps(&p);
    let mut f = Vec::new();
    check(within(bps, 44.2e6, 0.02), format!("R_S = {bps:.4e} bps"), &mut f);
    check((r.strategy.q_on - 0.544).abs() <= 0.01, format!("q* = {:.4}", r.strategy.q_on), &mut f);
    check(within(r.strategy.n_a, 1.94e7, 0.05), format!("n_A* = {:.4e}", r.strategy.n_a), &mut f);
    check(!r.boundary_active, "boundary active".into(), &mut f);
    finish(
        format!(
            "R_S = {:.2} Mbps, q* = {:.4}, n_A* = {:.4e}, boundary_active = {}",
            bps / 1e6,
            r.strategy.q_on,
            r.strategy.n_a,
            r.boundary_active
        ),
        f,
    )
}

fn crit2_3() -> (Outcome, Outcome) {
    let (p, g, op, _) = operating_point();
    let slot = p.slot_seconds;
    let r_b = RateValue::from_bps(22.1e6, slot);
    let bal = match balance_randomness_rate(&p, &g, op, r_b) {
        Ok(b) => b,
        Err(e) => return (Err(e.to_string()), Err("no balance point".into())),
    };
    let at = |scale: f64| {
        let r_e = bal.r_e * scale;
        exponent_report(&p, &g, op, RatePair::new(r_b, r_e).unwrap()).unwrap()
    };
    let lo = at(0.99);
    let hi = at(1.01);
    let re_gbps = bal.r_e.bits_per_second(slot) / 1e9;
    let (fb, hb) = (bal.error.value(), bal.secrecy.value());
    let mut f = Vec::new();
    check(within(re_gbps, 0.641, 0.01), format!("R_E* = {re_gbps:.4} Gbps"), &mut f);
    check(within(fb, 1.59e-4, 0.15), format!("balanced F_c = {fb:.3e}"), &mut f);
    check(within(hb, 1.59e-4, 0.15), format!("balanced H_c = {hb:.3e}"), &mut f);
    check(within(lo.f_c(), 4.00e-4, 0.2), format!("F_c(0.99) = {:.3e}", lo.f_c()), &mut f);
    check(within(lo.h_c(), 0.29e-4, 0.2), format!("H_c(0.99) = {:.3e}", lo.h_c()), &mut f);
    check(within(hi.f_c(), 0.28e-4, 0.2), format!("F_c(1.01) = {:.3e}", hi.f_c()), &mut f);
    check(within(hi.h_c(), 3.94e-4, 0.2), format!("H_c(1.01) = {:.3e}", hi.h_c()), &mut f);
    let c2 = finish(
        format!(
            "R_E* = {re_gbps:.4} Gbps, F=H = ({fb:.3e}, {hb:.3e}), 0.99: ({:.3e}, {:.3e}), 1.01: ({:.3e}, {:.3e})",
            lo.f_c(),
            lo.h_c(),
            hi.f_c(),
            hi.h_c()
        ),
        f,
    );

    let mut f = Vec::new();
    let n = required_length(fb, hb, 1e-9, 1e-9).map_err(|e| e.to_string());
    let n_delta = required_length(lo.f_c(), lo.h_c(), 2.0, 1e-9).map_err(|e| e.to_string());
    let c3 = match (n, n_delta) {
        (Ok(n), Ok(nd)) => {
            check((1.0e5..=1.6e5).contains(&(n as f64)), format!("n = {n}"), &mut f);
            check(nd as f64 > 7e5, format!("δ-side n at 0.99 R_E* = {nd}"), &mut f);
            finish(format!("n = {n}, δ-side n at 0.99·R_E* = {nd}"), f)
        }
        (a, b) => Err(format!("{a:?} {b:?}")),
    };
    (c2, c3)
}

fn threshold(eta_zy: f64, mode: Mode) -> Result<f64, String> {
    match find_zero_threshold(&PhysicalParams::default(), eta_zy, mode, FLOOR_BPS) {
        Ok(Some(t)) => Ok(t),
        Ok(None) => Err("rate never drops below the floor".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn crit4(eta_zy: f64, target: f64) -> Outcome {
    let t = threshold(eta_zy, Mode::Secrecy)?;
    let mut f = Vec::new();
    check((t - target).abs() <= 0.5, format!("expected {target} ± 0.5"), &mut f);
    finish(format!("η_zy = {eta_zy}: threshold {t:.2} dB"), f)
}

fn crit5() -> Outcome {
    let p = PhysicalParams::default();
    let plain = threshold(0.99, Mode::Secrecy)?;
    let aux = threshold(0.99, Mode::SecrecyAux)?;
    let gain = aux - plain;
    let mut f = Vec::new();
    check((gain - 6.0).abs() <= 2.0, format!("gain {gain:.2} dB outside 6 ± 2"), &mut f);

    let alphas: Vec<f64> = (0..=60).map(|i| 2.0 * i as f64).collect();
    let rs = sweep_attenuation(&p, &alphas, Mode::Secrecy, 0.99).map_err(|e| e.to_string())?;
    let cs = sweep_attenuation(&p, &alphas, Mode::SecrecyAux, 0.99).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut pattern_rows = 0;
    for (a, b) in rs.iter().zip(&cs) {
        let deficit = a.rate_bits_per_use - b.rate_bits_per_use;
        worst = worst.max(deficit);
        if deficit > 1e-9 {
            f.push(format!("C_S < R_S at {} dB", a.attenuation_db));
        }
        if b.regime == Regime::NoiseLimited && b.rate_bps >= FLOOR_BPS {
            pattern_rows += 1;
            let aux = b.aux.unwrap_or(AuxChannel::IDENTITY);
            if !(aux.off_to_on() > 0.0 && aux.on_to_off() <= 1e-6) {
                f.push(format!(
                    "P(1|0) = {:.2e}, P(0|1) = {:.2e} at {} dB",
                    aux.off_to_on(),
                    aux.on_to_off(),
                    b.attenuation_db
                ));
            }
        }
    }
    check(pattern_rows > 0, "no noise-limited rows above the floor".into(), &mut f);
    finish(
        format!(
            "thresholds {plain:.2} / {aux:.2} dB (gain {gain:.2} dB), max R_S - C_S = {worst:.1e} bits, {pattern_rows} noise-limited rows checked"
        ),
        f,
    )
}

fn crit6() -> Outcome {
    let p = PhysicalParams::default();
    let alphas: Vec<f64> = (0..=70).map(|i| 2.0 * i as f64).collect();
    let cap = sweep_attenuation(&p, &alphas, Mode::Capacity, 0.9).map_err(|e| e.to_string())?;
    let mut f = Vec::new();
    let plateau: Vec<_> = cap.iter().filter(|r| r.regime == Regime::LossIndependent).collect();
    let tail: Vec<_> = cap.iter().filter(|r| r.regime == Regime::NoiseLimited).collect();
    check(!plateau.is_empty() && !tail.is_empty(), "capacity sweep lacks one of the regimes".into(), &mut f);
    let last_plateau = plateau.last().map_or(0.0, |r| r.attenuation_db);
    check(
        tail.iter().all(|r| r.attenuation_db > last_plateau),
        "regimes interleave".into(),
        &mut f,
    );
    let (cmin, cmax) = plateau.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
        (lo.min(r.rate_bits_per_use), hi.max(r.rate_bits_per_use))
    });
    check(cmax - cmin <= 1e-3 * cmax, format!("plateau C spread {cmin}..{cmax}"), &mut f);
    for w in tail.windows(2) {
        if w[1].rate_bits_per_use >= w[0].rate_bits_per_use {
            f.push(format!("C not decreasing at {} dB", w[1].attenuation_db));
        }
    }
    if let (Some(a), Some(b)) = (plateau.last(), tail.first()) {
        check(b.rate_bits_per_use < a.rate_bits_per_use, "C not decreasing after plateau".into(), &mut f);
    }
    for r in &plateau {
        if (r.q_star - 0.5).abs() > 0.05 {
            f.push(format!("capacity q* = {:.3} at {} dB", r.q_star, r.attenuation_db));
        }
    }

    let sec = sweep_attenuation(&p, &alphas, Mode::Secrecy, 0.9).map_err(|e| e.to_string())?;
    let interior: Vec<_> = sec
        .iter()
        .filter(|r| r.regime == Regime::LossIndependent && !r.boundary_active)
        .collect();
    check(interior.len() > 1, "fewer than two interior secrecy optima".into(), &mut f);
    let (nmin, nmax) = interior
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r.n_b_star), hi.max(r.n_b_star)));
    check(nmax - nmin <= 1e-3 * nmax, format!("interior n_B* spread {nmin}..{nmax}"), &mut f);
    finish(
        format!(
            "capacity plateau {} rows to {last_plateau} dB (C = {cmax:.6} bits), {} decreasing rows; {} interior secrecy rows with n_B* = {nmax:.5}",
            plateau.len(),
            tail.len(),
            interior.len()
        ),
        f,
    )
}

fn mi_oracle(ch: &BinaryChannel, q: f64) -> f64 {
    let px = [1.0 - q, q];
    let py = [0u8, 1].map(|y| px[0] * ch.transition(0, y) + px[1] * ch.transition(1, y));
    let mut acc = 0.0;
    for x in 0..2u8 {
        for y in 0..2u8 {
            let w = ch.transition(x, y);
            let pxy = px[x as usize] * w;
            if pxy > 0.0 {
                acc += pxy * (w / py[y as usize]).ln();
            }
        }
    }
    acc
}

fn random_prob(rng: &mut ChaCha8Rng) -> f64 {
    match rng.gen_range(0..4) {
        0 => rng.gen(),
        1 => 10f64.powf(rng.gen_range(-12.0..0.0)),
        2 => 1.0 - 10f64.powf(rng.gen_range(-12.0..0.0)),
        _ => [0.0, 1.0][rng.gen_range(0..2)],
    }
}

fn crit7() -> Outcome {
    let mut f = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let mut worst_mi: f64 = 0.0;
    let mut dpi_violations = 0;
    for _ in 0..10_000 {
        let ch = BinaryChannel::new(random_prob(&mut rng), random_prob(&mut rng)).unwrap();
        let q = random_prob(&mut rng);
        worst_mi = worst_mi.max((mutual_information(&ch, q).nats() - mi_oracle(&ch, q)).abs());
        let aux = AuxChannel::new(random_prob(&mut rng), random_prob(&mut rng)).unwrap();
        let through = mutual_information(&concatenate(aux, &ch), q).nats();
        let direct = mutual_information(&ch, input_marginal(q, aux)).nats();
        if through > direct + 1e-12 {
            dpi_violations += 1;
        }
    }
    check(worst_mi <= 1e-12, format!("MI oracle deviation {worst_mi:.1e}"), &mut f);
    check(dpi_violations == 0, format!("{dpi_violations} DPI violations"), &mut f);

    // Exponent monotonicity and zero regions on the reference channel.
    let (p, g) = reference();
    let op = OperatingPoint::new(0.544, 1.94e7).unwrap();
    let (bob, eve) = build_channels(&p, &g, op.n_a);
    let i_b = mutual_information(&bob, op.q).nats();
    let i_e = mutual_information(&eve, op.q).nats();
    let mut prev_f = f64::INFINITY;
    let mut prev_h = -1.0;
    for k in 0..=40 {
        let r_e = RateValue::from_nats(i_b * k as f64 / 40.0);
        let rep = exponent_report(&p, &g, op, RatePair::new(RateValue::ZERO, r_e).unwrap()).unwrap();
        let (fe, he) = (rep.error.nats, rep.secrecy.nats);
        if fe > prev_f + 1e-12 || he < prev_h - 1e-12 {
            f.push(format!("exponent monotonicity broken at R_E = {:.4}", r_e.nats()));
        }
        prev_f = fe;
        prev_h = he;
    }
    let zr = |r_b: f64, r_e: f64| {
        exponent_report(&p, &g, op, RatePair::new(RateValue::from_nats(r_b), RateValue::from_nats(r_e)).unwrap())
            .unwrap()
    };
    check(zr(0.0, i_b - 1e-6).error.nats > 0.0, "F_c zero below I(X;Y)".into(), &mut f);
    check(zr(0.0, i_b + 1e-6).error.nats < 1e-12, "F_c positive above I(X;Y)".into(), &mut f);
    check(zr(0.0, i_e + 1e-6).secrecy.nats > 0.0, "H_c zero above I(X;Z)".into(), &mut f);
    check(zr(0.0, i_e - 1e-6).secrecy.nats < 1e-12, "H_c positive below I(X;Z)".into(), &mut f);

    let eps = 1e-6;
    let slope_b = (phi_bob(eps, &p, &g, op, 0.0) - phi_bob(0.0, &p, &g, op, 0.0)) / eps;
    let slope_e = phi_eve(eps, &p, &g, op, 0.0) / eps;
    check(within(slope_b, i_b, 1e-4), format!("φ_B slope {slope_b} vs {i_b}"), &mut f);
    check(within(-slope_e, i_e, 1e-4), format!("φ_E slope {slope_e} vs {i_e}"), &mut f);

    let strategy = InputStrategy::new(op.q, op.n_a, None).unwrap();
    let sim = simulate_clicks(&p, &g, &strategy, 1_000_000, 2024).unwrap();
    for (name, rec, ch) in [("bob", &sim.bob, bob), ("eve", &sim.eve, eve)] {
        let t = rec.total();
        for x in 0..2u8 {
            let pa = ch.transition(x, 1);
            let n = t.trials(x) as f64;
            let sigma = (pa * (1.0 - pa) / n).sqrt();
            let emp = t.click_rate(x).unwrap();
            if (emp - pa).abs() > 3.0 * sigma.max(1.0 / n) {
                f.push(format!("{name} P(1|{x}) = {emp} vs {pa}"));
            }
        }
    }
    let est = empirical_mutual_information(&sim.bob).unwrap();
    let mi_dev = (est.rate.nats() - i_b).abs();
    check(mi_dev <= 3.0 * est.std_error_nats, format!("MC MI deviation {mi_dev:.2e} nats"), &mut f);

    finish(
        format!(
            "MI oracle max dev {worst_mi:.1e}, DPI ok, exponents monotone, φ slopes ok, MC MI {:.5} ± {:.5} bits",
            est.rate.bits_per_use(),
            est.std_error_bits()
        ),
        f,
    )
}

fn report(id: &str, name: &str, elapsed: Duration, limit: Option<Duration>, outcome: Outcome, fails: &mut usize) {
    let over = limit.is_some_and(|l| elapsed > l);
    let (tag, text) = match (&outcome, over) {
        (Ok(s), false) => ("PASS", s.clone()),
        (Ok(s), true) => ("FAIL", format!("{s}; runtime over limit")),
        (Err(s), _) => ("FAIL", s.clone()),
    };
    if tag == "FAIL" {
        *fails += 1;
    }
    let limit = limit.map_or(String::new(), |l| format!(" / limit {:.0}s", l.as_secs_f64()));
    println!("{tag} [{id}] {name}: {text} ({:.2}s{limit})", elapsed.as_secs_f64());
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut fails = 0;
    let secs = Duration::from_secs;

    let t = Instant::now();
    let o = crit1();
    report("1", "secrecy-rate operating point", t.elapsed(), Some(secs(5)), o, &mut fails);

    let t = Instant::now();
    let (c2, c3) = crit2_3();
    let e = t.elapsed();
    report("2", "finite-length exponent table", e, Some(secs(30)), c2, &mut fails);
    report("3", "required code length", e, None, c3, &mut fails);

    let t = Instant::now();
    let o = crit4(0.9, 124.4);
    report("4a", "zero-secrecy threshold", t.elapsed(), Some(secs(60)), o, &mut fails);
    let t = Instant::now();
    let o = crit4(0.99, 107.6);
    report("4b", "zero-secrecy threshold", t.elapsed(), Some(secs(60)), o, &mut fails);

    let t = Instant::now();
    let o = crit5();
    report("5", "auxiliary-channel gain", t.elapsed(), None, o, &mut fails);

    let t = Instant::now();
    let o = crit6();
    report("6", "regime structure", t.elapsed(), None, o, &mut fails);

    let t = Instant::now();
    let o = crit7();
    report("7", "property suites", t.elapsed(), None, o, &mut fails);

    let total = start.elapsed();
    let over = total > secs(300);
    if over {
        fails += 1;
    }
    println!(
        "{} [total] acceptance runtime {:.1}s / limit 300s",
        if over { "FAIL" } else { "PASS" },
        total.as_secs_f64()
    );
    if fails == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{fails} criterion line(s) failed");
        ExitCode::FAILURE
    }
}
