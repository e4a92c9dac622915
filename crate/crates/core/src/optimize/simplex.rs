//! Nelder–Mead simplex search (maximization) over a small unconstrained vector.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::fabs;

pub(crate) struct SimplexOptions {
    /// Relative spread of objective values across the simplex at convergence.
    pub f_rel_tol: f64,
    /// Largest coordinate distance from the best vertex at convergence.
    pub x_tol: f64,
    pub max_evals: usize,
    pub restarts: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            f_rel_tol: 1e-8,
            x_tol: 1e-6,
            max_evals: 4000,
            restarts: 2,
        }
    }
}

/// Maximize `f` starting at `x0` with initial edge lengths `steps`.
///
/// Returns the best vertex and its value. Ties keep the earlier vertex, so
/// results depend only on the inputs.
pub(crate) fn maximize<F>(mut f: F, x0: &[f64], steps: &[f64], opts: &SimplexOptions) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> f64,
{
    let mut best_x = x0.to_vec();
    let mut best_f = f(x0);
    let mut evals = 1;
    for _ in 0..=opts.restarts {
        let (x, fx, used) = run(&mut f, &best_x, steps, opts, opts.max_evals.saturating_sub(evals));
        evals += used;
        let improved = fx > best_f + opts.f_rel_tol * fabs(best_f);
        if fx > best_f {
            best_x = x;
            best_f = fx;
        }
        if !improved || evals >= opts.max_evals {
            break;
        }
    }
    (best_x, best_f)
}

fn run<F>(f: &mut F, x0: &[f64], steps: &[f64], opts: &SimplexOptions, budget: usize) -> (Vec<f64>, f64, usize)
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    let mut vals: Vec<f64> = Vec::with_capacity(dim + 1);
    pts.push(x0.to_vec());
    vals.push(f(x0));
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += steps[i];
        vals.push(f(&p));
        pts.push(p);
    }
    let mut evals = dim + 1;
    let mut centroid = vec![0.0; dim];
    let mut trial = vec![0.0; dim];
    let mut trial2 = vec![0.0; dim];

    while evals < budget {
        // Order descending by value; stable sort keeps ties deterministic.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap_or(core::cmp::Ordering::Equal));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let spread = vals[0] - vals[dim];
        let diameter = pts[1..]
            .iter()
            .flat_map(|p| p.iter().zip(&pts[0]).map(|(a, b)| fabs(a - b)))
            .fold(0.0, f64::max);
        if diameter < opts.x_tol && (spread <= opts.f_rel_tol * fabs(vals[0]) || diameter < 1e-12) {
            break;
        }
        if !spread.is_finite() && diameter < 1e-12 {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for p in &pts[..dim] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / dim as f64;
            }
        }
        let worst = pts[dim].clone();
        let along = |t: f64, out: &mut Vec<f64>| {
            for k in 0..dim {
                out[k] = centroid[k] + t * (centroid[k] - worst[k]);
            }
        };

        along(1.0, &mut trial);
        let f_r = f(&trial);
        evals += 1;
        if f_r > vals[0] {
            along(2.0, &mut trial2);
            let f_e = f(&trial2);
            evals += 1;
            if f_e > f_r {
                pts[dim].copy_from_slice(&trial2);
                vals[dim] = f_e;
            } else {
                pts[dim].copy_from_slice(&trial);
                vals[dim] = f_r;
            }
            continue;
        }
        if f_r > vals[dim - 1] {
            pts[dim].copy_from_slice(&trial);
            vals[dim] = f_r;
            continue;
        }
        // Contraction: outside if the reflection beat the worst, else inside.
        let (t, reference) = if f_r > vals[dim] { (0.5, f_r) } else { (-0.5, vals[dim]) };
        along(t, &mut trial2);
        let f_c = f(&trial2);
        evals += 1;
        if f_c > reference {
            pts[dim].copy_from_slice(&trial2);
            vals[dim] = f_c;
            continue;
        }
        // Shrink toward the best vertex.
        let best = pts[0].clone();
        for i in 1..=dim {
            for k in 0..dim {
                pts[i][k] = best[k] + 0.5 * (pts[i][k] - best[k]);
            }
            vals[i] = f(&pts[i]);
            evals += 1;
        }
    }

    let mut bi = 0;
    for i in 1..vals.len() {
        if vals[i] > vals[bi] {
            bi = i;
        }
    }
    (pts[bi].clone(), vals[bi], evals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_peak() {
        let (x, v) = maximize(
            |x| -(x[0] - 1.0).powi(2) - 3.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &[0.5, 0.5],
            &SimplexOptions::default(),
        );
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] + 2.0).abs() < 1e-5, "{x:?}");
        assert!(v > -1e-9);
    }

    #[test]
    fn rosenbrock() {
        let (x, _) = maximize(
            |x| -((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)),
            &[-1.2, 1.0],
            &[0.5, 0.5],
            &SimplexOptions {
                max_evals: 20_000,
                ..SimplexOptions::default()
            },
        );
        assert!((x[0] - 1.0).abs() < 1e-4 && (x[1] - 1.0).abs() < 1e-4, "{x:?}");
    }

    #[test]
    fn one_dimensional() {
        let (x, _) = maximize(|x| -(x[0] - 0.25).abs(), &[3.0], &[1.0], &SimplexOptions::default());
        assert!((x[0] - 0.25).abs() < 1e-6);
    }
}
