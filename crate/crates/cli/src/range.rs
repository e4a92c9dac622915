//! `start:stop:step` ranges and comma lists for swept flags.

use anyhow::{bail, Context, Result};

fn number(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().with_context(|| format!("not a number: {s:?}"))?;
    if !v.is_finite() {
        bail!("not a finite number: {s:?}");
    }
    Ok(v)
}

/// Parse `start:stop:step` (inclusive of `stop` when it lies on the grid),
/// a comma-separated list, or a single value.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => single.split(',').map(number).collect(),
        [start, stop, step] => {
            let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
            if step <= 0.0 {
                bail!("range step must be positive, got {step}");
            }
            if stop < start {
                bail!("range stop {stop} is below start {start}");
            }
            // Index-based so long ranges do not accumulate rounding drift.
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if count > 1_000_000 {
                bail!("range has {count} points, limit is 1000000");
            }
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        _ => bail!("expected start:stop:step, a comma list or a number, got {text:?}"),
    }
}
