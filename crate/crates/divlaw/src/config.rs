use divlaw_core::limit_law::validate_v_grid;

/// Default grid step.
pub const DEFAULT_H: f64 = 1e-3;

/// `max(u, 12) + 40`, enough for the tails of `rho_{1/2}`.
pub fn default_u_max(u: f64) -> f64 {
    u.max(12.0) + 40.0
}

/// Parses `start:stop:step` into `start, start + step, ...` up to `stop`.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid `{spec}` is not of the form start:stop:step"));
    }
    let mut nums = [0.0; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("grid `{spec}`: `{part}` is not a number"))?;
        if !slot.is_finite() {
            return Err(format!("grid `{spec}`: `{part}` is not finite"));
        }
    }
    let [start, stop, step] = nums;
    if stop < start {
        return Err(format!("grid `{spec}`: stop lies below start"));
    }
    if !(step > 0.0) {
        return Err(format!("grid `{spec}`: step must be positive"));
    }
    let n = ((stop - start) / step + 1e-9).floor();
    if n > 1e7 {
        return Err(format!("grid `{spec}` has too many points"));
    }
    let n = n as usize;
    Ok((0..=n)
        .map(|i| {
            let x = start + i as f64 * step;
            if x > stop {
                stop
            } else {
                x
            }
        })
        .collect())
}

/// A [`parse_range`] grid that must lie in `[0, 1]` and increase strictly.
pub fn parse_v_grid(spec: &str) -> Result<Vec<f64>, String> {
    let grid = parse_range(spec)?;
    validate_v_grid(&grid).map_err(|e| format!("grid `{spec}`: {e}"))?;
    Ok(grid)
}

/// Smoothness bound and `u` for an empirical run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smoothness {
    pub y: f64,
    /// `log x / log y`.
    pub u: f64,
}

/// An explicit `y` wins; otherwise `y = x^{1/u}`.
pub fn resolve_smoothness(x: u64, y: Option<f64>, u: Option<f64>) -> Result<Smoothness, String> {
    if x < 2 {
        return Err("--x must be at least 2".into());
    }
    let lx = (x as f64).ln();
    let y = match (y, u) {
        (Some(y), _) => y,
        (None, Some(u)) => {
            if !(u >= 1.0) || !u.is_finite() {
                return Err(format!("--u must be at least 1 (got {u})"));
            }
            (lx / u).exp()
        }
        (None, None) => return Err("one of --y or --u is required".into()),
    };
    if !(y > 1.0) || !y.is_finite() {
        return Err(format!("--y must exceed 1 (got {y})"));
    }
    Ok(Smoothness { y, u: lx / y.ln() })
}
