//! Inclusive linear grids written as `start:stop:count`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use anyhow::{bail, ensure, Context};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> anyhow::Result<Self> {
        ensure!(count >= 1, "grid count must be at least 1");
        ensure!(start.is_finite() && stop.is_finite(), "grid bounds must be finite");
        Ok(Self { start, stop, count })
    }

    pub fn single(x: f64) -> Self {
        Self { start: x, stop: x, count: 1 }
    }

    /// Evenly spaced points; both ends included, a single point sits at `start`.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / last
                }
            })
            .collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

impl FromStr for Grid {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("grid `{s}` must look like start:stop:count");
        }
        let count = parts[2].trim().parse().with_context(|| format!("grid count in `{s}`"))?;
        Grid::new(parse_value(parts[0])?, parse_value(parts[1])?, count)
    }
}

/// Parses a number, also accepting multiples and fractions of `pi`
/// (`pi`, `pi/2`, `3pi/4`, `2*pi`, `-pi`).
pub fn parse_value(s: &str) -> anyhow::Result<f64> {
    let t = s.trim().to_ascii_lowercase();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let Some(pos) = t.find("pi") else {
        bail!("cannot parse `{s}` as a number");
    };
    let coeff = t[..pos].trim_end_matches('*').trim();
    let rest = t[pos + 2..].trim();
    let k = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().with_context(|| format!("coefficient in `{s}`"))?,
    };
    let div = if rest.is_empty() {
        1.0
    } else {
        let d = rest.strip_prefix('/').with_context(|| format!("unexpected `{rest}` in `{s}`"))?;
        d.trim().parse::<f64>().with_context(|| format!("divisor in `{s}`"))?
    };
    Ok(k * PI / div)
}
