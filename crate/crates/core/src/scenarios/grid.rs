use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// An abscissa grid: an explicit list or `points` values from `start` to `stop`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        points: usize,
        #[serde(default)]
        log: bool,
    },
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            GridSpec::List(ref v) => v.clone(),
            GridSpec::Range { start, stop, points, log } => match points {
                0 => vec![],
                1 => vec![start],
                _ => (0..points)
                    .map(|i| {
                        let f = i as f64 / (points - 1) as f64;
                        if i == points - 1 {
                            stop
                        } else if log {
                            start * (stop / start).powf(f)
                        } else {
                            start + (stop - start) * f
                        }
                    })
                    .collect(),
            },
        }
    }

    /// Values for a positive, strictly increasing physical grid.
    pub fn positive_increasing(&self, what: &str) -> Result<Vec<f64>> {
        let v = self.values();
        if v.is_empty() {
            return Err(Error::invalid(format!("{what} grid is empty")));
        }
        if !v.iter().all(|x| *x > 0.0 && x.is_finite()) {
            return Err(Error::invalid(format!("{what} grid must be positive")));
        }
        if v.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!("{what} grid must be strictly increasing")));
        }
        Ok(v)
    }
}

/// `start:stop:points[:log]`
impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::invalid(format!("sweep `{s}` is not start:stop:points[:log]"));
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad());
        let log = match parts.get(3) {
            None => false,
            Some(&"log") => true,
            Some(&"lin") => false,
            Some(_) => return Err(bad()),
        };
        Ok(GridSpec::Range {
            start: num(parts[0])?,
            stop: num(parts[1])?,
            points: parts[2].trim().parse().map_err(|_| bad())?,
            log,
        })
    }
}
