use crate::error::{Error, Result};

/// Strictly increasing time grid starting at 0, in units of 1/Γ_free.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        match times.first() {
            None => return Err(Error::Domain("time grid is empty".into())),
            Some(&t0) if t0 != 0.0 => {
                return Err(Error::Domain(format!(
                    "time grid must start at 0, not {t0}"
                )))
            }
            _ => {}
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::Domain(
                "time grid contains a non-finite value".into(),
            ));
        }
        if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::Domain(format!(
                "time grid must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self { times })
    }

    /// `n_steps + 1` equally spaced points on `[0, t_max]`.
    pub fn uniform(t_max: f64, n_steps: usize) -> Result<Self> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::Domain(format!(
                "t_max = {t_max} must be finite and > 0"
            )));
        }
        if n_steps == 0 {
            return Err(Error::Domain("n_steps must be >= 1".into()));
        }
        let dt = t_max / n_steps as f64;
        let mut times: Vec<f64> = (0..=n_steps).map(|k| k as f64 * dt).collect();
        times[n_steps] = t_max;
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub name: String,
    pub values: Vec<f64>,
    /// Standard error of each value, for ensemble estimates.
    pub stderr: Option<Vec<f64>>,
}

/// Time grid plus named observables aligned to it.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub channels: Vec<Channel>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>) -> Self {
        Self {
            times,
            channels: Vec::new(),
        }
    }

    /// Appends a channel. Panics if its length differs from the grid.
    pub fn push(&mut self, name: &str, values: Vec<f64>, stderr: Option<Vec<f64>>) {
        assert_eq!(values.len(), self.times.len(), "channel {name} misaligned");
        if let Some(se) = &stderr {
            assert_eq!(se.len(), self.times.len(), "stderr of {name} misaligned");
        }
        self.channels.push(Channel {
            name: name.to_string(),
            values,
            stderr,
        });
    }

    pub fn channel(&self, name: &str) -> Option<&Channel> {
        self.channels.iter().find(|c| c.name == name)
    }

    pub fn values(&self, name: &str) -> Option<&[f64]> {
        self.channel(name).map(|c| c.values.as_slice())
    }

    pub fn stderr(&self, name: &str) -> Option<&[f64]> {
        self.channel(name).and_then(|c| c.stderr.as_deref())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}
