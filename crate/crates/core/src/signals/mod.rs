//! Uniformly sampled signals and the generators, noise model and
//! preprocessing steps that act on them.

mod channels;
mod generators;
mod noise;
mod peaks;

pub use channels::{derive_channels, segment};
pub use generators::{
    gen_sinusoid, gen_sinusoid_at, integrate, integrate_lorenz, integrate_rossler, lorenz_rhs,
    rossler_rhs, SignalKind, State,
};
pub use noise::{add_awgn, noise_variance, signal_power};
pub use peaks::{peak_compress, peak_indices, PeakDetectParams};

use indexmap::IndexMap;

use crate::error::{Error, Result};

/// One channel of samples.
///
/// Timestamps are implicit (`t0 + i * dt`) for raw series. Series produced by
/// peak compression carry explicit timestamps of the retained samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    dt: f64,
    t0: f64,
    times: Option<Vec<f64>>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, dt: f64) -> Result<Self> {
        Self::with_t0(values, dt, 0.0)
    }

    pub fn with_t0(values: Vec<f64>, dt: f64, t0: f64) -> Result<Self> {
        check_values(&values)?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid(format!("sampling interval must be > 0, got {dt}")));
        }
        if !t0.is_finite() {
            return Err(Error::invalid("start time must be finite"));
        }
        Ok(TimeSeries {
            values,
            dt,
            t0,
            times: None,
        })
    }

    /// Series with explicit, strictly increasing timestamps. `dt` is kept as
    /// the interval of the grid the samples were taken from.
    pub fn with_times(values: Vec<f64>, times: Vec<f64>, dt: f64) -> Result<Self> {
        check_values(&values)?;
        if times.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} timestamps for {} samples",
                times.len(),
                values.len()
            )));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("timestamps must be finite"));
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!(
                "timestamps not strictly increasing at index {}",
                i + 1
            )));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid(format!("sampling interval must be > 0, got {dt}")));
        }
        Ok(TimeSeries {
            t0: times[0],
            values,
            dt,
            times: Some(times),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn explicit_times(&self) -> Option<&[f64]> {
        self.times.as_deref()
    }

    #[inline]
    pub fn time(&self, i: usize) -> f64 {
        match &self.times {
            Some(t) => t[i],
            None => self.t0 + i as f64 * self.dt,
        }
    }

    /// All timestamps, materialized.
    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    /// Same samples with every timestamp moved by `shift`.
    pub fn shifted(&self, shift: f64) -> Result<Self> {
        match &self.times {
            Some(t) => Self::with_times(
                self.values.clone(),
                t.iter().map(|x| x + shift).collect(),
                self.dt,
            ),
            None => Self::with_t0(self.values.clone(), self.dt, self.t0 + shift),
        }
    }

    pub(crate) fn map_values(&self, values: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(values.len(), self.len());
        check_values(&values)?;
        Ok(TimeSeries {
            values,
            dt: self.dt,
            t0: self.t0,
            times: self.times.clone(),
        })
    }
}

fn check_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::invalid("series must contain at least one sample"));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite sample at index {i}")));
    }
    Ok(())
}

/// A labeled set of channels (I, Q, A, W, ...).
#[derive(Debug, Clone, PartialEq)]
pub struct MultiChannelSignal {
    pub id: String,
    pub label: String,
    pub snr_db: Option<f64>,
    pub channels: IndexMap<String, TimeSeries>,
}

impl MultiChannelSignal {
    pub fn new(
        id: impl Into<String>,
        label: impl Into<String>,
        snr_db: Option<f64>,
        channels: IndexMap<String, TimeSeries>,
    ) -> Result<Self> {
        let signal = MultiChannelSignal {
            id: id.into(),
            label: label.into(),
            snr_db,
            channels,
        };
        signal.validate()?;
        Ok(signal)
    }

    /// Raw channels must share length and interval. Compressed channels
    /// (explicit timestamps) only need to share the interval.
    pub fn validate(&self) -> Result<()> {
        let mut iter = self.channels.iter();
        let Some((_, first)) = iter.next() else {
            return Err(Error::invalid("signal has no channels"));
        };
        let raw = self.channels.values().all(|c| c.explicit_times().is_none());
        for (name, ch) in iter {
            if ch.dt() != first.dt() {
                return Err(Error::invalid(format!(
                    "channel {name}: interval {} differs from {}",
                    ch.dt(),
                    first.dt()
                )));
            }
            if raw && ch.len() != first.len() {
                return Err(Error::invalid(format!(
                    "channel {name}: length {} differs from {}",
                    ch.len(),
                    first.len()
                )));
            }
        }
        if let Some(snr) = self.snr_db {
            if snr.is_nan() {
                return Err(Error::invalid("snr_db is NaN"));
            }
        }
        Ok(())
    }

    pub fn channel(&self, name: &str) -> Result<&TimeSeries> {
        self.channels
            .get(name)
            .ok_or_else(|| Error::invalid(format!("signal {} has no channel {name}", self.id)))
    }

    /// Adds the amplitude `A` and phase `W` channels from `I` and `Q` when
    /// they are not already present.
    pub fn with_amplitude_phase(mut self) -> Result<Self> {
        if self.channels.contains_key("A") && self.channels.contains_key("W") {
            return Ok(self);
        }
        let (a, w) = derive_channels(self.channel("I")?, self.channel("Q")?)?;
        self.channels.entry("A".into()).or_insert(a);
        self.channels.entry("W".into()).or_insert(w);
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_series() {
        assert!(TimeSeries::new(vec![], 1.0).is_err());
        assert!(TimeSeries::new(vec![1.0, f64::NAN], 1.0).is_err());
        assert!(TimeSeries::new(vec![1.0], 0.0).is_err());
        assert!(TimeSeries::new(vec![1.0], -0.1).is_err());
        assert!(TimeSeries::with_times(vec![1.0, 2.0], vec![0.0, 0.0], 1.0).is_err());
        assert!(TimeSeries::with_times(vec![1.0, 2.0], vec![0.0], 1.0).is_err());
    }

    #[test]
    fn implicit_times() {
        let s = TimeSeries::with_t0(vec![0.0; 4], 0.5, 2.0).unwrap();
        assert_eq!(s.times(), vec![2.0, 2.5, 3.0, 3.5]);
    }

    #[test]
    fn channel_lengths_must_match() {
        let mut ch = IndexMap::new();
        ch.insert("I".to_string(), TimeSeries::new(vec![1.0, 2.0], 1.0).unwrap());
        ch.insert("Q".to_string(), TimeSeries::new(vec![1.0], 1.0).unwrap());
        assert!(MultiChannelSignal::new("0", "x", None, ch).is_err());
    }

    #[test]
    fn amplitude_phase_appended_in_order() {
        let mut ch = IndexMap::new();
        ch.insert("I".to_string(), TimeSeries::new(vec![3.0, 1.0], 1.0).unwrap());
        ch.insert("Q".to_string(), TimeSeries::new(vec![4.0, 0.0], 1.0).unwrap());
        let s = MultiChannelSignal::new("0", "x", None, ch)
            .unwrap()
            .with_amplitude_phase()
            .unwrap();
        let names: Vec<_> = s.channels.keys().cloned().collect();
        assert_eq!(names, ["I", "Q", "A", "W"]);
        assert_eq!(s.channel("A").unwrap().values(), &[5.0, 1.0]);
    }
}
