use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::TimeSeries;
use crate::error::{Error, Result};

/// Mean squared sample value.
pub fn signal_power(values: &[f64]) -> f64 {
    values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64
}

/// Noise variance giving `snr_db` against a signal of power `power`.
pub fn noise_variance(power: f64, snr_db: f64) -> f64 {
    power / 10f64.powf(snr_db / 10.0)
}

/// Adds white Gaussian noise at `snr_db` relative to the mean signal power.
///
/// `snr_db = +inf` means a clean signal and returns the input unchanged.
/// The noise stream is ChaCha8 seeded with `seed`.
pub fn add_awgn(series: &TimeSeries, snr_db: f64, seed: u64) -> Result<TimeSeries> {
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::invalid(format!("invalid SNR {snr_db} dB")));
    }
    if snr_db == f64::INFINITY {
        return Ok(series.clone());
    }
    let power = signal_power(series.values());
    if power <= 0.0 {
        return Err(Error::invalid("signal power is zero, SNR undefined"));
    }
    let sigma = noise_variance(power, snr_db).sqrt();
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::invalid(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noisy = series
        .values()
        .iter()
        .map(|v| v + normal.sample(&mut rng))
        .collect();
    series.map_values(noisy)
}
