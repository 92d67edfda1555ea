//! Synthetic datasets: labeled artificial signals and an 11-class I/Q radio
//! stand-in with the same record layout as converted RadioML data.

use std::f64::consts::{PI, TAU};

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::signals::{add_awgn, MultiChannelSignal, SignalKind, TimeSeries};

/// Sub-seed for item `i` of a stream seeded with `seed`.
pub fn sub_seed(seed: u64, i: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `per_kind` signals of each kind with random starting points, cycling
/// through `snrs` (`f64::INFINITY` for clean). Channel name is `x`; clean
/// signals carry `snr_db = None`.
pub fn artificial_dataset(
    kinds: &[SignalKind],
    per_kind: usize,
    n: usize,
    snrs: &[f64],
    seed: u64,
) -> Result<Vec<MultiChannelSignal>> {
    if snrs.is_empty() {
        return Err(Error::invalid("at least one SNR level is required"));
    }
    let mut out = Vec::with_capacity(kinds.len() * per_kind);
    for &kind in kinds {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, kind as u64));
        for i in 0..per_kind {
            let init = kind.random_init(&mut rng);
            let noise_seed = rng.random();
            let snr = snrs[i % snrs.len()];
            let clean = kind.generate(n, kind.default_dt(), init)?;
            let series = add_awgn(&clean, snr, noise_seed)?;
            let mut channels = IndexMap::new();
            channels.insert("x".to_string(), series);
            out.push(MultiChannelSignal::new(
                format!("{}-{i:04}", kind.name()),
                kind.name(),
                snr.is_finite().then_some(snr),
                channels,
            )?);
        }
    }
    Ok(out)
}

/// Modulation classes of the radio stand-in.
pub const RADIO_CLASSES: [&str; 11] = [
    "8PSK", "AM-DSB", "AM-SSB", "BPSK", "CPFSK", "GFSK", "PAM4", "QAM16", "QAM64", "QPSK", "WBFM",
];

/// Samples per record in the radio stand-in.
pub const RADIO_LEN: usize = 128;

const SPS: usize = 8;

fn symbols<R: Rng>(rng: &mut R, m: usize) -> Vec<usize> {
    (0..RADIO_LEN.div_ceil(SPS)).map(|_| rng.random_range(0..m)).collect()
}

fn hold(sym: &[f64]) -> Vec<f64> {
    (0..RADIO_LEN).map(|t| sym[t / SPS]).collect()
}

fn qam_levels(m: usize) -> Vec<f64> {
    (0..m).map(|k| 2.0 * k as f64 - (m as f64 - 1.0)).collect()
}

fn message<R: Rng>(rng: &mut R) -> Vec<f64> {
    let tones: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| (rng.random_range(0.005..0.03), rng.random_range(0.3..1.0), rng.random_range(0.0..TAU)))
        .collect();
    (0..RADIO_LEN)
        .map(|t| tones.iter().map(|(f, a, p)| a * (TAU * f * t as f64 + p).sin()).sum::<f64>() / 2.0)
        .collect()
}

/// Clean baseband (I, Q) for one class.
fn baseband<R: Rng>(class: &str, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let psk = |rng: &mut R, m: usize, offset: f64| {
        let s = symbols(rng, m);
        let phase: Vec<f64> = s.iter().map(|&k| offset + TAU * k as f64 / m as f64).collect();
        let p = hold(&phase);
        (p.iter().map(|x| x.cos()).collect(), p.iter().map(|x| x.sin()).collect())
    };
    let qam = |rng: &mut R, side: usize| {
        let lv = qam_levels(side);
        let si: Vec<f64> = symbols(rng, side).iter().map(|&k| lv[k]).collect();
        let sq: Vec<f64> = symbols(rng, side).iter().map(|&k| lv[k]).collect();
        (hold(&si), hold(&sq))
    };
    let fsk = |rng: &mut R, dev: f64| {
        let s = symbols(rng, 2);
        let mut phase = 0.0;
        let mut i = Vec::with_capacity(RADIO_LEN);
        let mut q = Vec::with_capacity(RADIO_LEN);
        for t in 0..RADIO_LEN {
            i.push(f64::cos(phase));
            q.push(f64::sin(phase));
            phase += if s[t / SPS] == 1 { dev } else { -dev };
        }
        (i, q)
    };
    match class {
        "BPSK" => psk(rng, 2, 0.0),
        "QPSK" => psk(rng, 4, PI / 4.0),
        "8PSK" => psk(rng, 8, 0.0),
        "QAM16" => qam(rng, 4),
        "QAM64" => qam(rng, 8),
        "PAM4" => {
            let lv = qam_levels(4);
            let s: Vec<f64> = symbols(rng, 4).iter().map(|&k| lv[k]).collect();
            (hold(&s), vec![0.0; RADIO_LEN])
        }
        "GFSK" => fsk(rng, TAU * 0.125),
        "CPFSK" => fsk(rng, TAU * 0.0625),
        "WBFM" => {
            let m = message(rng);
            let mut phase = 0.0;
            let mut i = Vec::with_capacity(RADIO_LEN);
            let mut q = Vec::with_capacity(RADIO_LEN);
            for v in m {
                phase += 1.5 * v;
                i.push(f64::cos(phase));
                q.push(f64::sin(phase));
            }
            (i, q)
        }
        "AM-DSB" => {
            let m = message(rng);
            (m.iter().map(|v| 1.0 + 0.8 * v).collect(), vec![0.0; RADIO_LEN])
        }
        "AM-SSB" => {
            // upper sideband of a tone mixture: cos and sin of each tone
            let tones: Vec<(f64, f64, f64)> = (0..3)
                .map(|_| (rng.random_range(0.005..0.03), rng.random_range(0.3..1.0), rng.random_range(0.0..TAU)))
                .collect();
            let at = |t: usize, f: fn(f64) -> f64| {
                tones.iter().map(|(fr, a, p)| a * f(TAU * fr * t as f64 + p)).sum::<f64>()
            };
            ((0..RADIO_LEN).map(|t| at(t, f64::cos)).collect(), (0..RADIO_LEN).map(|t| at(t, f64::sin)).collect())
        }
        other => unreachable!("unknown class {other}"),
    }
}

/// One stand-in record: random carrier phase and small frequency offset,
/// unit average power, complex white Gaussian noise at `snr_db`.
pub fn radio_signal(class: &str, snr_db: f64, seed: u64, id: String) -> Result<MultiChannelSignal> {
    if !RADIO_CLASSES.contains(&class) {
        return Err(Error::invalid(format!("unknown modulation `{class}`")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (bi, bq) = baseband(class, &mut rng);
    let phi = rng.random_range(0.0..TAU);
    let df = rng.random_range(-0.002..0.002);
    let (mut i, mut q): (Vec<f64>, Vec<f64>) = bi
        .iter()
        .zip(&bq)
        .enumerate()
        .map(|(t, (&a, &b))| {
            let r = phi + TAU * df * t as f64;
            (a * r.cos() - b * r.sin(), a * r.sin() + b * r.cos())
        })
        .unzip();
    let power = i.iter().zip(&q).map(|(a, b)| a * a + b * b).sum::<f64>() / RADIO_LEN as f64;
    let scale = 1.0 / power.sqrt();
    let sigma = (0.5 / 10f64.powf(snr_db / 10.0)).sqrt();
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::invalid(e.to_string()))?;
    for v in i.iter_mut().chain(q.iter_mut()) {
        *v = *v * scale + normal.sample(&mut rng);
    }
    let mut channels = IndexMap::new();
    channels.insert("I".to_string(), TimeSeries::new(i, 1.0)?);
    channels.insert("Q".to_string(), TimeSeries::new(q, 1.0)?);
    MultiChannelSignal::new(id, class, Some(snr_db), channels)
}

/// `per_cell` records for every (class, SNR) pair.
pub fn radio_dataset(per_cell: usize, snrs: &[f64], seed: u64) -> Result<Vec<MultiChannelSignal>> {
    let mut out = Vec::with_capacity(RADIO_CLASSES.len() * snrs.len() * per_cell);
    let mut k = 0u64;
    for class in RADIO_CLASSES {
        for &snr in snrs {
            for _ in 0..per_cell {
                out.push(radio_signal(class, snr, sub_seed(seed, k), format!("{k:06}"))?);
                k += 1;
            }
        }
    }
    Ok(out)
}

/// Even SNR grid from -20 dB to 18 dB.
pub fn radio_snr_grid() -> Vec<f64> {
    (-10..=9).map(|k| 2.0 * k as f64).collect()
}
