use super::TimeSeries;
use crate::error::{Error, Result};

/// Amplitude `sqrt(I² + Q²)` and phase `atan2(Q, I)` channels. The phase of
/// a zero sample (either sign of zero) is 0.
pub fn derive_channels(i: &TimeSeries, q: &TimeSeries) -> Result<(TimeSeries, TimeSeries)> {
    if i.len() != q.len() {
        return Err(Error::invalid(format!(
            "I has {} samples, Q has {}",
            i.len(),
            q.len()
        )));
    }
    if i.dt() != q.dt() {
        return Err(Error::invalid("I and Q sampling intervals differ"));
    }
    let (amp, phase): (Vec<f64>, Vec<f64>) = i
        .values()
        .iter()
        .zip(q.values())
        .map(|(&x, &y)| {
            let w = if x == 0.0 && y == 0.0 { 0.0 } else { y.atan2(x) };
            (x.hypot(y), w)
        })
        .unzip();
    Ok((i.map_values(amp)?, i.map_values(phase)?))
}

/// Splits into `k` contiguous segments of equal length.
pub fn segment(series: &TimeSeries, k: usize) -> Result<Vec<TimeSeries>> {
    if k == 0 || !series.len().is_multiple_of(k) {
        return Err(Error::invalid(format!(
            "length {} is not divisible into {k} segments",
            series.len()
        )));
    }
    let len = series.len() / k;
    (0..k)
        .map(|s| {
            let range = s * len..(s + 1) * len;
            let values = series.values()[range.clone()].to_vec();
            match series.explicit_times() {
                Some(t) => TimeSeries::with_times(values, t[range].to_vec(), series.dt()),
                None => TimeSeries::with_t0(values, series.dt(), series.time(range.start)),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec(), 1.0).unwrap()
    }

    #[test]
    fn amplitude_and_phase() {
        let (a, w) = derive_channels(&ts(&[3.0, 1.0, 0.0, -0.0]), &ts(&[4.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(a.values(), &[5.0, 1.0, 0.0, 0.0]);
        assert_abs_diff_eq!(w.values()[0], 0.927_295_218_001_612_2, epsilon = 1e-12);
        assert_eq!(&w.values()[1..], &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn length_mismatch() {
        assert!(derive_channels(&ts(&[1.0]), &ts(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn segments() {
        let s = ts(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let parts = segment(&s, 3).unwrap();
        assert_eq!(parts[1].values(), &[3.0, 4.0]);
        assert_eq!(parts[2].t0(), 4.0);
        assert_eq!(segment(&s, 1).unwrap()[0], s);
        assert!(segment(&s, 4).is_err());
        let long = TimeSeries::new(vec![0.5; 4096], 1.0).unwrap();
        assert!(segment(&long, 4).unwrap().iter().all(|p| p.len() == 1024));
    }

    proptest! {
        #[test]
        fn amplitude_identity(pairs in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..64)) {
            let (iv, qv): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let (a, _) = derive_channels(&ts(&iv), &ts(&qv)).unwrap();
            for ((&x, &y), &r) in iv.iter().zip(&qv).zip(a.values()) {
                prop_assert!(r >= 0.0);
                let lhs = r * r;
                let rhs = x * x + y * y;
                prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
            }
        }

        #[test]
        fn segments_concatenate(len in 1usize..20, k in 1usize..5) {
            let values: Vec<f64> = (0..len * k).map(|i| i as f64 * 0.25).collect();
            let s = ts(&values);
            let joined: Vec<f64> = segment(&s, k).unwrap().iter().flat_map(|p| p.values().to_vec()).collect();
            prop_assert_eq!(joined, values);
        }
    }
}
