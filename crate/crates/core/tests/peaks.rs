use proptest::prelude::*;

use vistra::signals::{peak_compress, peak_indices, PeakDetectParams};
use vistra::TimeSeries;

proptest! {
    #[test]
    fn global_maximum_is_kept(v in prop::collection::vec(0.0f64..10.0, 3..60), w in 1usize..5) {
        let (best, _) = v.iter().enumerate().fold((0, f64::MIN), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc });
        prop_assert!(peak_indices(&v, w).contains(&best));
    }

    #[test]
    fn compression_keeps_order_and_times(v in prop::collection::vec(0.0f64..10.0, 4..60), w in 1usize..3, dt in 0.01f64..1.0) {
        let s = TimeSeries::new(v.clone(), dt).unwrap();
        let keep = peak_indices(&v, w);
        let c = peak_compress(&s, PeakDetectParams::new(w).unwrap()).unwrap();
        prop_assert_eq!(c.len(), keep.len());
        prop_assert!(keep.windows(2).all(|p| p[0] < p[1]));
        for (j, &i) in keep.iter().enumerate() {
            prop_assert_eq!(c.values()[j], v[i]);
            prop_assert_eq!(c.time(j), s.time(i));
        }
    }
}

#[test]
fn wider_windows_keep_fewer_on_a_ramp_with_bumps() {
    let v: Vec<f64> = (0..50).map(|i| i as f64 + if i % 5 == 0 { 3.0 } else { 0.0 }).collect();
    let narrow = peak_indices(&v, 1).len();
    let wide = peak_indices(&v, 4).len();
    assert!(wide <= narrow);
}
