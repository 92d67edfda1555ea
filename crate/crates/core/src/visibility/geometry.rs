//! Circles through two samples.
//!
//! For samples `a` and `b` the family
//!
//! ```text
//! (t - ta)(t - tb) + (x - xa)(x - xb) + α[(t - ta)(xb - xa) - (x - xa)(tb - ta)] = 0
//! ```
//!
//! contains every circle through both points. Its center sits at
//! `((ta+tb)/2 - α(xb-xa)/2, (xa+xb)/2 + α(tb-ta)/2)`, on the side of the
//! chord given by `-sign(α)`. The visibility arc is the minor arc, i.e. the
//! arc on the opposite side of the chord from the center.

use crate::error::{Error, Result};

/// A sample in the (time, value) plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub t: f64,
    pub x: f64,
}

impl Point {
    pub const fn new(t: f64, x: f64) -> Self {
        Point { t, x }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordCircle {
    pub center: Point,
    pub radius: f64,
    pub a: Point,
    pub b: Point,
}

pub fn chord_circle(a: Point, b: Point, alpha: f64) -> Result<ChordCircle> {
    check_chord(a, b, alpha)?;
    let center = Point::new(
        (a.t + b.t) / 2.0 - alpha * (b.x - a.x) / 2.0,
        (a.x + b.x) / 2.0 + alpha * (b.t - a.t) / 2.0,
    );
    let radius = (a.t - center.t).hypot(a.x - center.x);
    Ok(ChordCircle {
        center,
        radius,
        a,
        b,
    })
}

/// Where the minor arc crosses the vertical line `t = t_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcCrossing {
    /// Height of the straight chord at `t_c`.
    pub chord: f64,
    /// Signed distance from the chord to the arc; its sign is `-sign(α)`.
    pub offset: f64,
    /// Discriminant of the quadratic in the offset, before clamping.
    pub discriminant: f64,
}

impl ArcCrossing {
    pub fn height(&self) -> f64 {
        self.chord + self.offset
    }
}

/// Height of the minor arc through `a` and `b` at `t_c`.
pub fn arc_height(a: Point, b: Point, alpha: f64, t_c: f64) -> Result<f64> {
    Ok(arc_crossing(a, b, alpha, t_c)?.height())
}

pub fn arc_crossing(a: Point, b: Point, alpha: f64, t_c: f64) -> Result<ArcCrossing> {
    check_chord(a, b, alpha)?;
    if !(a.t < t_c && t_c < b.t) {
        return Err(Error::invalid(format!(
            "t_c = {t_c} outside the open interval ({}, {})",
            a.t, b.t
        )));
    }
    Ok(crossing_unchecked(a, b, alpha, t_c))
}

/// Substituting `x = chord + y` into the circle equation gives
/// `y² + B·y + C = 0` with `C = -u(Δt-u)L²/Δt² < 0`, so there is always one
/// root on each side of the chord. The root on the minor arc has sign
/// `-sign(α)`; it is computed without cancellation.
#[inline]
pub(crate) fn crossing_unchecked(a: Point, b: Point, alpha: f64, t_c: f64) -> ArcCrossing {
    let dt = b.t - a.t;
    let dx = b.x - a.x;
    let u = t_c - a.t;
    let chord = a.x + dx * u / dt;
    let len2 = dt * dt + dx * dx;
    let c = -u * (dt - u) * len2 / (dt * dt);
    let bq = dx * (2.0 * u - dt) / dt - alpha * dt;
    let discriminant = bq * bq - 4.0 * c;
    let sq = discriminant.max(0.0).sqrt();
    let (lower, upper) = if bq >= 0.0 {
        let lower = (-bq - sq) / 2.0;
        (lower, c / lower)
    } else {
        let upper = (-bq + sq) / 2.0;
        (c / upper, upper)
    };
    let offset = if alpha > 0.0 { lower } else { upper };
    ArcCrossing {
        chord,
        offset,
        discriminant,
    }
}

fn check_chord(a: Point, b: Point, alpha: f64) -> Result<()> {
    if a.t.partial_cmp(&b.t) != Some(std::cmp::Ordering::Less) {
        return Err(Error::invalid(format!("chord needs t_a < t_b, got {} and {}", a.t, b.t)));
    }
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::invalid(format!("alpha must be finite and non-zero, got {alpha}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const A: Point = Point::new(0.0, 0.0);
    const B: Point = Point::new(2.0, 0.0);

    #[test]
    fn circle_fixtures() {
        let c = chord_circle(A, B, 1.0).unwrap();
        assert_eq!(c.center, Point::new(1.0, 1.0));
        assert_abs_diff_eq!(c.radius, 2f64.sqrt(), epsilon = 1e-15);
        let c = chord_circle(A, B, 10.0).unwrap();
        assert_eq!(c.center, Point::new(1.0, 10.0));
        assert_abs_diff_eq!(c.radius, 101f64.sqrt(), epsilon = 1e-13);
        assert!(chord_circle(B, A, 1.0).is_err());
        assert!(chord_circle(A, B, 0.0).is_err());
    }

    #[test]
    fn radius_grows_with_alpha() {
        let a = Point::new(0.3, -1.0);
        let b = Point::new(1.7, 2.5);
        let mut last = 0.0;
        for k in 0..20 {
            let alpha = 0.1 * 1.7f64.powi(k);
            let r = chord_circle(a, b, alpha).unwrap().radius;
            let r_neg = chord_circle(a, b, -alpha).unwrap().radius;
            assert!(r > last);
            assert_abs_diff_eq!(r, r_neg, epsilon = 1e-9 * r);
            let l = (b.t - a.t).hypot(b.x - a.x);
            assert_abs_diff_eq!(r, l / 2.0 * (1.0 + alpha * alpha).sqrt(), epsilon = 1e-9 * r);
            last = r;
        }
    }

    #[test]
    fn arc_fixtures() {
        assert_abs_diff_eq!(arc_height(A, B, 1.0, 1.0).unwrap(), 1.0 - 2f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            arc_height(A, B, 10.0, 1.0).unwrap(),
            10.0 - 101f64.sqrt(),
            epsilon = 1e-12
        );
        // mirror image for negative alpha
        assert_abs_diff_eq!(arc_height(A, B, -1.0, 1.0).unwrap(), 2f64.sqrt() - 1.0, epsilon = 1e-12);
        assert!(arc_height(A, B, 1.0, 0.0).is_err());
        assert!(arc_height(A, B, 1.0, 2.0).is_err());
    }

    #[test]
    fn endpoints_on_circle_and_arc_on_circle() {
        let a = Point::new(1.0, 0.4);
        let b = Point::new(4.0, -2.0);
        for alpha in [-7.0, -0.5, 0.2, 3.0] {
            let c = chord_circle(a, b, alpha).unwrap();
            let dist = |p: Point| (p.t - c.center.t).hypot(p.x - c.center.x);
            let s_center =
                (c.center.t - a.t) * (b.x - a.x) - (c.center.x - a.x) * (b.t - a.t);
            assert_eq!(s_center.signum(), -alpha.signum());
            assert_abs_diff_eq!(dist(b), c.radius, epsilon = 1e-9 * c.radius);
            for k in 1..10 {
                let t = 1.0 + 0.3 * k as f64;
                let x = arc_height(a, b, alpha, t).unwrap();
                assert_abs_diff_eq!(dist(Point::new(t, x)), c.radius, epsilon = 1e-9 * c.radius);
                // minor arc is on the far side of the chord from the center
                let s = |x: f64| (t - a.t) * (b.x - a.x) - (x - a.x) * (b.t - a.t);
                assert_eq!(s(x).signum(), alpha.signum());
            }
        }
    }

    #[test]
    fn huge_alpha_hugs_the_chord() {
        let a = Point::new(0.0, 0.2);
        let b = Point::new(3.0, 1.1);
        let l = (3.0f64).hypot(0.9);
        for t in [0.1, 1.0, 2.9] {
            let chord = a.x + (b.x - a.x) * t / 3.0;
            for alpha in [1e6, -1e6] {
                let x = arc_height(a, b, alpha, t).unwrap();
                assert!((x - chord).abs() < 1e-5 * l);
            }
        }
    }
}
