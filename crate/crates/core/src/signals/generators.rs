//! Periodic and chaotic test signals.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::TimeSeries;
use crate::error::{Error, Result};

/// State of a three-dimensional flow.
pub type State = [f64; 3];

/// `x = sin(5πt)` sampled at `t = i * dt`.
pub fn gen_sinusoid(n: usize, dt: f64) -> Result<TimeSeries> {
    gen_sinusoid_at(n, dt, 0.0)
}

/// `x = sin(5πt)` sampled at `t = t0 + i * dt`. A non-zero `t0` acts as a
/// phase offset.
pub fn gen_sinusoid_at(n: usize, dt: f64, t0: f64) -> Result<TimeSeries> {
    check_grid(n, dt)?;
    let values = (0..n)
        .map(|i| (5.0 * PI * (t0 + i as f64 * dt)).sin())
        .collect();
    TimeSeries::with_t0(values, dt, t0)
}

pub fn lorenz_rhs(s: State) -> State {
    let [x, y, z] = s;
    [-10.0 * (x - y), -y + 28.0 * x - x * z, x * y - 8.0 / 3.0 * z]
}

pub fn rossler_rhs(s: State) -> State {
    let [x, y, z] = s;
    [-y - z, x + 0.2 * y, 0.2 + z * (x - 5.7)]
}

/// x-component of the Lorenz flow, one sample per RK4 step of size `dt`.
pub fn integrate_lorenz(n: usize, dt: f64, init: State) -> Result<TimeSeries> {
    integrate(lorenz_rhs, n, dt, init)
}

/// x-component of the Rössler flow, one sample per RK4 step of size `dt`.
pub fn integrate_rossler(n: usize, dt: f64, init: State) -> Result<TimeSeries> {
    integrate(rossler_rhs, n, dt, init)
}

/// Fixed-step classical Runge-Kutta. Sample `i` is the x-component after
/// `i` steps, so sample 0 is `init[0]`.
pub fn integrate<F>(rhs: F, n: usize, dt: f64, init: State) -> Result<TimeSeries>
where
    F: Fn(State) -> State,
{
    check_grid(n, dt)?;
    if init.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericOverflow { step: 0 });
    }
    let mut state = init;
    let mut values = Vec::with_capacity(n);
    values.push(state[0]);
    for step in 1..n {
        state = rk4_step(&rhs, state, dt);
        if state.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericOverflow { step });
        }
        values.push(state[0]);
    }
    TimeSeries::new(values, dt)
}

fn rk4_step<F: Fn(State) -> State>(rhs: &F, s: State, h: f64) -> State {
    let axpy = |a: State, k: State, c: f64| [a[0] + c * k[0], a[1] + c * k[1], a[2] + c * k[2]];
    let k1 = rhs(s);
    let k2 = rhs(axpy(s, k1, h / 2.0));
    let k3 = rhs(axpy(s, k2, h / 2.0));
    let k4 = rhs(axpy(s, k3, h));
    let mut out = s;
    for i in 0..3 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn check_grid(n: usize, dt: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("sample count must be >= 1"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid(format!("sampling interval must be > 0, got {dt}")));
    }
    Ok(())
}

/// The three artificial signal families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignalKind {
    Sin,
    Lorenz,
    Rossler,
}

impl SignalKind {
    pub const ALL: [SignalKind; 3] = [SignalKind::Sin, SignalKind::Lorenz, SignalKind::Rossler];

    pub fn default_dt(self) -> f64 {
        match self {
            SignalKind::Sin | SignalKind::Lorenz => 0.01,
            SignalKind::Rossler => 0.1,
        }
    }

    /// Sinusoid: `[t0, _, _]`; flows: initial state.
    pub fn default_init(self) -> State {
        match self {
            SignalKind::Sin => [0.0, 0.0, 0.0],
            SignalKind::Lorenz => [2.0, 2.0, 20.0],
            SignalKind::Rossler => [-1.0, 0.0, 1.0],
        }
    }

    /// Random starting point. For the sinusoid only the first entry is used,
    /// as a start time within one period (0.4 s).
    pub fn random_init<R: Rng + ?Sized>(self, rng: &mut R) -> State {
        match self {
            SignalKind::Sin => [rng.random_range(0.0..0.4), 0.0, 0.0],
            SignalKind::Lorenz => [
                rng.random_range(-15.0..15.0),
                rng.random_range(-15.0..15.0),
                rng.random_range(5.0..40.0),
            ],
            SignalKind::Rossler => [
                rng.random_range(-8.0..8.0),
                rng.random_range(-8.0..8.0),
                rng.random_range(0.0..2.0),
            ],
        }
    }

    pub fn generate(self, n: usize, dt: f64, init: State) -> Result<TimeSeries> {
        match self {
            SignalKind::Sin => gen_sinusoid_at(n, dt, init[0]),
            SignalKind::Lorenz => integrate_lorenz(n, dt, init),
            SignalKind::Rossler => integrate_rossler(n, dt, init),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SignalKind::Sin => "sin",
            SignalKind::Lorenz => "lorenz",
            SignalKind::Rossler => "rossler",
        }
    }
}

impl fmt::Display for SignalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SignalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sin" | "sinusoid" => Ok(SignalKind::Sin),
            "lorenz" => Ok(SignalKind::Lorenz),
            "rossler" | "rössler" => Ok(SignalKind::Rossler),
            other => Err(Error::invalid(format!("unknown signal kind `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sinusoid_samples() {
        assert_eq!(gen_sinusoid(1, 0.01).unwrap().values(), &[0.0]);
        assert_abs_diff_eq!(gen_sinusoid(2, 0.1).unwrap().values()[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            gen_sinusoid(2, 0.01).unwrap().values()[1],
            0.156_434_465_040_230_87,
            epsilon = 1e-12
        );
        assert!(gen_sinusoid(0, 0.01).is_err());
        assert!(gen_sinusoid(3, 0.0).is_err());
    }

    #[test]
    fn lorenz_derivative() {
        let d = lorenz_rhs([2.0, 2.0, 20.0]);
        assert_eq!(d[0], 0.0);
        assert_eq!(d[1], 14.0);
        assert_abs_diff_eq!(d[2], -49.333_333_333_333_336, epsilon = 1e-12);
        assert_eq!(lorenz_rhs([0.0; 3]), [0.0; 3]);
    }

    #[test]
    fn rossler_derivative() {
        let d = rossler_rhs([-1.0, 0.0, 1.0]);
        assert_eq!(d[0], -1.0);
        assert_eq!(d[1], -1.0);
        assert_abs_diff_eq!(d[2], -6.5, epsilon = 1e-12);
        assert_eq!(rossler_rhs([0.0; 3]), [0.0, 0.0, 0.2]);
    }

    #[test]
    fn initial_sample_is_init() {
        assert_eq!(integrate_lorenz(1, 0.01, [2.0, 2.0, 20.0]).unwrap().values(), &[2.0]);
        assert_eq!(integrate_rossler(1, 0.1, [-1.0, 0.0, 1.0]).unwrap().values(), &[-1.0]);
    }

    #[test]
    fn lorenz_equilibrium_stays_put() {
        let s = integrate_lorenz(50, 0.01, [0.0; 3]).unwrap();
        assert!(s.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn trajectories_finite_and_deterministic() {
        let a = integrate_lorenz(1000, 0.01, [2.0, 2.0, 20.0]).unwrap();
        let b = integrate_lorenz(1000, 0.01, [2.0, 2.0, 20.0]).unwrap();
        assert_eq!(a, b);
        let r = integrate_rossler(1000, 0.1, [-1.0, 0.0, 1.0]).unwrap();
        assert!(r.values().iter().all(|v| v.abs() < 50.0));
    }

    #[test]
    fn blow_up_reports_step() {
        let err = integrate(|s| [s[0] * s[0], 0.0, 0.0], 100, 1.0, [10.0, 0.0, 0.0]).unwrap_err();
        match err {
            Error::NumericOverflow { step } => assert!((1..100).contains(&step)),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn rk4_matches_exponential() {
        // dx/dt = -x, exact solution e^{-t}
        let s = integrate(|s| [-s[0], 0.0, 0.0], 101, 0.01, [1.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(s.values()[100], (-1.0f64).exp(), epsilon = 1e-10);
    }
}
