//! FFT-based calculus on the periodic domain [0, 2π).
//!
//! Grids are uniform, `x_n = 2πn/N`, so Fourier wavenumbers are integers.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Forward/inverse FFT pair for one grid size.
#[derive(Clone)]
pub struct Spectral {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("n", &self.n).finish()
    }
}

impl Spectral {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Unnormalized forward transform.
    pub fn forward(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse transform including the 1/N factor.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut buf = coeffs.to_vec();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|z| *z *= scale);
        buf
    }

    /// Multiply every mode by `symbol(k)` and transform back.
    pub fn apply_symbol<F>(&self, values: &[Complex64], symbol: F) -> Vec<Complex64>
    where
        F: Fn(i64) -> Complex64,
    {
        let mut coeffs = self.forward(values);
        for (idx, c) in coeffs.iter_mut().enumerate() {
            *c *= symbol(wavenumber(idx, self.n));
        }
        self.inverse(&coeffs)
    }

    pub fn derivative_complex(&self, values: &[Complex64]) -> Vec<Complex64> {
        let nyquist = (self.n / 2) as i64;
        self.apply_symbol(values, |k| {
            if self.n % 2 == 0 && k == -nyquist {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, k as f64)
            }
        })
    }

    pub fn second_derivative_complex(&self, values: &[Complex64]) -> Vec<Complex64> {
        self.apply_symbol(values, |k| Complex64::new(-((k * k) as f64), 0.0))
    }

    pub fn derivative(&self, values: &[f64]) -> Vec<f64> {
        let z: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.derivative_complex(&z).into_iter().map(|c| c.re).collect()
    }

    pub fn second_derivative(&self, values: &[f64]) -> Vec<f64> {
        let z: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.second_derivative_complex(&z)
            .into_iter()
            .map(|c| c.re)
            .collect()
    }

    /// Derivative of a phase field given modulo 2π. The phase is unwrapped
    /// from site 0, its integer winding removed, and the periodic remainder
    /// differentiated spectrally.
    pub fn phase_derivative(&self, wrapped: &[f64]) -> Vec<f64> {
        let unwrapped = unwrap_phase(wrapped);
        let winding = winding_number(&unwrapped);
        let periodic: Vec<f64> = unwrapped
            .iter()
            .enumerate()
            .map(|(i, &p)| p - winding * grid_point(i, self.n))
            .collect();
        self.derivative(&periodic)
            .into_iter()
            .map(|d| d + winding)
            .collect()
    }

    /// Fraction of spectral energy carried by the top third of |k|.
    pub fn high_band_fraction(&self, values: &[Complex64]) -> f64 {
        let coeffs = self.forward(values);
        let cutoff = (self.n as f64 / 2.0) * (2.0 / 3.0);
        let mut total = 0.0;
        let mut high = 0.0;
        for (idx, c) in coeffs.iter().enumerate() {
            let e = c.norm_sqr();
            total += e;
            if (wavenumber(idx, self.n).unsigned_abs() as f64) > cutoff {
                high += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            high / total
        }
    }
}

/// Signed wavenumber of FFT bin `idx` on an `n`-point grid of period 2π.
pub fn wavenumber(idx: usize, n: usize) -> i64 {
    if idx < n.div_ceil(2) {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

pub fn grid_point(idx: usize, n: usize) -> f64 {
    TAU * idx as f64 / n as f64
}

pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| grid_point(i, n)).collect()
}

/// Reduce an angle to (−π, π].
pub fn principal(angle: f64) -> f64 {
    let mut a = angle % TAU;
    if a <= -PI {
        a += TAU;
    } else if a > PI {
        a -= TAU;
    }
    a
}

/// Cumulative 2π-jump removal along the array, seeded at index 0.
pub fn unwrap_phase(wrapped: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(wrapped.len());
    let mut offset = 0.0;
    for (i, &p) in wrapped.iter().enumerate() {
        if i > 0 {
            let prev = wrapped[i - 1];
            offset += principal(p - prev) - (p - prev);
        }
        out.push(p + offset);
    }
    out
}

/// Net number of 2π turns of an unwrapped periodic phase around the ring.
pub fn winding_number(unwrapped: &[f64]) -> f64 {
    match (unwrapped.first(), unwrapped.last()) {
        (Some(&first), Some(&last)) => {
            let closing = principal(first - last);
            ((last + closing - first) / TAU).round()
        }
        _ => 0.0,
    }
}

/// Largest jump between neighbours after unwrapping; values near π signal an
/// under-resolved phase.
pub fn max_phase_step(wrapped: &[f64]) -> f64 {
    let n = wrapped.len();
    (0..n)
        .map(|i| principal(wrapped[(i + 1) % n] - wrapped[i]).abs())
        .fold(0.0, f64::max)
}

/// Band-limited trigonometric interpolant of periodic samples.
#[derive(Debug, Clone)]
pub struct PeriodicInterpolant {
    /// Coefficients of `e^{ikx}` for `k = −k_max..=k_max`.
    coeffs: Vec<Complex64>,
    k_max: i64,
}

impl PeriodicInterpolant {
    pub fn from_samples(samples: &[Complex64]) -> Self {
        let n = samples.len();
        let raw = Spectral::new(n).forward(samples);
        let scale = 1.0 / n as f64;
        // the Nyquist mode of an even grid is dropped
        let k_max = ((n - 1) / 2) as i64;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (2 * k_max + 1) as usize];
        for (idx, &c) in raw.iter().enumerate() {
            let k = wavenumber(idx, n);
            if k.abs() <= k_max {
                coeffs[(k + k_max) as usize] = c * scale;
            }
        }
        Self { coeffs, k_max }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let step = Complex64::from_polar(1.0, x);
        let mut phase = Complex64::from_polar(1.0, -(self.k_max as f64) * x);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            acc += c * phase;
            // re-anchor periodically to keep the recurrence from drifting
            phase = if j % 64 == 63 {
                Complex64::from_polar(1.0, (j as i64 + 1 - self.k_max) as f64 * x)
            } else {
                phase * step
            };
        }
        acc
    }
}
