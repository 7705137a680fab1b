//! Reference solutions of the free Schrödinger equation
//! `i∂_tψ = −(1/2m)∂_xxψ` on the periodic domain.
//!
//! Three independent routes: exact Fourier propagation, direct quadrature of
//! the Green-function integral, and the Jacobi–Anger Bessel series for the
//! datum `e^{im cos x}`.

mod bessel;

pub use bessel::bessel_j_sequence;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::parallel::map_range;
use crate::quad::integrate;
use crate::spectral::{grid, grid_point, PeriodicInterpolant, Spectral};

#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    pub values: Vec<Complex64>,
    pub time: f64,
}

impl Wavefunction {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(2π/N)·Σ|ψ|²`.
    pub fn norm_sqr(&self) -> f64 {
        TAU / self.len() as f64 * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// Multiply mode `k` by `e^{−ik²t/(2m)}`.
pub fn spectral_propagate(psi: &Wavefunction, mass: f64, t: f64) -> Wavefunction {
    let spectral = Spectral::new(psi.len());
    let values = spectral.apply_symbol(&psi.values, |k| {
        Complex64::from_polar(1.0, -((k * k) as f64) * t / (2.0 * mass))
    });
    Wavefunction {
        values,
        time: psi.time + t,
    }
}

/// Half-width of the Green-function window: `v_max·t` (the outermost
/// stationary point for speeds up to `v_max`) plus eight Fresnel zones.
pub fn default_window(mass: f64, t: f64, v_max: f64) -> f64 {
    v_max * t + 8.0 * (TAU * t / mass).sqrt()
}

/// Smooth cutoff: `½·erfc((s − 3/4)/0.04)`, equal to 1 for `s ≤ 1/2` and 0
/// for `s ≥ 1` to below 1e-17. Its Fourier transform decays like a Gaussian,
/// so truncating the chirped integrand leaks far less than a compact bump.
fn taper(s: f64) -> f64 {
    if s <= 0.5 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        0.5 * libm::erfc((s - 0.75) / 0.04)
    }
}

fn greens_window(
    psi0: &PeriodicInterpolant,
    mass: f64,
    t: f64,
    x: f64,
    window: f64,
    tol: f64,
) -> Result<Complex64> {
    let pref = (Complex64::new(0.0, TAU * t / mass)).sqrt().inv();
    let zone = (TAU * t / mass).sqrt();
    let panels = ((2.0 * window / zone).ceil() as usize).clamp(4, 4096) * 4;
    let integrand = |y: f64| {
        let d = y - x;
        let w = taper(d.abs() / window);
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        psi0.eval(y) * Complex64::from_polar(w, mass * d * d / (2.0 * t))
    };
    let r = integrate(integrand, x - window, x + window, tol / pref.norm(), panels)?;
    Ok(pref * r.value)
}

/// `ψ(x,t) = ∫dy √(m/(2iπt))·e^{im(x−y)²/(2t)}·ψ₀(y)` at one point, by
/// adaptive quadrature of the smoothly windowed integrand over
/// `[x − window, x + window]`. The result is recomputed with a 1.5× window
/// and rejected if the two differ by more than `tol`.
pub fn greens_point(
    psi0: &PeriodicInterpolant,
    mass: f64,
    t: f64,
    x: f64,
    window: f64,
    tol: f64,
) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(invalid("t", format!("Green-function propagation needs t > 0, got {t}")));
    }
    if !(window > 0.0) {
        return Err(invalid("window", "must be positive"));
    }
    let inner = greens_window(psi0, mass, t, x, window, 0.1 * tol)?;
    let outer = greens_window(psi0, mass, t, x, 1.5 * window, 0.1 * tol)?;
    let diff = (outer - inner).norm();
    if diff > tol {
        return Err(Error::WindowTooSmall {
            estimate: diff,
            tol,
        });
    }
    Ok(outer)
}

/// Green-function propagation of periodic samples to every grid point.
pub fn greens_propagate(
    psi0: &Wavefunction,
    mass: f64,
    t: f64,
    window: f64,
    tol: f64,
) -> Result<Wavefunction> {
    let interp = PeriodicInterpolant::from_samples(&psi0.values);
    let n = psi0.len();
    let values: Vec<Result<Complex64>> = map_range(n, |i| {
        greens_point(&interp, mass, t, grid_point(i, n), window, tol)
    });
    Ok(Wavefunction {
        values: values.into_iter().collect::<Result<_>>()?,
        time: psi0.time + t,
    })
}

/// The single-shock solution grown from `ψ₀ = e^{im cos x}`:
/// `ψ(x,t) = Σ_k i^k J_k(m) e^{ikx − ik²t/(2m)}`.
#[derive(Debug, Clone)]
pub struct SingleShock {
    mass: f64,
    /// `J_k(m)` for `k = 0..=k_max`.
    coeffs: Vec<f64>,
}

impl SingleShock {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(invalid("mass", format!("must be positive and finite, got {mass}")));
        }
        let k_floor = (mass + 40.0 * mass.cbrt()).ceil() as usize;
        let mut coeffs = bessel_j_sequence(mass, k_floor + 40);
        // drop the negligible tail, but never below the safe band
        while coeffs.len() > k_floor + 1 && coeffs.last().is_some_and(|c| c.abs() < 1e-16) {
            coeffs.pop();
        }
        Ok(Self { mass, coeffs })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn k_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn bessel(&self) -> &[f64] {
        &self.coeffs
    }

    /// Fourier coefficient of `e^{ikx}` at time `t`, for `k ≥ 0`; the `−k`
    /// coefficient is equal.
    pub fn mode(&self, k: usize, t: f64) -> Complex64 {
        let ik = Complex64::new(0.0, 1.0).powu(k as u32 % 4);
        let kf = k as f64;
        ik * self.coeffs[k] * Complex64::from_polar(1.0, -kf * kf * t / (2.0 * self.mass))
    }

    pub fn eval(&self, x: f64, t: f64) -> Complex64 {
        let mut acc = self.mode(0, t);
        for k in 1..self.coeffs.len() {
            acc += self.mode(k, t) * 2.0 * (k as f64 * x).cos();
        }
        acc
    }

    /// Values at the `n`-point periodic grid.
    pub fn on_grid(&self, n: usize, t: f64) -> Wavefunction {
        let x = grid(n);
        Wavefunction {
            values: map_range(n, |i| self.eval(x[i], t)),
            time: t,
        }
    }
}

/// One-off evaluation of the single-shock solution.
pub fn single_shock_psi(x: f64, t: f64, mass: f64) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    Ok(SingleShock::new(mass)?.eval(x, t))
}

/// Density and velocity of a Schrödinger state: `n = |ψ|²`,
/// `v = Im(ψ*∂_xψ)/(m|ψ|²)`; `mask` is false where `|ψ|` is negligible.
#[derive(Debug, Clone, PartialEq)]
pub struct SchrodingerHydro {
    pub n: Vec<f64>,
    pub v: Vec<f64>,
    pub mask: Vec<bool>,
}

pub fn schrodinger_hydro(psi: &Wavefunction, mass: f64) -> SchrodingerHydro {
    let dpsi = Spectral::new(psi.len()).derivative_complex(&psi.values);
    let n = psi.density();
    let cutoff = 1e-20 * n.iter().cloned().fold(0.0, f64::max);
    let mut v = vec![f64::NAN; n.len()];
    let mut mask = vec![false; n.len()];
    for i in 0..n.len() {
        if n[i] > cutoff && n[i] > 0.0 {
            v[i] = (psi.values[i].conj() * dpsi[i]).im / (mass * n[i]);
            mask[i] = true;
        }
    }
    SchrodingerHydro { n, v, mask }
}

/// Half-width of the interference fan of `ψ₀ = e^{iq cos x}` at time `t`,
/// in units where `u = q/m`: the characteristics `x = y − ut·sin y` fold
/// where `ut·cos y = 1`. `None` before the first crossing `ut = 1`.
pub fn fan_half_width(speed_time: f64) -> Option<f64> {
    if speed_time <= 1.0 {
        return None;
    }
    let y = (1.0 / speed_time).acos();
    Some((y - speed_time * y.sin()).abs())
}

/// Number of sign changes between consecutive entries of `values` for which
/// `keep` holds.
pub fn sign_crossings(values: &[f64], keep: impl Fn(usize) -> bool) -> usize {
    let signs: Vec<f64> = (0..values.len())
        .filter(|&i| keep(i) && values[i] != 0.0 && values[i].is_finite())
        .map(|i| values[i].signum())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Relative discrete L² distance `‖a − b‖ / ‖b‖`.
pub fn relative_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

/// `√(m/(2iπt))` on the principal branch.
pub fn kernel_prefactor(mass: f64, t: f64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI * t / mass)).sqrt().inv()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cos_datum(n: usize, m: f64) -> Wavefunction {
        Wavefunction {
            values: grid(n)
                .iter()
                .map(|&x| Complex64::from_polar(1.0, m * x.cos()))
                .collect(),
            time: 0.0,
        }
    }

    #[test]
    fn propagate_identity_norm_and_composition() {
        let psi = cos_datum(128, 10.0);
        let same = spectral_propagate(&psi, 10.0, 0.0);
        assert!(relative_l2(&same.values, &psi.values) < 1e-14);
        let a = spectral_propagate(&psi, 10.0, 0.7);
        assert!((a.norm_sqr() - psi.norm_sqr()).abs() < 1e-13 * psi.norm_sqr());
        let b = spectral_propagate(&spectral_propagate(&psi, 10.0, 0.3), 10.0, 0.4);
        assert!(relative_l2(&b.values, &a.values) < 1e-13);
        assert!((a.time - 0.7).abs() < 1e-15);
    }

    #[test]
    fn bessel_series_matches_spectral() {
        let m = 20.0;
        let shock = SingleShock::new(m).unwrap();
        assert!(shock.k_max() as f64 >= m + 40.0 * m.cbrt());
        for t in [0.2, 1.0, 1.7] {
            let a = spectral_propagate(&cos_datum(256, m), m, t);
            let b = shock.on_grid(256, t);
            let worst = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(worst < 1e-10, "t = {t}: {worst:e}");
        }
    }

    #[test]
    fn bessel_series_at_early_time_has_unit_modulus() {
        let shock = SingleShock::new(50.0).unwrap();
        for x in [0.0, 0.5, 2.0, 4.0] {
            assert!((shock.eval(x, 1e-6).norm() - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn shock_density_spike_at_caustic() {
        let shock = SingleShock::new(100.0).unwrap();
        let early = shock.eval(0.0, 0.5).norm_sqr();
        let caustic = shock.eval(0.0, 1.0).norm_sqr();
        assert!(caustic > 3.0 * early, "{caustic} vs {early}");
    }

    #[test]
    fn greens_plane_wave() {
        let n = 64;
        let m = 5.0;
        let q = 3.0;
        let psi0 = Wavefunction {
            values: grid(n).iter().map(|&x| Complex64::from_polar(1.0, q * x)).collect(),
            time: 0.0,
        };
        let interp = PeriodicInterpolant::from_samples(&psi0.values);
        let t = 0.4;
        let w = default_window(m, t, q / m);
        for x in [0.0, 1.0, 2.5] {
            let got = greens_point(&interp, m, t, x, w, 1e-9).unwrap();
            let want = Complex64::from_polar(1.0, q * x - q * q * t / (2.0 * m));
            assert!((got - want).norm() < 1e-8, "x = {x}: {got} vs {want}");
        }
    }

    #[test]
    fn greens_agrees_with_spectral() {
        let m = 20.0;
        let t = 0.5;
        let psi0 = cos_datum(128, m);
        let w = default_window(m, t, 1.0);
        let g = greens_propagate(&psi0, m, t, w, 1e-7).unwrap();
        let s = spectral_propagate(&psi0, m, t);
        assert!(relative_l2(&g.values, &s.values) < 1e-4);
    }

    #[test]
    fn greens_short_time_limit() {
        let m = 20.0;
        let psi0 = cos_datum(128, m);
        let interp = PeriodicInterpolant::from_samples(&psi0.values);
        let t = 1e-3;
        let w = default_window(m, t, 1.0);
        for x in [0.3, 2.0] {
            let got = greens_point(&interp, m, t, x, w, 1e-8).unwrap();
            assert!((got - interp.eval(x)).norm() < 0.05);
        }
    }

    #[test]
    fn greens_flags_small_window() {
        let m = 20.0;
        let psi0 = cos_datum(128, m);
        let interp = PeriodicInterpolant::from_samples(&psi0.values);
        let r = greens_point(&interp, m, 0.5, 0.0, 0.05, 1e-8);
        assert!(matches!(r, Err(Error::WindowTooSmall { .. })));
        assert!(greens_point(&interp, m, 0.0, 0.0, 1.0, 1e-8).is_err());
    }

    #[test]
    fn hydro_of_simple_states() {
        let m = 7.0;
        let h = schrodinger_hydro(&cos_datum(128, m), m);
        for (i, x) in grid(128).iter().enumerate() {
            assert!((h.n[i] - 1.0).abs() < 1e-14);
            assert!((h.v[i] + x.sin()).abs() < 1e-10);
        }
        let plane = Wavefunction {
            values: grid(32).iter().map(|&x| Complex64::from_polar(1.0, 4.0 * x)).collect(),
            time: 0.0,
        };
        let h = schrodinger_hydro(&plane, 2.0);
        assert!(h.v.iter().all(|v| (v - 2.0).abs() < 1e-12));
        let flat = Wavefunction {
            values: vec![Complex64::new(0.5, 0.5); 8],
            time: 0.0,
        };
        assert!(schrodinger_hydro(&flat, 1.0).v.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn shock_solves_the_pde() {
        // centred-difference residual of i∂_tψ + (1/2m)∂_xxψ shrinks as h²
        let shock = SingleShock::new(20.0).unwrap();
        let (x, t) = (0.3, 0.8);
        let res = |h: f64| {
            let dt = (shock.eval(x, t + h) - shock.eval(x, t - h)) / (2.0 * h);
            let dxx = (shock.eval(x + h, t) - 2.0 * shock.eval(x, t) + shock.eval(x - h, t)) / (h * h);
            (Complex64::new(0.0, 1.0) * dt + dxx / 40.0).norm()
        };
        let (a, b) = (res(1e-2), res(5e-3));
        assert!(b < a && (a / b).log2() > 1.8, "{a:e} {b:e}");
    }
}
