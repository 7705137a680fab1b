//! Initial data: exact plane waves and phase-modulated shock states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::schrodinger::Wavefunction;
use crate::spectral::{grid, Spectral};
use crate::walk::{SpinorField, WalkParams};

/// One cosine term `a·cos(kx + δ)` of the initial phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub amplitude: f64,
    pub wavenumber: u32,
    pub phase_offset: f64,
}

impl ModeSpec {
    pub fn new(amplitude: f64, wavenumber: u32, phase_offset: f64) -> Self {
        Self {
            amplitude,
            wavenumber,
            phase_offset,
        }
    }
}

/// Phase `S(x) = q_max·Σ a_i cos(k_i x + δ_i)`; `q_max` is an absolute
/// momentum, so the peak velocity scale is `q_max / m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockInitSpec {
    pub modes: Vec<ModeSpec>,
    pub q_max: f64,
    pub mass: f64,
}

impl ShockInitSpec {
    /// The three-mode profile `cos x + ⅓cos 3x + ½cos(2x + 0.9)`.
    pub fn three_mode(q_max: f64, mass: f64) -> Self {
        Self {
            modes: three_modes(),
            q_max,
            mass,
        }
    }

    /// A single `cos x` mode.
    pub fn single_cosine(q_max: f64, mass: f64) -> Self {
        Self {
            modes: vec![ModeSpec::new(1.0, 1, 0.0)],
            q_max,
            mass,
        }
    }

    pub fn validate(&self, n_sites: usize) -> Result<()> {
        if !(self.q_max >= 0.0) || !self.q_max.is_finite() {
            return Err(invalid("q_max", format!("must be finite and non-negative, got {}", self.q_max)));
        }
        if !(self.mass > 0.0) {
            return Err(invalid("mass", format!("must be positive, got {}", self.mass)));
        }
        for mode in &self.modes {
            if mode.wavenumber == 0 || 2 * mode.wavenumber as usize >= n_sites {
                return Err(Error::Unresolvable {
                    wavenumber: mode.wavenumber as f64,
                    n_sites,
                });
            }
        }
        Ok(())
    }

    /// `S(x)`, the total phase of the initial state.
    pub fn phase(&self, x: f64) -> f64 {
        self.q_max
            * self
                .modes
                .iter()
                .map(|m| m.amplitude * (m.wavenumber as f64 * x + m.phase_offset).cos())
                .sum::<f64>()
    }

    /// Exact `S'(x)`, the local momentum.
    pub fn momentum(&self, x: f64) -> f64 {
        -self.q_max
            * self
                .modes
                .iter()
                .map(|m| {
                    let k = m.wavenumber as f64;
                    m.amplitude * k * (k * x + m.phase_offset).sin()
                })
                .sum::<f64>()
    }

    /// Exact `S''(x)`.
    pub fn curvature(&self, x: f64) -> f64 {
        -self.q_max
            * self
                .modes
                .iter()
                .map(|m| {
                    let k = m.wavenumber as f64;
                    m.amplitude * k * k * (k * x + m.phase_offset).cos()
                })
                .sum::<f64>()
    }

    /// Largest `|S'(x)|/m` over a fine sample of the period.
    pub fn peak_speed(&self) -> f64 {
        sample_period(|x| self.momentum(x).abs()) / self.mass
    }

    /// First crossing time of the characteristics `x = y + t·S'(y)/m`,
    /// `m / max(−S'')`; `None` when the profile never focuses.
    pub fn caustic_time(&self) -> Option<f64> {
        let focus = sample_period(|x| -self.curvature(x));
        (focus > 0.0).then(|| self.mass / focus)
    }
}

/// Maximum of a periodic function on a 16384-point sample refined by a
/// parabolic fit around the best sample.
fn sample_period<F: Fn(f64) -> f64>(f: F) -> f64 {
    let n = 16384;
    let h = std::f64::consts::TAU / n as f64;
    let (best, _) = (0..n)
        .map(|i| (i, f(i as f64 * h)))
        .fold((0, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc });
    let x = best as f64 * h;
    let (a, b, c) = (f(x - h), f(x), f(x + h));
    let denom = a - 2.0 * b + c;
    if denom < 0.0 {
        b - (c - a).powi(2) / (8.0 * denom)
    } else {
        b
    }
}

pub fn three_modes() -> Vec<ModeSpec> {
    vec![
        ModeSpec::new(1.0, 1, 0.0),
        ModeSpec::new(1.0 / 3.0, 3, 0.0),
        ModeSpec::new(0.5, 2, 0.9),
    ]
}

/// Local positive-energy plane-wave amplitudes for dimensionless momentum
/// `q̃`, scaled by `scale`.
fn chiral_amplitudes(qt: f64, scale: f64) -> (f64, f64) {
    let e = (1.0 + qt * qt).sqrt();
    (((e - qt) / 2.0).sqrt() * scale, ((e + qt) / 2.0).sqrt() * scale)
}

/// Positive-energy plane wave with integer momentum `q` (absolute units):
/// `Ψ_{L,R} = √(√(1+q̃²) ∓ q̃)·e^{iqx}/√2`, `q̃ = q/m`. Currents are
/// `j⁰ = √(1+q̃²)`, `j¹ = q̃`.
pub fn plane_wave(params: &WalkParams, q: i64) -> Result<SpinorField> {
    let n = params.n_sites();
    if 2 * q.unsigned_abs() as usize >= n {
        return Err(Error::Unresolvable {
            wavenumber: q as f64,
            n_sites: n,
        });
    }
    let qt = q as f64 / params.mass();
    let (al, ar) = chiral_amplitudes(qt, 1.0);
    let (left, right) = (0..n)
        .map(|i| {
            let phase = Complex64::from_polar(1.0, q as f64 * params.x_of(i));
            (phase * al, phase * ar)
        })
        .unzip();
    SpinorField::new(left, right)
}

/// WKB shock data: at each site the local plane wave with momentum
/// `q(x) = S'(x)` (spectral derivative of the sampled phase) and total phase
/// `S(x)`, normalized to unit density `j⁰ = 1`. Rejects `|q(x)/m| ≥ 1`.
pub fn phase_modulated_state(params: &WalkParams, spec: &ShockInitSpec) -> Result<SpinorField> {
    let n = params.n_sites();
    spec.validate(n)?;
    let x = grid(n);
    let phase: Vec<f64> = x.iter().map(|&x| spec.phase(x)).collect();
    let q = Spectral::new(n).derivative(&phase);
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for i in 0..n {
        let qt = q[i] / params.mass();
        if qt.abs() >= 1.0 {
            return Err(Error::Superluminal {
                site: i,
                speed: qt.abs(),
            });
        }
        let scale = (1.0 + qt * qt).powf(-0.25);
        let (al, ar) = chiral_amplitudes(qt, scale);
        let rot = Complex64::from_polar(1.0, phase[i]);
        left.push(rot * al);
        right.push(rot * ar);
    }
    SpinorField::new(left, right)
}

/// Schrödinger datum with the same phase: `ψ = e^{iS(x)}`.
pub fn schrodinger_initial(n_sites: usize, spec: &ShockInitSpec) -> Result<Wavefunction> {
    spec.validate(n_sites)?;
    let values = grid(n_sites)
        .iter()
        .map(|&x| Complex64::from_polar(1.0, spec.phase(x)))
        .collect();
    Ok(Wavefunction { values, time: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::madelung::{currents, hydro_vars, phases};
    use crate::walk::{build_walk, step_walk};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn rest_plane_wave() {
        let p = build_walk(16, 3.0).unwrap();
        let s = plane_wave(&p, 0).unwrap();
        for i in 0..16 {
            assert!((s.left[i].re - FRAC_1_SQRT_2).abs() < 1e-15 && s.left[i].im == 0.0);
            assert!((s.right[i].re - FRAC_1_SQRT_2).abs() < 1e-15);
        }
        let norm = crate::walk::total_norm(&s, &p);
        assert!((norm - std::f64::consts::TAU).abs() < 1e-12);
    }

    #[test]
    fn plane_wave_currents() {
        let p = build_walk(64, 4.0).unwrap();
        let s = plane_wave(&p, 3).unwrap();
        let c = currents(&s);
        let qt: f64 = 0.75;
        for i in 0..64 {
            assert!((c.j0[i] - (1.0 + qt * qt).sqrt()).abs() < 1e-14);
            assert!((c.j1[i] - qt).abs() < 1e-14);
        }
        let h = hydro_vars(&c, &phases(&s), 4.0);
        assert!(h.n.iter().all(|v| (v - 1.0).abs() < 1e-13));
        assert!(h.u1.iter().all(|v| (v - qt).abs() < 1e-13));
        assert!(h.w.iter().all(|v| (v - 4.0).abs() < 1e-12));
        assert!(matches!(plane_wave(&p, 32), Err(Error::Unresolvable { .. })));
    }

    #[test]
    fn plane_wave_phase_at_t0() {
        let p = build_walk(64, 4.0).unwrap();
        let s = plane_wave(&p, 2).unwrap();
        let ph = phases(&s);
        for i in 0..64 {
            assert!(ph.phi_minus[i].abs() < 1e-14);
            let want = crate::spectral::principal(2.0 * 2.0 * p.x_of(i));
            assert!((crate::spectral::principal(ph.phi_plus[i] - want)).abs() < 1e-12);
        }
    }

    #[test]
    fn plane_wave_stays_single_mode() {
        let p = build_walk(64, 4.0).unwrap();
        let mut s = plane_wave(&p, 5).unwrap();
        for _ in 0..7 {
            s = step_walk(&s, &p).unwrap();
        }
        let spectral = Spectral::new(64);
        for comp in [&s.left, &s.right] {
            let f = spectral.forward(comp);
            let peak = f[5].norm();
            let rest = f.iter().enumerate().filter(|(i, _)| *i != 5).map(|(_, z)| z.norm()).fold(0.0, f64::max);
            assert!(rest < 1e-12 * peak);
        }
    }

    #[test]
    fn shock_state_unit_density_and_velocity() {
        let p = build_walk(512, 512.0).unwrap();
        let spec = ShockInitSpec::three_mode(51.2, 512.0);
        let s = phase_modulated_state(&p, &spec).unwrap();
        let c = currents(&s);
        assert!(c.j0.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let h = hydro_vars(&c, &phases(&s), 512.0);
        for i in 0..512 {
            let x = p.x_of(i);
            let want = -0.1 * (x.sin() + (3.0 * x).sin() + (2.0 * x + 0.9).sin());
            assert!((h.u1[i] - want).abs() < 1e-10, "site {i}");
        }
    }

    #[test]
    fn zero_q_max_is_rest_plane_wave() {
        let p = build_walk(32, 2.0).unwrap();
        let a = phase_modulated_state(&p, &ShockInitSpec::three_mode(0.0, 2.0)).unwrap();
        let b = plane_wave(&p, 0).unwrap();
        for i in 0..32 {
            assert!((a.left[i] - b.left[i]).norm() < 1e-15);
            assert!((a.right[i] - b.right[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn superluminal_is_rejected() {
        let p = build_walk(64, 2.0).unwrap();
        let spec = ShockInitSpec::single_cosine(2.5, 2.0);
        assert!(matches!(phase_modulated_state(&p, &spec), Err(Error::Superluminal { .. })));
    }

    #[test]
    fn schrodinger_datum() {
        let spec = ShockInitSpec::single_cosine(100.0, 100.0);
        let psi = schrodinger_initial(64, &spec).unwrap();
        let x = grid(64);
        for i in 0..64 {
            let want = Complex64::from_polar(1.0, 100.0 * x[i].cos());
            assert!((psi.values[i] - want).norm() < 1e-12);
        }
        let flat = ShockInitSpec {
            modes: vec![],
            q_max: 1.0,
            mass: 1.0,
        };
        let psi = schrodinger_initial(8, &flat).unwrap();
        assert!(psi.values.iter().all(|z| (z - 1.0).norm() < 1e-15));
    }

    #[test]
    fn exact_and_spectral_momentum_agree() {
        let spec = ShockInitSpec::three_mode(51.2, 512.0);
        let x = grid(256);
        let phase: Vec<f64> = x.iter().map(|&x| spec.phase(x)).collect();
        let q = Spectral::new(256).derivative(&phase);
        for i in 0..256 {
            assert!((q[i] - spec.momentum(x[i])).abs() < 1e-10);
        }
    }
}
