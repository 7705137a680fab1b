//! Non-relativistic expansion of the spinor components.
//!
//! With the rest phase removed, `Ψ_{L,R} = Ψ̄_{L,R}·e^{−imc²t}`, both slowly
//! varying components obey the Schrödinger equation to leading order in
//! `ν ~ ∂_x/(mc)`, and each determines the other:
//! `Ψ̄_R = Ψ̄_L + (1/imc)∂_xΨ̄_L − (1/2m²c²)∂_xxΨ̄_L + …`.
//! Writing `Ψ̄_L = r e^{iφ}` the moduli and phases of the two components
//! differ by `δr/r` and `δφ = φ_R − φ_L`, which this module evaluates at first
//! and second order, together with the second-order hydrodynamic variables.
//!
//! The light speed `c` is explicit here; everywhere else `c = 1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::madelung::{currents, phases};
use crate::schrodinger::{schrodinger_hydro, Wavefunction};
use crate::spectral::{unwrap_phase, Spectral};
use crate::walk::{SpinorField, Trajectory, WalkParams};

/// Largest top-third spectral energy fraction accepted as band-limited.
pub const BAND_LIMIT: f64 = 1e-6;

/// Moduli below this fraction of the maximum are masked.
const R_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrderNu {
    First,
    Second,
}

/// Polar form `Ψ̄_L = r e^{iφ}` with its spatial derivatives.
#[derive(Debug, Clone)]
pub struct NRFields {
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
    pub mass: f64,
    pub light_speed: f64,
    r_x: Vec<f64>,
    r_xx: Vec<f64>,
    phi_x: Vec<f64>,
    phi_xx: Vec<f64>,
}

impl NRFields {
    /// Polar decomposition of `Ψ̄_L`. The phase is unwrapped from site 0.
    pub fn from_component(left: &[Complex64], mass: f64, light_speed: f64) -> Result<Self> {
        check_constants(mass, light_speed)?;
        let spectral = Spectral::new(left.len());
        let ratio = spectral.high_band_fraction(left);
        if ratio > BAND_LIMIT {
            return Err(Error::BandLimit { ratio });
        }
        let r: Vec<f64> = left.iter().map(|z| z.norm()).collect();
        let wrapped: Vec<f64> = left.iter().map(|z| z.arg()).collect();
        let phi = unwrap_phase(&wrapped);
        // derivatives of the modulus and phase from the complex field, which
        // stays smooth where the polar parts are merely continuous
        let d1 = spectral.derivative_complex(left);
        let d2 = spectral.second_derivative_complex(left);
        let n = left.len();
        let (mut r_x, mut r_xx, mut phi_x, mut phi_xx) =
            (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for i in 0..n {
            if r[i] == 0.0 {
                continue;
            }
            // L_x/L = r_x/r + iφ_x,  L_xx/L = r_xx/r − φ_x² + i(2 r_x φ_x / r + φ_xx)
            let a = d1[i] / left[i];
            let b = d2[i] / left[i];
            r_x[i] = a.re * r[i];
            phi_x[i] = a.im;
            r_xx[i] = (b.re + a.im * a.im) * r[i];
            phi_xx[i] = b.im - 2.0 * a.re * a.im;
        }
        Ok(Self {
            r,
            phi,
            mass,
            light_speed,
            r_x,
            r_xx,
            phi_x,
            phi_xx,
        })
    }

    /// Fields with externally supplied derivatives.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        r: Vec<f64>,
        phi: Vec<f64>,
        derivatives: [Vec<f64>; 4],
        mass: f64,
        light_speed: f64,
    ) -> Result<Self> {
        check_constants(mass, light_speed)?;
        let [r_x, r_xx, phi_x, phi_xx] = derivatives;
        let n = r.len();
        if [phi.len(), r_x.len(), r_xx.len(), phi_x.len(), phi_xx.len()]
            .iter()
            .any(|&l| l != n)
        {
            return Err(Error::GridMismatch("field arrays differ in length".into()));
        }
        Ok(Self {
            r,
            phi,
            mass,
            light_speed,
            r_x,
            r_xx,
            phi_x,
            phi_xx,
        })
    }

    fn mc(&self) -> f64 {
        self.mass * self.light_speed
    }

    fn mask(&self) -> Vec<bool> {
        let cut = R_THRESHOLD * self.r.iter().cloned().fold(0.0, f64::max);
        self.r.iter().map(|&r| r > cut).collect()
    }
}

fn check_constants(mass: f64, light_speed: f64) -> Result<()> {
    if !(mass > 0.0) {
        return Err(invalid("mass", format!("must be positive, got {mass}")));
    }
    if !(light_speed > 0.0) {
        return Err(invalid("light_speed", format!("must be positive, got {light_speed}")));
    }
    Ok(())
}

/// Multiply both components by `e^{imc²t}`.
pub fn strip_rest_phase(psi: &SpinorField, mass: f64, light_speed: f64, t: f64) -> SpinorField {
    let rot = Complex64::from_polar(1.0, mass * light_speed * light_speed * t);
    SpinorField {
        left: psi.left.iter().map(|z| z * rot).collect(),
        right: psi.right.iter().map(|z| z * rot).collect(),
        step_index: psi.step_index,
    }
}

fn l2(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    (std::f64::consts::TAU / n as f64 * values.map(|v| v * v).sum::<f64>()).sqrt()
}

/// L² norms of `Ψ̄_R − [Ψ̄_L + (1/imc)∂Ψ̄_L − (1/2m²c²)∂²Ψ̄_L]` and of the
/// mirrored relation `Ψ̄_L − [Ψ̄_R − (1/imc)∂Ψ̄_R − (1/2m²c²)∂²Ψ̄_R]`; the
/// second-derivative terms are dropped at first order.
pub fn component_relation_residual(
    psi_bar: &SpinorField,
    mass: f64,
    light_speed: f64,
    order: OrderNu,
) -> Result<(f64, f64)> {
    check_constants(mass, light_speed)?;
    let n = psi_bar.len();
    let spectral = Spectral::new(n);
    for comp in [&psi_bar.left, &psi_bar.right] {
        let ratio = spectral.high_band_fraction(comp);
        if ratio > BAND_LIMIT {
            return Err(Error::BandLimit { ratio });
        }
    }
    let mc = mass * light_speed;
    let first = Complex64::new(0.0, -1.0 / mc);
    let second = if order == OrderNu::Second {
        -0.5 / (mc * mc)
    } else {
        0.0
    };
    let (dl, ddl) = (
        spectral.derivative_complex(&psi_bar.left),
        spectral.second_derivative_complex(&psi_bar.left),
    );
    let (dr, ddr) = (
        spectral.derivative_complex(&psi_bar.right),
        spectral.second_derivative_complex(&psi_bar.right),
    );
    let res_r = (0..n).map(|i| {
        (psi_bar.right[i] - (psi_bar.left[i] + first * dl[i] + ddl[i] * second)).norm()
    });
    let res_l = (0..n).map(|i| {
        (psi_bar.left[i] - (psi_bar.right[i] - first * dr[i] + ddr[i] * second)).norm()
    });
    Ok((l2(res_r, n), l2(res_l, n)))
}

/// `δφ = φ_R − φ_L` and `δr/r = (|Ψ̄_R| − |Ψ̄_L|)/|Ψ̄_L|`; NaN where masked.
#[derive(Debug, Clone, PartialEq)]
pub struct Deltas {
    pub delta_phi: Vec<f64>,
    pub delta_r_over_r: Vec<f64>,
    pub mask: Vec<bool>,
}

impl Deltas {
    /// Largest deviation from another estimate over jointly valid sites.
    pub fn max_difference(&self, other: &Deltas) -> f64 {
        (0..self.mask.len())
            .filter(|&i| self.mask[i] && other.mask[i])
            .map(|i| {
                (self.delta_phi[i] - other.delta_phi[i])
                    .abs()
                    .max((self.delta_r_over_r[i] - other.delta_r_over_r[i]).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// `δφ = −r_x/(mc r)`, `δr/r = φ_x/(mc)`.
pub fn deltas_first_order(f: &NRFields) -> Deltas {
    deltas(f, OrderNu::First)
}

/// `δφ = −r_x/(mc r) − φ_xx/(2m²c²)`,
/// `δr/r = φ_x/(mc) + φ_x²/(2m²c²) + (r_x² − r r_xx)/(2m²c²r²)`.
pub fn deltas_second_order(f: &NRFields) -> Deltas {
    deltas(f, OrderNu::Second)
}

fn deltas(f: &NRFields, order: OrderNu) -> Deltas {
    let mc = f.mc();
    let mc2 = mc * mc;
    let mask = f.mask();
    let n = f.r.len();
    let mut out = Deltas {
        delta_phi: vec![f64::NAN; n],
        delta_r_over_r: vec![f64::NAN; n],
        mask: mask.clone(),
    };
    for i in 0..n {
        if !mask[i] {
            continue;
        }
        let (r, rx, rxx, px, pxx) = (f.r[i], f.r_x[i], f.r_xx[i], f.phi_x[i], f.phi_xx[i]);
        let mut dphi = -rx / (mc * r);
        let mut drr = px / mc;
        if order == OrderNu::Second {
            dphi -= pxx / (2.0 * mc2);
            drr += px * px / (2.0 * mc2) + (rx * rx - r * rxx) / (2.0 * mc2 * r * r);
        }
        out.delta_phi[i] = dphi;
        out.delta_r_over_r[i] = drr;
    }
    out
}

/// Hydrodynamic variables `(n, u⁰, u¹, w)`; NaN where masked.
#[derive(Debug, Clone, PartialEq)]
pub struct NRHydro {
    pub n: Vec<f64>,
    pub u0: Vec<f64>,
    pub u1: Vec<f64>,
    pub w: Vec<f64>,
    pub mask: Vec<bool>,
}

impl NRHydro {
    /// Largest componentwise deviation, each variable scaled by `scale`.
    pub fn max_difference(&self, other: &NRHydro, scale: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0f64; 4];
        for i in (0..self.mask.len()).filter(|&i| self.mask[i] && other.mask[i]) {
            let d = [
                (self.n[i] - other.n[i]).abs() / scale[0],
                (self.u0[i] - other.u0[i]).abs() / scale[1],
                (self.u1[i] - other.u1[i]).abs() / scale[2],
                (self.w[i] - other.w[i]).abs() / scale[3],
            ];
            for k in 0..4 {
                out[k] = out[k].max(d[k]);
            }
        }
        out
    }
}

/// Second-order hydrodynamic variables:
/// `n = 2r² + (2r²/mc)φ_x + [r²φ_x² + r_x² − r r_xx]/(m²c²)`,
/// `u⁰ = 1 + φ_x²/(2m²c²)`,
/// `u¹ = φ_x/(mc) + (r_x² − r r_xx)/(2m²c²r²)`,
/// `w = 2mc²r² + 2cr²φ_x + [r²φ_x² − r r_xx]/m`.
pub fn hydro_second_order(f: &NRFields) -> NRHydro {
    let (m, c) = (f.mass, f.light_speed);
    let mc = m * c;
    let mc2 = mc * mc;
    let mask = f.mask();
    let len = f.r.len();
    let mut h = NRHydro {
        n: vec![f64::NAN; len],
        u0: vec![f64::NAN; len],
        u1: vec![f64::NAN; len],
        w: vec![f64::NAN; len],
        mask: mask.clone(),
    };
    for i in 0..len {
        if !mask[i] {
            continue;
        }
        let (r, rx, rxx, px) = (f.r[i], f.r_x[i], f.r_xx[i], f.phi_x[i]);
        let r2 = r * r;
        h.n[i] = 2.0 * r2 + 2.0 * r2 * px / mc + (r2 * px * px + rx * rx - r * rxx) / mc2;
        h.u0[i] = 1.0 + px * px / (2.0 * mc2);
        h.u1[i] = px / mc + (rx * rx - r * rxx) / (2.0 * mc2 * r2);
        h.w[i] = 2.0 * m * c * c * r2 + 2.0 * c * r2 * px + (r2 * px * px - r * rxx) / m;
    }
    h
}

/// Positive-energy partner of `Ψ̄_L`: mode by mode
/// `R̄_k = L̄_k (ω_k + ck)/(mc²)`, `ω_k = √(m²c⁴ + c²k²)`.
pub fn exact_partner(left: &[Complex64], mass: f64, light_speed: f64) -> Vec<Complex64> {
    let mc = mass * light_speed;
    Spectral::new(left.len()).apply_symbol(left, |k| {
        let kappa = k as f64 / mc;
        Complex64::new(kappa + (1.0 + kappa * kappa).sqrt(), 0.0)
    })
}

/// Exact differences between the two components.
pub fn exact_deltas(psi_bar: &SpinorField) -> Deltas {
    let n = psi_bar.len();
    let cut = R_THRESHOLD * psi_bar.left.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut out = Deltas {
        delta_phi: vec![f64::NAN; n],
        delta_r_over_r: vec![f64::NAN; n],
        mask: vec![false; n],
    };
    for i in 0..n {
        let (l, r) = (psi_bar.left[i], psi_bar.right[i]);
        if l.norm() <= cut {
            continue;
        }
        out.delta_phi[i] = (r / l).arg();
        out.delta_r_over_r[i] = r.norm() / l.norm() - 1.0;
        out.mask[i] = true;
    }
    out
}

/// Exact hydrodynamic variables of a spinor with explicit `c`:
/// `n = 2|Ψ_L||Ψ_R|`, `u = (|Ψ_R|² ± |Ψ_L|²)/n`, `w = mc² n cos φ₋`.
pub fn exact_hydro(psi: &SpinorField, mass: f64, light_speed: f64) -> NRHydro {
    let cur = currents(psi);
    let ph = phases(psi);
    let len = psi.len();
    let mut h = NRHydro {
        n: vec![f64::NAN; len],
        u0: vec![f64::NAN; len],
        u1: vec![f64::NAN; len],
        w: vec![f64::NAN; len],
        mask: vec![false; len],
    };
    for i in 0..len {
        let n = 2.0 * psi.left[i].norm() * psi.right[i].norm();
        if n <= 0.0 {
            continue;
        }
        h.n[i] = n;
        h.u0[i] = cur.j0[i] / n;
        h.u1[i] = cur.j1[i] / n;
        h.w[i] = mass * light_speed * light_speed * n * ph.phi_minus[i].cos();
        h.mask[i] = true;
    }
    h
}

/// Which combination of the stripped components stands in for the
/// Schrödinger wavefunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparator {
    /// `(Ψ̄_L + Ψ̄_R)/√2`.
    Mean,
    /// `√2·Ψ̄_L`.
    Left,
}

/// Where the walk-side density comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DensitySource {
    /// `|ψ|²` of the comparator wavefunction.
    Comparator,
    /// The conserved walk density `j⁰`.
    Current,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareOptions {
    pub comparator: Comparator,
    pub density: DensitySource,
    /// Mass used to turn phase gradients into velocities on both sides.
    pub velocity_mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub time: f64,
    pub step: u64,
    pub density_l2: f64,
    pub velocity_l2: f64,
    pub density_max: f64,
    pub velocity_max: f64,
}

fn relative_errors(a: &[f64], b: &[f64], mask: &[bool]) -> (f64, f64) {
    let mut num = 0.0;
    let mut den = 0.0;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in (0..a.len()).filter(|&i| mask[i]) {
        num += (a[i] - b[i]).powi(2);
        den += b[i] * b[i];
        worst = worst.max((a[i] - b[i]).abs());
        scale = scale.max(b[i].abs());
    }
    if den == 0.0 {
        (num.sqrt(), worst)
    } else {
        ((num / den).sqrt(), worst / scale)
    }
}

/// The Schrödinger wavefunction a walk state stands for at time `t`: rest
/// phase stripped, then the chosen combination of components.
pub fn comparator_wavefunction(
    snap: &SpinorField,
    mass: f64,
    light_speed: f64,
    t: f64,
    comparator: Comparator,
) -> Wavefunction {
    let bar = strip_rest_phase(snap, mass, light_speed, t);
    let values = match comparator {
        Comparator::Mean => bar
            .left
            .iter()
            .zip(&bar.right)
            .map(|(l, r)| (l + r) * std::f64::consts::FRAC_1_SQRT_2)
            .collect(),
        Comparator::Left => bar.left.iter().map(|l| l * std::f64::consts::SQRT_2).collect(),
    };
    Wavefunction { values, time: t }
}

/// Compare each snapshot of a walk trajectory with the Schrödinger oracle at
/// the same time: rest phase stripped with `c = 1`, comparator formed, and
/// relative L² / max errors of density and velocity reported.
pub fn nonrel_compare<F>(
    traj: &Trajectory,
    oracle: F,
    mass: f64,
    light_speed: f64,
    opts: &CompareOptions,
) -> Result<Vec<ErrorRecord>>
where
    F: Fn(f64) -> Wavefunction,
{
    let params = &traj.params;
    let mut records = Vec::with_capacity(traj.snapshots.len());
    for snap in &traj.snapshots {
        let t = params.time_of(snap.step_index);
        let schro = oracle(t);
        if schro.len() != snap.len() {
            return Err(Error::GridMismatch(format!(
                "oracle has {} points, walk has {}",
                schro.len(),
                snap.len()
            )));
        }
        let walk_psi = comparator_wavefunction(snap, mass, light_speed, t, opts.comparator);
        let walk_h = schrodinger_hydro(&walk_psi, opts.velocity_mass);
        let ref_h = schrodinger_hydro(&schro, opts.velocity_mass);
        let density = match opts.density {
            DensitySource::Comparator => walk_h.n.clone(),
            DensitySource::Current => currents(snap).j0,
        };
        let all = vec![true; density.len()];
        let (d_l2, d_max) = relative_errors(&density, &ref_h.n, &all);
        let vmask: Vec<bool> = walk_h.mask.iter().zip(&ref_h.mask).map(|(a, b)| *a && *b).collect();
        let (v_l2, v_max) = relative_errors(&walk_h.v, &ref_h.v, &vmask);
        records.push(ErrorRecord {
            time: t,
            step: snap.step_index,
            density_l2: d_l2,
            velocity_l2: v_l2,
            density_max: d_max,
            velocity_max: v_max,
        });
    }
    Ok(records)
}

/// L² norms of the centred Klein–Gordon residual `∂_tt ψ − ∂_xx ψ + m²ψ` of
/// each component on the middle snapshot.
pub fn klein_gordon_residual(traj: &Trajectory, params: &WalkParams) -> Result<(f64, f64)> {
    let (prev, mid, next) = traj.centered_stencil()?;
    let n = params.n_sites();
    let h = params.spacing();
    let m2 = params.mass() * params.mass();
    let residual = |p: &[Complex64], c: &[Complex64], q: &[Complex64]| {
        let vals = (0..n).map(|i| {
            let up = (i + 1) % n;
            let down = (i + n - 1) % n;
            let tt = (q[i] - 2.0 * c[i] + p[i]) / (h * h);
            let xx = (c[up] - 2.0 * c[i] + c[down]) / (h * h);
            (tt - xx + c[i] * m2).norm()
        });
        (h * vals.map(|v| v * v).sum::<f64>()).sqrt()
    };
    Ok((
        residual(&prev.left, &mid.left, &next.left),
        residual(&prev.right, &mid.right, &next.right),
    ))
}
