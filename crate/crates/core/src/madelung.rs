//! Relativistic Madelung variables of a two-component spinor.
//!
//! Conventions: `ψ = (Ψ_L, Ψ_R)`, `γ⁰ = σ₁`, `γ¹ = iσ₂`, metric `(+, −)`.
//! Phases are `φ± = φ_L ± φ_R`. With that choice of φ₋ the equations of motion
//! close with the antisymmetric symbol `ε⁰¹ = −ε¹⁰ = −1` ([`EPS01`]): e.g.
//! `∂_t j¹ + ∂_x j⁰ = 2mn sin φ₋` follows directly from the Dirac equation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{principal, Spectral};
use crate::walk::{SpinorField, WalkParams};

/// `ε⁰¹`; `ε¹⁰ = −EPS01`.
pub const EPS01: f64 = -1.0;

/// Components below this modulus have no reported phase.
pub const PHASE_THRESHOLD: f64 = 1e-14;

/// Relative density under which a site counts as null.
pub const NULL_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CurrentField {
    pub j0: Vec<f64>,
    pub j1: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField {
    pub phi_plus: Vec<f64>,
    pub phi_minus: Vec<f64>,
    /// False where either component is too small to carry a phase.
    pub valid: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HydroField {
    pub n: Vec<f64>,
    pub u0: Vec<f64>,
    pub u1: Vec<f64>,
    pub w: Vec<f64>,
    pub valid_mask: Vec<bool>,
}

/// Components of a rank-2 tensor field, upper indices.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    pub t00: Vec<f64>,
    pub t01: Vec<f64>,
    pub t10: Vec<f64>,
    pub t11: Vec<f64>,
}

impl TensorField {
    fn zeros(n: usize) -> Self {
        Self {
            t00: vec![0.0; n],
            t01: vec![0.0; n],
            t10: vec![0.0; n],
            t11: vec![0.0; n],
        }
    }

    pub fn max_asymmetry(&self) -> f64 {
        self.t01
            .iter()
            .zip(&self.t10)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn currents(state: &SpinorField) -> CurrentField {
    let (j0, j1) = state
        .left
        .iter()
        .zip(&state.right)
        .map(|(l, r)| {
            let (l2, r2) = (l.norm_sqr(), r.norm_sqr());
            (l2 + r2, r2 - l2)
        })
        .unzip();
    CurrentField { j0, j1 }
}

pub fn phases(state: &SpinorField) -> PhaseField {
    let mut out = PhaseField {
        phi_plus: Vec::with_capacity(state.len()),
        phi_minus: Vec::with_capacity(state.len()),
        valid: Vec::with_capacity(state.len()),
    };
    for (l, r) in state.left.iter().zip(&state.right) {
        let (al, ar) = (l.arg(), r.arg());
        out.phi_plus.push(principal(al + ar));
        out.phi_minus.push(principal(al - ar));
        out.valid.push(l.norm() > PHASE_THRESHOLD && r.norm() > PHASE_THRESHOLD);
    }
    out
}

pub fn hydro_vars(c: &CurrentField, p: &PhaseField, mass: f64) -> HydroField {
    let n: Vec<f64> = c
        .j0
        .iter()
        .zip(&c.j1)
        .map(|(a, b)| (a * a - b * b).max(0.0).sqrt())
        .collect();
    let cutoff = NULL_THRESHOLD * n.iter().cloned().fold(0.0, f64::max);
    let len = n.len();
    let mut h = HydroField {
        n: n.clone(),
        u0: vec![f64::NAN; len],
        u1: vec![f64::NAN; len],
        w: vec![0.0; len],
        valid_mask: vec![false; len],
    };
    for i in 0..len {
        h.w[i] = mass * n[i] * p.phi_minus[i].cos();
        if n[i] > cutoff && n[i] > 0.0 {
            h.u0[i] = c.j0[i] / n[i];
            h.u1[i] = c.j1[i] / n[i];
            h.valid_mask[i] = true;
        }
    }
    h
}

/// Rebuild the spinor from currents and phases. The half angles
/// `(φ₊ ± φ₋)/2` are taken from the stored principal values, so the result
/// matches the original state up to an overall sign at each site.
pub fn spinor_from_hydro(c: &CurrentField, p: &PhaseField) -> Result<SpinorField> {
    let len = c.j0.len();
    if c.j1.len() != len || p.phi_plus.len() != len || p.phi_minus.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            got: c.j1.len().min(p.phi_plus.len()).min(p.phi_minus.len()),
        });
    }
    let mut left = Vec::with_capacity(len);
    let mut right = Vec::with_capacity(len);
    for i in 0..len {
        let (j0, j1) = (c.j0[i], c.j1[i]);
        let slack = 1e-12 * j0.abs().max(1e-300);
        if j0 < -slack || j0.abs() < j1.abs() - slack {
            return Err(Error::SpacelikeCurrent { site: i, j0, j1 });
        }
        let ml = ((j0 - j1) / 2.0).max(0.0).sqrt();
        let mr = ((j0 + j1) / 2.0).max(0.0).sqrt();
        let (pp, pm) = (p.phi_plus[i], p.phi_minus[i]);
        left.push(Complex64::from_polar(ml, 0.5 * (pp + pm)));
        right.push(Complex64::from_polar(mr, 0.5 * (pp - pm)));
    }
    SpinorField::new(left, right)
}

/// Largest site-wise distance between two spinors, each site compared up to
/// the overall sign that the phase pair (φ₊, φ₋) cannot resolve.
pub fn max_signless_distance(a: &SpinorField, b: &SpinorField) -> f64 {
    (0..a.len().min(b.len()))
        .map(|i| {
            let plus = (a.left[i] - b.left[i]).norm().max((a.right[i] - b.right[i]).norm());
            let minus = (a.left[i] + b.left[i]).norm().max((a.right[i] + b.right[i]).norm());
            plus.min(minus)
        })
        .fold(0.0, f64::max)
}

/// Time derivative data for the middle of three states.
#[derive(Debug, Clone, Copy)]
pub enum TimeDerivative<'a> {
    /// Centred difference between the neighbouring snapshots `dt` apart. The
    /// rest-frame rotation `e^{−imt}` is divided out before differencing.
    Stencil {
        prev: &'a SpinorField,
        next: &'a SpinorField,
        dt: f64,
    },
    /// Exact `∂_t Ψ_L`, `∂_t Ψ_R`.
    Analytic {
        d_left: &'a [Complex64],
        d_right: &'a [Complex64],
    },
}

fn time_derivative(
    state: &SpinorField,
    deriv: TimeDerivative<'_>,
    mass: f64,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let len = state.len();
    match deriv {
        TimeDerivative::Analytic { d_left, d_right } => {
            if d_left.len() != len || d_right.len() != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    got: d_left.len().min(d_right.len()),
                });
            }
            Ok((d_left.to_vec(), d_right.to_vec()))
        }
        TimeDerivative::Stencil { prev, next, dt } => {
            if prev.len() != len || next.len() != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    got: prev.len().min(next.len()),
                });
            }
            let fwd = Complex64::from_polar(1.0, mass * dt);
            let back = fwd.conj();
            let i_m = Complex64::new(0.0, mass);
            let d = |p: &[Complex64], m: &[Complex64], q: &[Complex64]| -> Vec<Complex64> {
                (0..len)
                    .map(|k| (q[k] * fwd - p[k] * back) / (2.0 * dt) - i_m * m[k])
                    .collect()
            };
            Ok((
                d(&prev.left, &state.left, &next.left),
                d(&prev.right, &state.right, &next.right),
            ))
        }
    }
}

/// Canonical symmetric stress-energy tensor
/// `T^{μν} = −½ [Im(ψ† γ⁰γ^μ ∂^ν ψ) + Im(ψ† γ⁰γ^ν ∂^μ ψ)]`
/// with `γ⁰γ⁰ = 1`, `γ⁰γ¹ = −σ₃`, spectral x-derivatives.
pub fn stress_energy_spinor(
    state: &SpinorField,
    deriv: TimeDerivative<'_>,
    params: &WalkParams,
) -> Result<TensorField> {
    let len = state.len();
    if len != params.n_sites() {
        return Err(Error::LengthMismatch {
            expected: params.n_sites(),
            got: len,
        });
    }
    let (dt_l, dt_r) = time_derivative(state, deriv, params.mass())?;
    let spectral = Spectral::new(len);
    let dx_l = spectral.derivative_complex(&state.left);
    let dx_r = spectral.derivative_complex(&state.right);
    let mut t = TensorField::zeros(len);
    for i in 0..len {
        let (l, r) = (state.left[i].conj(), state.right[i].conj());
        // ψ† M^μ ∂^ν ψ, with ∂^0 = ∂_t, ∂^1 = −∂_x
        let b00 = (l * dt_l[i] + r * dt_r[i]).im;
        let b01 = -(l * dx_l[i] + r * dx_r[i]).im;
        let b10 = (-l * dt_l[i] + r * dt_r[i]).im;
        let b11 = -(-l * dx_l[i] + r * dx_r[i]).im;
        t.t00[i] = -b00;
        t.t01[i] = -0.5 * (b01 + b10);
        t.t10[i] = t.t01[i];
        t.t11[i] = -b11;
    }
    Ok(t)
}

/// First derivatives of φ₋ in t and x.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGradient {
    pub dt: Vec<f64>,
    pub dx: Vec<f64>,
}

/// Gradient of φ₋ at the middle of three consecutive snapshots: spectral in
/// x (after unwrapping) and a centred wrapped difference in t.
pub fn phi_minus_gradient(
    prev: &SpinorField,
    mid: &SpinorField,
    next: &SpinorField,
    dt: f64,
) -> PhaseGradient {
    let (pp, pm, pn) = (phases(prev), phases(mid), phases(next));
    let dx = Spectral::new(mid.len()).phase_derivative(&pm.phi_minus);
    let dt = pp
        .phi_minus
        .iter()
        .zip(&pn.phi_minus)
        .map(|(a, b)| principal(b - a) / (2.0 * dt))
        .collect();
    PhaseGradient { dt, dx }
}

/// Hydrodynamic form
/// `T^{μν} = w u^μ u^ν + (n/2)(ε^{μα} u_α ∂^ν φ₋ + u^μ ε^{να} ∂_α φ₋)`.
/// Components at masked sites are NaN.
pub fn stress_energy_hydro(h: &HydroField, grad: &PhaseGradient) -> TensorField {
    let len = h.n.len();
    let mut t = TensorField::zeros(len);
    let eps = [[0.0, EPS01], [-EPS01, 0.0]];
    for i in 0..len {
        if !h.valid_mask[i] {
            t.t00[i] = f64::NAN;
            t.t01[i] = f64::NAN;
            t.t10[i] = f64::NAN;
            t.t11[i] = f64::NAN;
            continue;
        }
        let up = [h.u0[i], h.u1[i]];
        let low = [h.u0[i], -h.u1[i]];
        let d_low = [grad.dt[i], grad.dx[i]];
        let d_up = [grad.dt[i], -grad.dx[i]];
        let eu = [
            eps[0][0] * low[0] + eps[0][1] * low[1],
            eps[1][0] * low[0] + eps[1][1] * low[1],
        ];
        let ed = [
            eps[0][0] * d_low[0] + eps[0][1] * d_low[1],
            eps[1][0] * d_low[0] + eps[1][1] * d_low[1],
        ];
        let half_n = 0.5 * h.n[i];
        let comp = |mu: usize, nu: usize| {
            h.w[i] * up[mu] * up[nu] + half_n * (eu[mu] * d_up[nu] + up[mu] * ed[nu])
        };
        t.t00[i] = comp(0, 0);
        t.t01[i] = comp(0, 1);
        t.t10[i] = comp(1, 0);
        t.t11[i] = comp(1, 1);
    }
    t
}

/// L² norms of the residuals of the three Madelung–Dirac equations on the
/// middle snapshot of a cadence-1 trajectory:
/// the chiral-current equation `∂_t j¹ + ∂_x j⁰ = 2mn sin φ₋`,
/// the potential-flow relation `m cos φ₋ j^μ = −(n/2)(∂^μ φ₊ + ε^{μν} ∂_ν φ₋)`
/// (both components combined), and continuity `∂_μ j^μ = 0`.
/// Sites without a defined phase or with null current are skipped.
pub fn madelung_residuals(
    traj: &crate::walk::Trajectory,
    params: &WalkParams,
) -> Result<(f64, f64, f64)> {
    let (prev, mid, next) = traj.centered_stencil()?;
    let len = params.n_sites();
    if mid.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            got: mid.len(),
        });
    }
    let dt = params.dt();
    let m = params.mass();
    let spectral = Spectral::new(len);

    let (cp, cm, cn) = (currents(prev), currents(mid), currents(next));
    let (pp, pm, pn) = (phases(prev), phases(mid), phases(next));
    let hydro = hydro_vars(&cm, &pm, m);
    let dj0_dx = spectral.derivative(&cm.j0);
    let dj1_dx = spectral.derivative(&cm.j1);
    let dplus_dx = spectral.phase_derivative(&pm.phi_plus);
    let dminus_dx = spectral.phase_derivative(&pm.phi_minus);

    let (mut r4, mut r5, mut r6) = (0.0, 0.0, 0.0);
    for i in 0..len {
        let dj0_dt = (cn.j0[i] - cp.j0[i]) / (2.0 * dt);
        let dj1_dt = (cn.j1[i] - cp.j1[i]) / (2.0 * dt);
        r6 += (dj0_dt + dj1_dx[i]).powi(2);
        if !(hydro.valid_mask[i] && pp.valid[i] && pm.valid[i] && pn.valid[i]) {
            continue;
        }
        let n = hydro.n[i];
        let sin_m = pm.phi_minus[i].sin();
        let cos_m = pm.phi_minus[i].cos();
        // ε^μ_α ∂_μ j^α: lowering the second index flips the sign of the ε^{μ1} entries
        let lhs4 = -EPS01 * (dj1_dt + dj0_dx[i]);
        r4 += (lhs4 - 2.0 * m * n * sin_m).powi(2);

        // φ₊ rotates at −2m in the rest frame; demodulate before differencing
        let dplus_dt =
            principal(pn.phi_plus[i] - pp.phi_plus[i] + 4.0 * m * dt) / (2.0 * dt) - 2.0 * m;
        let dminus_dt = principal(pn.phi_minus[i] - pp.phi_minus[i]) / (2.0 * dt);
        let e0 = m * cos_m * cm.j0[i] + 0.5 * n * (dplus_dt + EPS01 * dminus_dx[i]);
        let e1 = m * cos_m * cm.j1[i] + 0.5 * n * (-dplus_dx[i] - EPS01 * dminus_dt);
        r5 += e0 * e0 + e1 * e1;
    }
    Ok(((dt * r4).sqrt(), (dt * r5).sqrt(), (dt * r6).sqrt()))
}

/// Two evaluations of `∂_x φ₋`: directly from the unwrapped phase and from
/// the enthalpy via `∂φ₋ = −σ ∂(w/mn) / √(1 − (w/mn)²)`, `σ = sign sin φ₋`.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureGradient {
    pub direct: Vec<f64>,
    pub from_enthalpy: Vec<f64>,
    pub sigma: Vec<f64>,
    /// False where the enthalpy formula is singular or the fluid is null.
    pub mask: Vec<bool>,
}

impl PressureGradient {
    /// Largest |direct − from_enthalpy| over unmasked sites.
    pub fn max_difference(&self) -> f64 {
        (0..self.direct.len())
            .filter(|&i| self.mask[i])
            .map(|i| (self.direct[i] - self.from_enthalpy[i]).abs())
            .fold(0.0, f64::max)
    }
}

pub fn quantum_pressure_gradient(h: &HydroField, p: &PhaseField, mass: f64) -> PressureGradient {
    let len = h.n.len();
    let spectral = Spectral::new(len);
    let direct = spectral.phase_derivative(&p.phi_minus);
    let ratio: Vec<f64> = (0..len)
        .map(|i| {
            if h.n[i] > 0.0 {
                h.w[i] / (mass * h.n[i])
            } else {
                1.0
            }
        })
        .collect();
    let d_ratio = spectral.derivative(&ratio);
    let mut sigma = vec![0.0; len];
    let mut from_enthalpy = vec![f64::NAN; len];
    let mut mask = vec![false; len];
    for i in 0..len {
        let gap = 1.0 - ratio[i] * ratio[i];
        sigma[i] = p.phi_minus[i].sin().signum();
        if gap.abs() < 1e-10 || !h.valid_mask[i] {
            continue;
        }
        from_enthalpy[i] = -sigma[i] * d_ratio[i] / gap.sqrt();
        mask[i] = true;
    }
    PressureGradient {
        direct,
        from_enthalpy,
        sigma,
        mask,
    }
}
