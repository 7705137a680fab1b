//! The discrete-time quantum walk on a periodic ring.
//!
//! One step applies the coin `C = exp(−iθσ₁)` at every site and then shifts
//! the left-moving component one site down and the right-moving component
//! one site up. With `θ = εm`, `x_n = nε` and `t_j = jε` the walk converges
//! to the 1+1D Dirac equation `iγ^μ∂_μψ − mψ = 0`, `γ⁰ = σ₁`, `γ¹ = iσ₂`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Lattice size, mass and the derived spacing / coin angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    n_sites: usize,
    mass: f64,
    spacing: f64,
    coin_angle: f64,
}

impl WalkParams {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Lattice spacing ε = 2π/N.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Coin angle θ = εm.
    pub fn coin_angle(&self) -> f64 {
        self.coin_angle
    }

    /// Continuum time advanced by one step; equal to the spacing.
    pub fn dt(&self) -> f64 {
        self.spacing
    }

    /// Continuum time of step `j`.
    pub fn time_of(&self, step: u64) -> f64 {
        step as f64 * self.spacing
    }

    /// Position of site `n`.
    pub fn x_of(&self, site: usize) -> f64 {
        site as f64 * self.spacing
    }

    /// Mass of the free Schrödinger equation the walk reduces to at small
    /// momenta and finite θ: the dispersion `cos ωε = cos θ cos kε` gives
    /// `ω ≈ m + k²/(2m*)` with `m* = tan θ / ε`. Tends to `m` as ε → 0.
    pub fn galilean_mass(&self) -> f64 {
        self.coin_angle.tan() / self.spacing
    }
}

/// Validate and build the walk parameters.
pub fn build_walk(n_sites: usize, mass: f64) -> Result<WalkParams> {
    if n_sites < 4 || n_sites % 2 != 0 {
        return Err(invalid("n_sites", format!("must be even and at least 4, got {n_sites}")));
    }
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(invalid("mass", format!("must be positive and finite, got {mass}")));
    }
    let spacing = TAU / n_sites as f64;
    Ok(WalkParams {
        n_sites,
        mass,
        spacing,
        coin_angle: spacing * mass,
    })
}

/// Walk state: the two spinor components on the ring at step `step_index`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    pub left: Vec<Complex64>,
    pub right: Vec<Complex64>,
    pub step_index: u64,
}

impl SpinorField {
    pub fn new(left: Vec<Complex64>, right: Vec<Complex64>) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::LengthMismatch {
                expected: left.len(),
                got: right.len(),
            });
        }
        Ok(Self {
            left,
            right,
            step_index: 0,
        })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            left: vec![Complex64::new(0.0, 0.0); n],
            right: vec![Complex64::new(0.0, 0.0); n],
            step_index: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.left
            .iter()
            .chain(self.right.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Pointwise j⁰ = |Ψ_L|² + |Ψ_R|².
    pub fn density(&self) -> Vec<f64> {
        self.left
            .iter()
            .zip(&self.right)
            .map(|(l, r)| l.norm_sqr() + r.norm_sqr())
            .collect()
    }

    fn check_len(&self, params: &WalkParams) -> Result<()> {
        if self.left.len() != params.n_sites || self.right.len() != params.n_sites {
            return Err(Error::LengthMismatch {
                expected: params.n_sites,
                got: self.left.len().min(self.right.len()),
            });
        }
        Ok(())
    }
}

/// Coin followed by shift, one site update written in gather form:
/// `L'(n) = cos θ L(n+1) − i sin θ R(n+1)`, `R'(n) = −i sin θ L(n−1) + cos θ R(n−1)`.
#[inline]
fn gather(left: &[Complex64], right: &[Complex64], c: f64, s: f64, n: usize) -> (Complex64, Complex64) {
    let len = left.len();
    let up = if n + 1 == len { 0 } else { n + 1 };
    let down = if n == 0 { len - 1 } else { n - 1 };
    (
        left[up] * c - I * s * right[up],
        -I * s * left[down] + right[down] * c,
    )
}

/// Single-threaded step, always available.
pub fn step_walk_serial(state: &SpinorField, params: &WalkParams) -> Result<SpinorField> {
    state.check_len(params)?;
    let (s, c) = params.coin_angle.sin_cos();
    let (left, right): (Vec<_>, Vec<_>) = (0..params.n_sites)
        .map(|n| gather(&state.left, &state.right, c, s, n))
        .unzip();
    Ok(SpinorField {
        left,
        right,
        step_index: state.step_index + 1,
    })
}

/// Rayon step: sites are split into chunks updated independently.
#[cfg(feature = "parallel")]
pub fn step_walk_parallel(state: &SpinorField, params: &WalkParams) -> Result<SpinorField> {
    use rayon::prelude::*;

    const CHUNK: usize = 2048;
    state.check_len(params)?;
    let (s, c) = params.coin_angle.sin_cos();
    let zero = Complex64::new(0.0, 0.0);
    let mut left = vec![zero; params.n_sites];
    let mut right = vec![zero; params.n_sites];
    left.par_chunks_mut(CHUNK)
        .zip(right.par_chunks_mut(CHUNK))
        .enumerate()
        .for_each(|(chunk, (lc, rc))| {
            let base = chunk * CHUNK;
            for (off, (l, r)) in lc.iter_mut().zip(rc.iter_mut()).enumerate() {
                (*l, *r) = gather(&state.left, &state.right, c, s, base + off);
            }
        });
    Ok(SpinorField {
        left,
        right,
        step_index: state.step_index + 1,
    })
}

/// Advance the walk by one step.
pub fn step_walk(state: &SpinorField, params: &WalkParams) -> Result<SpinorField> {
    #[cfg(feature = "parallel")]
    {
        step_walk_parallel(state, params)
    }
    #[cfg(not(feature = "parallel"))]
    {
        step_walk_serial(state, params)
    }
}

/// Snapshots of a walk recorded every `cadence` steps.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: WalkParams,
    pub cadence: usize,
    pub snapshots: Vec<SpinorField>,
}

impl Trajectory {
    pub fn last(&self) -> &SpinorField {
        self.snapshots.last().expect("trajectory always holds the initial state")
    }

    /// Three consecutive-step snapshots centred on the middle of the record.
    pub fn centered_stencil(&self) -> Result<(&SpinorField, &SpinorField, &SpinorField)> {
        if self.snapshots.len() < 3 {
            return Err(Error::InsufficientSnapshots {
                needed: 3,
                have: self.snapshots.len(),
            });
        }
        let mid = self.snapshots.len() / 2;
        let (a, b, c) = (
            &self.snapshots[mid - 1],
            &self.snapshots[mid],
            &self.snapshots[mid + 1],
        );
        if b.step_index != a.step_index + 1 || c.step_index != b.step_index + 1 {
            return Err(Error::NonConsecutiveSnapshots {
                cadence: self.cadence,
            });
        }
        Ok((a, b, c))
    }
}

/// Apply `n_steps` steps, recording step 0, every multiple of `cadence`, and
/// the final step.
pub fn evolve(
    state: &SpinorField,
    params: &WalkParams,
    n_steps: usize,
    cadence: usize,
) -> Result<Trajectory> {
    if cadence == 0 {
        return Err(invalid("cadence", "must be at least 1"));
    }
    state.check_len(params)?;
    let mut snapshots = vec![state.clone()];
    let mut current = state.clone();
    for step in 1..=n_steps {
        current = step_walk(&current, params)?;
        if step % cadence == 0 || step == n_steps {
            snapshots.push(current.clone());
        }
    }
    Ok(Trajectory {
        params: *params,
        cadence,
        snapshots,
    })
}

/// Discrete total probability ε·Σ(|Ψ_L|² + |Ψ_R|²).
pub fn total_norm(state: &SpinorField, params: &WalkParams) -> f64 {
    params.spacing * state.density().iter().sum::<f64>()
}

/// L² norm of `iγ^μ∂_μψ − mψ` on the middle snapshot, with centred
/// differences in both t and x (time step = spacing = ε).
pub fn dirac_residual(traj: &Trajectory, params: &WalkParams) -> Result<f64> {
    let (prev, mid, next) = traj.centered_stencil()?;
    mid.check_len(params)?;
    let n = params.n_sites;
    let h = params.spacing;
    let m = params.mass;
    let mut acc = 0.0;
    for site in 0..n {
        let up = (site + 1) % n;
        let down = (site + n - 1) % n;
        let dt_l = (next.left[site] - prev.left[site]) / (2.0 * h);
        let dt_r = (next.right[site] - prev.right[site]) / (2.0 * h);
        let dx_l = (mid.left[up] - mid.left[down]) / (2.0 * h);
        let dx_r = (mid.right[up] - mid.right[down]) / (2.0 * h);
        // rows of iγ⁰∂_t + iγ¹∂_x − m with γ⁰ = σ₁, γ¹ = iσ₂
        let first = I * (dt_r + dx_r) - mid.left[site] * m;
        let second = I * (dt_l - dx_l) - mid.right[site] * m;
        acc += first.norm_sqr() + second.norm_sqr();
    }
    Ok((h * acc).sqrt())
}

/// Least-squares slope of log(error) against log(spacing): the observed
/// convergence order of a refinement study.
pub fn fitted_order(spacings: &[f64], errors: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = spacings
        .iter()
        .zip(errors)
        .map(|(&h, &e)| (h.ln(), e.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
