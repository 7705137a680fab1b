//! Pearcey description of the Galilean shock grown from `e^{im cos x}`.
//!
//! Expanding `cos y` to fourth order around the caustic point `(x, t) = (0, 1)`
//! turns the Green-function integral into `ψ ≈ A·I_P(−T, X)` with
//! `T = a^{−1/2}(t − 1)/(2εt)`, `X = −a^{−1/4} x/(εt)`, `a = m/24`, `ε = 1/m`.
//!
//! The integral `∫ e^{iΦ(u)} du = I_P(−T, X)`, `Φ(u) = u⁴ − Tu² + Xu`, is then
//! approximated zone by zone:
//!
//! * zone I (one real saddle): stationary phase, `√(2πi/Φ″)·e^{iΦ}`;
//! * zone III (three real saddles): the sum of the three contributions;
//! * zone II (two saddles near coalescence): the uniform Airy reduction of
//!   the coalescing pair `u_a, u_b`, plus stationary phase at the third.
//!
//! Zone II coefficients: `A = Re(Φ_a + Φ_b)/2`, `ζ = ±(¾|Φ_a − Φ_b|)^{2/3}`
//! (+ for a real pair, − for a complex-conjugate pair),
//! `s_i = 3(A − Φ_i)/(2ζ)`, `J_i = √(2s_i/Φ″_i)` with positive real part,
//! `p₀ = (J_a + J_b)/2`, `p₁ = (J_a − J_b)/(s_a − s_b)`, and
//! `∫ e^{iΦ} ≈ 2π e^{iA} [p₀ Ai(−ζ) − i p₁ Ai′(−ζ)]`.
//! At `ζ → 0` the limits `p₀ = 1/k`, `p₁ = −2/k⁵`, `k = |Φ‴/2|^{1/3}` are used.
//!
//! Zones are assigned from the Airy argument of the nearest coalescing pair:
//! zone II when `|ζ| ≤ band`, otherwise I or III by the sign of the
//! discriminant.

mod airy;
mod pearcey;
mod saddle;

pub use airy::{airy, airy_pair, airy_prime};
pub use pearcey::{pearcey, pearcey_direct};
pub use saddle::{discriminant, fold_x, phi, phi_prime, phi_second, real_saddles, saddle_points};

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

const GAMMA_QUARTER: f64 = 3.625_609_908_221_908_3;

/// Default zone-II half-width in the Airy argument.
pub const DEFAULT_BAND: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Zone {
    I,
    II,
    III,
}

impl Zone {
    pub fn label(self) -> u8 {
        match self {
            Zone::I => 1,
            Zone::II => 2,
            Zone::III => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockChart {
    pub mass: f64,
    pub a: f64,
    pub eps: f64,
}

impl ShockChart {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(invalid("mass", format!("must be positive and finite, got {mass}")));
        }
        Ok(Self {
            mass,
            a: mass / 24.0,
            eps: 1.0 / mass,
        })
    }
}

/// Scaled coordinates and prefactor of one `(x, t)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockPoint {
    pub t_param: f64,
    pub x_param: f64,
    pub prefactor: Complex64,
}

pub fn shock_map(x: f64, t: f64, chart: &ShockChart) -> Result<ShockPoint> {
    if !(t > 0.0) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    let ShockChart { a, eps, .. } = *chart;
    let t_param = (t - 1.0) / (2.0 * eps * t * a.sqrt());
    let x_param = -x / (eps * t * a.powf(0.25));
    let phase = Complex64::from_polar(1.0, (1.0 + x * x / (2.0 * t)) / eps);
    let scale = Complex64::new(0.0, TAU * t * eps * a.sqrt()).powf(-0.5);
    Ok(ShockPoint {
        t_param,
        x_param,
        prefactor: phase * scale,
    })
}

/// `A(x,t)·I_P(−T, X)`.
pub fn pearcey_shock_approx(x: f64, t: f64, chart: &ShockChart, tol: f64) -> Result<Complex64> {
    let p = shock_map(x, t, chart)?;
    Ok(p.prefactor * pearcey(-p.t_param, p.x_param, tol)?)
}

/// Classification of a chart point `(T, X)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PearceyPoint {
    pub t_param: f64,
    pub x_param: f64,
    pub discriminant: f64,
    /// Airy argument magnitude of the closest coalescing saddle pair.
    pub airy_argument: f64,
    pub zone: Zone,
}

fn pair_zeta(a: Complex64, b: Complex64, t: f64, x: f64) -> f64 {
    (0.75 * (phi(a, t, x) - phi(b, t, x)).norm()).powf(2.0 / 3.0)
}

/// Saddle pairs that can coalesce: neighbours on the real line when all
/// three are real; otherwise every pair, except that the conjugate pair is
/// skipped for `T ≤ 0`, where it never approaches the real axis.
fn candidate_pairs(t: f64, x: f64) -> Vec<(Complex64, Complex64, Complex64)> {
    let r = saddle_points(t, x);
    if real_saddles(t, x).len() == 3 {
        return vec![(r[0], r[1], r[2]), (r[1], r[2], r[0])];
    }
    let real_idx = (0..3)
        .min_by(|&i, &j| r[i].im.abs().total_cmp(&r[j].im.abs()))
        .expect("three roots");
    let others: Vec<usize> = (0..3).filter(|&i| i != real_idx).collect();
    let (c1, c2) = (r[others[0]], r[others[1]]);
    let real = Complex64::new(r[real_idx].re, 0.0);
    let mut pairs = vec![(real, c1, c2), (real, c2, c1)];
    if t > 0.0 {
        pairs.push((c1, c2, real));
    }
    pairs
}

fn closest_pair(t: f64, x: f64) -> ((Complex64, Complex64, Complex64), f64) {
    candidate_pairs(t, x)
        .into_iter()
        .map(|p| (p, pair_zeta(p.0, p.1, t, x)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one pair")
}

pub fn classify_zone(t: f64, x: f64, band: f64) -> PearceyPoint {
    let delta = discriminant(t, x);
    let (_, zeta) = closest_pair(t, x);
    let zone = if zeta <= band {
        Zone::II
    } else if delta > 0.0 {
        Zone::III
    } else {
        Zone::I
    };
    PearceyPoint {
        t_param: t,
        x_param: x,
        discriminant: delta,
        airy_argument: zeta,
        zone,
    }
}

/// Stationary-phase contribution `√(2πi/Φ″(u))·e^{iΦ(u)}` of a real saddle.
pub fn saddle_contribution(u: f64, t: f64, x: f64) -> Result<Complex64> {
    let uc = Complex64::new(u, 0.0);
    let curvature = phi_second(uc, t).re;
    if curvature.abs() < 1e-12 * (1.0 + t.abs()) {
        return Err(Error::DegenerateSaddle { curvature });
    }
    let amp = (Complex64::new(0.0, TAU) / curvature).sqrt();
    Ok(amp * phi(uc, t, x).exp_i())
}

trait ExpI {
    fn exp_i(self) -> Complex64;
}

impl ExpI for Complex64 {
    fn exp_i(self) -> Complex64 {
        (Complex64::new(0.0, 1.0) * self).exp()
    }
}

fn expect_zone(t: f64, x: f64, band: f64, expected: Zone) -> Result<PearceyPoint> {
    let point = classify_zone(t, x, band);
    if point.zone != expected {
        return Err(Error::OutsideZone {
            expected,
            found: point.zone,
            t_param: t,
            x_param: x,
        });
    }
    Ok(point)
}

/// Zone-I value of `∫e^{iΦ}`: single real saddle.
pub fn zone1_point(t: f64, x: f64, band: f64) -> Result<Complex64> {
    expect_zone(t, x, band, Zone::I)?;
    let roots = saddle_points(t, x);
    let u = roots
        .iter()
        .min_by(|a, b| a.im.abs().total_cmp(&b.im.abs()))
        .expect("three roots")
        .re;
    saddle_contribution(u, t, x)
}

/// Zone-III value of `∫e^{iΦ}`: three interfering saddles.
pub fn zone3_point(t: f64, x: f64, band: f64) -> Result<Complex64> {
    expect_zone(t, x, band, Zone::III)?;
    three_saddle_sum(t, x, [true; 3])
}

/// Sum over the real saddles; `keep[i]` switches individual contributions
/// (sorted by position) on or off.
pub fn three_saddle_sum(t: f64, x: f64, keep: [bool; 3]) -> Result<Complex64> {
    let roots = real_saddles(t, x);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, u) in roots.iter().enumerate() {
        if keep.get(i).copied().unwrap_or(false) {
            acc += saddle_contribution(*u, t, x)?;
        }
    }
    Ok(acc)
}

/// Zone-II value of `∫e^{iΦ}`: uniform Airy form for the coalescing pair
/// plus the isolated saddle. Also reports whether all three saddles are
/// within the band (the cusp neighbourhood, outside two-saddle theory).
pub fn zone2_point(t: f64, x: f64, band: f64) -> Result<(Complex64, bool)> {
    expect_zone(t, x, band, Zone::II)?;
    let ((ua, ub, iso), zeta_abs) = closest_pair(t, x);
    let real_pair = ua.im.abs() <= 1e-9 * ua.norm().max(1.0) && ub.im.abs() <= 1e-9 * ub.norm().max(1.0);
    let zeta = if real_pair { zeta_abs } else { -zeta_abs };
    let (fa, fb) = (phi(ua, t, x), phi(ub, t, x));
    let (p0, p1, a_mid) = if zeta_abs < 1e-6 {
        // pure cubic at the coalescence point
        let centre = 0.5 * (ua + ub);
        let c3 = (centre * 4.0).norm();
        let k = (3.0 * c3).cbrt();
        let a_mid = phi(centre, t, x).re;
        if k < 1e-8 {
            // triple coalescence: the quartic alone
            let value = Complex64::from_polar(GAMMA_QUARTER / 2.0, std::f64::consts::PI / 8.0)
                * Complex64::new(0.0, a_mid).exp();
            return Ok((value, true));
        }
        (Complex64::new(1.0 / k, 0.0), Complex64::new(-2.0 / k.powi(5), 0.0), a_mid)
    } else {
        let a_mid = 0.5 * (fa + fb).re;
        let s = [ua, ub].map(|u| (Complex64::new(a_mid, 0.0) - phi(u, t, x)) * 1.5 / zeta);
        let j = [(ua, s[0]), (ub, s[1])].map(|(u, si)| {
            let r = (si * 2.0 / phi_second(u, t)).sqrt();
            if r.re < 0.0 {
                -r
            } else {
                r
            }
        });
        ((j[0] + j[1]) * 0.5, (j[0] - j[1]) / (s[0] - s[1]), a_mid)
    };
    let (ai, aip) = airy_pair(-zeta);
    let i = Complex64::new(0.0, 1.0);
    let mut value = Complex64::new(0.0, a_mid).exp() * TAU * (p0 * ai - i * p1 * aip);
    if iso.im.abs() <= 1e-9 * iso.norm().max(1.0) {
        value += saddle_contribution(iso.re, t, x)?;
    }
    let iso_zeta = pair_zeta(iso, if (iso - ua).norm() < (iso - ub).norm() { ua } else { ub }, t, x);
    Ok((value, iso_zeta <= band))
}

/// Output of a zone-specific approximation, tagged for stitching maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Approximation {
    pub re: f64,
    pub im: f64,
    pub zone: Zone,
    pub low_confidence: bool,
}

impl Approximation {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

fn tagged(value: Complex64, zone: Zone, low_confidence: bool) -> Approximation {
    Approximation {
        re: value.re,
        im: value.im,
        zone,
        low_confidence,
    }
}

/// `ψ_I(x,t) = A·√(2πi/Φ″(u_c))·e^{iΦ(u_c)}`.
pub fn zone1_saddle_approx(x: f64, t: f64, chart: &ShockChart, band: f64) -> Result<Approximation> {
    let p = shock_map(x, t, chart)?;
    let v = zone1_point(p.t_param, p.x_param, band)?;
    Ok(tagged(p.prefactor * v, Zone::I, false))
}

pub fn zone2_airy_approx(x: f64, t: f64, chart: &ShockChart, band: f64) -> Result<Approximation> {
    let p = shock_map(x, t, chart)?;
    let (v, low) = zone2_point(p.t_param, p.x_param, band)?;
    Ok(tagged(p.prefactor * v, Zone::II, low))
}

pub fn zone3_multi_saddle(x: f64, t: f64, chart: &ShockChart, band: f64) -> Result<Approximation> {
    let p = shock_map(x, t, chart)?;
    let v = zone3_point(p.t_param, p.x_param, band)?;
    Ok(tagged(p.prefactor * v, Zone::III, false))
}

/// Whichever zone approximation applies at `(x, t)`.
pub fn composite_approx(x: f64, t: f64, chart: &ShockChart, band: f64) -> Result<Approximation> {
    let p = shock_map(x, t, chart)?;
    match classify_zone(p.t_param, p.x_param, band).zone {
        Zone::I => zone1_saddle_approx(x, t, chart, band),
        Zone::II => zone2_airy_approx(x, t, chart, band),
        Zone::III => zone3_multi_saddle(x, t, chart, band),
    }
}
