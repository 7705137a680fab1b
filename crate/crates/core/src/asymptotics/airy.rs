//! Airy function `Ai` and its derivative on the real line.
//!
//! Maclaurin series on `[−7, 5]`, asymptotic expansions outside. The series
//! loses about five digits to cancellation at `z = −7`; the oscillatory
//! expansion is only good to ~1e-8 at `|z| = 5`, hence the asymmetric split.

use std::f64::consts::{FRAC_PI_4, PI};

const AI0: f64 = 0.355_028_053_887_817_239;
const AIP0: f64 = 0.258_819_403_792_806_798;
const SERIES_LO: f64 = -7.0;
const SERIES_HI: f64 = 5.0;

pub fn airy(z: f64) -> f64 {
    airy_pair(z).0
}

pub fn airy_prime(z: f64) -> f64 {
    airy_pair(z).1
}

/// `(Ai(z), Ai′(z))`.
pub fn airy_pair(z: f64) -> (f64, f64) {
    if z.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if (SERIES_LO..=SERIES_HI).contains(&z) {
        maclaurin(z)
    } else if z > SERIES_HI {
        decaying(z)
    } else {
        oscillating(-z)
    }
}

fn maclaurin(z: f64) -> (f64, f64) {
    let z3 = z * z * z;
    let (mut f, mut g) = (1.0, z);
    let (mut fp, mut gp) = (0.0, 1.0);
    let (mut tf, mut tg) = (1.0, z);
    let (mut tfp, mut tgp) = (z * z / 2.0, 1.0);
    fp += tfp;
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        tf *= z3 / ((k3 - 1.0) * k3);
        tg *= z3 / (k3 * (k3 + 1.0));
        tgp *= z3 / (k3 * (k3 - 2.0));
        if k > 1 {
            tfp *= z3 / ((k3 - 3.0) * (k3 - 1.0));
            fp += tfp;
        }
        f += tf;
        g += tg;
        gp += tgp;
        let biggest = tf.abs().max(tg.abs()).max(tfp.abs()).max(tgp.abs());
        if biggest < 1e-18 {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * fp - AIP0 * gp)
}

/// `u_k` and `v_k` of the large-argument expansions.
fn coefficients(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..count {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * next);
    }
    (u, v)
}

/// Sum `Σ_k sign^k c_{start+step·k} ζ^{−(start+step·k)}` until the terms stop
/// shrinking.
fn asymptotic_sum(c: &[f64], zeta: f64, start: usize, step: usize, alternate: bool) -> f64 {
    let mut acc = 0.0;
    let mut prev = f64::INFINITY;
    let mut idx = start;
    let mut sign = 1.0;
    while idx < c.len() {
        let term = c[idx] * zeta.powi(-(idx as i32));
        if term.abs() >= prev {
            break;
        }
        acc += sign * term;
        if term.abs() < 1e-17 * acc.abs() {
            break;
        }
        prev = term.abs();
        if alternate {
            sign = -sign;
        }
        idx += step;
    }
    acc
}

fn decaying(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let (u, v) = coefficients(40);
    let q = z.powf(0.25);
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let su = asymptotic_sum(&u, zeta, 0, 1, true);
    let sv = asymptotic_sum(&v, zeta, 0, 1, true);
    (e / q * su, -e * q * sv)
}

/// `Ai(−x)`, `Ai′(−x)` for large positive `x`.
fn oscillating(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = coefficients(40);
    let q = x.powf(0.25);
    let (s, c) = (zeta + FRAC_PI_4).sin_cos();
    let u_even = asymptotic_sum(&u, zeta, 0, 2, true);
    let u_odd = asymptotic_sum(&u, zeta, 1, 2, true);
    let v_even = asymptotic_sum(&v, zeta, 0, 2, true);
    let v_odd = asymptotic_sum(&v, zeta, 1, 2, true);
    let rp = PI.sqrt();
    let ai = (s * u_even - c * u_odd) / (rp * q);
    let aip = -q / rp * (c * v_even + s * v_odd);
    (ai, aip)
}
