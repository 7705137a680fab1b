//! Critical points of `Φ(u) = u⁴ − Tu² + Xu`.

use num_complex::Complex64;

pub fn phi(u: Complex64, t: f64, x: f64) -> Complex64 {
    let u2 = u * u;
    u2 * u2 - u2 * t + u * x
}

pub fn phi_prime(u: Complex64, t: f64, x: f64) -> Complex64 {
    u * u * u * 4.0 - u * (2.0 * t) + x
}

pub fn phi_second(u: Complex64, t: f64) -> Complex64 {
    u * u * 12.0 - 2.0 * t
}

/// `Δ = T³/2 − 27X²/16`: positive for three real roots of `Φ′`, negative for
/// one, zero on the fold `|X| = √(8T³/27)`. It is the cubic discriminant of
/// `4u³ − 2Tu + X` divided by 256.
pub fn discriminant(t: f64, x: f64) -> f64 {
    0.5 * t.powi(3) - 27.0 / 16.0 * x * x
}

/// `|X|` on the fold for `T ≥ 0`.
pub fn fold_x(t: f64) -> f64 {
    (8.0 * t.max(0.0).powi(3) / 27.0).sqrt()
}

/// The three roots of `Φ′(u) = 4u³ − 2Tu + X`, sorted by real part then
/// imaginary part. Closed-form start (trigonometric form when all roots are
/// real, Cardano otherwise) followed by Newton polishing.
pub fn saddle_points(t: f64, x: f64) -> [Complex64; 3] {
    // depressed cubic u³ + pu + q
    let p = -t / 2.0;
    let q = x / 4.0;
    let d = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let mut roots = if d <= 0.0 && p < 0.0 {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi0 = arg.acos() / 3.0;
        let third = 2.0 * std::f64::consts::PI / 3.0;
        [0.0, 1.0, 2.0].map(|k| Complex64::new(r * (phi0 - third * k).cos(), 0.0))
    } else {
        // sign choice avoids cancellation inside the cube root
        let s = q / 2.0 + q.signum() * d.max(0.0).sqrt();
        let a = -s.cbrt();
        let b = if a == 0.0 { 0.0 } else { -p / (3.0 * a) };
        let real = a + b;
        let im = 3f64.sqrt() / 2.0 * (a - b);
        [
            Complex64::new(real, 0.0),
            Complex64::new(-real / 2.0, im),
            Complex64::new(-real / 2.0, -im),
        ]
    };
    for r in roots.iter_mut() {
        for _ in 0..4 {
            let f = phi_prime(*r, t, x);
            let df = phi_second(*r, t);
            if df.norm() < 1e-300 {
                break;
            }
            let step = f / df;
            // near a double root Φ″ ≈ 0 and roundoff in Φ′ throws the
            // iterate away; keep only steps that shrink the residual
            if phi_prime(*r - step, t, x).norm() >= f.norm() {
                break;
            }
            *r -= step;
            if step.norm() <= 1e-16 * r.norm().max(1.0) {
                break;
            }
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    roots
}

/// Real roots (imaginary part negligible) in increasing order.
pub fn real_saddles(t: f64, x: f64) -> Vec<f64> {
    saddle_points(t, x)
        .iter()
        .filter(|z| z.im.abs() <= 1e-9 * z.norm().max(1.0))
        .map(|z| z.re)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_root_at_origin() {
        for r in saddle_points(0.0, 0.0) {
            assert!(r.norm() < 1e-12);
        }
    }

    #[test]
    fn factorized_case() {
        let r = saddle_points(2.0, 0.0);
        let want = [-1.0, 0.0, 1.0];
        for (a, b) in r.iter().zip(want) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn double_root_on_both_folds() {
        for t in [3.0, 10.0, 25.0] {
            for x in [fold_x(t), -fold_x(t)] {
                let r = saddle_points(t, x);
                let want = x.signum() * (t / 6.0).sqrt();
                let pair: Vec<_> = r.iter().filter(|u| (u.re - want).abs() < 1e-3).collect();
                assert_eq!(pair.len(), 2, "T={t} X={x}: {r:?}");
                for u in pair {
                    assert!((u - want).norm() < 1e-6, "T={t} X={x}: {u}");
                }
            }
        }
    }

    #[test]
    fn generic_residuals() {
        let r = saddle_points(3.0, 1.0);
        assert_eq!(real_saddles(3.0, 1.0).len(), 3);
        for u in r {
            assert!(phi_prime(u, 3.0, 1.0).norm() < 1e-12);
        }
        for (t, x) in [(-5.0, 2.0), (0.0, 7.0), (10.0, -40.0), (1e-3, 1e-6), (50.0, 1.0)] {
            for u in saddle_points(t, x) {
                let scale = 1.0 + t.abs() * u.norm() + x.abs();
                assert!(phi_prime(u, t, x).norm() < 1e-12 * scale, "({t},{x}) {u}");
            }
        }
    }

    #[test]
    fn discriminant_counts_real_roots() {
        assert_eq!(real_saddles(-5.0, 0.0).len(), 1);
        assert_eq!(real_saddles(5.0, 0.0).len(), 3);
        let t = 4.0;
        let xf = fold_x(t);
        assert!(discriminant(t, xf).abs() < 1e-12);
        assert_eq!(real_saddles(t, 0.9 * xf).len(), 3);
        assert_eq!(real_saddles(t, 1.1 * xf).len(), 1);
    }
}
