//! Pearcey's integral `I_P(T, X) = ∫ e^{i(Xy + Ty² + y⁴)} dy`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::quad::integrate;

/// Length of the steepest-descent rays beyond the real-axis core; the
/// integrand has decayed below 1e-40 well before this.
const RAY_LENGTH: f64 = 6.0;

fn exponent(t: f64, x: f64, y: Complex64) -> Complex64 {
    let y2 = y * y;
    Complex64::new(0.0, 1.0) * (y * x + y2 * t + y2 * y2)
}

fn check_args(t: f64, x: f64, tol: f64) -> Result<()> {
    if !t.is_finite() || !x.is_finite() {
        return Err(invalid("T/X", "Pearcey arguments must be finite"));
    }
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(invalid("tol", format!("must lie in (0, 1e-3], got {tol}")));
    }
    Ok(())
}

/// Contour quadrature. The real axis is kept on a core `[−L, L]` sized so the
/// quartic dominates the linear and quadratic terms beyond it; from `±L` the
/// contour leaves along the rays `±(L + r·e^{iπ/8})`, on which `y⁴` turns into
/// a decaying exponential. Absolute error is below `tol`.
pub fn pearcey(t: f64, x: f64, tol: f64) -> Result<Complex64> {
    check_args(t, x, tol)?;
    let l = 2.0f64.max(1.5 * x.abs().cbrt()).max(1.5 * t.abs().sqrt());
    let phase_span = l.powi(4) + t.abs() * l * l + x.abs() * l;
    let panels = (8.0 + 2.0 * phase_span / PI).ceil() as usize;
    let core = integrate(
        |y| exponent(t, x, Complex64::new(y, 0.0)).exp(),
        -l,
        l,
        tol / 3.0,
        panels,
    )?;
    let dir = Complex64::from_polar(1.0, PI / 8.0);
    let ray = |sign: f64| {
        integrate(
            move |r| {
                let y = Complex64::new(sign * l, 0.0) + dir * (sign * r);
                exponent(t, x, y).exp() * dir
            },
            0.0,
            RAY_LENGTH,
            tol / 3.0,
            16,
        )
    };
    Ok(core.value + ray(1.0)?.value + ray(-1.0)?.value)
}

/// Real-axis quadrature on `[−R, R]` plus three-term integration-by-parts
/// tails; independent of the contour deformation in [`pearcey`].
pub fn pearcey_direct(t: f64, x: f64, tol: f64) -> Result<Complex64> {
    check_args(t, x, tol)?;
    let r = 6.0f64.max(2.0 * x.abs().cbrt()).max(2.0 * t.abs().sqrt());
    let phase = |y: f64| x * y + t * y * y + y.powi(4);
    let phase_span = r.powi(4) + t.abs() * r * r + x.abs() * r;
    let panels = (8.0 + phase_span / 2.0).ceil() as usize;
    let core = integrate(|y| Complex64::from_polar(1.0, phase(y)), -r, r, tol / 2.0, panels)?;
    let tail = |y: f64| {
        let d1 = x + 2.0 * t * y + 4.0 * y.powi(3);
        let d2 = 2.0 * t + 12.0 * y * y;
        let d3 = 24.0 * y;
        let i = Complex64::new(0.0, 1.0);
        let g2 = d3 / d1.powi(3) - 3.0 * d2 * d2 / d1.powi(4);
        let bracket = (i * d1).inv() - d2 / d1.powi(3) + g2 / (i * d1);
        Complex64::from_polar(1.0, phase(y)) * bracket
    };
    Ok(core.value - tail(r) + tail(-r))
}
