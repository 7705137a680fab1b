//! Adaptive Gauss–Kronrod (7/15) quadrature for complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Segment { a, b, value, error }
}

/// Integrate `f` over `[a, b]`, pre-split into `initial_panels` equal pieces,
/// bisecting the worst segment until the summed error estimate is below
/// `tol` (absolute).
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64, initial_panels: usize) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    const MAX_SEGMENTS: usize = 200_000;
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
        });
    }
    let panels = initial_panels.max(1);
    let width = (b - a) / panels as f64;
    let mut heap: BinaryHeap<Segment> = (0..panels)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == panels { b } else { lo + width };
            gk15(&f, lo, hi)
        })
        .collect();
    let mut evaluations = 15 * panels;
    let mut error: f64 = heap.iter().map(|s| s.error).sum();
    let mut refinements = 0usize;

    loop {
        if error <= tol {
            // recompute to shed accumulated rounding in the running sum
            error = heap.iter().map(|s| s.error).sum();
            if error <= tol {
                let value = heap.iter().map(|s| s.value).sum();
                return Ok(QuadResult {
                    value,
                    error,
                    evaluations,
                });
            }
        }
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::QuadratureNoConvergence {
                estimate: error,
                tol,
            });
        }
        let seg = heap.pop().expect("nonempty");
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval exhausted at machine precision
            return Err(Error::QuadratureNoConvergence {
                estimate: error,
                tol,
            });
        }
        let left = gk15(&f, seg.a, mid);
        let right = gk15(&f, mid, seg.b);
        error += left.error + right.error - seg.error;
        heap.push(left);
        heap.push(right);
        evaluations += 30;
        refinements += 1;
        if refinements % 1024 == 0 {
            error = heap.iter().map(|s| s.error).sum();
        }
    }
}
