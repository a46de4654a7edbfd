//! Scalar foundations: complex scalar alias, tolerances, the
//! arithmetic-geometric mean, adaptive Gauss–Kronrod quadrature and sparse
//! Horner evaluation.

use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// The universal scalar: an IEEE-754 double precision complex number.
pub type Complex = num_complex::Complex64;

/// Absolute and relative accuracy targets. At least one must be positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        let ok = |t: f64| t.is_finite() && t >= 0.0;
        if !ok(abs_tol) || !ok(rel_tol) || (abs_tol == 0.0 && rel_tol == 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance needs non-negative finite parts with one positive, got abs={abs_tol:e} rel={rel_tol:e}"
            )));
        }
        Ok(Self { abs_tol, rel_tol })
    }

    pub fn absolute(abs_tol: f64) -> Result<Self> {
        Self::new(abs_tol, 0.0)
    }

    /// Threshold for a quantity of magnitude `scale`.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale.abs()
    }
}

const AGM_MAX_ITER: usize = 64;

/// Arithmetic-geometric mean of two positive reals.
///
/// Iterates until `|a − b| ≤ 4·ulp·max(a, b)`. Each step is symmetric in its
/// arguments, so `agm(a, b) == agm(b, a)` holds bit for bit.
pub fn agm(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "agm requires positive finite arguments, got ({a}, {b})"
        )));
    }
    let (mut a, mut b) = (a, b);
    for _ in 0..AGM_MAX_ITER {
        let hi = a.max(b);
        if (a - b).abs() <= 4.0 * f64::EPSILON * hi {
            break;
        }
        let next_a = 0.5 * (a + b);
        let next_b = (a * b).sqrt();
        a = next_a;
        b = next_b;
    }
    Ok(0.5 * (a + b))
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1] (abscissae listed from the
// outermost inwards; index 7 is the centre).
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
// Gauss 7-point weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Interval budget for [`integrate`].
pub const MAX_INTERVALS: usize = 4096;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Result of an adaptive quadrature run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature with bisection of the
/// interval carrying the largest error estimate.
pub fn integrate_with_estimate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Domain(format!(
            "integration bounds must be finite with a < b, got [{a}, {b}]"
        )));
    }
    let mut segments = vec![kronrod15(&f, a, b)];
    loop {
        // Sum in interval order so the result does not depend on split history.
        segments.sort_by(|x, y| x.a.total_cmp(&y.a));
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !value.is_finite() {
            return Err(Error::Accuracy {
                estimate: value,
                error_estimate: error,
            });
        }
        if error <= tol.threshold(value) {
            return Ok(Quadrature {
                value,
                error_estimate: error,
                intervals: segments.len(),
            });
        }
        if segments.len() >= MAX_INTERVALS {
            return Err(Error::Accuracy {
                estimate: value,
                error_estimate: error,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| x.error.total_cmp(&y.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        segments.push(kronrod15(&f, seg.a, mid));
        segments.push(kronrod15(&f, mid, seg.b));
    }
}

/// `∫ₐᵇ f` to within `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    integrate_with_estimate(f, a, b, tol).map(|q| q.value)
}

/// Evaluates `Σₖ coeffs[k]·z^(offset + k·stride)` by Horner's rule in
/// `z^stride`, highest index first.
pub fn eval_series(coeffs: &[f64], stride: u32, offset: i32, z: Complex) -> Complex {
    let w = z.powu(stride);
    let mut acc = Complex::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * w + c;
    }
    match offset {
        0 => acc,
        k if k > 0 => acc * z.powu(k as u32),
        k => acc * z.powi(k),
    }
}

/// Real half-period `ω = 2∫₀¹ (1 + τ⁴)^(−1/2) dτ` of the lemniscatic lattice,
/// computed once by quadrature.
pub fn lemniscatic_omega() -> f64 {
    static OMEGA: OnceLock<f64> = OnceLock::new();
    *OMEGA
        .get_or_init(|| omega_by_quadrature().expect("smooth integrand on [0, 1] always converges"))
}

/// `2∫₀¹ (1 + τ⁴)^(−1/2) dτ` by adaptive Gauss–Kronrod quadrature, uncached.
pub fn omega_by_quadrature() -> Result<f64> {
    let tol = Tolerance::new(1e-15, 1e-15)?;
    integrate(|t: f64| 1.0 / (1.0 + t.powi(4)).sqrt(), 0.0, 1.0, tol).map(|v| 2.0 * v)
}

/// `π / (√2 · agm(1, √2))`, the AGM route to the same half-period.
pub fn omega_by_agm() -> f64 {
    PI / (SQRT_2 * agm(1.0, SQRT_2).expect("positive arguments"))
}
