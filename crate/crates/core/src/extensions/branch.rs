//! Square roots of S and C continued along rays from the origin.
//!
//! Inside the disc `|z| < ω/√2`, S has only its double zero at 0 and C has no
//! zeros, so each has two holomorphic square roots there. The branch of `√S`
//! with `√S(w) ~ w` near 0 is `s`; the branch of `√C` with value 1 at 0 is `c`.

use super::{c_squared, s_squared};
use crate::error::{Error, Result};
use crate::numerics::Complex;
use crate::weierstrass::WeierstrassContext;

/// Fraction of `ω/√2` up to which branch tracking is allowed.
pub const BRANCH_FRACTION: f64 = 0.98;

/// Maximum step along the ray.
pub const BRANCH_STEP: f64 = 0.02;

/// Starting radius for tracking `√S` (the two roots coincide at 0).
const S_START: f64 = 0.01;

const MIN_STEP: f64 = 1e-9;

fn check_radius(ctx: &WeierstrassContext, z: Complex) -> Result<()> {
    let limit = BRANCH_FRACTION * ctx.omega() / std::f64::consts::SQRT_2;
    if z.norm().is_nan() || z.norm() >= limit {
        return Err(Error::Domain(format!(
            "|z| = {} is not below 0.98·ω/√2 = {limit}; the branch points ½(±1±i)ω are too close",
            z.norm()
        )));
    }
    Ok(())
}

/// Root of `value` nearest to `prev`, plus the distance between both roots.
fn nearest_root(value: Complex, prev: Complex) -> (Complex, f64) {
    let r = value.sqrt();
    let pick = if (r - prev).norm() <= (-r - prev).norm() {
        r
    } else {
        -r
    };
    (pick, 2.0 * r.norm())
}

/// Follows the root of `f` from `(from, start)` to `to` along the segment.
///
/// Steps are at most [`BRANCH_STEP`]. A step is halved when the two candidate
/// roots are closer together than four times the movement of the chosen root.
fn track<F>(f: F, from: Complex, start: Complex, to: Complex) -> Result<Complex>
where
    F: Fn(Complex) -> Result<Complex>,
{
    let delta = to - from;
    let length = delta.norm();
    if length == 0.0 {
        return Ok(start);
    }
    let dir = delta / length;
    let mut t = 0.0;
    let mut root = start;
    let mut step = BRANCH_STEP;
    while t < length {
        let h = step.min(length - t);
        let w = if t + h >= length {
            to
        } else {
            from + dir * (t + h)
        };
        let (next, separation) = nearest_root(f(w)?, root);
        if separation < 4.0 * (next - root).norm() {
            step = 0.5 * h;
            if step < MIN_STEP {
                return Err(Error::Domain(format!(
                    "square-root branch cannot be separated near {w}"
                )));
            }
            continue;
        }
        root = next;
        t += h;
        step = (2.0 * h).min(BRANCH_STEP);
    }
    Ok(root)
}

/// The holomorphic square root of S that extends `s`.
pub fn s_branch(ctx: &WeierstrassContext, z: Complex) -> Result<Complex> {
    check_radius(ctx, z)?;
    let r = z.norm();
    let f = |w: Complex| s_squared(ctx, w);
    if r <= S_START {
        // s(w) = w − (3/20)w⁵ + …, so the root closest to w is the right one.
        return Ok(nearest_root(f(z)?, z).0);
    }
    let from = z * (S_START / r);
    let start = nearest_root(f(from)?, from).0;
    track(f, from, start, z)
}

/// The holomorphic square root of C that extends `c`.
pub fn c_branch(ctx: &WeierstrassContext, z: Complex) -> Result<Complex> {
    check_radius(ctx, z)?;
    let origin = Complex::new(0.0, 0.0);
    track(|w| c_squared(ctx, w), origin, Complex::new(1.0, 0.0), z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{rk_continue, PathPolyline, TaylorPair};

    fn re(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    #[test]
    fn initial_values() {
        let ctx = WeierstrassContext::default();
        assert_eq!(s_branch(&ctx, re(0.0)).unwrap(), re(0.0));
        assert_eq!(c_branch(&ctx, re(0.0)).unwrap(), re(1.0));
    }

    #[test]
    fn agrees_with_series_inside_the_picard_disc() {
        let ctx = WeierstrassContext::default();
        let tp = TaylorPair::default();
        assert!((s_branch(&ctx, re(0.1)).unwrap() - tp.eval_s(re(0.1)).unwrap()).norm() < 1e-12);
        for z in [
            Complex::new(-0.4, 0.5),
            Complex::new(0.005, -0.002),
            Complex::new(0.0, -0.7),
        ] {
            assert!((s_branch(&ctx, z).unwrap() - tp.eval_s(z).unwrap()).norm() < 1e-12);
            assert!((c_branch(&ctx, z).unwrap() - tp.eval_c(z).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn agrees_with_runge_kutta_beyond_it() {
        let ctx = WeierstrassContext::default();
        let path = PathPolyline::segment(re(1.0), 1e-3).unwrap();
        let end = *rk_continue(&path).unwrap().last().unwrap();
        assert!((s_branch(&ctx, re(1.0)).unwrap() - end.s).norm() < 1e-8);
        assert!((c_branch(&ctx, re(1.0)).unwrap() - end.c).norm() < 1e-8);
    }

    #[test]
    fn quartic_identity_near_the_boundary() {
        let ctx = WeierstrassContext::default();
        let r = 0.97 * ctx.omega() / std::f64::consts::SQRT_2;
        for k in 0..16 {
            let z = Complex::from_polar(r, 0.1 + k as f64 * 0.39);
            let s = s_branch(&ctx, z).unwrap();
            let c = c_branch(&ctx, z).unwrap();
            let q = s * s * s * s + c * c * c * c - 1.0;
            assert!(q.norm() < 1e-10, "z = {z}: {q}");
        }
    }

    #[test]
    fn refuses_points_near_the_branch_circle() {
        let ctx = WeierstrassContext::default();
        let z = re(0.99 * ctx.omega() / std::f64::consts::SQRT_2);
        assert!(matches!(s_branch(&ctx, z), Err(Error::Domain(_))));
        assert!(matches!(c_branch(&ctx, z), Err(Error::Domain(_))));
    }
}
