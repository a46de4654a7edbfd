//! Taylor coefficients of the local solution pair of
//! `s' = c³, c' = −s³, s(0) = 0, c(0) = 1`, their evaluation, and a
//! fixed-step RK4 integrator along polylines used as an independent oracle.
//!
//! Writing `s(z) = Σ aₙzⁿ` and `c(z) = Σ bₙzⁿ`, the system gives
//!
//! ```text
//! (n+1)·a[n+1] = [zⁿ] c³        (n+1)·b[n+1] = −[zⁿ] s³
//! ```
//!
//! `s(iz) = i·s(z)` and `c(iz) = c(z)` force `aₙ = 0` unless `n ≡ 1 (mod 4)`
//! and `bₙ = 0` unless `n ≡ 0 (mod 4)`, so only those lanes are stored:
//! `s = z·α(z⁴)`, `c = β(z⁴)`.
//!
//! The nearest singularities of `s` and `c` are the branch points
//! `½(±1 ± i)ω`, at distance `ω/√2` from the origin. This radius of
//! convergence is what the tail estimate assumes; it follows from the
//! location of the poles of `s²` and is not proved here.

use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::SquareLattice;
use crate::numerics::{eval_series, lemniscatic_omega, Complex};

/// Default truncation order (32 nonzero lanes per function).
pub const DEFAULT_ORDER: usize = 128;

/// Fraction of `ω/√2` inside which series evaluation is permitted.
pub const GUARD_FRACTION: f64 = 0.95;

/// Largest admissible estimated truncation tail.
pub const TAIL_LIMIT: f64 = 1e-13;

/// Truncated Taylor expansions of `s` and `c` about 0, stored by nonzero lane.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorPair {
    /// `alpha[j] = a[4j + 1]`
    alpha: Vec<f64>,
    /// `beta[j] = b[4j]`
    beta: Vec<f64>,
    order: usize,
}

/// Free-function form of [`TaylorPair::new`].
pub fn taylor_coefficients(order: usize) -> Result<TaylorPair> {
    TaylorPair::new(order)
}

impl TaylorPair {
    /// Coefficients `a[0..=order]`, `b[0..=order]`.
    pub fn new(order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidParameter(
                "series order must be at least 1".into(),
            ));
        }
        let s_lanes = (order - 1) / 4 + 1; // 4j + 1 <= order
        let c_lanes = order / 4 + 1; // 4j <= order
        let lanes = s_lanes.max(c_lanes);

        let mut alpha = Vec::with_capacity(lanes);
        let mut beta = Vec::with_capacity(lanes);
        let mut alpha2: Vec<f64> = Vec::with_capacity(lanes);
        let mut beta2: Vec<f64> = Vec::with_capacity(lanes);

        // In w = z⁴: c' = −s³ reads 4j·β[j] = −[w^(j−1)] α³, and
        // s' = c³ reads (4j+1)·α[j] = [w^j] β³. β[j] only needs α[..j].
        for j in 0..lanes {
            let b = if j == 0 {
                1.0
            } else {
                let n = j - 1;
                let cube: f64 = (0..=n).map(|k| alpha2[k] * alpha[n - k]).sum();
                -cube / (4 * j) as f64
            };
            beta.push(b);
            beta2.push((0..=j).map(|k| beta[k] * beta[j - k]).sum());

            let cube: f64 = (0..=j).map(|k| beta2[k] * beta[j - k]).sum();
            alpha.push(cube / (4 * j + 1) as f64);
            alpha2.push((0..=j).map(|k| alpha[k] * alpha[j - k]).sum());
        }
        alpha.truncate(s_lanes);
        beta.truncate(c_lanes);
        Ok(Self { alpha, beta, order })
    }

    /// Smallest order (at least [`DEFAULT_ORDER`]) whose estimated tail stays
    /// below `TAIL_LIMIT / 10` on the disc `|z| ≤ radius`.
    pub fn for_radius(radius: f64) -> Result<Self> {
        let guard = guarded_radius();
        if !(0.0..=guard).contains(&radius) {
            return Err(Error::Domain(format!(
                "series radius {radius} outside the guarded disc |z| <= {guard}"
            )));
        }
        let rho = radius / radius_constants().true_radius;
        let mut order = DEFAULT_ORDER;
        if rho > 0.0 {
            let needed = (1e-16f64).ln() / rho.ln();
            order = order.max(((needed as usize) / 4 + 2) * 4);
        }
        loop {
            let tp = Self::new(order)?;
            if tp.tail_estimate(Complex::new(radius, 0.0)) <= TAIL_LIMIT / 10.0 {
                return Ok(tp);
            }
            order *= 2;
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `a[n]`, zero past the truncation order.
    pub fn a(&self, n: usize) -> f64 {
        if n % 4 == 1 {
            self.alpha.get(n / 4).copied().unwrap_or(0.0)
        } else {
            0.0
        }
    }

    /// `b[n]`, zero past the truncation order.
    pub fn b(&self, n: usize) -> f64 {
        if n.is_multiple_of(4) {
            self.beta.get(n / 4).copied().unwrap_or(0.0)
        } else {
            0.0
        }
    }

    /// Dense `a[0..=order]`.
    pub fn a_coeffs(&self) -> Vec<f64> {
        (0..=self.order).map(|n| self.a(n)).collect()
    }

    /// Dense `b[0..=order]`.
    pub fn b_coeffs(&self) -> Vec<f64> {
        (0..=self.order).map(|n| self.b(n)).collect()
    }

    pub fn s_lanes(&self) -> &[f64] {
        &self.alpha
    }

    pub fn c_lanes(&self) -> &[f64] {
        &self.beta
    }

    /// Estimated size of the discarded tail at `z`: the last retained term of
    /// either series times `ρ⁴/(1 − ρ⁴)`, `ρ = |z|/(ω/√2)`.
    pub fn tail_estimate(&self, z: Complex) -> f64 {
        let r = z.norm();
        if r == 0.0 {
            return 0.0;
        }
        let rho4 = (r / radius_constants().true_radius).powi(4);
        if rho4 >= 1.0 {
            return f64::INFINITY;
        }
        let last = |lanes: &[f64], offset: i32| -> f64 {
            let j = lanes.len() - 1;
            lanes[j].abs() * r.powi(4 * j as i32 + offset)
        };
        let last = last(&self.alpha, 1).max(last(&self.beta, 0));
        last * rho4 / (1.0 - rho4)
    }

    fn check(&self, z: Complex) -> Result<()> {
        let guard = guarded_radius();
        let r = z.norm();
        if r.is_nan() || r > guard {
            return Err(Error::Domain(format!(
                "|z| = {r} exceeds the series bound 0.95·ω/√2 = {guard}"
            )));
        }
        let tail = self.tail_estimate(z);
        if tail > TAIL_LIMIT {
            return Err(Error::InsufficientOrder {
                order: self.order,
                modulus: r,
                tail,
                limit: TAIL_LIMIT,
            });
        }
        Ok(())
    }

    pub fn eval_s(&self, z: Complex) -> Result<Complex> {
        self.check(z)?;
        Ok(eval_series(&self.alpha, 4, 1, z))
    }

    pub fn eval_c(&self, z: Complex) -> Result<Complex> {
        self.check(z)?;
        Ok(eval_series(&self.beta, 4, 0, z))
    }

    /// `s'(z)` by termwise differentiation.
    pub fn eval_s_prime(&self, z: Complex) -> Result<Complex> {
        self.check(z)?;
        let d: Vec<f64> = self
            .alpha
            .iter()
            .enumerate()
            .map(|(j, a)| (4 * j + 1) as f64 * a)
            .collect();
        Ok(eval_series(&d, 4, 0, z))
    }

    /// `c'(z)` by termwise differentiation.
    pub fn eval_c_prime(&self, z: Complex) -> Result<Complex> {
        self.check(z)?;
        let d: Vec<f64> = self
            .beta
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, b)| (4 * j) as f64 * b)
            .collect();
        Ok(eval_series(&d, 4, 3, z))
    }
}

impl Default for TaylorPair {
    fn default() -> Self {
        Self::new(DEFAULT_ORDER).expect("default order is valid")
    }
}

/// Reference radii of the local theory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusConstants {
    /// Existence disc from the Picard bound on the system: `4/27`.
    pub picard_radius: f64,
    /// Existence disc for the scalar reduction `s' = (1 − s⁴)^(3/4)`: `(4/27)^(1/4)`.
    pub scalar_radius: f64,
    /// Distance to the nearest branch point: `ω/√2`.
    pub true_radius: f64,
}

pub fn radius_constants() -> RadiusConstants {
    let picard = 4.0 / 27.0;
    RadiusConstants {
        picard_radius: picard,
        scalar_radius: f64::powf(picard, 0.25),
        true_radius: lemniscatic_omega() / SQRT_2,
    }
}

/// `0.95·ω/√2`.
pub fn guarded_radius() -> f64 {
    GUARD_FRACTION * radius_constants().true_radius
}

/// A polyline starting at the origin, integrated with steps of at most
/// `max_step`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPolyline {
    vertices: Vec<Complex>,
    max_step: f64,
}

impl PathPolyline {
    pub fn new(vertices: Vec<Complex>, max_step: f64) -> Result<Self> {
        if !(max_step > 0.0 && max_step.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "max_step must be positive, got {max_step}"
            )));
        }
        match vertices.first() {
            Some(v) if *v == Complex::new(0.0, 0.0) => {}
            _ => {
                return Err(Error::InvalidParameter(
                    "path must start exactly at 0".into(),
                ))
            }
        }
        if vertices
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::InvalidParameter(
                "path vertices must be finite".into(),
            ));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(
                "consecutive path vertices must be distinct".into(),
            ));
        }
        Ok(Self { vertices, max_step })
    }

    /// Straight segment from 0 to `z`.
    pub fn segment(z: Complex, max_step: f64) -> Result<Self> {
        if z == Complex::new(0.0, 0.0) {
            Self::new(vec![z], max_step)
        } else {
            Self::new(vec![Complex::new(0.0, 0.0), z], max_step)
        }
    }

    pub fn vertices(&self) -> &[Complex] {
        &self.vertices
    }

    pub fn max_step(&self) -> f64 {
        self.max_step
    }
}

/// State of the integrator at a path vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathState {
    pub z: Complex,
    pub s: Complex,
    pub c: Complex,
}

fn field(s: Complex, c: Complex) -> (Complex, Complex) {
    (c * c * c, -(s * s * s))
}

/// Integrates the system along `path` with classical fourth-order
/// Runge–Kutta, returning the state at every vertex.
///
/// Every segment must stay at least `10·max_step` away from the branch
/// points `½(±1 ± i)ω + 2ωm + 2iωn`.
pub fn rk_continue(path: &PathPolyline) -> Result<Vec<PathState>> {
    let branch = SquareLattice::extension_poles(lemniscatic_omega());
    let minimum = 10.0 * path.max_step;
    for w in path.vertices.windows(2) {
        if let Some(&(p, d)) = branch
            .near_segment(w[0], w[1], minimum)
            .iter()
            .min_by(|x, y| x.1.total_cmp(&y.1))
        {
            return Err(Error::BranchProximity {
                branch_point: p,
                distance: d,
                minimum,
            });
        }
    }

    let mut s = Complex::new(0.0, 0.0);
    let mut c = Complex::new(1.0, 0.0);
    let mut out = Vec::with_capacity(path.vertices.len());
    out.push(PathState {
        z: path.vertices[0],
        s,
        c,
    });
    for w in path.vertices.windows(2) {
        let delta = w[1] - w[0];
        let steps = (delta.norm() / path.max_step).ceil().max(1.0) as usize;
        let h = delta / steps as f64;
        for _ in 0..steps {
            let (k1s, k1c) = field(s, c);
            let (k2s, k2c) = field(s + h * 0.5 * k1s, c + h * 0.5 * k1c);
            let (k3s, k3c) = field(s + h * 0.5 * k2s, c + h * 0.5 * k2c);
            let (k4s, k4c) = field(s + h * k3s, c + h * k3c);
            s += h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
            c += h / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
        }
        out.push(PathState { z: w[1], s, c });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    // High-precision ODE solutions on the real axis (mpmath odefun, 30 digits).
    const S_01: f64 = 0.099_998_500_039_582_205_963_000_544_170_927_9;
    const C_01: f64 = 0.999_975_000_562_484_479_621_791_101_573_35;
    const S_05: f64 = 0.495_388_460_063_417_514_146_031_403_004_02;
    const C_05: f64 = 0.984_591_005_455_247_264_921_155_526_578_583;
    const S_10: f64 = 0.880_879_585_008_208_520_857_192_319_102_704;
    const C_10: f64 = 0.794_226_567_592_293_178_799_052_729_919_87;

    /// Dense Cauchy products over every index, no lane bookkeeping.
    fn brute_force(order: usize) -> (Vec<f64>, Vec<f64>) {
        let mut a = vec![0.0; order + 1];
        let mut b = vec![0.0; order + 1];
        b[0] = 1.0;
        let cube = |x: &[f64], n: usize| -> f64 {
            let mut t = 0.0;
            for i in 0..=n {
                for j in 0..=n - i {
                    t += x[i] * x[j] * x[n - i - j];
                }
            }
            t
        };
        for n in 0..order {
            let an = cube(&b, n) / (n + 1) as f64;
            let bn = -cube(&a, n) / (n + 1) as f64;
            a[n + 1] = an;
            b[n + 1] = bn;
        }
        (a, b)
    }

    #[test]
    fn initial_coefficients() {
        let tp = TaylorPair::new(1).unwrap();
        assert_eq!(tp.a_coeffs(), vec![0.0, 1.0]);
        assert_eq!(tp.b_coeffs(), vec![1.0, 0.0]);
        assert!(TaylorPair::new(0).is_err());
    }

    #[test]
    fn hand_computed_coefficients() {
        assert_eq!(TaylorPair::new(4).unwrap().b(4), -0.25);
        assert_eq!(TaylorPair::new(5).unwrap().a(5), -0.15);
        assert_eq!(TaylorPair::new(5).unwrap().a_coeffs().len(), 6);
    }

    #[test]
    fn matches_dense_brute_force() {
        let order = 61;
        let tp = TaylorPair::new(order).unwrap();
        let (a, b) = brute_force(order);
        for n in 0..=order {
            assert!((tp.a(n) - a[n]).abs() <= 1e-13 * a[n].abs(), "a[{n}]");
            assert!((tp.b(n) - b[n]).abs() <= 1e-13 * b[n].abs(), "b[{n}]");
        }
    }

    #[test]
    fn sparsity_is_structural() {
        let tp = TaylorPair::default();
        for n in 0..=tp.order() {
            if n % 4 != 1 {
                assert_eq!(tp.a(n), 0.0);
            }
            if n % 4 != 0 {
                assert_eq!(tp.b(n), 0.0);
            }
        }
        assert_eq!(tp.s_lanes().len(), 32);
        assert_eq!(tp.c_lanes().len(), 33);
    }

    #[test]
    fn evaluation_at_small_arguments() {
        let tp = TaylorPair::default();
        assert_eq!(tp.eval_s(re(0.0)).unwrap(), re(0.0));
        assert_eq!(tp.eval_c(re(0.0)).unwrap(), re(1.0));
        let s = tp.eval_s(re(0.1)).unwrap();
        let c = tp.eval_c(re(0.1)).unwrap();
        assert!((s.re - (0.1 - 0.15e-5)).abs() < 1e-9);
        assert!((c.re - (1.0 - 0.25e-4)).abs() < 1e-8);
        assert!((s.re - S_01).abs() < 1e-15 && s.im == 0.0);
        assert!((c.re - C_01).abs() < 1e-15 && c.im == 0.0);
        assert!((tp.eval_s(re(0.5)).unwrap().re - S_05).abs() < 1e-14);
        assert!((tp.eval_c(re(0.5)).unwrap().re - C_05).abs() < 1e-14);
    }

    #[test]
    fn evaluation_beyond_the_picard_disc() {
        let tp = TaylorPair::for_radius(1.0).unwrap();
        assert!((tp.eval_s(re(1.0)).unwrap().re - S_10).abs() < 1e-13);
        assert!((tp.eval_c(re(1.0)).unwrap().re - C_10).abs() < 1e-13);
    }

    #[test]
    fn guard_and_tail_errors() {
        let tp = TaylorPair::default();
        let far = re(1.3);
        match tp.eval_s(far) {
            Err(Error::Domain(msg)) => assert!(msg.contains("0.95")),
            other => panic!("expected domain error, got {other:?}"),
        }
        assert!(matches!(
            tp.eval_c(re(1.2)),
            Err(Error::InsufficientOrder { .. })
        ));
        assert!(TaylorPair::for_radius(1.25).is_err());
        let big = TaylorPair::for_radius(1.2).unwrap();
        assert!(big.eval_c(re(1.2)).is_ok());
    }

    #[test]
    fn derivative_series_match_the_system() {
        let tp = TaylorPair::default();
        for z in [
            Complex::new(0.3, 0.2),
            Complex::new(-0.5, 0.4),
            Complex::new(0.1, -0.6),
        ] {
            let s = tp.eval_s(z).unwrap();
            let c = tp.eval_c(z).unwrap();
            assert!((tp.eval_s_prime(z).unwrap() - c * c * c).norm() < 1e-13);
            assert!((tp.eval_c_prime(z).unwrap() + s * s * s).norm() < 1e-13);
        }
    }

    #[test]
    fn radius_constants_values() {
        let r = radius_constants();
        assert_eq!(r.picard_radius, 4.0 / 27.0);
        assert!((r.picard_radius - 0.148_148).abs() < 1e-6);
        assert!((r.scalar_radius - 0.620_403).abs() < 1e-6);
        assert!((r.true_radius - 1.854_074_677_30 / SQRT_2).abs() < 1e-10);
        assert!((r.true_radius - 1.311_028).abs() < 1e-6);
    }

    #[test]
    fn path_validation() {
        assert!(PathPolyline::new(vec![re(0.1)], 1e-3).is_err());
        assert!(PathPolyline::new(vec![re(0.0), re(0.2), re(0.2)], 1e-3).is_err());
        assert!(PathPolyline::new(vec![re(0.0)], 0.0).is_err());
        assert!(PathPolyline::new(vec![], 1e-3).is_err());
    }

    #[test]
    fn rk_degenerate_path() {
        let path = PathPolyline::new(vec![re(0.0)], 1e-3).unwrap();
        let out = rk_continue(&path).unwrap();
        assert_eq!(
            out,
            vec![PathState {
                z: re(0.0),
                s: re(0.0),
                c: re(1.0)
            }]
        );
    }

    #[test]
    fn rk_agrees_with_series_on_the_real_axis() {
        let path = PathPolyline::segment(re(0.1), 1e-3).unwrap();
        let end = *rk_continue(&path).unwrap().last().unwrap();
        let tp = TaylorPair::default();
        assert!((end.s - tp.eval_s(re(0.1)).unwrap()).norm() < 1e-12);
        assert!((end.c - tp.eval_c(re(0.1)).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn rk_respects_rotation_symmetry() {
        let up =
            rk_continue(&PathPolyline::segment(Complex::new(0.0, 0.5), 1e-3).unwrap()).unwrap();
        let right = rk_continue(&PathPolyline::segment(re(0.5), 1e-3).unwrap()).unwrap();
        let (u, r) = (up[1], right[1]);
        assert!((u.s - Complex::i() * r.s).norm() < 1e-12);
        assert!((u.c - r.c).norm() < 1e-12);
        assert!(u.c.im.abs() < 1e-14);
        assert!((r.s.re - S_05).abs() < 1e-12);
    }

    #[test]
    fn rk_refuses_branch_points() {
        let w = lemniscatic_omega();
        let p = Complex::new(0.5 * w, 0.5 * w);
        let path = PathPolyline::segment(p * 1.001, 1e-3).unwrap();
        match rk_continue(&path) {
            Err(Error::BranchProximity { branch_point, .. }) => {
                assert!((branch_point - p).norm() < 1e-12)
            }
            other => panic!("expected branch proximity, got {other:?}"),
        }
        // Detour around the pole through the real axis is fine.
        let ok = PathPolyline::new(vec![re(0.0), re(1.8), Complex::new(1.8, 0.3)], 1e-3).unwrap();
        assert!(rk_continue(&ok).is_ok());
    }
}
