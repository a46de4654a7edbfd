//! The lemniscatic Weierstrass function: invariants `g₂ = 1`, `g₃ = 0`,
//! periods `2ω` and `2iω`.
//!
//! Evaluation reduces `z` into the square `[−ω, ω]²` by whole periods and
//! sums the Laurent expansion `℘(z) = z⁻² + Σ_{k≥2} c_k z^(2k−2)` there. The
//! nearest nonzero lattice points are at distance `2ω`, and `|z₀| ≤ ω√2`
//! inside the square, so the series converges with per-lane ratio at most
//! `1/4`. Internally the regular parts `q(z) = z²℘(z)` and `r(z) = z³℘′(z)`
//! are summed as power series in `z⁴`.

use crate::error::{Error, Result};
use crate::geometry::SquareLattice;
use crate::numerics::{eval_series, lemniscatic_omega, omega_by_agm, Complex};

/// Default number of Laurent coefficients `c_k` (k ≤ 96, 48 nonzero lanes).
pub const DEFAULT_LAURENT_ORDER: usize = 96;

/// Distance from a lattice point below which ℘ reports a pole.
pub const POLE_RADIUS: f64 = 1e-8;

/// Constants of the lemniscatic lattice plus precomputed Laurent data.
/// Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassContext {
    omega: f64,
    g2: f64,
    g3: f64,
    laurent: Vec<f64>,
    laurent_order: usize,
    /// lanes of q(z) = z²℘(z) in z⁴: q = 1 + c₂z⁴ + c₄z⁸ + …
    q_lanes: Vec<f64>,
    /// lanes of r(z) = z³℘′(z) in z⁴: r = −2 + 2c₂z⁴ + 6c₄z⁸ + …
    r_lanes: Vec<f64>,
}

/// `z = z₀ + 2ωm + 2iωn` with `z₀` in the closed fundamental square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeReduction {
    pub z0: Complex,
    pub m: i64,
    pub n: i64,
}

fn round_half_toward_zero(x: f64) -> f64 {
    let t = x.trunc();
    if (x - t).abs() == 0.5 {
        t
    } else {
        x.round()
    }
}

/// Free-function form of [`WeierstrassContext::new`].
pub fn make_context(laurent_order: usize) -> Result<WeierstrassContext> {
    WeierstrassContext::new(laurent_order)
}

impl WeierstrassContext {
    pub fn new(laurent_order: usize) -> Result<Self> {
        if laurent_order < 8 {
            return Err(Error::InvalidParameter(format!(
                "laurent_order must be at least 8, got {laurent_order}"
            )));
        }
        let omega = lemniscatic_omega();
        let agm_route = omega_by_agm();
        if (omega - agm_route).abs() > 1e-10 {
            return Err(Error::Consistency(format!(
                "half-period by quadrature {omega} disagrees with AGM value {agm_route}"
            )));
        }

        let (g2, g3) = (1.0, 0.0);
        let mut c = vec![0.0; laurent_order + 1];
        c[2] = g2 / 20.0;
        c[3] = g3 / 28.0;
        for k in 4..=laurent_order {
            let sum: f64 = (2..=k - 2).map(|m| c[m] * c[k - m]).sum();
            c[k] = 3.0 / ((2 * k + 1) as f64 * (k - 3) as f64) * sum;
        }

        // c_k z^(2k) with k = 2j contributes to lane j of q and r.
        let lanes = laurent_order / 2 + 1;
        let mut q_lanes = vec![0.0; lanes];
        let mut r_lanes = vec![0.0; lanes];
        q_lanes[0] = 1.0;
        r_lanes[0] = -2.0;
        for j in 1..lanes {
            let k = 2 * j;
            q_lanes[j] = c[k];
            r_lanes[j] = (2 * k - 2) as f64 * c[k];
        }

        Ok(Self {
            omega,
            g2,
            g3,
            laurent: c,
            laurent_order,
            q_lanes,
            r_lanes,
        })
    }

    /// Real half-period `ω`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn g2(&self) -> f64 {
        self.g2
    }

    pub fn g3(&self) -> f64 {
        self.g3
    }

    /// Laurent coefficients `c_k`, indexed by `k` (entries 0 and 1 unused).
    pub fn laurent(&self) -> &[f64] {
        &self.laurent
    }

    pub fn laurent_order(&self) -> usize {
        self.laurent_order
    }

    /// The fundamental periods `(2ω, 2iω)`.
    pub fn periods(&self) -> (Complex, Complex) {
        (
            Complex::new(2.0 * self.omega, 0.0),
            Complex::new(0.0, 2.0 * self.omega),
        )
    }

    pub fn lattice(&self) -> SquareLattice {
        SquareLattice::periods(self.omega)
    }

    /// Subtracts whole periods, rounding half toward zero on the boundary.
    pub fn reduce(&self, z: Complex) -> LatticeReduction {
        let period = 2.0 * self.omega;
        let m = round_half_toward_zero(z.re / period);
        let n = round_half_toward_zero(z.im / period);
        LatticeReduction {
            z0: Complex::new(z.re - period * m, z.im - period * n),
            m: m as i64,
            n: n as i64,
        }
    }

    fn lattice_point(&self, red: &LatticeReduction) -> Complex {
        let period = 2.0 * self.omega;
        Complex::new(period * red.m as f64, period * red.n as f64)
    }

    fn reduce_off_lattice(&self, z: Complex) -> Result<LatticeReduction> {
        let red = self.reduce(z);
        if red.z0.norm() < POLE_RADIUS {
            return Err(Error::PoleProximity {
                point: z,
                nearest: self.lattice_point(&red),
                radius: POLE_RADIUS,
            });
        }
        Ok(red)
    }

    /// `(q, r) = (z₀²℘(z₀), z₀³℘′(z₀))` at a reduced argument. Both are
    /// holomorphic at the origin with `q(0) = 1`, `r(0) = −2`.
    pub fn regular_parts(&self, z0: Complex) -> (Complex, Complex) {
        (
            eval_series(&self.q_lanes, 4, 0, z0),
            eval_series(&self.r_lanes, 4, 0, z0),
        )
    }

    pub fn wp(&self, z: Complex) -> Result<Complex> {
        let red = self.reduce_off_lattice(z)?;
        Ok(eval_series(&self.q_lanes, 4, -2, red.z0))
    }

    pub fn wp_prime(&self, z: Complex) -> Result<Complex> {
        let red = self.reduce_off_lattice(z)?;
        Ok(eval_series(&self.r_lanes, 4, -3, red.z0))
    }

    /// `(℘(z), ℘′(z))` from a single reduction.
    pub fn wp_and_prime(&self, z: Complex) -> Result<(Complex, Complex)> {
        let red = self.reduce_off_lattice(z)?;
        let (q, r) = self.regular_parts(red.z0);
        let inv = red.z0.inv();
        let inv2 = inv * inv;
        Ok((q * inv2, r * inv2 * inv))
    }

    /// Addition formula
    /// `℘(z+w) = ¼((℘′z − ℘′w)/(℘z − ℘w))² − ℘z − ℘w`.
    ///
    /// When either argument is a lattice point the formula's limit, the
    /// other argument's ℘ value, is returned.
    pub fn wp_add(&self, z: Complex, w: Complex) -> Result<Complex> {
        if self.reduce(w).z0.norm() < POLE_RADIUS {
            return self.wp(z);
        }
        if self.reduce(z).z0.norm() < POLE_RADIUS {
            return self.wp(w);
        }
        let sum = self.reduce(z + w);
        if sum.z0.norm() < POLE_RADIUS {
            return Err(Error::PoleProximity {
                point: z + w,
                nearest: self.lattice_point(&sum),
                radius: POLE_RADIUS,
            });
        }
        let (pz, dz) = self.wp_and_prime(z)?;
        let (pw, dw) = self.wp_and_prime(w)?;
        let gap = pz - pw;
        if gap.norm() <= 1e-10 {
            return Err(Error::DegenerateAddition(z));
        }
        let slope = (dz - dw) / gap;
        Ok(0.25 * slope * slope - pz - pw)
    }

    /// Duplication formula `℘(2z) = (℘(z)² + ¼)² / ℘′(z)²`.
    pub fn wp_duplicate(&self, z: Complex) -> Result<Complex> {
        let (p, d) = self.wp_and_prime(z)?;
        if d.norm() <= 1e-10 {
            return Err(Error::DegenerateDuplication(z));
        }
        let num = p * p + 0.25;
        Ok(num * num / (d * d))
    }

    /// Half-period translation `℘(z − ω) = ½(℘(z) + ½)/(℘(z) − ½)`.
    pub fn wp_translate_half(&self, z: Complex) -> Result<Complex> {
        let p = self.wp(z)?;
        let den = p - 0.5;
        if den.norm() <= 1e-10 {
            let shifted = z - self.omega;
            return Err(Error::PoleProximity {
                point: z,
                nearest: self.lattice().nearest(shifted) + self.omega,
                radius: POLE_RADIUS,
            });
        }
        Ok(0.5 * (p + 0.5) / den)
    }
}

impl Default for WeierstrassContext {
    fn default() -> Self {
        Self::new(DEFAULT_LAURENT_ORDER).expect("default context is consistent")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx() -> WeierstrassContext {
        WeierstrassContext::default()
    }

    /// (z, ℘(z), ℘′(z)) as (re, im) pairs.
    type Sample = ((f64, f64), (f64, f64), (f64, f64));

    // ℘ = −½ + 1/sn²(z | m = ½), evaluated with mpmath at 30 digits.

    const ORACLE: [Sample; 6] = [
        (
            (0.37, 0.0),
            (7.311_449_037_610_119_695, 0.0),
            (-39.447_299_909_940_329_51, 0.0),
        ),
        (
            (0.25, 0.1),
            (9.990_734_186_029_894_196, -9.509_984_896_385_298_502),
            (-42.617_177_056_057_692_56, 93.166_757_684_792_541_46),
        ),
        (
            (0.7, 0.0),
            (2.065_414_548_758_010_904, 0.0),
            (-5.760_060_846_911_095_851, 0.0),
        ),
        (
            (1.1, 0.0),
            (0.888_439_389_135_122_110_0, 0.0),
            (-1.384_423_594_307_577_089, 0.0),
        ),
        (
            (0.5, 0.2),
            (2.507_514_055_540_551_392, -2.368_105_908_956_171_737),
            (-5.280_345_828_260_669_424, 11.664_807_905_912_910_47),
        ),
        (
            (1.2, -0.8),
            (0.218_191_653_799_336_567_1, 0.350_703_963_939_049_869_1),
            (0.218_410_627_927_271_577_6, -0.739_173_724_442_710_527_1),
        ),
    ];

    #[test]
    fn context_constants() {
        let ctx = ctx();
        assert!((ctx.omega() - 1.854_074_677_30).abs() < 1e-10);
        assert!((1.854_074_677..=1.854_074_678).contains(&ctx.omega()));
        assert_eq!(ctx.laurent()[2], 1.0 / 20.0);
        assert_eq!(ctx.laurent()[3], 0.0);
        assert!((ctx.laurent()[4] - 1.0 / 1200.0).abs() < 1e-18);
        for k in (3..=ctx.laurent_order()).step_by(2) {
            assert_eq!(ctx.laurent()[k], 0.0, "c_{k}");
        }
        assert!(WeierstrassContext::new(7).is_err());
    }

    #[test]
    fn reduction_examples() {
        let ctx = ctx();
        let w = ctx.omega();
        let r = ctx.reduce(Complex::new(0.0, 0.0));
        assert_eq!((r.z0, r.m, r.n), (Complex::new(0.0, 0.0), 0, 0));
        let r = ctx.reduce(Complex::new(2.0 * w, 0.0));
        assert_eq!((r.m, r.n), (1, 0));
        assert!(r.z0.norm() < 1e-15);
        let r = ctx.reduce(Complex::new(w, 2.0 * w));
        assert_eq!((r.m, r.n), (0, 1));
        assert!((r.z0 - Complex::new(w, 0.0)).norm() < 1e-15);
        let r = ctx.reduce(Complex::new(-w, -3.0 * w));
        assert_eq!((r.m, r.n), (0, -1));
        assert!((r.z0 - Complex::new(-w, -w)).norm() < 1e-15);
    }

    #[test]
    fn midpoint_values() {
        let ctx = ctx();
        let w = ctx.omega();
        assert!((ctx.wp(Complex::new(w, 0.0)).unwrap() - 0.5).norm() < 1e-12);
        assert!((ctx.wp(Complex::new(0.0, w)).unwrap() + 0.5).norm() < 1e-12);
        assert!(ctx.wp(Complex::new(w, w)).unwrap().norm() < 1e-12);
        assert!(ctx.wp_prime(Complex::new(w, 0.0)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn against_jacobi_oracle() {
        let ctx = ctx();
        for ((x, y), (pr, pi), (dr, di)) in ORACLE {
            let z = Complex::new(x, y);
            let p = ctx.wp(z).unwrap();
            let d = ctx.wp_prime(z).unwrap();
            let pe = Complex::new(pr, pi);
            let de = Complex::new(dr, di);
            assert!(
                (p - pe).norm() <= 1e-13 * pe.norm().max(1.0),
                "wp({z}) = {p}"
            );
            assert!(
                (d - de).norm() <= 1e-13 * de.norm().max(1.0),
                "wp'({z}) = {d}"
            );
        }
    }

    #[test]
    fn pole_proximity() {
        let ctx = ctx();
        let w = ctx.omega();
        let z = Complex::new(2.0 * w + 1e-10, 2.0 * w);
        match ctx.wp(z) {
            Err(Error::PoleProximity { nearest, .. }) => {
                assert!((nearest - Complex::new(2.0 * w, 2.0 * w)).norm() < 1e-12)
            }
            other => panic!("expected pole, got {other:?}"),
        }
        assert!(ctx.wp_prime(Complex::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn addition_formula() {
        let ctx = ctx();
        let w = ctx.omega();
        let v = ctx
            .wp_add(Complex::new(0.7, 0.0), Complex::new(0.4, 0.0))
            .unwrap();
        assert!((v - ctx.wp(Complex::new(1.1, 0.0)).unwrap()).norm() < 1e-9);
        let (a, b) = (Complex::new(0.3, 0.2), Complex::new(-0.5, 0.9));
        assert!((ctx.wp_add(a, b).unwrap() - ctx.wp_add(b, a).unwrap()).norm() < 1e-12);
        let period = Complex::new(2.0 * w, 0.0);
        assert!((ctx.wp_add(a, period).unwrap() - ctx.wp(a).unwrap()).norm() < 1e-12);
        assert!(matches!(
            ctx.wp_add(a, a),
            Err(Error::DegenerateAddition(_))
        ));
        assert!(matches!(
            ctx.wp_add(a, -a),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn duplication_formula() {
        let ctx = ctx();
        let w = ctx.omega();
        let d = ctx.wp_duplicate(Complex::new(0.3, 0.0)).unwrap();
        assert!((d - ctx.wp(Complex::new(0.6, 0.0)).unwrap()).norm() < 1e-9);
        let third = Complex::new(w / 3.0, 0.0);
        let via_add = ctx.wp_add(third, third + Complex::new(2.0 * w, 0.0));
        // ℘(z) = ℘(z + 2ω) makes the plain addition degenerate.
        assert!(matches!(via_add, Err(Error::DegenerateAddition(_))));
        let nudge = Complex::new(1e-3, 0.0);
        let split = ctx.wp_add(third + nudge, third - nudge).unwrap();
        assert!((ctx.wp_duplicate(third).unwrap() - split).norm() < 1e-9);
        let z = Complex::new(0.25, 0.1);
        let d = ctx.wp_duplicate(z).unwrap();
        assert!((d - ctx.wp(Complex::new(0.5, 0.2)).unwrap()).norm() < 1e-9);
        assert!(matches!(
            ctx.wp_duplicate(Complex::new(w, 0.0)),
            Err(Error::DegenerateDuplication(_))
        ));
    }

    #[test]
    fn half_period_translation() {
        let ctx = ctx();
        let w = ctx.omega();
        assert!(matches!(
            ctx.wp_translate_half(Complex::new(w, 0.0)),
            Err(Error::PoleProximity { .. })
        ));
        let t = ctx.wp_translate_half(Complex::new(0.0, w)).unwrap();
        assert!(t.norm() < 1e-12);
        let z = Complex::new(0.9, 0.0);
        let t = ctx.wp_translate_half(z).unwrap();
        assert!((t - ctx.wp(z - w).unwrap()).norm() < 1e-9);
    }

    proptest! {
        #[test]
        fn parity_is_exact(x in -1.8f64..1.8, y in -1.8f64..1.8) {
            let ctx = ctx();
            let z = Complex::new(x, y);
            prop_assume!(z.norm() > 0.05);
            prop_assert!((ctx.wp(-z).unwrap() - ctx.wp(z).unwrap()).norm() <= 1e-12 * ctx.wp(z).unwrap().norm().max(1.0));
            prop_assert!((ctx.wp_prime(-z).unwrap() + ctx.wp_prime(z).unwrap()).norm() <= 1e-12 * ctx.wp_prime(z).unwrap().norm().max(1.0));
        }

        #[test]
        fn rotation_antisymmetry(x in -1.85f64..1.85, y in -1.85f64..1.85) {
            let ctx = ctx();
            let z = Complex::new(x, y);
            prop_assume!(z.norm() > 0.05);
            let p = ctx.wp(z).unwrap();
            let q = ctx.wp(Complex::i() * z).unwrap();
            prop_assert!((p + q).norm() <= 1e-11 * p.norm().max(1.0));
        }

        #[test]
        fn differential_equation(x in -1.85f64..1.85, y in -1.85f64..1.85) {
            let ctx = ctx();
            let z = Complex::new(x, y);
            prop_assume!(z.norm() > 0.05);
            let (p, d) = ctx.wp_and_prime(z).unwrap();
            let rhs = 4.0 * p * p * p - p;
            prop_assert!((d * d - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
        }

        #[test]
        fn periodicity(x in -1.85f64..1.85, y in -1.85f64..1.85) {
            let ctx = ctx();
            let z = Complex::new(x, y);
            prop_assume!(z.norm() > 0.05);
            let (p1, p2) = ctx.periods();
            let p = ctx.wp(z).unwrap();
            prop_assert!((ctx.wp(z + p1).unwrap() - p).norm() <= 1e-10 * p.norm().max(1.0));
            prop_assert!((ctx.wp(z + p2).unwrap() - p).norm() <= 1e-10 * p.norm().max(1.0));
        }
    }
}
