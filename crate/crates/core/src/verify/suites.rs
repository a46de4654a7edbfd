//! Residual definitions for every suite.
//!
//! Series-domain suites compare quantities of size O(1) and use absolute
//! residuals. Suites on the fundamental cell meet values of ℘ and ℘′ as large
//! as 10⁴ next to the excluded discs, so they use the scaled residual
//! `|x − y| / max(1, |x|, |y|)`.

use std::f64::consts::SQRT_2;

use super::{coefficients, GridSpec, Sample, Suite};
use crate::error::Result;
use crate::extensions::{
    c_branch, c_squared, jacobi_sd_agm, pole_order_probe, s_branch, s_squared, sc_product, sd, sl,
    EllipticFn, BRANCH_FRACTION,
};
use crate::geometry::SquareLattice;
use crate::numerics::{eval_series, Complex};
use crate::series::{guarded_radius, TaylorPair};
use crate::weierstrass::WeierstrassContext;

/// Fixed second argument of the `wp_add` suite.
pub const WP_ADD_SHIFT: Complex = Complex::new(0.4, 0.3);

/// Half-width of the default `branch_sqrt` grid (corner modulus ≈ 1.20).
pub const BRANCH_SQRT_WIDTH: f64 = 0.85;

/// Offsets of the simple-pole scaling probe.
pub const POLE_PROBE_OFFSETS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Allowed deviation of the fitted pole order from 1.
pub const POLE_ORDER_SLACK: f64 = 0.05;

/// Step of the central differences in `briot_bouquet`.
pub const FD_STEP: f64 = 1e-5;

fn scaled(x: Complex, y: Complex) -> f64 {
    (x - y).norm() / 1f64.max(x.norm()).max(y.norm())
}

fn min_distance(lattices: &[SquareLattice], z: Complex) -> f64 {
    lattices
        .iter()
        .map(|l| l.distance(z))
        .fold(f64::INFINITY, f64::min)
}

/// Singular-point lattices relevant to each suite.
fn singular_lattices(ctx: &WeierstrassContext, suite: Suite) -> Vec<SquareLattice> {
    let w = ctx.omega();
    let periods = SquareLattice::periods(w);
    let poles = SquareLattice::extension_poles(w);
    let shifted = |lat: SquareLattice, by: Complex| SquareLattice {
        offset: lat.offset + by,
        spacing: lat.spacing,
    };
    match suite {
        Suite::WpOde | Suite::WpAntisym => vec![periods],
        Suite::WpDup => vec![SquareLattice::half_periods(w)],
        Suite::WpAdd => vec![
            periods,
            shifted(periods, -WP_ADD_SHIFT),
            shifted(periods, WP_ADD_SHIFT),
        ],
        Suite::WpTranslate => vec![periods, shifted(periods, Complex::new(w, 0.0))],
        Suite::Periodicity => vec![periods, poles],
        Suite::SdOracle => vec![SquareLattice::sd_poles(w)],
        Suite::SdSqInvWp => vec![periods, SquareLattice::sd_poles(w)],
        Suite::PoleProbe => vec![],
        // Series suites: the branch points of s, c.
        _ => vec![poles],
    }
}

fn series_domain(suite: Suite) -> bool {
    matches!(
        suite,
        Suite::Quartic
            | Suite::ISymmetry
            | Suite::Reality
            | Suite::Thm5Sc
            | Suite::Thm6C
            | Suite::Thm7S
            | Suite::SecondOrderSystem
            | Suite::FourthOrderOde
            | Suite::BriotBouquet
    )
}

fn branch_limit(ctx: &WeierstrassContext) -> f64 {
    BRANCH_FRACTION * ctx.omega() / SQRT_2
}

/// Exclusion rule shared by sampling and by callers that want to check it.
///
/// A sample is excluded when it lies within `radius` of a singular point of
/// the suite, and, for series suites, when it lies outside the guarded series
/// disc `|z| ≤ 0.95·ω/√2` (`branch_sqrt`: outside `|z| < 0.98·ω/√2`).
pub(crate) fn excluded(ctx: &WeierstrassContext, suite: Suite, z: Complex, radius: f64) -> bool {
    if series_domain(suite) {
        let extent = if suite == Suite::BriotBouquet {
            z.norm() + FD_STEP
        } else {
            z.norm()
        };
        if extent > guarded_radius() {
            return true;
        }
    }
    if suite == Suite::BranchSqrt && z.norm() >= branch_limit(ctx) {
        return true;
    }
    min_distance(&singular_lattices(ctx, suite), z) < radius
}

/// Everything a suite needs, prepared once per run.
pub(crate) struct SuiteRunner<'a> {
    ctx: &'a WeierstrassContext,
    suite: Suite,
    grid: GridSpec,
    taylor: Option<TaylorPair>,
    /// Lanes of S'' / z⁰, S'''' etc. for the derivative suites.
    derived: Option<DerivedSeries>,
}

struct DerivedSeries {
    /// S'' = Σ (4j+2)(4j+1) A_j z^{4j}
    s2: Vec<f64>,
    /// C'' = Σ 4j(4j−1) B_j z^{4j−2}
    c2: Vec<f64>,
    /// S'''' = Σ (4j+2)(4j+1)(4j)(4j−1) A_j z^{4j−2}
    s4: Vec<f64>,
    /// C'''' = Σ 4j(4j−1)(4j−2)(4j−3) B_j z^{4j−4}
    c4: Vec<f64>,
}

impl DerivedSeries {
    fn new(tp: &TaylorPair) -> Self {
        let al = tp.s_lanes();
        let be = tp.c_lanes();
        let len = al.len().min(be.len());
        let a = coefficients::cauchy(al, al, len);
        let b = coefficients::cauchy(be, be, len);
        let s2 = (0..len)
            .map(|j| ((4 * j + 2) * (4 * j + 1)) as f64 * a[j])
            .collect();
        let c2 = (1..len)
            .map(|j| ((4 * j) * (4 * j - 1)) as f64 * b[j])
            .collect();
        let s4 = (1..len)
            .map(|j| ((4 * j + 2) * (4 * j + 1) * (4 * j) * (4 * j - 1)) as f64 * a[j])
            .collect();
        let c4 = (1..len)
            .map(|j| ((4 * j) * (4 * j - 1) * (4 * j - 2) * (4 * j - 3)) as f64 * b[j])
            .collect();
        Self { s2, c2, s4, c4 }
    }

    fn s2(&self, z: Complex) -> Complex {
        eval_series(&self.s2, 4, 0, z)
    }

    fn c2(&self, z: Complex) -> Complex {
        eval_series(&self.c2, 4, 2, z)
    }

    fn s4(&self, z: Complex) -> Complex {
        eval_series(&self.s4, 4, 2, z)
    }

    fn c4(&self, z: Complex) -> Complex {
        eval_series(&self.c4, 4, 0, z)
    }
}

impl<'a> SuiteRunner<'a> {
    pub(crate) fn new(
        ctx: &'a WeierstrassContext,
        suite: Suite,
        grid: &GridSpec,
        samples: &[Complex],
    ) -> Result<Self> {
        let needs_series = series_domain(suite) || suite == Suite::BranchSqrt;
        let taylor = if needs_series {
            let reach = samples
                .iter()
                .filter(|z| !excluded(ctx, suite, **z, grid.exclusion_radius))
                .map(|z| z.norm() + FD_STEP)
                .fold(0.0, f64::max)
                .min(guarded_radius());
            Some(TaylorPair::for_radius(reach)?)
        } else {
            None
        };
        let derived = match suite {
            Suite::SecondOrderSystem | Suite::FourthOrderOde => {
                taylor.as_ref().map(DerivedSeries::new)
            }
            _ => None,
        };
        Ok(Self {
            ctx,
            suite,
            grid: *grid,
            taylor,
            derived,
        })
    }

    pub(crate) fn sample(&self, z: Complex) -> Sample {
        if excluded(self.ctx, self.suite, z, self.grid.exclusion_radius) {
            return Sample::Excluded;
        }
        // An evaluation error on an admitted sample is a failure, not an exclusion.
        Sample::Residual(self.residual(z).unwrap_or(f64::MAX))
    }

    fn taylor(&self) -> &TaylorPair {
        self.taylor
            .as_ref()
            .expect("series suites prepare a TaylorPair")
    }

    fn residual(&self, z: Complex) -> Result<f64> {
        let ctx = self.ctx;
        let i = Complex::i();
        Ok(match self.suite {
            Suite::Quartic => {
                let s = self.taylor().eval_s(z)?;
                let c = self.taylor().eval_c(z)?;
                (s * s * s * s + c * c * c * c - 1.0).norm()
            }
            Suite::ISymmetry => {
                let tp = self.taylor();
                let ds = tp.eval_s(i * z)? - i * tp.eval_s(z)?;
                let dc = tp.eval_c(i * z)? - tp.eval_c(z)?;
                ds.norm().max(dc.norm())
            }
            Suite::Reality => {
                let tp = self.taylor();
                let ds = tp.eval_s(z.conj())? - tp.eval_s(z)?.conj();
                let dc = tp.eval_c(z.conj())? - tp.eval_c(z)?.conj();
                ds.norm().max(dc.norm())
            }
            Suite::WpOde => {
                let (p, d) = ctx.wp_and_prime(z)?;
                scaled(d * d, 4.0 * p * p * p - p)
            }
            Suite::WpDup => scaled(ctx.wp_duplicate(z)?, ctx.wp(2.0 * z)?),
            Suite::WpAdd => scaled(ctx.wp_add(z, WP_ADD_SHIFT)?, ctx.wp(z + WP_ADD_SHIFT)?),
            Suite::WpTranslate => scaled(ctx.wp_translate_half(z)?, ctx.wp(z - ctx.omega())?),
            Suite::WpAntisym => scaled(ctx.wp(i * z)?, -ctx.wp(z)?),
            Suite::Periodicity => {
                let (p1, p2) = ctx.periods();
                let mut worst = 0.0_f64;
                for shift in [p1, p2, -p1, p1 + p2] {
                    worst = worst.max(scaled(ctx.wp(z + shift)?, ctx.wp(z)?));
                    for f in [EllipticFn::S, EllipticFn::C, EllipticFn::P] {
                        worst = worst.max(scaled(f.eval(ctx, z + shift)?, f.eval(ctx, z)?));
                    }
                }
                worst
            }
            Suite::Thm5Sc => {
                let tp = self.taylor();
                let sc = tp.eval_s(z)? * tp.eval_c(z)?;
                let via_sd = 0.5 * sd(ctx, 2.0 * z)?;
                let via_sl = sl(ctx, SQRT_2 * z)? / SQRT_2;
                let direct = sc_product(ctx, z)?;
                (sc - via_sd)
                    .norm()
                    .max((sc - via_sl).norm())
                    .max((sc - direct).norm())
            }
            Suite::Thm6C => {
                let c = self.taylor().eval_c(z)?;
                (c_squared(ctx, z)? - c * c).norm()
            }
            Suite::Thm7S => {
                let s = self.taylor().eval_s(z)?;
                (s_squared(ctx, z)? - s * s).norm()
            }
            Suite::SdOracle => scaled(sd(ctx, z)?, jacobi_sd_agm(z)?),
            Suite::SdSqInvWp => {
                let v = sd(ctx, z)?;
                scaled(v * v * ctx.wp(z)?, Complex::new(1.0, 0.0))
            }
            Suite::PythagoreanSquares => {
                let s = s_squared(ctx, z)?;
                let c = c_squared(ctx, z)?;
                scaled(s * s + c * c, Complex::new(1.0, 0.0))
            }
            Suite::SecondOrderSystem => {
                let d = self.derived.as_ref().expect("prepared");
                let s = s_squared(ctx, z)?;
                let c = c_squared(ctx, z)?;
                let rs = d.s2(z) - (2.0 * c * c * c - 6.0 * s * s * c);
                let rc = d.c2(z) - (2.0 * s * s * s - 6.0 * c * c * s);
                rs.norm().max(rc.norm())
            }
            Suite::FourthOrderOde => {
                let d = self.derived.as_ref().expect("prepared");
                let rhs = |f: Complex| {
                    let f2 = f * f;
                    -12.0 * f * (32.0 * f2 * f2 - 40.0 * f2 + 9.0)
                };
                let rs = d.s4(z) - rhs(s_squared(ctx, z)?);
                let rc = d.c4(z) - rhs(c_squared(ctx, z)?);
                rs.norm().max(rc.norm())
            }
            Suite::BriotBouquet => self.briot_bouquet(z)?,
            Suite::PoleProbe => self.pole_probe(z)?,
            Suite::BranchSqrt => {
                let s = s_branch(ctx, z)?;
                let c = c_branch(ctx, z)?;
                let mut worst = (s * s * s * s + c * c * c * c - 1.0).norm();
                if z.norm() <= guarded_radius() {
                    let tp = self.taylor();
                    worst = worst
                        .max((s - tp.eval_s(z)?).norm())
                        .max((c - tp.eval_c(z)?).norm());
                }
                worst
            }
        })
    }

    /// `(C')⁴ = 16C²(1 − C²)³`, the substitutions `E = 1/C`,
    /// `F = 1/(E − 1)`, `G² = F + ½` with `G = √2·℘`, and the scalar form
    /// `s' = (1 − s⁴)^(3/4)`. Derivatives of C, E, F by central differences.
    fn briot_bouquet(&self, z: Complex) -> Result<f64> {
        let ctx = self.ctx;
        let h = FD_STEP;
        let c_at = |w: Complex| c_squared(ctx, w);
        let (cm, c0, cp) = (c_at(z - h)?, c_at(z)?, c_at(z + h)?);
        let d = |m: Complex, p: Complex| (p - m) / (2.0 * h);

        let dc = d(cm, cp);
        let r_c = scaled(dc.powu(4), 16.0 * c0 * c0 * (1.0 - c0 * c0).powu(3));

        let e = |c: Complex| c.inv();
        let (e0, de) = (e(c0), d(e(cm), e(cp)));
        let r_e = scaled(de.powu(4), 16.0 * (e0 * e0 - 1.0).powu(3));

        let f = |c: Complex| (e(c) - 1.0).inv();
        let (f0, df) = (f(c0), d(f(cm), f(cp)));
        let r_f = scaled(df.powu(4), 128.0 * f0 * f0 * (f0 + 0.5).powu(3));

        let g = SQRT_2 * ctx.wp(z)?;
        let r_g = scaled(g * g, f0 + 0.5);

        let tp = self.taylor();
        let s = tp.eval_s(z)?;
        let scalar = (1.0 - s.powu(4)).powf(0.75);
        let r_scalar = (tp.eval_s_prime(z)? - scalar).norm();

        Ok(r_c.max(r_e).max(r_f).max(r_g).max(r_scalar))
    }

    /// At the pole p of S nearest to `z`: `|℘(p)² + ¼|` plus the amount by
    /// which the fitted pole order of S, C or P strays more than
    /// [`POLE_ORDER_SLACK`] from 1.
    fn pole_probe(&self, z: Complex) -> Result<f64> {
        let ctx = self.ctx;
        let p = SquareLattice::extension_poles(ctx.omega()).nearest(z);
        let wp = ctx.wp(p)?;
        let mut worst = (wp * wp + 0.25).norm();
        for f in [EllipticFn::S, EllipticFn::C, EllipticFn::P] {
            let order = pole_order_probe(ctx, f, p, &POLE_PROBE_OFFSETS)?;
            worst = worst.max(((order - 1.0).abs() - POLE_ORDER_SLACK).max(0.0));
        }
        Ok(worst)
    }

    /// Checks that do not live on the grid: coefficient-level ODE residuals,
    /// sparsity of the Taylor coefficients, and non-negativity of S on [0, 1].
    pub(crate) fn global_residual(&self) -> Option<(f64, Complex)> {
        let origin = Complex::new(0.0, 0.0);
        match self.suite {
            Suite::ISymmetry => {
                let tp = self.taylor();
                let worst = (0..=tp.order())
                    .map(|n| {
                        let a = if n % 4 != 1 { tp.a(n).abs() } else { 0.0 };
                        let b = if n % 4 != 0 { tp.b(n).abs() } else { 0.0 };
                        a.max(b)
                    })
                    .fold(0.0, f64::max);
                Some((worst, origin))
            }
            Suite::SecondOrderSystem => Some((coefficients::second_order_max(40), origin)),
            Suite::FourthOrderOde => Some((coefficients::fourth_order_max(32), origin)),
            Suite::Thm7S => {
                let mut worst = (0.0, origin);
                for k in 0..100 {
                    let t = Complex::new(k as f64 / 99.0, 0.0);
                    let v = match s_squared(self.ctx, t) {
                        Ok(v) => (-v.re - 1e-12).max(v.im.abs()).max(0.0),
                        Err(_) => f64::MAX,
                    };
                    if v > worst.0 {
                        worst = (v, t);
                    }
                }
                Some(worst)
            }
            _ => None,
        }
    }
}
