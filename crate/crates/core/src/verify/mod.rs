//! Identity suites evaluated over rectangular complex grids.
//!
//! Each [`Suite`] names one identity (or a small family) from the theory of
//! `s`, `c` and the lemniscatic ℘, evaluates its residual at every grid
//! sample that is not within `exclusion_radius` of a singular point relevant
//! to that suite, and reports the maximum. Reports are deterministic: samples
//! are evaluated in parallel but reduced in grid order.

pub mod coefficients;
mod suites;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Complex, Tolerance};
use crate::weierstrass::WeierstrassContext;

pub use suites::{BRANCH_SQRT_WIDTH, WP_ADD_SHIFT};

/// The identity suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Quartic,
    ISymmetry,
    Reality,
    WpOde,
    WpDup,
    WpAdd,
    WpTranslate,
    WpAntisym,
    Periodicity,
    Thm5Sc,
    Thm6C,
    Thm7S,
    SdOracle,
    SdSqInvWp,
    PythagoreanSquares,
    SecondOrderSystem,
    FourthOrderOde,
    BriotBouquet,
    PoleProbe,
    BranchSqrt,
}

impl Suite {
    pub const ALL: [Suite; 20] = [
        Suite::Quartic,
        Suite::ISymmetry,
        Suite::Reality,
        Suite::WpOde,
        Suite::WpDup,
        Suite::WpAdd,
        Suite::WpTranslate,
        Suite::WpAntisym,
        Suite::Periodicity,
        Suite::Thm5Sc,
        Suite::Thm6C,
        Suite::Thm7S,
        Suite::SdOracle,
        Suite::SdSqInvWp,
        Suite::PythagoreanSquares,
        Suite::SecondOrderSystem,
        Suite::FourthOrderOde,
        Suite::BriotBouquet,
        Suite::PoleProbe,
        Suite::BranchSqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Quartic => "quartic",
            Suite::ISymmetry => "i_symmetry",
            Suite::Reality => "reality",
            Suite::WpOde => "wp_ode",
            Suite::WpDup => "wp_dup",
            Suite::WpAdd => "wp_add",
            Suite::WpTranslate => "wp_translate",
            Suite::WpAntisym => "wp_antisym",
            Suite::Periodicity => "periodicity",
            Suite::Thm5Sc => "thm5_sc",
            Suite::Thm6C => "thm6_C",
            Suite::Thm7S => "thm7_S",
            Suite::SdOracle => "sd_oracle",
            Suite::SdSqInvWp => "sd_sq_inv_wp",
            Suite::PythagoreanSquares => "pythagorean_squares",
            Suite::SecondOrderSystem => "second_order_system",
            Suite::FourthOrderOde => "fourth_order_ode",
            Suite::BriotBouquet => "briot_bouquet",
            Suite::PoleProbe => "pole_probe",
            Suite::BranchSqrt => "branch_sqrt",
        }
    }

    /// Comma-separated list of every suite name.
    pub fn valid_names() -> String {
        Self::ALL.map(Suite::name).join(", ")
    }

    /// Tolerance used by the default profile.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::Quartic => 1e-12,
            Suite::ISymmetry => 1e-13,
            Suite::Reality => 1e-15,
            Suite::BriotBouquet => 1e-6,
            Suite::WpOde
            | Suite::WpDup
            | Suite::WpAdd
            | Suite::WpTranslate
            | Suite::WpAntisym
            | Suite::SdOracle
            | Suite::SdSqInvWp
            | Suite::PoleProbe => 1e-9,
            Suite::Periodicity
            | Suite::Thm5Sc
            | Suite::Thm6C
            | Suite::Thm7S
            | Suite::PythagoreanSquares
            | Suite::SecondOrderSystem
            | Suite::FourthOrderOde
            | Suite::BranchSqrt => 1e-10,
        }
    }

    /// Default sampling grid for the suite.
    pub fn default_grid(self, omega: f64) -> GridSpec {
        let origin = Complex::new(0.0, 0.0);
        let series = GridSpec {
            center: origin,
            half_width: 0.6,
            points_per_side: 41,
            exclusion_radius: 0.0,
        };
        let cell = GridSpec {
            center: origin,
            half_width: omega,
            points_per_side: 41,
            exclusion_radius: 0.05,
        };
        match self {
            Suite::Quartic
            | Suite::ISymmetry
            | Suite::Reality
            | Suite::Thm5Sc
            | Suite::Thm6C
            | Suite::Thm7S
            | Suite::SecondOrderSystem
            | Suite::FourthOrderOde => series,
            Suite::WpOde
            | Suite::WpDup
            | Suite::WpAdd
            | Suite::WpTranslate
            | Suite::WpAntisym
            | Suite::Periodicity
            | Suite::SdOracle
            | Suite::SdSqInvWp
            | Suite::PythagoreanSquares => cell,
            Suite::BriotBouquet => GridSpec {
                center: Complex::new(0.3, 0.0),
                half_width: 0.2,
                points_per_side: 21,
                exclusion_radius: 0.0,
            },
            Suite::PoleProbe => GridSpec {
                center: origin,
                half_width: omega,
                points_per_side: 9,
                exclusion_radius: 0.0,
            },
            Suite::BranchSqrt => GridSpec {
                center: origin,
                half_width: BRANCH_SQRT_WIDTH,
                points_per_side: 41,
                exclusion_radius: 0.02,
            },
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite {
                name: s.to_string(),
                valid: Self::valid_names(),
            })
    }
}

/// Square grid of `points_per_side²` samples centred on `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub center: Complex,
    pub half_width: f64,
    pub points_per_side: usize,
    pub exclusion_radius: f64,
}

impl GridSpec {
    pub fn new(
        center: Complex,
        half_width: f64,
        points_per_side: usize,
        exclusion_radius: f64,
    ) -> Result<Self> {
        let grid = Self {
            center,
            half_width,
            points_per_side,
            exclusion_radius,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points_per_side < 2 {
            return Err(Error::InvalidParameter(format!(
                "points_per_side must be at least 2, got {}",
                self.points_per_side
            )));
        }
        if !(self.half_width >= 0.0 && self.half_width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "half_width must be finite and non-negative, got {}",
                self.half_width
            )));
        }
        if !(self.exclusion_radius >= 0.0 && self.exclusion_radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "exclusion_radius must be finite and non-negative, got {}",
                self.exclusion_radius
            )));
        }
        if !(self.center.re.is_finite() && self.center.im.is_finite()) {
            return Err(Error::InvalidParameter("grid center must be finite".into()));
        }
        Ok(())
    }

    /// Samples in row-major order: imaginary part outer, real part inner,
    /// both increasing.
    pub fn samples(&self) -> Vec<Complex> {
        let n = self.points_per_side;
        let step = 2.0 * self.half_width / (n - 1) as f64;
        let coord = |i: usize| -self.half_width + step * i as f64;
        (0..n)
            .flat_map(|j| (0..n).map(move |i| (i, j)))
            .map(|(i, j)| self.center + Complex::new(coord(i), coord(j)))
            .collect()
    }

    fn summary(&self) -> GridSummary {
        GridSummary {
            center: [self.center.re, self.center.im],
            half_width: self.half_width,
            points_per_side: self.points_per_side,
            exclusion_radius: self.exclusion_radius,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub center: [f64; 2],
    pub half_width: f64,
    pub points_per_side: usize,
    pub exclusion_radius: f64,
}

/// Outcome of one suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub suite: String,
    pub grid: GridSummary,
    pub samples_evaluated: usize,
    pub samples_excluded: usize,
    pub max_residual: f64,
    #[serde(rename = "argmax")]
    pub argmax_point: [f64; 2],
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityReport {
    pub fn argmax(&self) -> Complex {
        Complex::new(self.argmax_point[0], self.argmax_point[1])
    }
}

/// Named tolerance sets for [`Verifier::run_all`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ToleranceProfile {
    #[default]
    Default,
    /// Every default tolerance divided by 10.
    Strict,
}

impl ToleranceProfile {
    pub fn tolerance(self, suite: Suite) -> f64 {
        match self {
            ToleranceProfile::Default => suite.default_tolerance(),
            ToleranceProfile::Strict => suite.default_tolerance() / 10.0,
        }
    }
}

impl FromStr for ToleranceProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(Self::Default),
            "strict" => Ok(Self::Strict),
            other => Err(Error::InvalidParameter(format!(
                "unknown tolerance profile `{other}` (expected default or strict)"
            ))),
        }
    }
}

/// Per-sample outcome before reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Sample {
    Excluded,
    Residual(f64),
}

/// Runs suites against a shared ℘ context.
#[derive(Debug, Clone, Default)]
pub struct Verifier {
    ctx: WeierstrassContext,
}

impl Verifier {
    pub fn new(ctx: WeierstrassContext) -> Self {
        Self { ctx }
    }

    pub fn context(&self) -> &WeierstrassContext {
        &self.ctx
    }

    /// Whether `z` is excluded from `suite` on a grid with this exclusion
    /// radius.
    pub fn is_excluded(&self, suite: Suite, z: Complex, exclusion_radius: f64) -> bool {
        suites::excluded(&self.ctx, suite, z, exclusion_radius)
    }

    pub fn run_suite(
        &self,
        suite: Suite,
        grid: &GridSpec,
        tol: Tolerance,
    ) -> Result<IdentityReport> {
        grid.validate()?;
        let samples = grid.samples();
        let runner = suites::SuiteRunner::new(&self.ctx, suite, grid, &samples)?;
        let outcomes: Vec<Sample> = samples.par_iter().map(|&z| runner.sample(z)).collect();

        let mut evaluated = 0;
        let mut excluded = 0;
        let mut max_residual = 0.0_f64;
        let mut argmax = grid.center;
        for (z, outcome) in samples.iter().zip(&outcomes) {
            match *outcome {
                Sample::Excluded => excluded += 1,
                Sample::Residual(r) => {
                    evaluated += 1;
                    let r = if r.is_nan() {
                        f64::MAX
                    } else {
                        r.min(f64::MAX)
                    };
                    if r > max_residual || evaluated == 1 && r >= max_residual {
                        max_residual = r;
                        argmax = *z;
                    }
                }
            }
        }
        if let Some((extra, at)) = runner.global_residual() {
            let extra = if extra.is_nan() {
                f64::MAX
            } else {
                extra.min(f64::MAX)
            };
            if extra > max_residual {
                max_residual = extra;
                argmax = at;
            }
        }

        let threshold = tol.abs_tol + tol.rel_tol;
        Ok(IdentityReport {
            suite: suite.name().to_string(),
            grid: grid.summary(),
            samples_evaluated: evaluated,
            samples_excluded: excluded,
            max_residual,
            argmax_point: [argmax.re, argmax.im],
            tolerance: threshold,
            passed: max_residual <= threshold,
        })
    }

    /// Runs `suite` on its default grid at the profile's tolerance.
    pub fn run_default(&self, suite: Suite, profile: ToleranceProfile) -> Result<IdentityReport> {
        let grid = suite.default_grid(self.ctx.omega());
        self.run_suite(suite, &grid, Tolerance::absolute(profile.tolerance(suite))?)
    }

    /// Every suite on its default grid, in [`Suite::ALL`] order.
    pub fn run_all(&self, profile: ToleranceProfile) -> Result<Vec<IdentityReport>> {
        self.run_all_with(profile, &[])
    }

    /// As [`Verifier::run_all`], with per-suite absolute tolerance overrides.
    pub fn run_all_with(
        &self,
        profile: ToleranceProfile,
        overrides: &[(Suite, f64)],
    ) -> Result<Vec<IdentityReport>> {
        self.run_many(&Suite::ALL, profile, overrides)
    }

    /// Selected suites on their default grids, in the order given.
    pub fn run_many(
        &self,
        selected: &[Suite],
        profile: ToleranceProfile,
        overrides: &[(Suite, f64)],
    ) -> Result<Vec<IdentityReport>> {
        selected
            .par_iter()
            .map(|&suite| {
                let tol = overrides
                    .iter()
                    .rev()
                    .find(|(s, _)| *s == suite)
                    .map(|(_, t)| *t)
                    .unwrap_or_else(|| profile.tolerance(suite));
                let grid = suite.default_grid(self.ctx.omega());
                self.run_suite(suite, &grid, Tolerance::absolute(tol)?)
            })
            .collect()
    }
}

/// Runs the suite called `name` with a default context.
pub fn run_suite(name: &str, grid: &GridSpec, tol: Tolerance) -> Result<IdentityReport> {
    let suite: Suite = name.parse()?;
    Verifier::default().run_suite(suite, grid, tol)
}

/// Runs every suite with a default context.
pub fn run_all(profile: ToleranceProfile) -> Result<Vec<IdentityReport>> {
    Verifier::default().run_all(profile)
}

/// `true` iff every report passed.
pub fn all_passed(reports: &[IdentityReport]) -> bool {
    reports.iter().all(|r| r.passed)
}
