//! Elliptic functions extending the quadratic combinations of `s` and `c`:
//!
//! ```text
//! S = s²  = ℘ / (℘² + ¼)
//! C = c²  = (℘² − ¼) / (℘² + ¼)
//! P = s·c = −½ ℘′ / (℘² + ¼)
//! sl(u)   = √2 · P(u/√2)
//! sd(u)   = −℘′(u/2) / (℘(u/2)² + ¼) = 2·P(u/2)
//! ```
//!
//! | function | parity under z → −z | under z → iz | poles |
//! |----------|---------------------|--------------|-------|
//! | S        | even                | S(iz) = −S(z) | `½(±1±i)ω` mod `2ω, 2iω`, simple |
//! | C        | even                | C(iz) = C(z)  | same set, simple |
//! | P        | odd                 | P(iz) = i·P(z) | same set, simple |
//! | sl       | odd                 |               | `√2·` the same set |
//! | sd       | odd                 |               | `(2j+1)ω + i(2k+1)ω` |
//!
//! All three of S, C, P have removable singularities at the ℘ lattice.
//! Evaluation multiplies through by `z₀⁴` and works with the regular parts
//! `q = z₀²℘`, `r = z₀³℘′`, giving exact values `S = 0`, `C = 1`, `P = 0`
//! at lattice points:
//!
//! ```text
//! S = z₀²q / (q² + z₀⁴/4)    C = (q² − z₀⁴/4) / (q² + z₀⁴/4)    P = −½ r z₀ / (q² + z₀⁴/4)
//! ```

mod branch;
mod jacobi;

use std::f64::consts::SQRT_2;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

pub use branch::{c_branch, s_branch, BRANCH_FRACTION, BRANCH_STEP};
pub use jacobi::{jacobi_real, jacobi_sd_agm};

use crate::error::{Error, Result};
use crate::geometry::SquareLattice;
use crate::numerics::Complex;
use crate::weierstrass::{WeierstrassContext, POLE_RADIUS};

/// The closed-form elliptic functions of this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EllipticFn {
    S,
    C,
    P,
    Sl,
    Sd,
}

impl EllipticFn {
    pub const ALL: [EllipticFn; 5] = [Self::S, Self::C, Self::P, Self::Sl, Self::Sd];

    pub fn eval(self, ctx: &WeierstrassContext, z: Complex) -> Result<Complex> {
        match self {
            Self::S => s_squared(ctx, z),
            Self::C => c_squared(ctx, z),
            Self::P => sc_product(ctx, z),
            Self::Sl => sl(ctx, z),
            Self::Sd => sd(ctx, z),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::S => "S",
            Self::C => "C",
            Self::P => "P",
            Self::Sl => "sl",
            Self::Sd => "sd",
        }
    }

    /// `true` for odd functions, `false` for even ones.
    pub fn is_odd(self) -> bool {
        !matches!(self, Self::S | Self::C)
    }

    /// Lattice of poles for this function.
    pub fn poles(self, omega: f64) -> SquareLattice {
        let base = SquareLattice::extension_poles(omega);
        match self {
            Self::S | Self::C | Self::P => base,
            Self::Sl => SquareLattice {
                offset: base.offset * SQRT_2,
                spacing: base.spacing * SQRT_2,
            },
            Self::Sd => SquareLattice::sd_poles(omega),
        }
    }
}

impl fmt::Display for EllipticFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EllipticFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown elliptic function `{s}`")))
    }
}

/// Poles of S, C and P: the four points `½(±1 ± i)ω` repeated with periods
/// `2ω` and `2iω`. All are simple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleSet {
    omega: f64,
}

impl PoleSet {
    pub fn new(ctx: &WeierstrassContext) -> Self {
        Self { omega: ctx.omega() }
    }

    /// `½(1+i)ω, ½(−1+i)ω, ½(−1−i)ω, ½(1−i)ω`, each of modulus `ω/√2`.
    pub fn base(&self) -> [Complex; 4] {
        let h = 0.5 * self.omega;
        [
            Complex::new(h, h),
            Complex::new(-h, h),
            Complex::new(-h, -h),
            Complex::new(h, -h),
        ]
    }

    pub fn periods(&self) -> (Complex, Complex) {
        (
            Complex::new(2.0 * self.omega, 0.0),
            Complex::new(0.0, 2.0 * self.omega),
        )
    }

    pub fn lattice(&self) -> SquareLattice {
        SquareLattice::extension_poles(self.omega)
    }

    pub fn nearest(&self, z: Complex) -> Complex {
        self.lattice().nearest(z)
    }

    pub fn distance(&self, z: Complex) -> f64 {
        self.lattice().distance(z)
    }

    /// `base + 2ωm + 2iωn` for `m`, `n` in the given ranges, ordered by `n`,
    /// then `m`, then base point.
    pub fn enumerate(
        &self,
        m_range: RangeInclusive<i64>,
        n_range: RangeInclusive<i64>,
    ) -> Vec<Complex> {
        let (p1, p2) = self.periods();
        let mut out = Vec::new();
        for n in n_range {
            for m in m_range.clone() {
                let shift = p1 * m as f64 + p2 * n as f64;
                out.extend(self.base().iter().map(|b| b + shift));
            }
        }
        // Distinct (base, m, n) give distinct points; drop exact repeats anyway.
        let mut seen = Vec::with_capacity(out.len());
        out.retain(|p| {
            let key = (p.re.to_bits(), p.im.to_bits());
            if seen.contains(&key) {
                false
            } else {
                seen.push(key);
                true
            }
        });
        out
    }
}

/// Poles of S, C, P over the given period ranges.
pub fn pole_set(
    ctx: &WeierstrassContext,
    m_range: RangeInclusive<i64>,
    n_range: RangeInclusive<i64>,
) -> Vec<Complex> {
    PoleSet::new(ctx).enumerate(m_range, n_range)
}

/// Reduced argument plus the shared denominator `q² + z₀⁴/4`.
struct Regular {
    z0: Complex,
    z0_4: Complex,
    q: Complex,
    r: Complex,
    den: Complex,
}

fn regular(ctx: &WeierstrassContext, z: Complex) -> Result<Regular> {
    let poles = SquareLattice::extension_poles(ctx.omega());
    let nearest = poles.nearest(z);
    if (z - nearest).norm() < POLE_RADIUS {
        return Err(Error::PoleProximity {
            point: z,
            nearest,
            radius: POLE_RADIUS,
        });
    }
    let z0 = ctx.reduce(z).z0;
    let (q, r) = ctx.regular_parts(z0);
    let z0_2 = z0 * z0;
    let z0_4 = z0_2 * z0_2;
    let den = q * q + 0.25 * z0_4;
    Ok(Regular {
        z0,
        z0_4,
        q,
        r,
        den,
    })
}

/// `S = s² = ℘/(℘² + ¼)`.
pub fn s_squared(ctx: &WeierstrassContext, z: Complex) -> Result<Complex> {
    let g = regular(ctx, z)?;
    Ok(g.z0 * g.z0 * g.q / g.den)
}

/// `C = c² = (℘² − ¼)/(℘² + ¼)`.
pub fn c_squared(ctx: &WeierstrassContext, z: Complex) -> Result<Complex> {
    let g = regular(ctx, z)?;
    Ok((g.q * g.q - 0.25 * g.z0_4) / g.den)
}

/// `P = s·c = −½℘′/(℘² + ¼)`.
pub fn sc_product(ctx: &WeierstrassContext, z: Complex) -> Result<Complex> {
    let g = regular(ctx, z)?;
    Ok(-0.5 * g.r * g.z0 / g.den)
}

fn rescaled_pole(err: Error, scale: f64, u: Complex) -> Error {
    match err {
        Error::PoleProximity {
            nearest, radius, ..
        } => Error::PoleProximity {
            point: u,
            nearest: nearest * scale,
            radius: radius * scale,
        },
        other => other,
    }
}

/// Lemniscatic sine `sl(u) = √2·P(u/√2)`, the solution of
/// `P'' = −2P³`, `P(0) = 0`, `P'(0) = 1`.
pub fn sl(ctx: &WeierstrassContext, u: Complex) -> Result<Complex> {
    sc_product(ctx, u / SQRT_2)
        .map(|p| p * SQRT_2)
        .map_err(|e| rescaled_pole(e, SQRT_2, u))
}

/// Glaisher's quotient `sd(u) = −℘′(u/2)/(℘(u/2)² + ¼)` (modulus `1/√2`).
pub fn sd(ctx: &WeierstrassContext, u: Complex) -> Result<Complex> {
    sc_product(ctx, u * 0.5)
        .map(|p| p * 2.0)
        .map_err(|e| rescaled_pole(e, 2.0, u))
}

/// Fitted pole order of `f` at `pole`, probing `f(pole + δ)` for each offset
/// `δ` along the real direction: minus the least-squares slope of
/// `ln|f|` against `ln δ`.
pub fn pole_order_probe(
    ctx: &WeierstrassContext,
    f: EllipticFn,
    pole: Complex,
    offsets: &[f64],
) -> Result<f64> {
    if offsets.len() < 2 || offsets.iter().any(|d| d.is_nan() || *d <= 0.0) {
        return Err(Error::InvalidParameter(
            "pole probe needs at least two positive offsets".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = offsets
        .iter()
        .map(|&d| Ok((d.ln(), f.eval(ctx, pole + d)?.norm().ln())))
        .collect::<Result<_>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(-sxy / sxx)
}
