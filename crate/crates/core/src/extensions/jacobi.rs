//! Jacobi `sn`, `cn`, `dn` by the descending AGM (Landen) scheme, extended to
//! complex arguments with the imaginary-argument addition formulas. Used only
//! to cross-check `sd`; nothing here touches ℘.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::geometry::SquareLattice;
use crate::numerics::{agm, Complex};

const MAX_LEVELS: usize = 32;

/// `(sn, cn, dn)(x | m)` for real `x` and parameter `0 < m < 1`.
pub fn jacobi_real(x: f64, m: f64) -> Result<(f64, f64, f64)> {
    if !(m > 0.0 && m < 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "jacobi_real needs finite x and 0 < m < 1, got x={x}, m={m}"
        )));
    }
    let mut a = vec![1.0];
    let mut c = vec![m.sqrt()];
    let mut b = (1.0 - m).sqrt();
    while c.last().unwrap().abs() > f64::EPSILON {
        if a.len() > MAX_LEVELS {
            return Err(Error::Consistency(
                "AGM for sn/cn/dn did not converge".into(),
            ));
        }
        let (an, bn) = (*a.last().unwrap(), b);
        a.push(0.5 * (an + bn));
        c.push(0.5 * (an - bn));
        b = (an * bn).sqrt();
    }
    // Reduce modulo the real period 4K.
    let quarter = PI / (2.0 * a.last().unwrap());
    let period = 4.0 * quarter;
    let x = x - period * (x / period).round();

    let levels = a.len() - 1;
    let mut phi = (1u64 << levels) as f64 * a[levels] * x;
    for n in (1..=levels).rev() {
        phi = 0.5 * (phi + (c[n] / a[n] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = (1.0 - m * sn * sn).sqrt();
    Ok((sn, cn, dn))
}

/// Glaisher's `sd = sn/dn` with modulus `k = 1/√2` at complex `u`.
///
/// With `u = x + iy`, `(s, c, d) = (sn, cn, dn)(x | ½)` and
/// `(s₁, c₁, d₁) = (sn, cn, dn)(y | ½)`:
///
/// ```text
/// sd(u) = (s·d₁ + i·c·d·s₁·c₁) / (d·c₁·d₁ − i·m·s·c·s₁)
/// ```
///
/// Both sides vanish when `c₁ = 0`, so near `y ≡ K′ (mod 2K′)` the shifted
/// form `sd(u) = i / (k·cn(u − iK′))` is used instead, with
///
/// ```text
/// cn(x + iy) = (c·c₁ − i·s·d·s₁·d₁) / (c₁² + m·s²·s₁²)
/// ```
pub fn jacobi_sd_agm(u: Complex) -> Result<Complex> {
    let m = FRAC_1_SQRT_2 * FRAC_1_SQRT_2;
    let quarter = PI / (2.0 * agm(1.0, (1.0 - m).sqrt())?);
    let (s, c, d) = jacobi_real(u.re, m)?;
    let (s1, c1, d1) = jacobi_real(u.im, 1.0 - m)?;
    let (s2, c2, d2) = jacobi_real(u.im - quarter, 1.0 - m)?;
    let (num, den) = if c1.abs() >= c2.abs() {
        (
            Complex::new(s * d1, c * d * s1 * c1),
            Complex::new(d * c1 * d1, -m * s * c * s1),
        )
    } else {
        let cn_num = Complex::new(c * c2, -s * d * s2 * d2);
        let cn_den = c2 * c2 + m * s * s * s2 * s2;
        (Complex::new(0.0, cn_den), FRAC_1_SQRT_2 * cn_num)
    };
    if den.norm() < 1e-15 * num.norm().max(1.0) {
        let poles = SquareLattice {
            offset: Complex::new(quarter, quarter),
            spacing: 2.0 * quarter,
        };
        return Err(Error::PoleProximity {
            point: u,
            nearest: poles.nearest(u),
            radius: (u - poles.nearest(u)).norm(),
        });
    }
    Ok(num / den)
}
