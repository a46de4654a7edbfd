//! Square point lattices attached to the lemniscatic half-period `ω`.
//!
//! | lattice                         | offset       | spacing |
//! |---------------------------------|--------------|---------|
//! | poles of ℘                      | 0            | 2ω      |
//! | half-periods (zeros of ℘′) + ℘ poles | 0       | ω       |
//! | poles of S, C, P / branch points of s, c | ½(1+i)ω | ω  |
//! | poles of sd                     | (1+i)ω       | 2ω      |

use crate::numerics::Complex;

/// A square lattice `offset + spacing·(j + i·k)`, `j, k ∈ ℤ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareLattice {
    pub offset: Complex,
    pub spacing: f64,
}

impl SquareLattice {
    /// Poles of ℘: `2ωm + 2iωn`.
    pub fn periods(omega: f64) -> Self {
        Self {
            offset: Complex::new(0.0, 0.0),
            spacing: 2.0 * omega,
        }
    }

    /// All of `ωm + iωn`: the ℘ lattice together with the half-periods.
    pub fn half_periods(omega: f64) -> Self {
        Self {
            offset: Complex::new(0.0, 0.0),
            spacing: omega,
        }
    }

    /// `½(±1 ± i)ω` modulo `2ω, 2iω`, which is `(j + ½)ω + i(k + ½)ω`.
    pub fn extension_poles(omega: f64) -> Self {
        Self {
            offset: Complex::new(0.5 * omega, 0.5 * omega),
            spacing: omega,
        }
    }

    /// Poles of `sd(u) = −℘′(u/2)/(℘(u/2)² + ¼)`: odd multiples `(2j+1)ω + i(2k+1)ω`.
    pub fn sd_poles(omega: f64) -> Self {
        Self {
            offset: Complex::new(omega, omega),
            spacing: 2.0 * omega,
        }
    }

    /// Nearest lattice point to `z`.
    pub fn nearest(&self, z: Complex) -> Complex {
        let u = (z - self.offset) / self.spacing;
        self.offset + Complex::new(u.re.round(), u.im.round()) * self.spacing
    }

    pub fn distance(&self, z: Complex) -> f64 {
        (z - self.nearest(z)).norm()
    }

    /// Lattice points within `radius` of the segment `[from, to]`, with their
    /// distances to the segment.
    pub fn near_segment(&self, from: Complex, to: Complex, radius: f64) -> Vec<(Complex, f64)> {
        let lo_re = from.re.min(to.re) - radius;
        let hi_re = from.re.max(to.re) + radius;
        let lo_im = from.im.min(to.im) - radius;
        let hi_im = from.im.max(to.im) + radius;
        let j0 = ((lo_re - self.offset.re) / self.spacing).floor() as i64;
        let j1 = ((hi_re - self.offset.re) / self.spacing).ceil() as i64;
        let k0 = ((lo_im - self.offset.im) / self.spacing).floor() as i64;
        let k1 = ((hi_im - self.offset.im) / self.spacing).ceil() as i64;
        let mut out = Vec::new();
        for j in j0..=j1 {
            for k in k0..=k1 {
                let p = self.offset + Complex::new(j as f64, k as f64) * self.spacing;
                let d = segment_distance(from, to, p);
                if d < radius {
                    out.push((p, d));
                }
            }
        }
        out
    }
}

/// Euclidean distance from `p` to the closed segment `[a, b]`.
pub fn segment_distance(a: Complex, b: Complex, p: Complex) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * d.conj()).re / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: f64 = 1.854_074_677_301_372;

    #[test]
    fn extension_poles_cover_all_sign_patterns() {
        let lat = SquareLattice::extension_poles(W);
        for (sr, si) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let p = Complex::new(sr, si) * (0.5 * W);
            assert!(lat.distance(p) < 1e-15);
            assert!(lat.distance(p + Complex::new(2.0 * W, -2.0 * W)) < 1e-14);
        }
        assert!((lat.distance(Complex::new(0.0, 0.0)) - W / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn segment_distance_cases() {
        let a = Complex::new(0.0, 0.0);
        let b = Complex::new(1.0, 0.0);
        assert_eq!(segment_distance(a, b, Complex::new(0.5, 2.0)), 2.0);
        assert_eq!(segment_distance(a, b, Complex::new(-3.0, 4.0)), 5.0);
        assert_eq!(segment_distance(a, a, Complex::new(3.0, 4.0)), 5.0);
    }

    #[test]
    fn near_segment_finds_the_closest_pole() {
        let lat = SquareLattice::extension_poles(W);
        let near = lat.near_segment(Complex::new(0.0, 0.0), Complex::new(W, W) * 0.49, 0.1);
        assert_eq!(near.len(), 1);
        assert!((near[0].0 - Complex::new(0.5 * W, 0.5 * W)).norm() < 1e-15);
    }
}
