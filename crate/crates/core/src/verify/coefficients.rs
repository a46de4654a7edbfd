//! Taylor-coefficient checks of the ODEs satisfied by `S = s²` and `C = c²`.
//!
//! With `s = z·α(z⁴)` and `c = β(z⁴)`, the squares are `S = z²·A(z⁴)` and
//! `C = B(z⁴)` where `A = α⋆α`, `B = β⋆β`. Products of S and C are formed by
//! dense Cauchy products over all indices, so the checks do not rely on the
//! lane structure of the right-hand sides.

use crate::series::TaylorPair;

/// Dense Cauchy product truncated to `len` coefficients.
pub fn cauchy(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    (0..len)
        .map(|n| {
            (0..=n)
                .filter(|&k| k < a.len() && n - k < b.len())
                .map(|k| a[k] * b[n - k])
                .sum()
        })
        .collect()
}

/// Dense Taylor coefficients of `(S, C)` through `zⁿ`, `n = len − 1`.
pub fn squared_coefficients(tp: &TaylorPair, len: usize) -> (Vec<f64>, Vec<f64>) {
    let a = tp.a_coeffs();
    let b = tp.b_coeffs();
    (cauchy(&a, &a, len), cauchy(&b, &b, len))
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

fn series_order_for(len: usize) -> TaylorPair {
    TaylorPair::new(len.max(8)).expect("order is positive")
}

/// Per-coefficient residuals of `S'' = 2C³ − 6S²C` and `C'' = 2S³ − 6C²S`
/// for `n = 0..=order`, returned as `(S equation, C equation)`.
pub fn second_order_residuals(order: usize) -> (Vec<f64>, Vec<f64>) {
    let len = order + 3;
    let tp = series_order_for(len);
    let (s, c) = squared_coefficients(&tp, len);
    let s2 = cauchy(&s, &s, len);
    let c2 = cauchy(&c, &c, len);
    let s3 = cauchy(&s2, &s, len);
    let c3 = cauchy(&c2, &c, len);
    let s2c = cauchy(&s2, &c, len);
    let c2s = cauchy(&c2, &s, len);
    let eq = |f: &[f64], cube: &[f64], mixed: &[f64]| -> Vec<f64> {
        (0..=order)
            .map(|n| {
                let lhs = falling(n + 2, 2) * f[n + 2];
                let rhs = 2.0 * cube[n] - 6.0 * mixed[n];
                (lhs - rhs).abs()
            })
            .collect()
    };
    (eq(&s, &c3, &s2c), eq(&c, &s3, &c2s))
}

/// Per-coefficient residuals of `F'''' = −12F(32F⁴ − 40F² + 9)` for
/// `F = S` and `F = C`, `n = 0..=order`.
pub fn fourth_order_residuals(order: usize) -> (Vec<f64>, Vec<f64>) {
    let len = order + 5;
    let tp = series_order_for(len);
    let (s, c) = squared_coefficients(&tp, len);
    let eq = |f: &[f64]| -> Vec<f64> {
        let f2 = cauchy(f, f, len);
        let f3 = cauchy(&f2, f, len);
        let f5 = cauchy(&f3, &f2, len);
        (0..=order)
            .map(|n| {
                let lhs = falling(n + 4, 4) * f[n + 4];
                let rhs = -12.0 * (32.0 * f5[n] - 40.0 * f3[n] + 9.0 * f[n]);
                (lhs - rhs).abs()
            })
            .collect()
    };
    (eq(&s), eq(&c))
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

/// Largest residual of either second-order equation through `order`.
pub fn second_order_max(order: usize) -> f64 {
    let (a, b) = second_order_residuals(order);
    max_of(&a).max(max_of(&b))
}

/// Largest residual of the fourth-order equation for S or C through `order`.
pub fn fourth_order_max(order: usize) -> f64 {
    let (a, b) = fourth_order_residuals(order);
    max_of(&a).max(max_of(&b))
}
