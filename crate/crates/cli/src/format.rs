//! Number and complex-literal formatting, and complex-literal parsing.

use num_complex::Complex64;

/// Rounds `x` to `digits` significant digits, then renders the result with
/// the shortest representation that round-trips. `-0` prints as `0`.
pub fn number(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{}", round(x, digits))
}

/// `x` rounded to `digits` significant decimal digits.
pub fn round(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("formatted float parses")
}

/// `a+bi` / `a-bi` with each part rendered by [`number`].
pub fn complex(z: Complex64, digits: usize) -> String {
    let re = number(z.re, digits);
    let im = number(z.im, digits);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (no whitespace). `i` and `-i` stand for
/// unit imaginary parts.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let bad =
        || format!("cannot parse `{text}` as a complex number (expected a, bi, a+bi or a-bi)");
    if text.is_empty() || text.chars().any(char::is_whitespace) {
        return Err(bad());
    }
    let real = |s: &str| -> Result<f64, String> {
        let v: f64 = s.parse().map_err(|_| bad())?;
        if v.is_finite() && !s.contains(['n', 'N', 'f', 'F']) {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let Some(body) = text.strip_suffix('i') else {
        return Ok(Complex64::new(real(text)?, 0.0));
    };
    // Split at the last sign that is not leading and not an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |s: &str| -> Result<f64, String> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => real(s),
        }
    };
    match split {
        Some(k) => Ok(Complex64::new(real(&body[..k])?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}
