//! Number and range parsing for command-line flags.

use std::f64::consts::PI;

/// Low part of pi as a double-double: `PI + PI_LO` carries ~107 bits.
const PI_LO: f64 = 1.2246467991473532e-16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

/// Parses a float or a literal multiple of pi: `0.1pi`, `-pi`, `pi/2`,
/// `0.5*pi`, `-0.25pi/3`.
///
/// Multiples of pi are evaluated in double-double arithmetic from the exact
/// decimal coefficient, so `0.42pi` is the double nearest to 0.42 times pi
/// rather than `0.42 * PI` with two roundings.
pub fn number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let Some(pos) = s.find("pi") else {
        let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
        return finite(v, s);
    };
    let (coef, rest) = (&s[..pos], &s[pos + 2..]);
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let den = match rest {
        "" => 1,
        r => r
            .strip_prefix('/')
            .and_then(|d| d.parse::<u64>().ok())
            .filter(|&d| d > 0)
            .ok_or_else(|| format!("`{s}`: expected `pi/<positive integer>`"))?,
    };
    let (negative, coef) = match coef.strip_prefix('-') {
        Some(c) => (true, c),
        None => (false, coef.strip_prefix('+').unwrap_or(coef)),
    };
    let (mantissa, scale) =
        if coef.is_empty() { (1, 0) } else { decimal(coef).ok_or_else(|| format!("`{s}` is not a multiple of pi"))? };
    let divisor = 10f64.powi(scale as i32) * den as f64;
    if mantissa >= 1 << 53 || divisor >= 2f64.powi(53) {
        return Err(format!("`{s}`: coefficient has too many digits"));
    }
    let v = times_pi_over(mantissa as f64, divisor);
    finite(if negative { -v } else { v }, s)
}

/// Splits an unsigned decimal `123.45` into `(12345, 2)`.
fn decimal(s: &str) -> Option<(u64, u32)> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let mantissa = digits.parse::<u64>().ok()?;
    Some((mantissa, frac.len() as u32))
}

/// `m * pi / d` for exactly representable `m` and `d`.
fn times_pi_over(m: f64, d: f64) -> f64 {
    let hi = m * PI;
    let lo = m.mul_add(PI, -hi) + m * PI_LO;
    let q1 = hi / d;
    let r = (-q1).mul_add(d, hi) + lo;
    q1 + r / d
}

fn finite(v: f64, s: &str) -> Result<f64, String> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// Parses `start:stop:steps`, endpoints inclusive.
pub fn range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, steps] = parts[..] else {
        return Err(format!("`{s}`: expected start:stop:steps"));
    };
    let steps = steps.trim().parse::<usize>().map_err(|_| format!("`{steps}` is not a step count"))?;
    let range = Range { start: number(start)?, stop: number(stop)?, steps };
    if range.steps < 2 || range.start >= range.stop {
        return Err(format!("`{s}`: need start < stop and at least 2 steps"));
    }
    Ok(range)
}
