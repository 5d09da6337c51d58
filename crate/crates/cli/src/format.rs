//! Number formatting for CSV output and parsing of angle arguments.

use std::f64::consts::PI;

/// Significant digits kept in CSV cells.
pub const SIG_DIGITS: usize = 12;

/// Shortest decimal that round-trips the value after rounding to
/// [`SIG_DIGITS`] significant digits. Negative zero prints as `0`.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    rounded.to_string()
}

/// Parses a radian value: plain numbers, or multiples of π written `pi`,
/// `-pi`, `0.25pi`, `2*pi`, `pi/4`, `3pi/4`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse `{text}` as an angle");
    let Some(at) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| bad()).and_then(finite(text));
    };
    let head = t[..at].trim_end_matches('*');
    let tail = &t[at + 2..];
    let coeff = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let divisor = match tail {
        "" => 1.0,
        d => d
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(bad)?,
    };
    finite(text)(coeff * PI / divisor)
}

fn finite(text: &str) -> impl Fn(f64) -> Result<f64, String> + '_ {
    move |x| {
        if x.is_finite() {
            Ok(x)
        } else {
            Err(format!("`{text}` is not a finite angle"))
        }
    }
}

/// Parses `name=value` with an angle-valued right-hand side.
pub fn parse_fixed(text: &str) -> Result<(String, f64), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{text}`"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(format!("missing parameter name in `{text}`"));
    }
    Ok((name.to_string(), parse_angle(value)?))
}
