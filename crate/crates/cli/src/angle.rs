//! Angle literals such as `0.25`, `pi`, `2pi`, `3*pi/4`, `pi/8`.

use std::f64::consts::PI;

fn term(s: &str) -> Option<f64> {
    let s = s.trim();
    let coefficient = s
        .strip_suffix("pi")
        .or_else(|| s.strip_suffix('π'))
        .map(|c| c.trim().trim_end_matches('*').trim());
    match coefficient {
        Some("") => Some(PI),
        Some(c) => c.parse::<f64>().ok().map(|k| k * PI),
        None => s.parse::<f64>().ok(),
    }
}

pub fn parse_angle(text: &str) -> Result<f64, String> {
    let lower = text.trim().to_ascii_lowercase();
    let value = match lower.split_once('/') {
        Some((num, den)) => term(num).zip(term(den)).map(|(n, d)| n / d),
        None => term(&lower),
    };
    match value {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(format!(
            "cannot read {text:?} as an angle (examples: 0.5, pi, pi/8, 3pi/4)"
        )),
    }
}

/// Three comma-separated angles.
pub fn parse_triple(text: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got {text:?}"));
    }
    Ok((parse_angle(parts[0])?, parse_angle(parts[1])?, parse_angle(parts[2])?))
}
