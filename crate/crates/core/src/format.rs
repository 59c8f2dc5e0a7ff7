//! Deterministic number formatting for CSV and text reports.
//!
//! Numbers carry 12 significant digits with trailing zeros trimmed (but at
//! least one fractional digit). Plain notation is used for magnitudes in
//! `[1e-4, 1e6)`, lowercase `e` notation otherwise.

pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let mag = x.abs();
    if (1e-4..1e6).contains(&mag) {
        let exponent = mag.log10().floor() as i32;
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // Rounding can push the value out of range (e.g. 999999.9999999).
        if s.trim_start_matches('-').starts_with("1000000") {
            return fmt_exp(x);
        }
        trim_fraction(&s)
    } else {
        fmt_exp(x)
    }
}

fn fmt_exp(x: f64) -> String {
    let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    format!("{}e{}", trim_fraction(mantissa), exp)
}

fn trim_fraction(s: &str) -> String {
    if !s.contains('.') {
        return format!("{s}.0");
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

/// Formats an optional value; absent values become an empty field.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// Comma-separated rows with LF line endings.
pub fn write_csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}
