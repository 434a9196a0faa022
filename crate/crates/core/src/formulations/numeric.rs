//! Digit-level numerals for the pure-text formulations.
//!
//! A numeral is an optional `-`, an integer part without leading zeros, a
//! `.` and exactly five fractional digits. The fixed fraction width makes
//! consecutive numerals self-delimiting.

use super::cursor::Cursor;
use super::{DecodeError, Element};

pub const FRACTION_DIGITS: usize = 5;

pub fn render_numeral(x: f64) -> String {
    format!("{:.*}", FRACTION_DIGITS, x)
}

/// One token per character.
pub fn numeral_tokens(x: f64) -> impl Iterator<Item = Element> {
    render_numeral(x)
        .chars()
        .map(|c| Element::Token(c.to_string()))
        .collect::<Vec<_>>()
        .into_iter()
}

/// Parses a numeral in the exact rendered format.
pub fn parse_numeral(s: &str) -> Option<f64> {
    let body = s.strip_prefix('-').unwrap_or(s);
    let (int, frac) = body.split_once('.')?;
    let int_ok = !int.is_empty()
        && int.bytes().all(|b| b.is_ascii_digit())
        && (int == "0" || !int.starts_with('0'));
    let frac_ok = frac.len() == FRACTION_DIGITS && frac.bytes().all(|b| b.is_ascii_digit());
    (int_ok && frac_ok).then(|| s.parse().ok()).flatten()
}

pub(crate) fn read_numeral(cur: &mut Cursor<'_>) -> Result<f64, DecodeError> {
    let start = cur.pos();
    let mut text = String::new();
    if cur.peek_token() == Some("-") {
        cur.token("numeral")?;
        text.push('-');
    }
    while let Some(t) = cur.peek_token().filter(|t| is_digit(t)) {
        cur.token("digit")?;
        text.push_str(t);
    }
    cur.expect(".", "decimal point")?;
    text.push('.');
    for _ in 0..FRACTION_DIGITS {
        let t = cur.token("digit")?;
        if !is_digit(t) {
            return Err(cur.unexpected_prev(t, "digit"));
        }
        text.push_str(t);
    }
    parse_numeral(&text).ok_or_else(|| cur.malformed_numeral(start))
}

fn is_digit(t: &str) -> bool {
    t.len() == 1 && t.as_bytes()[0].is_ascii_digit()
}
