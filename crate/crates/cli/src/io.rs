//! Radius input parsing and lossless JSON output.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

/// Parsed radii with the 1-based source line of each value.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Radii {
    pub values: Vec<f64>,
    pub lines: Vec<usize>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum InputError {
    #[error("line {line}: cannot parse `{text}` as a radius")]
    Malformed { line: usize, text: String },
    #[error("line {line}: radius {r} must be positive and finite")]
    NotPositive { line: usize, r: f64 },
    #[error("invalid JSON array: {0}")]
    Json(String),
}

/// Reads one radius per line, or a JSON array when the first non-blank
/// character is `[`. Blank lines and `#` comments are skipped.
pub fn parse_radii(text: &str) -> Result<Radii, InputError> {
    if text.trim_start().starts_with('[') {
        let values: Vec<f64> = serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
        // a JSON array is reported by element position
        let lines: Vec<usize> = (1..=values.len()).collect();
        for (&r, &line) in values.iter().zip(&lines) {
            check(r, line)?;
        }
        return Ok(Radii { values, lines });
    }
    let mut out = Radii::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.split('#').next().unwrap_or("").trim();
        if s.is_empty() {
            continue;
        }
        let r: f64 = s.parse().map_err(|_| InputError::Malformed { line, text: s.to_string() })?;
        check(r, line)?;
        out.values.push(r);
        out.lines.push(line);
    }
    Ok(out)
}

fn check(r: f64, line: usize) -> Result<(), InputError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(InputError::NotPositive { line, r })
    }
}

/// `v` with 17 significant digits, in positional notation for moderate
/// exponents.
pub fn fmt17(v: f64) -> String {
    if !v.is_finite() {
        return "null".to_string();
    }
    if v == 0.0 {
        return "0.0".to_string();
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..=16).contains(&exp) {
        format!("{:.*}", (16 - exp).max(1) as usize, v)
    } else {
        sci
    }
}

/// Pretty JSON whose floats carry 17 significant digits.
struct Lossless<'a>(PrettyFormatter<'a>);

impl Formatter for Lossless<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(fmt17(v).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Lossless(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}
