//! Verification reports and their serialization.
//!
//! JSON output uses a fixed key order and writes every float in C-style
//! `%.16e` notation (17 significant digits), so reports diff cleanly across
//! languages and are byte-identical across runs.

use std::io::{self, Write};

use serde::ser::Serialize;
use serde::Serialize as DeriveSerialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct CheckRecord {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// Passes when `max_residual ≤ tolerance` (and the residual is finite).
    pub fn at_most(name: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            max_residual,
            tolerance,
            pass: max_residual.is_finite() && max_residual <= tolerance,
        }
    }

    /// Passes when `value ≥ tolerance`; used for separation gaps.
    pub fn at_least(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            max_residual: value,
            tolerance,
            pass: value >= tolerance,
        }
    }

    /// Exact expectation such as a dimension count; the residual is the
    /// absolute difference.
    pub fn equals(name: impl Into<String>, got: f64, expected: f64) -> Self {
        CheckRecord {
            name: name.into(),
            max_residual: (got - expected).abs(),
            tolerance: 0.0,
            pass: got == expected,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(name: impl Into<String>, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            max_residual: f64::INFINITY,
            tolerance,
            pass: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct VerificationReport {
    pub command: String,
    pub config: serde_json::Value,
    pub checks: Vec<CheckRecord>,
    /// Command-specific output (dimension counts, kernels, witnesses).
    pub results: serde_json::Value,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>, config: serde_json::Value) -> Self {
        VerificationReport {
            command: command.into(),
            config,
            checks: Vec::new(),
            results: serde_json::Value::Object(Default::default()),
            pass: true,
            wall_time_seconds: None,
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.pass &= record.pass;
        self.checks.push(record);
    }

    pub fn set_result(&mut self, key: &str, value: serde_json::Value) {
        if let serde_json::Value::Object(map) = &mut self.results {
            map.insert(key.to_string(), value);
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_json_string(self)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "max_residual", "tolerance", "pass"])
            .map_err(|e| Error::Io(e.to_string()))?;
        for c in &self.checks {
            w.write_record([
                c.name.clone(),
                format_float(c.max_residual),
                format_float(c.tolerance),
                c.pass.to_string(),
            ])
            .map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

/// `%.16e`: one digit, point, sixteen digits, `e`, sign, at least two
/// exponent digits. Non-finite values are spelled `inf`, `-inf`, `nan`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.16e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Pretty JSON with floats in [`format_float`] notation.
struct FixedFloatFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for FixedFloatFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Serializes with the fixed float notation. Non-finite floats become
/// `null`, as JSON has no spelling for them.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let fmt = FixedFloatFormatter {
        inner: PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    value.serialize(&mut ser).map_err(|e| Error::Io(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}
