//! Fixed-precision text encodings shared by the CSV and JSON writers.
//!
//! Every real is written with 17 significant digits in scientific notation
//! (`{:.16e}`), which identifies an `f64` uniquely, so parsing the output and
//! writing it again reproduces the same bytes.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn bool_str(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Compact JSON formatter writing floats through [`sig17`].
#[derive(Debug, Default, Clone, Copy)]
pub struct Sig17Formatter;

impl Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, Sig17Formatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

/// Re-encodes arbitrary JSON text with [`Sig17Formatter`].
pub fn normalize_json(text: &str) -> serde_json::Result<String> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    to_json(&value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(sig17(2.0 / 9.0), "2.2222222222222221e-1");
        assert_eq!(sig17(0.25), "2.5000000000000000e-1");
        assert_eq!(sig17(-3.0), "-3.0000000000000000e0");
    }

    #[test]
    fn json_floats_use_fixed_digits() {
        #[derive(Serialize)]
        struct S {
            x: f64,
            v: Vec<[f64; 2]>,
            flag: bool,
        }
        let s = S {
            x: 0.1,
            v: vec![[1.0, -2.5]],
            flag: true,
        };
        let text = to_json(&s).unwrap();
        assert_eq!(
            text,
            r#"{"x":1.0000000000000001e-1,"v":[[1.0000000000000000e0,-2.5000000000000000e0]],"flag":true}"#
        );
        assert_eq!(normalize_json(&text).unwrap(), text);
    }
}
