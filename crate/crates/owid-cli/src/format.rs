//! Deterministic float formatting: 12 significant digits, fixed notation
//! where the exponent allows, scientific otherwise. Regression tests can
//! compare output byte for byte.

use std::io;

use serde_json::ser::Formatter;

const SIGNIFICANT_DIGITS: i32 = 12;

/// Render with 12 significant digits, trimming trailing zeros.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    // Round to 12 significant digits first; the printed exponent then
    // decides between fixed and scientific notation.
    let scientific = format!("{:.*e}", (SIGNIFICANT_DIGITS - 1) as usize, x);
    let (mantissa, exponent) = scientific.split_once('e').expect("e-notation output");
    let exponent: i32 = exponent.parse().expect("numeric exponent");

    if (-4..SIGNIFICANT_DIGITS).contains(&exponent) {
        let decimals = (SIGNIFICANT_DIGITS - 1 - exponent) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exponent}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(mut text: String) -> String {
    if text.contains('.') {
        while text.ends_with('0') {
            text.pop();
        }
        if text.ends_with('.') {
            text.pop();
        }
    }
    text
}

/// Compact JSON with [`fmt_g`] applied to every float.
pub struct G12Formatter;

impl Formatter for G12Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_g(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        writer.write_all(fmt_g(value as f64).as_bytes())
    }
}

/// Serialize a JSON value with the fixed float format.
pub fn to_json_string(value: &serde_json::Value) -> String {
    use serde::Serialize;
    let mut out = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut out, G12Formatter);
    value.serialize(&mut serializer).expect("in-memory write");
    String::from_utf8(out).expect("JSON is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_notation_cases() {
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(2.0), "2");
        assert_eq!(fmt_g(-0.5), "-0.5");
        assert_eq!(fmt_g(0.321904411722884), "0.321904411723");
        assert_eq!(fmt_g(1.6582978717936445), "1.65829787179");
        assert_eq!(fmt_g(0.03), "0.03");
    }

    #[test]
    fn scientific_notation_cases() {
        assert_eq!(fmt_g(1e-7), "1e-7");
        assert_eq!(fmt_g(-2.5e-13), "-2.5e-13");
        assert_eq!(fmt_g(1.5e12), "1.5e12");
        assert_eq!(fmt_g(150_000_000_000.0), "150000000000");
    }

    #[test]
    fn rounding_crosses_a_power_of_ten() {
        assert_eq!(fmt_g(0.999999999999951), "1");
    }

    #[test]
    fn json_floats_use_the_fixed_format() {
        let value = serde_json::json!({"a": 0.321904411722884, "b": [1e-7, 3], "c": null});
        assert_eq!(
            to_json_string(&value),
            r#"{"a":0.321904411723,"b":[1e-7,3],"c":null}"#
        );
    }
}
