//! Canonical JSON: object keys sorted, no whitespace, floats printed with 17
//! significant digits in exponent form, non-finite floats as `null`.
//!
//! Because every float is written in a form that parses back to the same
//! bits and re-prints identically, serializing a parsed document reproduces
//! the input byte for byte.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};
use serde_json::Value;

#[derive(Debug, Clone, Copy, Default)]
struct CanonicalFormatter;

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn write_null<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        CompactFormatter.write_null(writer)
    }
}

/// Serializes through [`Value`] so struct fields come out in sorted order.
pub fn to_canonical_string<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let tree = serde_json::to_value(value)?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter);
    tree.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

/// Parses and re-serializes; canonical input comes back unchanged.
pub fn recanonicalize(text: &str) -> serde_json::Result<String> {
    let v: Value = serde_json::from_str(text)?;
    to_canonical_string(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn sorted_keys_and_float_format() {
        let v = json!({"b": 0.5, "a": 1, "c": {"z": true, "y": null}});
        let s = to_canonical_string(&v).unwrap();
        assert_eq!(
            s,
            r#"{"a":1,"b":5.0000000000000000e-1,"c":{"y":null,"z":true}}"#
        );
    }

    #[test]
    fn struct_fields_are_sorted() {
        #[derive(Serialize)]
        struct R {
            value: f64,
            est_error: f64,
            method: &'static str,
        }
        let s = to_canonical_string(&R {
            value: 0.1,
            est_error: 0.0,
            method: "x",
        })
        .unwrap();
        assert_eq!(
            s,
            r#"{"est_error":0.0000000000000000e0,"method":"x","value":1.0000000000000001e-1}"#
        );
        assert_eq!(recanonicalize(&s).unwrap(), s);
    }

    #[test]
    fn non_finite_becomes_null() {
        let s = to_canonical_string(&[f64::NAN, f64::INFINITY, 1.0]).unwrap();
        assert_eq!(s, "[null,null,1.0000000000000000e0]");
    }

    #[test]
    fn extremes_round_trip() {
        let vals = [
            f64::MIN_POSITIVE,
            5e-324,
            f64::MAX,
            -0.0,
            1e300,
            std::f64::consts::PI,
        ];
        let s = to_canonical_string(&vals[..]).unwrap();
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        for (a, b) in vals.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(recanonicalize(&s).unwrap(), s);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn float_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite()), k in "[a-z]{1,6}") {
                let v = json!({ k.clone(): x, "n": [x, -x] });
                let s = to_canonical_string(&v).unwrap();
                prop_assert_eq!(recanonicalize(&s).unwrap(), s);
            }
        }
    }
}
