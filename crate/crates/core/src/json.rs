//! JSON encoding helpers. Exact values never pass through `f64`.

use std::str::FromStr;

use rug::float::Round;
use rug::ops::AddAssignRound;
use rug::{Float, Integer, Rational};
use serde::ser::{Serialize, SerializeMap, Serializer};
use serde_json::Number;

pub const SCHEMA_VERSION: &str = "1";

/// Significant decimal digits used for multiprecision reals.
pub const FLOAT_DIGITS: usize = 25;

pub fn integer_number(v: &Integer) -> Number {
    Number::from_str(&v.to_string()).expect("integers are valid JSON numbers")
}

/// Decimal rendering of `v` rounded in the given direction.
pub fn float_number(v: &Float, digits: usize, round: Round) -> Number {
    if v.is_zero() {
        return Number::from(0);
    }
    let text = v.to_string_radix_round(10, Some(digits), round);
    Number::from_str(&text).expect("finite floats are valid JSON numbers")
}

/// Decimal value and radius for the ball `value ± radius`. The radius is
/// rounded up and widened by the decimal rounding of the value, so the
/// printed ball contains the exact one.
pub fn ball_numbers(value: &Float, radius: &Float) -> (Number, Number) {
    let v = float_number(value, FLOAT_DIGITS, Round::Nearest);
    let printed = crate::parse::parse_real_literal(&v.to_string()).expect("decimal output parses");
    let slack = Rational::from(&printed - &value.to_rational().expect("finite value")).abs();
    let mut r = Float::with_val(radius.prec().max(64), radius);
    r.add_assign_round(&Float::with_val_round(64, &slack, Round::Up).0, Round::Up);
    (v, float_number(&r, FLOAT_DIGITS, Round::Up))
}

pub struct RationalJson<'a>(pub &'a Rational);

impl Serialize for RationalJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("num", &integer_number(self.0.numer()))?;
        map.serialize_entry("den", &integer_number(self.0.denom()))?;
        map.end()
    }
}

pub fn serialize_rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    RationalJson(q).serialize(s)
}

pub fn serialize_opt_rational<S: Serializer>(
    q: &Option<Rational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => RationalJson(q).serialize(s),
        None => s.serialize_none(),
    }
}

pub fn serialize_integer<S: Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
    integer_number(v).serialize(s)
}

pub fn rational_value(q: &Rational) -> serde_json::Value {
    serde_json::to_value(RationalJson(q)).expect("rational serializes")
}

/// Reads an exact rational from a JSON number or a string such as `"3/4"`.
pub fn parse_rational_value(v: &serde_json::Value) -> Option<Rational> {
    match v {
        serde_json::Value::Number(n) => crate::parse::parse_real_literal(&n.to_string()),
        serde_json::Value::String(s) => crate::parse::parse_real_literal(s.trim()),
        serde_json::Value::Object(map) => {
            let num = Integer::from_str(&map.get("num")?.to_string()).ok()?;
            let den = Integer::from_str(&map.get("den")?.to_string()).ok()?;
            if den == 0 {
                None
            } else {
                Some(Rational::from((num, den)))
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_values_stay_exact() {
        let q = Rational::from((Integer::from(1) << 200u32, 3));
        let text = serde_json::to_string(&RationalJson(&q)).unwrap();
        assert_eq!(
            text,
            format!("{{\"num\":{},\"den\":3}}", Integer::from(1) << 200u32)
        );
        let back = parse_rational_value(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn decimal_inputs_are_exact() {
        let v: serde_json::Value = serde_json::from_str("[0.1, \"-7/3\", 12]").unwrap();
        let vals: Vec<_> = v
            .as_array()
            .unwrap()
            .iter()
            .map(|x| parse_rational_value(x).unwrap())
            .collect();
        assert_eq!(
            vals,
            vec![
                Rational::from((1, 10)),
                Rational::from((-7, 3)),
                Rational::from(12)
            ]
        );
    }

    #[test]
    fn float_rendering_is_deterministic() {
        let x = Float::with_val(128, 2).sqrt();
        let a = float_number(&x, 10, Round::Nearest).to_string();
        assert_eq!(a, "1.414213562");
        assert_eq!(float_number(&x, 10, Round::Up).to_string(), "1.414213563");
    }
}
