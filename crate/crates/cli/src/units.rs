//! Config values with optional unit suffixes, e.g. `"300 um"` or `20e-3`.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Time,
    Power,
    Voltage,
    Resistance,
    Temperature,
    Angle,
}

impl Dimension {
    fn base(self) -> &'static str {
        match self {
            Dimension::Length => "m",
            Dimension::Time => "s",
            Dimension::Power => "W",
            Dimension::Voltage => "V",
            Dimension::Resistance => "ohm",
            Dimension::Temperature => "K",
            Dimension::Angle => "rad",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Scale {
    Mul(f64),
    Div(f64),
}

const UNITS: &[(&str, Dimension, Scale)] = &[
    ("m", Dimension::Length, Scale::Mul(1.0)),
    ("mm", Dimension::Length, Scale::Div(1000.0)),
    ("um", Dimension::Length, Scale::Div(1000000.0)),
    ("µm", Dimension::Length, Scale::Div(1000000.0)),
    ("nm", Dimension::Length, Scale::Div(1000000000.0)),
    ("s", Dimension::Time, Scale::Mul(1.0)),
    ("ms", Dimension::Time, Scale::Div(1000.0)),
    ("us", Dimension::Time, Scale::Div(1000000.0)),
    ("ns", Dimension::Time, Scale::Div(1000000000.0)),
    ("ps", Dimension::Time, Scale::Div(1000000000000.0)),
    ("fs", Dimension::Time, Scale::Div(1000000000000000.0)),
    ("h", Dimension::Time, Scale::Mul(3600.0)),
    ("W", Dimension::Power, Scale::Mul(1.0)),
    ("mW", Dimension::Power, Scale::Div(1000.0)),
    ("V", Dimension::Voltage, Scale::Mul(1.0)),
    ("mV", Dimension::Voltage, Scale::Div(1000.0)),
    ("ohm", Dimension::Resistance, Scale::Mul(1.0)),
    ("Ω", Dimension::Resistance, Scale::Mul(1.0)),
    ("K", Dimension::Temperature, Scale::Mul(1.0)),
    ("rad", Dimension::Angle, Scale::Mul(1.0)),
    ("mrad", Dimension::Angle, Scale::Div(1000.0)),
];

/// A number as written in the config: bare (SI base unit implied) or with a
/// unit suffix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quantity {
    value: f64,
    unit: Option<(Dimension, Scale)>,
}

impl Quantity {
    pub fn si(value: f64) -> Self {
        Self { value, unit: None }
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        // longest leading run that reads as a number
        let (value, unit) = s
            .char_indices()
            .map(|(i, _)| i)
            .chain(std::iter::once(s.len()))
            .rev()
            .find_map(|i| s[..i].trim().parse::<f64>().ok().map(|v| (v, &s[i..])))
            .ok_or_else(|| format!("cannot read a number from {s:?}"))?;
        let unit = unit.trim();
        if unit.is_empty() {
            return Ok(Self::si(value));
        }
        let &(_, dim, scale) = UNITS
            .iter()
            .find(|(name, _, _)| *name == unit)
            .ok_or_else(|| format!("unknown unit {unit:?}"))?;
        Ok(Self {
            value,
            unit: Some((dim, scale)),
        })
    }

    /// Value in SI base units, checking the suffix (if any) against `dim`.
    pub fn to_si(self, dim: Dimension, field: &str) -> Result<f64, String> {
        match self.unit {
            None => Ok(self.value),
            Some((d, Scale::Mul(m))) if d == dim => Ok(self.value * m),
            Some((d, Scale::Div(q))) if d == dim => Ok(self.value / q),
            Some((d, _)) => Err(format!(
                "`{field}` expects a {} quantity (base unit {}), got a {:?} unit",
                format!("{dim:?}").to_lowercase(),
                dim.base(),
                d
            )),
        }
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Quantity;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a string like \"300 um\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Quantity, E> {
                Ok(Quantity::si(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Quantity, E> {
                Ok(Quantity::si(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Quantity, E> {
                Ok(Quantity::si(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Quantity, E> {
                Quantity::parse(v).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffixes_convert_to_si() {
        let q = Quantity::parse("300 um").unwrap();
        assert!((q.to_si(Dimension::Length, "w").unwrap() - 3e-4).abs() < 1e-18);
        assert_eq!(Quantity::parse("1.55µm").unwrap().to_si(Dimension::Length, "l").unwrap(), 1.55e-6);
        assert_eq!(Quantity::parse("2e-3").unwrap().to_si(Dimension::Length, "l").unwrap(), 2e-3);
        assert_eq!(Quantity::parse("1.5e1 mm").unwrap().to_si(Dimension::Length, "l").unwrap(), 15e-3);
        let bw = Quantity::parse("8.8 nm").unwrap().to_si(Dimension::Length, "l").unwrap();
        assert!((bw - 8.8e-9).abs() < 1e-15 * 8.8e-9);
    }

    #[test]
    fn wrong_dimension_names_field() {
        let err = Quantity::parse("3 ps").unwrap().to_si(Dimension::Length, "heaters[0].width").unwrap_err();
        assert!(err.contains("heaters[0].width"));
        assert!(Quantity::parse("3 parsec").is_err());
        assert!(Quantity::parse("mm").is_err());
    }
}
