use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Grid units per unit length. Coordinates are stored as integer multiples of 1e-9.
pub const UNITS_PER_LENGTH: i64 = 1_000_000_000;

/// Largest admissible |coordinate| in grid units (4e9 in real units).
///
/// Keeps every cross product of coordinate differences inside `i128`.
pub const MAX_UNITS: i64 = 4_000_000_000 * UNITS_PER_LENGTH;

const UNIT: f64 = 1e-9;

/// A point on the 1e-9 grid.
///
/// Decimal input is ingested exactly; floating point input is rounded to the
/// nearest grid point. Every predicate on points is exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    x: i64,
    y: i64,
}

impl Point {
    pub fn from_units(x: i64, y: i64) -> Result<Self> {
        check_units(x)?;
        check_units(y)?;
        Ok(Point { x, y })
    }

    /// Rounds real coordinates to the grid.
    pub fn try_from_f64(x: f64, y: f64) -> Result<Self> {
        Ok(Point {
            x: snap(x)?,
            y: snap(y)?,
        })
    }

    /// Like [`Point::try_from_f64`] but panics on non-finite or out-of-range input.
    /// Intended for literals.
    pub fn new(x: f64, y: f64) -> Self {
        Self::try_from_f64(x, y).expect("finite coordinate within range")
    }

    pub fn parse(x: &str, y: &str) -> Result<Self> {
        Ok(Point {
            x: parse_decimal(x)?,
            y: parse_decimal(y)?,
        })
    }

    #[inline]
    pub fn x_units(&self) -> i64 {
        self.x
    }

    #[inline]
    pub fn y_units(&self) -> i64 {
        self.y
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x as f64 * UNIT
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y as f64 * UNIT
    }

    #[inline]
    pub fn to_f64(&self) -> (f64, f64) {
        (self.x(), self.y())
    }

    /// Squared distance in grid units squared, exact.
    pub fn dist2_units(&self, other: &Point) -> i128 {
        let dx = other.x as i128 - self.x as i128;
        let dy = other.y as i128 - self.y as i128;
        dx * dx + dy * dy
    }

    pub fn dist(&self, other: &Point) -> f64 {
        let dx = (other.x as i128 - self.x as i128) as f64;
        let dy = (other.y as i128 - self.y as i128) as f64;
        dx.hypot(dy) * UNIT
    }

    /// Exact translation by a grid vector.
    pub fn translate_units(&self, dx: i64, dy: i64) -> Result<Self> {
        Point::from_units(
            self.x.checked_add(dx).ok_or_else(|| range_err(dx))?,
            self.y.checked_add(dy).ok_or_else(|| range_err(dy))?,
        )
    }

    /// Exact rotation by a quarter turn counterclockwise about the origin.
    pub fn rotate_quarter(&self) -> Self {
        Point {
            x: -self.y,
            y: self.x,
        }
    }

    pub fn decimal_x(&self) -> String {
        format_decimal(self.x)
    }

    pub fn decimal_y(&self) -> String {
        format_decimal(self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.decimal_x(), self.decimal_y())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.decimal_x(), self.decimal_y())
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.decimal_x(), self.decimal_y()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        Point::parse(&x, &y).map_err(de::Error::custom)
    }
}

fn range_err(v: impl fmt::Display) -> Error {
    Error::CoordinateRange(v.to_string())
}

fn check_units(v: i64) -> Result<()> {
    if (-MAX_UNITS..=MAX_UNITS).contains(&v) {
        Ok(())
    } else {
        Err(range_err(format_decimal(v)))
    }
}

fn snap(v: f64) -> Result<i64> {
    let u = (v * UNITS_PER_LENGTH as f64).round();
    if !u.is_finite() || u.abs() > MAX_UNITS as f64 {
        return Err(range_err(v));
    }
    Ok(u as i64)
}

/// Parses a decimal (optionally with exponent) into grid units, exactly.
pub fn parse_decimal(text: &str) -> Result<i64> {
    let bad = || Error::Decimal(text.to_string());
    let s = text.trim();
    let (neg, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (
            &body[..i],
            body[i + 1..].parse::<i32>().map_err(|_| bad())?,
        ),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = digits.trim_start_matches('0');
    if digits.len() > 36 {
        return Err(range_err(text));
    }
    let mut value: i128 = 0;
    for b in digits.bytes() {
        value = value * 10 + (b - b'0') as i128;
    }
    let shift = exp as i64 + 9 - frac_part.len() as i64;
    if value != 0 {
        if shift >= 0 {
            for _ in 0..shift {
                value = value.checked_mul(10).ok_or_else(|| range_err(text))?;
                if value > MAX_UNITS as i128 {
                    return Err(range_err(text));
                }
            }
        } else {
            for _ in 0..(-shift) {
                if value % 10 != 0 {
                    return Err(Error::Precision(text.to_string()));
                }
                value /= 10;
            }
        }
    }
    if value > MAX_UNITS as i128 {
        return Err(range_err(text));
    }
    let v = value as i64;
    Ok(if neg { -v } else { v })
}

/// Shortest exact decimal for a grid value.
pub fn format_decimal(units: i64) -> String {
    let neg = units < 0;
    let abs = units.unsigned_abs();
    let int = abs / UNITS_PER_LENGTH as u64;
    let frac = abs % UNITS_PER_LENGTH as u64;
    let sign = if neg { "-" } else { "" };
    if frac == 0 {
        format!("{sign}{int}")
    } else {
        let f = format!("{frac:09}");
        format!("{sign}{int}.{}", f.trim_end_matches('0'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_decimal("0.1").unwrap(), 100_000_000);
        assert_eq!(parse_decimal("-1e-9").unwrap(), -1);
        assert_eq!(parse_decimal("2").unwrap(), 2_000_000_000);
        assert_eq!(parse_decimal("+.5").unwrap(), 500_000_000);
        assert_eq!(parse_decimal("1.2500000000000").unwrap(), 1_250_000_000);
        assert_eq!(parse_decimal("3E2").unwrap(), 300_000_000_000);
    }

    #[test]
    fn decimal_rejects_garbage_and_subgrid_precision() {
        assert!(matches!(parse_decimal("abc"), Err(Error::Decimal(_))));
        assert!(matches!(parse_decimal("."), Err(Error::Decimal(_))));
        assert!(matches!(parse_decimal("1.2.3"), Err(Error::Decimal(_))));
        assert!(matches!(
            parse_decimal("0.0000000001"),
            Err(Error::Precision(_))
        ));
        assert!(matches!(
            parse_decimal("5e9"),
            Err(Error::CoordinateRange(_))
        ));
    }

    #[test]
    fn format_round_trips() {
        for v in [0, 1, -1, 123_456_789_012, -500_000_000, MAX_UNITS, -MAX_UNITS] {
            assert_eq!(parse_decimal(&format_decimal(v)).unwrap(), v);
        }
        assert_eq!(format_decimal(-1), "-0.000000001");
        assert_eq!(format_decimal(2_500_000_000), "2.5");
    }

    #[test]
    fn snapping_rounds_to_grid() {
        let p = Point::new(0.1, -0.3);
        assert_eq!(p, Point::parse("0.1", "-0.3").unwrap());
        assert!(Point::try_from_f64(f64::NAN, 0.0).is_err());
        assert!(Point::try_from_f64(1e10, 0.0).is_err());
    }
}
