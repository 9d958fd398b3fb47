//! Exact rational scalars and their text forms.
//!
//! Every geometric quantity in this crate is a [`Rational`]. Inputs arrive
//! as `"p/q"` fractions, decimal strings, or integers and are converted
//! exactly; outputs are rendered back as `"p/q"` plus a decimal
//! approximation side field. JSON numbers are accepted for convenience and
//! converted from their exact binary value.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational scalar used for all coordinates, distances, and margins.
pub type Rational = num_rational::BigRational;

/// Parses a rational from `"p/q"`, a decimal string such as `"-0.25"`, or a
/// plain integer string. The conversion is exact.
pub fn rat(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            "0"
        } else {
            int_part
        };
        let i: BigInt = int_part
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer part in {s:?}")))?;
        if frac_part.is_empty() {
            return Ok(Rational::from_integer(i));
        }
        if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad fractional part in {s:?}")));
        }
        let f: BigInt = frac_part
            .parse()
            .map_err(|_| Error::Parse(format!("bad fractional part in {s:?}")))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rational::new(f, scale);
        let int = Rational::from_integer(i);
        return Ok(if negative { int - frac } else { int + frac });
    }
    let i: BigInt = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational literal {s:?}")))?;
    Ok(Rational::from_integer(i))
}

/// Exact conversion from a finite `f64` (every finite double is rational).
pub fn rat_from_f64(x: f64) -> Result<Rational, Error> {
    Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite number {x}")))
}

/// Nearest-double approximation, for reports and rendering only.
pub fn rat_to_f64(r: &Rational) -> f64 {
    r.numer()
        .to_f64()
        .and_then(|n| r.denom().to_f64().map(|d| n / d))
        .unwrap_or_else(|| {
            // Fall back through a reduced magnitude for huge components.
            let digits = 30i64;
            let scale = BigInt::from(10u32).pow(digits as u32);
            let scaled = (r * Rational::from_integer(scale)).round();
            scaled.numer().to_f64().unwrap_or(f64::NAN) / 10f64.powi(digits as i32)
        })
}

/// Canonical display form: `"p/q"` for non-integers, `"p"` for integers.
pub fn rat_display(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering with a fixed number of fractional digits, rounded to
/// nearest (ties away from zero). Deterministic, float-free.
pub fn rat_decimal(r: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = r * Rational::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let negative = rounded.is_negative();
    let abs = rounded.abs();
    let (int_part, frac_part) = (abs.clone() / &scale, abs % &scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        let frac = frac_part.to_string();
        out.push('.');
        for _ in frac.len()..digits {
            out.push('0');
        }
        out.push_str(&frac);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_decimals_integers() {
        assert_eq!(rat("3/4").unwrap(), Rational::new(3.into(), 4.into()));
        assert_eq!(rat("-0.25").unwrap(), Rational::new((-1).into(), 4.into()));
        assert_eq!(rat("2").unwrap(), Rational::from_integer(2.into()));
        assert_eq!(rat(".5").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(rat("-1.5").unwrap(), Rational::new((-3).into(), 2.into()));
        assert_eq!(rat(" 7/2 ").unwrap(), Rational::new(7.into(), 2.into()));
    }

    #[test]
    fn rejects_malformed() {
        assert!(rat("").is_err());
        assert!(rat("1/0").is_err());
        assert!(rat("a.b").is_err());
        assert!(rat("1.2.3").is_err());
        assert!(rat("0.5e3").is_err());
    }

    #[test]
    fn decimal_rendering_rounds() {
        assert_eq!(rat_decimal(&rat("1/16").unwrap(), 6), "0.062500");
        assert_eq!(rat_decimal(&rat("-1/3").unwrap(), 4), "-0.3333");
        assert_eq!(rat_decimal(&rat("2/3").unwrap(), 3), "0.667");
        assert_eq!(rat_decimal(&rat("5").unwrap(), 0), "5");
    }

    #[test]
    fn f64_round_trip_is_exact() {
        let r = rat_from_f64(0.1).unwrap();
        assert_eq!(rat_to_f64(&r), 0.1);
    }
}
