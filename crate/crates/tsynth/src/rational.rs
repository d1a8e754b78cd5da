use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact timestamps and clock values.
pub type Rational = Ratio<i64>;

/// Parses `p/q`, a decimal like `0.25`, or an integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let num: i64 = frac.parse().map_err(|_| bad())?;
        let mag = Ratio::from_integer(int_part.abs()) + Ratio::new(num, den);
        return Ok(if neg { -mag } else { mag });
    }
    s.parse::<i64>().map(Ratio::from_integer).map_err(|_| bad())
}

/// Formats as an integer or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

pub fn is_nonneg(r: &Rational) -> bool {
    !r.is_negative() || r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("2/5").unwrap(), Ratio::new(2, 5));
        assert_eq!(parse_rational("0.25").unwrap(), Ratio::new(1, 4));
        assert_eq!(parse_rational("3").unwrap(), Ratio::from_integer(3));
        assert_eq!(parse_rational("-1.5").unwrap(), Ratio::new(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&Ratio::new(4, 10)), "2/5");
    }
}
