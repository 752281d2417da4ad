use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PolyError;

pub type Rational = BigRational;

/// Approximates `c` by `N / 10^n` with `N = round(10^n * c)`, ties away from
/// zero. The float is taken at its exact binary value.
pub fn rationalize(c: f64, n: u32) -> Rational {
    let exact = BigRational::from_float(c).unwrap_or_else(BigRational::zero);
    round_scaled(exact, n)
}

/// Same rounding rule applied to an exact decimal string such as `-0.145`,
/// avoiding binary representation error.
pub fn rationalize_decimal(text: &str, n: u32) -> Result<Rational, PolyError> {
    Ok(round_scaled(parse_decimal(text)?, n))
}

fn round_scaled(value: Rational, n: u32) -> Rational {
    let scale = BigInt::from(10u32).pow(n);
    let scaled = value * BigRational::from_integer(scale.clone());
    // BigRational::round rounds half away from zero
    BigRational::new(scaled.round().to_integer(), scale)
}

fn parse_decimal(text: &str) -> Result<Rational, PolyError> {
    let bad = || PolyError::BadRational(text.to_string());
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// Parses `p`, `-p`, `p/q` or a finite decimal into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, PolyError> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let bad = || PolyError::BadRational(text.to_string());
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    parse_decimal(t)
}

/// `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // very large numerators/denominators: shift both down first
    let bits = r.numer().bits().max(r.denom().bits());
    let shift = bits.saturating_sub(1000);
    let n = (r.numer().abs() >> shift).to_f64().unwrap_or(f64::MAX);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::MAX);
    let v = n / d;
    if r.is_negative() {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn rationalize_examples() {
        assert_eq!(rationalize(0.123456, 4), q(1235, 10000));
        assert_eq!(rationalize(-1.5, 0), q(-2, 1));
        assert_eq!(rationalize(1.5, 0), q(2, 1));
        assert_eq!(rationalize(0.801918, 2), q(80, 100));
        assert_eq!(rationalize(0.0, 3), q(0, 1));
    }

    #[test]
    fn decimal_ties_are_exact() {
        // 0.145 is below the tie as a binary float, exactly on it as a decimal
        assert_eq!(rationalize(0.145, 2), q(14, 100));
        assert_eq!(rationalize_decimal("0.145", 2).unwrap(), q(15, 100));
        assert_eq!(rationalize_decimal("-0.145", 2).unwrap(), q(-15, 100));
        assert!(rationalize_decimal("1.2.3", 2).is_err());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("146/100").unwrap(), q(73, 50));
        assert_eq!(parse_rational("-3").unwrap(), q(-3, 1));
        assert_eq!(parse_rational("1.46").unwrap(), q(73, 50));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&q(73, 50)), "73/50");
        assert_eq!(format_rational(&q(-4, 2)), "-2");
        assert!((to_f64(&q(73, 50)) - 1.46).abs() < 1e-15);
    }

    #[test]
    fn to_f64_huge_terms() {
        let big = BigInt::from(3u32).pow(2000);
        let r = BigRational::new(big.clone() * 2 + 1, big);
        assert_eq!(to_f64(&r), 2.0);
        assert_eq!(to_f64(&-r), -2.0);
    }
}
