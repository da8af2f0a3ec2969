//! Decimal and percent rendering of exact rationals.
//!
//! All computation elsewhere is exact; rounding happens only here, at the
//! presentation layer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Renders `r` rounded to `sig` significant digits (half away from zero) in
/// plain decimal notation, with trailing zeros trimmed.
pub fn to_sig_decimal(r: &BigRational, sig: usize) -> String {
    assert!(sig > 0);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let p = r.numer().abs();
    let q = r.denom().clone();

    // exponent e with 10^e <= |r| < 10^(e+1)
    let int_part = &p / &q;
    let exp: i64 = if int_part.is_zero() {
        let mut k = 1i64;
        let ten = BigInt::from(10);
        let mut scaled = &p * &ten;
        while scaled < q {
            scaled *= &ten;
            k += 1;
        }
        -k
    } else {
        int_part.to_string().len() as i64 - 1
    };

    let shift = sig as i64 - 1 - exp;
    let (num, den) = if shift >= 0 {
        (&p * BigInt::from(10).pow(shift as u32), q)
    } else {
        (p, &q * BigInt::from(10).pow((-shift) as u32))
    };
    // round half away from zero
    let mut mantissa = (num * 2u8 + &den) / (den * 2u8);
    let mut exp = exp;
    if mantissa == BigInt::from(10).pow(sig as u32) {
        mantissa = BigInt::from(10).pow(sig as u32 - 1);
        exp += 1;
    }

    let digits = mantissa.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if exp >= 0 {
        let point = (exp + 1) as usize;
        if point >= digits.len() {
            out.push_str(&digits);
            out.push_str(&"0".repeat(point - digits.len()));
        } else {
            out.push_str(&digits[..point]);
            out.push('.');
            out.push_str(&digits[point..]);
        }
    } else {
        out.push_str("0.");
        out.push_str(&"0".repeat((-exp - 1) as usize));
        out.push_str(&digits);
    }
    trim_decimal(out)
}

/// Renders `r` with a fixed number of decimal places (half away from zero).
pub fn to_decimal_places(r: &BigRational, places: usize) -> String {
    let neg = r.is_negative();
    let p = r.numer().abs();
    let q = r.denom().clone();
    let num = p * BigInt::from(10).pow(places as u32);
    let scaled = (num * 2u8 + &q) / (&q * 2u8);
    let mut digits = scaled.to_string();
    while digits.len() <= places {
        digits.insert(0, '0');
    }
    let split = digits.len() - places;
    let mut out = String::new();
    if neg && !scaled.is_zero() {
        out.push('-');
    }
    out.push_str(&digits[..split]);
    if places > 0 {
        out.push('.');
        out.push_str(&digits[split..]);
    }
    out
}

/// Percentage with two decimal places, e.g. `76.27`.
pub fn percent(r: &BigRational) -> String {
    to_decimal_places(&(r * BigRational::from_integer(BigInt::from(100))), 2)
}

/// Exact `numerator/denominator` form.
pub fn exact(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Nearest `f64`, for plotting only.
pub fn approx_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn trim_decimal(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}
