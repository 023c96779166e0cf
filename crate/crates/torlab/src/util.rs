//! Small numeric helpers shared across modules: logarithms of big
//! rationals, decimal conversion for the line-record formats, and exact
//! f64 bridges.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// log2 of a nonzero big natural, good to ~1e-15 relative.
pub fn log2_biguint(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 53 {
        return n.to_f64().unwrap().log2();
    }
    let top = (n >> (bits - 53)).to_f64().unwrap();
    top.log2() + (bits - 53) as f64
}

/// log2 |q| for a rational, NEG_INFINITY at zero. Safe far outside the
/// f64 exponent range.
pub fn log2_rational_abs(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    log2_biguint(q.numer().magnitude()) - log2_biguint(q.denom().magnitude())
}

/// Exact rational from a finite f64.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Serializes a rational exactly. Denominators of the form 2^a 5^b print
/// as finite decimals; anything else prints as "num/den". Both parse back
/// bit-exactly.
pub fn rational_to_string(q: &BigRational) -> String {
    let mut den = q.denom().magnitude().clone();
    let mut twos = 0u32;
    let two = BigUint::from(2u32);
    let five = BigUint::from(5u32);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    let mut fives = 0u32;
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", q.numer(), q.denom());
    }
    // scale to 10^k with k = max(twos, fives)
    let k = twos.max(fives);
    let scale = BigInt::from(2u32).pow(k - twos.min(k)) * BigInt::from(5u32).pow(k - fives.min(k));
    let scaled = q.numer() * &scale;
    let negative = scaled.is_negative();
    let digits = scaled.magnitude().to_string();
    let mut s = String::new();
    if negative {
        s.push('-');
    }
    if k == 0 {
        s.push_str(&digits);
        return s;
    }
    let k = k as usize;
    if digits.len() <= k {
        s.push_str("0.");
        for _ in 0..(k - digits.len()) {
            s.push('0');
        }
        s.push_str(&digits);
    } else {
        s.push_str(&digits[..digits.len() - k]);
        s.push('.');
        s.push_str(&digits[digits.len() - k..]);
    }
    s
}

/// Parses the output of [`rational_to_string`]: a decimal (optionally
/// signed, optional fractional part) or a "num/den" fraction.
pub fn rational_from_string(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let numer: BigInt = n.trim().parse().ok()?;
        let denom: BigInt = d.trim().parse().ok()?;
        if denom.is_zero() {
            return None;
        }
        return Some(BigRational::new(numer, denom));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int_digits = if int_part.is_empty() || int_part == "-" {
            "0".to_string()
        } else {
            int_part.to_string()
        };
        let int_val: BigInt = int_digits.parse().ok()?;
        if frac_part.chars().any(|c| !c.is_ascii_digit()) {
            return None;
        }
        let frac_val: BigInt = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            frac_part.parse().ok()?
        };
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let magnitude = int_val.magnitude().clone();
        let mut total = BigRational::new(BigInt::from(magnitude), BigInt::one())
            + BigRational::new(frac_val, scale);
        if negative {
            total = -total;
        }
        return Some(total);
    }
    let v: BigInt = s.parse().ok()?;
    Some(BigRational::from(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn decimal_round_trip_dyadic() {
        for q in [rat(1, 4), rat(-3, 8), rat(7, 10), rat(5, 1), rat(0, 1)] {
            let s = rational_to_string(&q);
            assert!(!s.contains('/'), "{s}");
            assert_eq!(rational_from_string(&s).unwrap(), q);
        }
    }

    #[test]
    fn fraction_round_trip_non_decimal() {
        for q in [rat(1, 3), rat(-5, 7), rat(22, 21)] {
            let s = rational_to_string(&q);
            assert!(s.contains('/'), "{s}");
            assert_eq!(rational_from_string(&s).unwrap(), q);
        }
    }

    #[test]
    fn log2_handles_huge_values() {
        let q = BigRational::new(BigInt::one(), BigInt::one() << 5000);
        assert!((log2_rational_abs(&q) + 5000.0).abs() < 1e-9);
    }
}
