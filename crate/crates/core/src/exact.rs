//! Exact rational arithmetic helpers.
//!
//! Every count, determinant and correlation sum in the crate is a
//! [`Rational`] (arbitrary-precision `BigInt` ratio). The helpers here keep
//! factorial-heavy summands out of the call sites.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat_i64(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n || n < 0 {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Rising factorial (x)_n = x (x+1) ... (x+n-1).
pub fn pochhammer(x: &Rational, n: u64) -> Rational {
    let mut acc = Rational::one();
    let mut t = x.clone();
    for _ in 0..n {
        acc *= &t;
        t += Rational::one();
    }
    acc
}

/// 2^k as a rational, k may be negative.
pub fn pow2(k: i64) -> Rational {
    let two = BigInt::from(2);
    if k >= 0 {
        Rational::from_integer(two.pow(k as u32))
    } else {
        Rational::new(BigInt::one(), two.pow((-k) as u32))
    }
}

/// (-1)^k.
pub fn neg_one_pow(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Safe conversion of a possibly huge rational to `f64`.
///
/// `Ratio::to_f64` converts numerator and denominator separately and returns
/// NaN once either exceeds f64 range; this version rescales by powers of two
/// first, so ratios of thousand-digit integers convert correctly.
pub fn to_f64_safe(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let negative = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // Bring the integer quotient to ~96 bits before converting.
    let shift = 96 - (nb - db);
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let mut x = q.to_f64().unwrap_or(f64::INFINITY);
    x = scale_pow2(x, -shift);
    if negative {
        -x
    } else {
        x
    }
}

fn scale_pow2(x: f64, k: i64) -> f64 {
    let mut x = x;
    let mut k = k;
    while k > 900 {
        x *= 2f64.powi(900);
        k -= 900;
    }
    while k < -900 {
        x *= 2f64.powi(-900);
        k += 900;
    }
    x * 2f64.powi(k as i32)
}

/// Decimal rendering with `digits` significant digits (round-to-nearest on
/// the last digit is not attempted; truncation keeps it bit-reproducible).
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    // Find decimal exponent e with 10^e <= num/den < 10^(e+1).
    let mut e: i64 = ((num.bits() as i64 - den.bits() as i64) as f64 * 0.30103) as i64;
    let ten = BigInt::from(10);
    let pow10 = |k: i64| -> (BigInt, BigInt) {
        if k >= 0 {
            (ten.pow(k as u32), BigInt::one())
        } else {
            (BigInt::one(), ten.pow((-k) as u32))
        }
    };
    loop {
        let (pn, pd) = pow10(e);
        if &num * &pd >= &den * &pn {
            let (pn2, pd2) = pow10(e + 1);
            if &num * &pd2 < &den * &pn2 {
                break;
            }
            e += 1;
        } else {
            e -= 1;
        }
    }
    // digits of num/den * 10^(digits-1-e)
    let k = digits as i64 - 1 - e;
    let (pn, pd) = pow10(k);
    let mantissa = (&num * pn) / (&den * pd);
    let ms = mantissa.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if (0..digits as i64).contains(&e) {
        let point = (e + 1) as usize;
        out.push_str(&ms[..point]);
        if point < ms.len() {
            out.push('.');
            out.push_str(&ms[point..]);
        }
    } else if (-4..0).contains(&e) {
        out.push_str("0.");
        for _ in 0..(-e - 1) {
            out.push('0');
        }
        out.push_str(&ms);
    } else {
        out.push_str(&ms[..1]);
        out.push('.');
        out.push_str(&ms[1..]);
        out.push('e');
        out.push_str(&e.to_string());
    }
    out
}

/// Parse a plain decimal string (`-12.345e-6` forms allowed) exactly.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (mant, neg) = match mant.strip_prefix('-') {
        Some(m) => (m, true),
        None => (mant.strip_prefix('+').unwrap_or(mant), false),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits: String = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        Rational::from_integer(n * ten.pow(scale as u32))
    } else {
        Rational::new(n, ten.pow((-scale) as u32))
    };
    Some(if neg { -r } else { r })
}
