//! Shared numerical substrate: double-double floats, error-carrying values,
//! endpoint-aware Gauss-Legendre quadrature and Richardson extrapolation.

pub mod dd;
mod hifloat;
mod quad;
pub mod richardson;

pub use dd::Dd;
pub use hifloat::HiFloat;
pub use quad::{gauss_legendre_unit, quad_unit, quad_with_endpoint, QuadOptions};
pub use richardson::richardson_extrapolate;

use crate::exact::{format_decimal, parse_decimal, Rational};

/// Exact rational value of a double-double (the sum `hi + lo` is exact).
pub fn dd_to_rational(x: Dd) -> Rational {
    let hi = Rational::from_float(x.hi).expect("non-finite double-double");
    let lo = Rational::from_float(x.lo).expect("non-finite double-double");
    hi + lo
}

/// Nearest double-double below/above a rational; error is ~1 ulp of the format.
pub fn rational_to_dd(r: &Rational) -> Dd {
    use num::traits::Zero;
    if r.is_zero() {
        return dd::ZERO;
    }
    let hi = crate::exact::to_f64_safe(r);
    if !hi.is_finite() {
        return Dd::from_f64(hi);
    }
    let rem = r - Rational::from_float(hi).expect("finite");
    let lo = crate::exact::to_f64_safe(&rem);
    Dd::new(hi, lo)
}

/// Deterministic decimal rendering of a double-double.
pub fn format_dd(x: Dd, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{}", x.to_f64());
    }
    format_decimal(&dd_to_rational(x), digits)
}

/// Exact decimal parse into the nearest double-double.
pub fn parse_dd(s: &str) -> Option<Dd> {
    parse_decimal(s).map(|r| rational_to_dd(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn rational_dd_roundtrip() {
        let r = rat(1, 3);
        let x = rational_to_dd(&r);
        let back = dd_to_rational(x);
        let diff = (&back - &r).numer().clone();
        // |back - 1/3| < 1e-32
        assert!(crate::exact::to_f64_safe(&(back - r)).abs() < 1e-32);
        let _ = diff;
    }

    #[test]
    fn parse_format() {
        let x = parse_dd("0.125").unwrap();
        assert_eq!(x.to_f64(), 0.125);
        assert_eq!(format_dd(x, 3), "0.125");
        assert_eq!(format_dd(Dd::from_f64(42.0), 5), "42.000");
    }
}
