//! High-precision value with a conservative error estimate attached.

use super::dd::{self, Dd};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A double-double value together with a non-negative absolute error bound.
///
/// Arithmetic propagates the bound conservatively (first order in the errors
/// plus one rounding unit per operation). Quadrature and extrapolation attach
/// their own a-posteriori estimates.
#[derive(Clone, Copy, Debug)]
pub struct HiFloat {
    pub value: Dd,
    pub err: f64,
}

impl HiFloat {
    pub fn exact(value: Dd) -> Self {
        HiFloat {
            value,
            err: dd::EPS * value.to_f64().abs(),
        }
    }

    pub fn with_err(value: Dd, err: f64) -> Self {
        debug_assert!(err >= 0.0 && err.is_finite());
        HiFloat { value, err }
    }

    pub fn from_f64(x: f64) -> Self {
        HiFloat {
            value: Dd::from_f64(x),
            err: 0.0,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.value.to_f64()
    }

    pub fn abs(self) -> Self {
        HiFloat {
            value: self.value.abs(),
            err: self.err,
        }
    }

    /// True when the two values agree within the combined error bounds plus
    /// an absolute slack.
    pub fn agrees_with(self, other: HiFloat, slack: f64) -> bool {
        (self.value - other.value).abs().to_f64() <= self.err + other.err + slack
    }

    fn round_err(v: Dd) -> f64 {
        dd::EPS * v.to_f64().abs()
    }
}

impl Neg for HiFloat {
    type Output = HiFloat;
    fn neg(self) -> HiFloat {
        HiFloat {
            value: -self.value,
            err: self.err,
        }
    }
}

impl Add for HiFloat {
    type Output = HiFloat;
    fn add(self, rhs: HiFloat) -> HiFloat {
        let value = self.value + rhs.value;
        HiFloat {
            value,
            err: self.err + rhs.err + Self::round_err(value),
        }
    }
}

impl Sub for HiFloat {
    type Output = HiFloat;
    fn sub(self, rhs: HiFloat) -> HiFloat {
        self + (-rhs)
    }
}

impl Mul for HiFloat {
    type Output = HiFloat;
    fn mul(self, rhs: HiFloat) -> HiFloat {
        let value = self.value * rhs.value;
        let a = self.value.to_f64().abs();
        let b = rhs.value.to_f64().abs();
        HiFloat {
            value,
            err: self.err * b + rhs.err * a + self.err * rhs.err + Self::round_err(value),
        }
    }
}

impl Div for HiFloat {
    type Output = HiFloat;
    fn div(self, rhs: HiFloat) -> HiFloat {
        let value = self.value / rhs.value;
        let b = rhs.value.to_f64().abs();
        let q = value.to_f64().abs();
        HiFloat {
            value,
            err: (self.err + q * rhs.err) / b + Self::round_err(value),
        }
    }
}

impl fmt::Display for HiFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.3e}", self.value, self.err)
    }
}
