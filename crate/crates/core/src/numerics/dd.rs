//! Double-double arithmetic: unevaluated sums `hi + lo` of two `f64`s giving
//! roughly 106 bits (~32 significant decimal digits) of working precision.
//!
//! This is the substrate for every quadrature, Darboux comparison and
//! extrapolation in the crate. The error-budgeted wrapper type lives in
//! [`super::hifloat`]; `Dd` itself is a plain value type with `f64`-like
//! semantics. Transcendentals are implemented by argument reduction plus
//! Taylor series or a Newton correction seeded from the `f64` result, the
//! usual approach for double-double libraries.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Error-free sum: returns `(s, e)` with `s = fl(a + b)` and `a + b = s + e`.
#[inline(always)]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Like `two_sum` but requires `|a| >= |b|`.
#[inline(always)]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product via FMA: `a * b = p + e`.
#[inline(always)]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// A double-double number `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
pub const PI: Dd = Dd {
    hi: 3.14159265358979312e0,
    lo: 1.22464679914735321e-16,
};
pub const TWO_PI: Dd = Dd {
    hi: 6.28318530717958623e0,
    lo: 2.44929359829470641e-16,
};
pub const FRAC_PI_2: Dd = Dd {
    hi: 1.57079632679489656e0,
    lo: 6.12323399573676604e-17,
};
pub const FRAC_PI_4: Dd = Dd {
    hi: 7.85398163397448279e-1,
    lo: 3.06161699786838302e-17,
};
pub const LN_2: Dd = Dd {
    hi: 6.93147180559945286e-1,
    lo: 2.31904681384629956e-17,
};

/// Relative rounding unit of the format, ~4.9e-32.
pub const EPS: f64 = 4.93e-32;

impl Dd {
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (s, e) = two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn from_i64(x: i64) -> Self {
        // i64 may exceed the 53-bit mantissa; split exactly.
        let hi = x as f64;
        let lo = (x - hi as i64) as f64;
        Dd::new(hi, lo)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub fn ldexp(self, k: i32) -> Self {
        let f = libm_ldexp(1.0, k);
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn recip(self) -> Self {
        ONE / self
    }

    /// Integer power by binary exponentiation.
    pub fn powi(self, n: i64) -> Self {
        if n == 0 {
            return ONE;
        }
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn sqrt(self) -> Self {
        if self.is_zero() {
            return ZERO;
        }
        assert!(self.hi > 0.0, "sqrt of negative double-double");
        // Newton on y^2 = a, seeded from the f64 root; two steps for margin.
        let mut y = Dd::from_f64(self.hi.sqrt());
        y = (y + self / y).ldexp(-1);
        y = (y + self / y).ldexp(-1);
        y
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return ZERO;
        }
        // x = k ln2 + r, exp(r) by Taylor after scaling r down by 2^4.
        let k = (self.hi / LN_2.hi).round();
        let r = self - LN_2 * Dd::from_f64(k);
        let r = r.ldexp(-4);
        let mut term = r;
        let mut sum = ONE + r;
        for i in 2..24 {
            term = term * r / Dd::from_f64(i as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-35 * sum.hi.abs() {
                break;
            }
        }
        for _ in 0..4 {
            sum = sum * sum;
        }
        sum.ldexp(k as i32)
    }

    pub fn ln(self) -> Self {
        assert!(self.hi > 0.0, "ln of non-positive double-double");
        // Newton: y <- y + a e^{-y} - 1, doubling correct digits each pass.
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - ONE;
        }
        y
    }

    /// `self^p` for positive base.
    pub fn powf(self, p: Dd) -> Self {
        if self.is_zero() {
            return ZERO;
        }
        (p * self.ln()).exp()
    }

    pub fn sin_cos(self) -> (Self, Self) {
        // Reduce modulo pi/2. The reduction is exact enough for arguments up
        // to ~1e4, well past anything the asymptotics drive here.
        let k = (self.hi / FRAC_PI_2.hi).round();
        let r = self - FRAC_PI_2 * Dd::from_f64(k);
        let (s, c) = sin_cos_taylor(r);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(self) -> Self {
        self.sin_cos().1
    }

    pub fn atan(self) -> Self {
        // Seed with the f64 arctangent, then one small correction:
        // atan(x) = t0 + atan(d), d = (x - tan t0)/(1 + x tan t0), |d| ~ 1e-16.
        let t0 = Dd::from_f64(self.hi.atan());
        let (s, c) = t0.sin_cos();
        let t = s / c;
        let d = (self - t) / (ONE + self * t);
        t0 + d
    }

    pub fn atan2(y: Dd, x: Dd) -> Dd {
        if x.is_zero() {
            assert!(!y.is_zero(), "atan2(0, 0)");
            return if y.hi > 0.0 { FRAC_PI_2 } else { -FRAC_PI_2 };
        }
        if y.is_zero() {
            return if x.hi > 0.0 { ZERO } else { PI };
        }
        let a = (y / x).atan();
        if x.hi > 0.0 {
            a
        } else if y.hi > 0.0 {
            a + PI
        } else {
            a - PI
        }
    }

    pub fn acos(self) -> Self {
        let one_minus = ONE - self;
        let one_plus = ONE + self;
        if one_minus.hi <= 0.0 {
            return ZERO;
        }
        if one_plus.hi <= 0.0 {
            return PI;
        }
        Dd::atan2((one_minus * one_plus).sqrt(), self)
    }

    /// Reduce into `(-pi, pi]`.
    pub fn rem_two_pi(self) -> Self {
        let k = (self.hi / TWO_PI.hi).round();
        let mut r = self - TWO_PI * Dd::from_f64(k);
        if r.hi > PI.hi {
            r = r - TWO_PI;
        }
        if r.hi <= -PI.hi {
            r = r + TWO_PI;
        }
        r
    }
}

fn sin_cos_taylor(r: Dd) -> (Dd, Dd) {
    // |r| <= pi/4 after reduction.
    let r2 = r * r;
    let mut term = r;
    let mut s = r;
    let mut i = 1.0f64;
    loop {
        term = term * r2 / Dd::from_f64((i + 1.0) * (i + 2.0));
        term = -term;
        s = s + term;
        i += 2.0;
        if term.hi.abs() < 1e-36 {
            break;
        }
    }
    let mut term = ONE;
    let mut c = ONE;
    let mut i = 0.0f64;
    loop {
        term = term * r2 / Dd::from_f64((i + 1.0) * (i + 2.0));
        term = -term;
        c = c + term;
        i += 2.0;
        if term.hi.abs() < 1e-36 {
            break;
        }
    }
    (s, c)
}

fn libm_ldexp(x: f64, k: i32) -> f64 {
    // Split large shifts so intermediate powers stay finite.
    if k > 1000 {
        x * 2f64.powi(1000) * 2f64.powi(k - 1000)
    } else if k < -1000 {
        x * 2f64.powi(-1000) * 2f64.powi(k + 1000)
    } else {
        x * 2f64.powi(k)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2b) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2b + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        assert!(rhs.hi != 0.0, "double-double division by zero");
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Dd::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e + q3)
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, rhs: Dd) {
        *self = *self + rhs;
    }
}
impl SubAssign for Dd {
    fn sub_assign(&mut self, rhs: Dd) {
        *self = *self - rhs;
    }
}
impl MulAssign for Dd {
    fn mul_assign(&mut self, rhs: Dd) {
        *self = *self * rhs;
    }
}
impl DivAssign for Dd {
    fn div_assign(&mut self, rhs: Dd) {
        *self = *self / rhs;
    }
}

impl PartialEq for Dd {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::from_f64(x)
    }
}

impl From<i64> for Dd {
    fn from(x: i64) -> Dd {
        Dd::from_i64(x)
    }
}

impl fmt::Display for Dd {
    /// Prints with 31 significant digits by default (`{:.N}` overrides the
    /// digit count). Rendering goes through exact rational digit extraction,
    /// so equal values always print identically.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(31);
        f.write_str(&super::format_dd(*self, digits))
    }
}
