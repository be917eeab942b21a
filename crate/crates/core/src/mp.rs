//! Multiprecision complex scalar.
//!
//! A thin owned wrapper around [`rug::Complex`] with operator overloads that
//! propagate the precision of the left operand, so numerical code reads like
//! ordinary arithmetic. Every constructor takes an explicit bit precision.

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rug::float::Constant;
use rug::{Complex, Float};

#[derive(Clone, PartialEq)]
pub struct Mpc(Complex);

impl Mpc {
    pub fn new(bits: u32, re: f64, im: f64) -> Self {
        Mpc(Complex::with_val(bits, (re, im)))
    }

    pub fn zero(bits: u32) -> Self {
        Mpc(Complex::new(bits))
    }

    pub fn one(bits: u32) -> Self {
        Self::new(bits, 1.0, 0.0)
    }

    /// The imaginary unit.
    pub fn i(bits: u32) -> Self {
        Self::new(bits, 0.0, 1.0)
    }

    /// π as a real value.
    pub fn pi(bits: u32) -> Self {
        let pi = Float::with_val(bits, Constant::Pi);
        Mpc(Complex::with_val(bits, (pi, 0)))
    }

    /// π·√−1.
    pub fn pi_i(bits: u32) -> Self {
        let pi = Float::with_val(bits, Constant::Pi);
        Mpc(Complex::with_val(bits, (0, pi)))
    }

    pub fn from_c64(bits: u32, z: Complex64) -> Self {
        Self::new(bits, z.re, z.im)
    }

    pub fn from_int(bits: u32, n: i64) -> Self {
        Mpc(Complex::with_val(bits, (n, 0)))
    }

    /// The rational `num/den` rounded once to the working precision.
    pub fn from_ratio(bits: u32, num: i64, den: i64) -> Self {
        let mut x = Float::with_val(bits, num);
        x /= den;
        Mpc(Complex::with_val(bits, (x, 0)))
    }

    pub fn from_float(re: Float, im: Float) -> Self {
        let bits = re.prec().max(im.prec());
        Mpc(Complex::with_val(bits, (re, im)))
    }

    pub fn bits(&self) -> u32 {
        self.0.prec().0
    }

    /// The same value re-rounded to `bits`.
    pub fn with_bits(&self, bits: u32) -> Self {
        Mpc(Complex::with_val(bits, &self.0))
    }

    pub fn inner(&self) -> &Complex {
        &self.0
    }

    pub fn re(&self) -> f64 {
        self.0.real().to_f64()
    }

    pub fn im(&self) -> f64 {
        self.0.imag().to_f64()
    }

    pub fn real_part(&self) -> Self {
        Mpc(Complex::with_val(self.bits(), (self.0.real(), 0)))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re(), self.im())
    }

    pub fn abs_float(&self) -> Float {
        Float::with_val(self.bits(), self.0.abs_ref())
    }

    /// |z| rounded to f64 (saturates to `inf` for astronomically large values).
    /// |z| as a real `Mpc` at full precision.
    pub fn abs_mpc(&self) -> Mpc {
        Mpc::from_float(self.abs_float(), Float::new(self.bits()))
    }

    pub fn abs(&self) -> f64 {
        self.abs_float().to_f64()
    }

    /// ln|z| as f64; finite even when |z| itself overflows f64.
    pub fn ln_abs(&self) -> f64 {
        let a = self.abs_float();
        if a.is_zero() {
            return f64::NEG_INFINITY;
        }
        a.ln().to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.real().is_zero() && self.0.imag().is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.real().is_finite() && self.0.imag().is_finite()
    }

    pub fn exp(&self) -> Self {
        Mpc(self.0.clone().exp())
    }

    pub fn ln(&self) -> Self {
        Mpc(self.0.clone().ln())
    }

    pub fn sqrt(&self) -> Self {
        Mpc(self.0.clone().sqrt())
    }

    pub fn sinh(&self) -> Self {
        Mpc(self.0.clone().sinh())
    }

    pub fn cosh(&self) -> Self {
        Mpc(self.0.clone().cosh())
    }

    pub fn sin(&self) -> Self {
        Mpc(self.0.clone().sin())
    }

    pub fn cos(&self) -> Self {
        Mpc(self.0.clone().cos())
    }

    pub fn conj(&self) -> Self {
        Mpc(self.0.clone().conj())
    }

    /// Multiplication by √−1 (exact).
    pub fn mul_i(&self) -> Self {
        Mpc(self.0.clone().mul_i(false))
    }

    pub fn sqr(&self) -> Self {
        Mpc(self.0.clone().square())
    }

    pub fn recip(&self) -> Self {
        Mpc(self.0.clone().recip())
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Mpc::one(self.bits());
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            base = base.sqr();
            e >>= 1;
        }
        acc
    }

    /// e^{iθ} for a real angle given at working precision.
    pub fn cis(theta: &Float) -> Self {
        let bits = theta.prec();
        let (s, c) = theta.clone().sin_cos(Float::new(bits));
        Mpc(Complex::with_val(bits, (c, s)))
    }

    /// Decimal rendering of both parts with `digits` significant digits.
    pub fn to_decimal_strings(&self, digits: usize) -> (String, String) {
        (
            float_to_decimal(self.0.real(), digits),
            float_to_decimal(self.0.imag(), digits),
        )
    }
}

/// Scientific decimal notation that round-trips through `str::parse::<f64>` for
/// low digit counts and stays exact-looking for high ones.
pub fn float_to_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_f64().to_string();
    }
    let s = x.to_string_radix(10, Some(digits.max(1)));
    // rug renders as "1.234e5" or "-1.234e-5"; normalize the exponent marker
    s.replace('@', "e")
}

impl fmt::Debug for Mpc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal_strings(20);
        write!(f, "Mpc({re}, {im})")
    }
}

impl fmt::Display for Mpc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.bits() as f64) * std::f64::consts::LOG10_2).floor() as usize;
        let (re, im) = self.to_decimal_strings(digits);
        write!(f, "{re}{}{im}i", if im.starts_with('-') { "" } else { "+" })
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident, $op:tt) => {
        impl $tr<&Mpc> for &Mpc {
            type Output = Mpc;
            fn $method(self, rhs: &Mpc) -> Mpc {
                Mpc(Complex::with_val(self.bits(), &self.0 $op &rhs.0))
            }
        }
        impl $tr<Mpc> for &Mpc {
            type Output = Mpc;
            fn $method(self, rhs: Mpc) -> Mpc {
                self $op &rhs
            }
        }
        impl $tr<&Mpc> for Mpc {
            type Output = Mpc;
            fn $method(self, rhs: &Mpc) -> Mpc {
                &self $op rhs
            }
        }
        impl $tr<Mpc> for Mpc {
            type Output = Mpc;
            fn $method(self, rhs: Mpc) -> Mpc {
                &self $op &rhs
            }
        }
        impl $tr<f64> for &Mpc {
            type Output = Mpc;
            fn $method(self, rhs: f64) -> Mpc {
                Mpc(Complex::with_val(self.bits(), &self.0 $op rhs))
            }
        }
        impl $tr<f64> for Mpc {
            type Output = Mpc;
            fn $method(self, rhs: f64) -> Mpc {
                &self $op rhs
            }
        }
        impl $tr<i64> for &Mpc {
            type Output = Mpc;
            fn $method(self, rhs: i64) -> Mpc {
                Mpc(Complex::with_val(self.bits(), &self.0 $op rhs))
            }
        }
        impl $tr<i64> for Mpc {
            type Output = Mpc;
            fn $method(self, rhs: i64) -> Mpc {
                &self $op rhs
            }
        }
        impl $assign_tr<&Mpc> for Mpc {
            fn $assign_method(&mut self, rhs: &Mpc) {
                self.0 = Complex::with_val(self.bits(), &self.0 $op &rhs.0);
            }
        }
        impl $assign_tr<Mpc> for Mpc {
            fn $assign_method(&mut self, rhs: Mpc) {
                *self = &*self $op &rhs;
            }
        }
        impl $assign_tr<f64> for Mpc {
            fn $assign_method(&mut self, rhs: f64) {
                self.0 = Complex::with_val(self.bits(), &self.0 $op rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, +);
binop!(Sub, sub, SubAssign, sub_assign, -);
binop!(Mul, mul, MulAssign, mul_assign, *);
binop!(Div, div, DivAssign, div_assign, /);

impl Neg for Mpc {
    type Output = Mpc;
    fn neg(self) -> Mpc {
        Mpc(-self.0)
    }
}

impl Neg for &Mpc {
    type Output = Mpc;
    fn neg(self) -> Mpc {
        Mpc(Complex::with_val(self.bits(), -&self.0))
    }
}

/// Sum in the given order (no pairwise reordering).
pub fn ordered_sum<'a, I>(bits: u32, terms: I) -> Mpc
where
    I: IntoIterator<Item = &'a Mpc>,
{
    let mut acc = Mpc::zero(bits);
    for t in terms {
        acc += t;
    }
    acc
}
