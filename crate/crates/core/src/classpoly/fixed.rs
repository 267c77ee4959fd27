//! Binary fixed-point reals and complex numbers over `BigInt`.
//!
//! A value `m` at precision `bits` stands for `m / 2^bits`. All operands of
//! an operation share one precision; results truncate toward -∞.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigComplex {
    pub re: BigInt,
    pub im: BigInt,
    pub bits: u32,
}

pub(crate) fn mul_fixed(x: &BigInt, y: &BigInt, bits: u32) -> BigInt {
    (x * y) >> bits
}

/// `m / 2^bits` as an `f64`, without overflowing for large `bits`.
pub(crate) fn fixed_to_f64(m: &BigInt, bits: u32) -> f64 {
    let shift = bits.saturating_sub(60);
    let head = (m >> shift).to_f64().unwrap_or(f64::NAN);
    head / 2f64.powi((bits - shift) as i32)
}

/// π to `bits` fractional bits (Machin's formula).
pub(crate) fn pi(bits: u32) -> BigInt {
    let guard = 16;
    let w = bits + guard;
    let arctan_inv = |k: u32| -> BigInt {
        // Σ (-1)^n / ((2n+1) k^(2n+1))
        let k2 = BigInt::from(k) * k;
        let mut power = (BigInt::one() << w) / k;
        let mut sum = BigInt::zero();
        let mut n = 0u32;
        while !power.is_zero() {
            let term = &power / (2 * n + 1);
            if n % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &k2;
            n += 1;
        }
        sum
    };
    let v = arctan_inv(5) * 16 - arctan_inv(239) * 4;
    v >> guard
}

/// e^(-s) for a fixed-point `s ≥ 0`.
pub(crate) fn exp_neg(s: &BigInt, bits: u32) -> BigInt {
    let guard = 32 + (s.bits() as u32).saturating_sub(bits);
    let w = bits + guard;
    let mut x = s << guard;
    // halve until x < 1/2
    let half = BigInt::one() << (w - 1);
    let mut halvings = 0u32;
    while x > half {
        x >>= 1;
        halvings += 1;
    }
    // Taylor for e^(-x)
    let one = BigInt::one() << w;
    let mut term = one.clone();
    let mut sum = one;
    let mut k = 1u32;
    while !term.is_zero() {
        term = -(mul_fixed(&term, &x, w) / k);
        sum += &term;
        k += 1;
    }
    for _ in 0..halvings {
        sum = mul_fixed(&sum, &sum, w);
    }
    sum >> guard
}

/// (cos θ, sin θ) for a fixed-point θ with |θ| ≲ 4.
pub(crate) fn cos_sin(theta: &BigInt, bits: u32) -> (BigInt, BigInt) {
    let guard = 32;
    let w = bits + guard;
    let x = theta << guard;
    let x2 = mul_fixed(&x, &x, w);
    let one = BigInt::one() << w;
    // cos: Σ (-1)^k x^(2k)/(2k)!, sin: Σ (-1)^k x^(2k+1)/(2k+1)!
    let (mut c_term, mut s_term) = (one.clone(), x.clone());
    let (mut cos, mut sin) = (one, x);
    let mut k = 1u32;
    while !(c_term.is_zero() && s_term.is_zero()) {
        c_term = -(mul_fixed(&c_term, &x2, w) / ((2 * k - 1) * (2 * k)));
        s_term = -(mul_fixed(&s_term, &x2, w) / ((2 * k) * (2 * k + 1)));
        cos += &c_term;
        sin += &s_term;
        k += 1;
    }
    (cos >> guard, sin >> guard)
}

impl BigComplex {
    pub fn zero(bits: u32) -> Self {
        BigComplex { re: BigInt::zero(), im: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> Self {
        Self::from_int(&BigInt::one(), bits)
    }

    pub fn from_int(n: &BigInt, bits: u32) -> Self {
        BigComplex { re: n << bits, im: BigInt::zero(), bits }
    }

    /// Nearest fixed-point approximation of `re + i·im`.
    pub fn from_f64(re: f64, im: f64, bits: u32) -> Self {
        let conv = |v: f64| -> BigInt {
            // exact binary expansion of the double, then scaled
            let (mantissa, exponent, sign) = num_traits::float::FloatCore::integer_decode(v);
            let m = BigInt::from(mantissa) * sign;
            let e = exponent as i64 + bits as i64;
            if e >= 0 {
                m << e as u32
            } else {
                m >> (-e) as u32
            }
        };
        BigComplex { re: conv(re), im: conv(im), bits }
    }

    /// The CM point `(-b + √d) / (2a)` for `d < 0`.
    pub fn cm_point(a: &BigInt, b: &BigInt, d: &BigInt, bits: u32) -> Self {
        let two_a = BigInt::from(2) * a;
        let re = (-(b << bits)).div_floor(&two_a);
        let im = (d.abs() << (2 * bits)).sqrt() / &two_a;
        BigComplex { re, im, bits }
    }

    /// Change precision, truncating or padding.
    pub fn with_bits(&self, bits: u32) -> Self {
        let shift = |m: &BigInt| {
            if bits >= self.bits {
                m << (bits - self.bits)
            } else {
                m >> (self.bits - bits)
            }
        };
        BigComplex { re: shift(&self.re), im: shift(&self.im), bits }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let w = self.bits;
        BigComplex {
            re: mul_fixed(&self.re, &o.re, w) - mul_fixed(&self.im, &o.im, w),
            im: mul_fixed(&self.re, &o.im, w) + mul_fixed(&self.im, &o.re, w),
            bits: w,
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn div(&self, o: &Self) -> Self {
        let w = self.bits;
        // (a+bi)/(c+di) = (a+bi)(c-di) / (c²+d²); keep the numerator at
        // double precision so small denominators lose nothing extra.
        let denom = &o.re * &o.re + &o.im * &o.im;
        let num_re = &self.re * &o.re + &self.im * &o.im;
        let num_im = &self.im * &o.re - &self.re * &o.im;
        BigComplex { re: (num_re << w).div_floor(&denom), im: (num_im << w).div_floor(&denom), bits: w }
    }

    pub fn scale(&self, k: i64) -> Self {
        BigComplex { re: &self.re * k, im: &self.im * k, bits: self.bits }
    }

    pub fn norm_sqr_f64(&self) -> f64 {
        let r = self.re_f64();
        let i = self.im_f64();
        r * r + i * i
    }

    pub fn re_f64(&self) -> f64 {
        fixed_to_f64(&self.re, self.bits)
    }

    pub fn im_f64(&self) -> f64 {
        fixed_to_f64(&self.im, self.bits)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Nearest Gaussian-rounded integer to the real part and the distances
    /// `|re - round(re)|`, `|im|` as mantissas.
    pub(crate) fn round_real(&self) -> (BigInt, BigInt, BigInt) {
        let half = BigInt::one() << (self.bits - 1);
        let n = (&self.re + &half) >> self.bits;
        let residual = (&self.re - (&n << self.bits)).abs();
        (n, residual, self.im.abs())
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        BigComplex { re: &self.re + &o.re, im: &self.im + &o.im, bits: self.bits }
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        BigComplex { re: &self.re - &o.re, im: &self.im - &o.im, bits: self.bits }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -&self.re, im: -&self.im, bits: self.bits }
    }
}
