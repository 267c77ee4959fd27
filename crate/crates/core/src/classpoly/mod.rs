//! Ring class polynomials of negative discriminants via complex
//! multiplication, and their factorization patterns over prime fields.
//!
//! For a discriminant `d < 0` the class polynomial is
//! `∏ (x - j(τ_f))` over the reduced forms `f = (a, b, c)`, with
//! `τ_f = (-b + √d) / 2a`. Its coefficients are integers; we evaluate `j`
//! with the Dedekind eta function in fixed-point arithmetic and round.
//!
//! Modulo a prime `p ∤ disc`, the class polynomial of `d` factors into
//! irreducibles of a common degree equal to the order of the class of a
//! prime above `p`. [`degree_pattern`] reads that off without factoring.

mod fixed;
mod fp;

pub use fixed::BigComplex;

use crate::error::{Error, Result};
use crate::forms::reduced_forms;
use fixed::{cos_sin, exp_neg, fixed_to_f64, mul_fixed, pi};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

/// Dense integer polynomial, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPolynomial {
    #[serde(with = "crate::serde_big::vec")]
    pub coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().map_or(false, Zero::is_zero) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.coefficients.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient().is_one()
    }

    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        self.coefficients.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> IntPolynomial {
        IntPolynomial::new(self.coefficients.iter().enumerate().skip(1).map(|(i, c)| c * i).collect())
    }

    /// Discriminant `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        if n == 0 {
            return BigInt::zero();
        }
        let res = resultant(&self.coefficients, &self.derivative().coefficients);
        let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
        res * sign / self.leading_coefficient()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Sylvester resultant by fraction-free (Bareiss) elimination.
fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            mat[row][row + k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            mat[n + row][row + k] = c.clone();
        }
    }
    bareiss_determinant(mat)
}

fn bareiss_determinant(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let size = mat.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[size - 1][size - 1]
}

/// Multiset of irreducible factor degrees of a polynomial modulo a prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorPattern {
    pub degrees: Vec<usize>,
    #[serde(with = "crate::serde_big")]
    pub prime: BigInt,
}

impl FactorPattern {
    pub fn total_degree(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn is_uniform(&self) -> bool {
        self.degrees.windows(2).all(|w| w[0] == w[1])
    }
}

/// Splitting type of `f` modulo `p`, via distinct-degree factorization.
///
/// Fails with [`Error::RamifiedPattern`] when `f` is not squarefree mod `p`.
pub fn degree_pattern(f: &IntPolynomial, p: &BigInt) -> Result<FactorPattern> {
    if !crate::arith::is_probable_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if (f.leading_coefficient() % p).is_zero() {
        return Err(Error::domain(format!("{p} divides the leading coefficient")));
    }
    let field = fp::Field::new(p);
    let g = field.reduce(&f.coefficients);
    let dg = field.derivative(&g);
    if dg.is_zero() || field.gcd(&g, &dg).degree() != Some(0) {
        return Err(Error::RamifiedPattern(p.to_string()));
    }
    Ok(FactorPattern { degrees: field.distinct_degree_pattern(&g), prime: p.clone() })
}

/// Order of Frobenius in a cyclic Galois group: the common factor degree.
pub fn frobenius_order(pattern: &FactorPattern, group_order: usize) -> Result<usize> {
    let Some(&d) = pattern.degrees.first() else {
        return Err(Error::domain("empty factor pattern"));
    };
    if !pattern.is_uniform() {
        return Err(Error::consistency(format!(
            "factor degrees {:?} mod {} are not all equal",
            pattern.degrees, pattern.prime
        )));
    }
    if group_order % d != 0 {
        return Err(Error::consistency(format!(
            "factor degree {d} does not divide the group order {group_order}"
        )));
    }
    Ok(d)
}

/// Klein's j-invariant, accurate to roughly `2^-precision_bits` relative
/// to `max(1, |j|)`.
///
/// τ is first moved into the standard fundamental domain, then
/// `j = (1 + 256 t)³ / t` with `t = (η(2τ)/η(τ))^24`, the eta quotient
/// summed through the pentagonal-number series.
pub fn j_invariant(tau: &BigComplex, precision_bits: u32) -> Result<BigComplex> {
    if !tau.im.is_positive() {
        return Err(Error::domain("tau must lie in the upper half plane"));
    }
    let tau = reduce_to_fundamental_domain(&tau.with_bits(tau.bits.max(precision_bits) + 64))?;
    // headroom for |j| ≈ e^(2π Im τ) and for dividing by t ≈ q
    let y_est = tau.im_f64().max(1.0);
    let mag_bits = (2.0 * std::f64::consts::PI * y_est / std::f64::consts::LN_2).ceil() as u32;
    let w = precision_bits + 2 * mag_bits + 32;
    let tau = tau.with_bits(w);
    let q = exp_two_pi_i(&tau);
    let q2 = q.square();
    let ratio = pentagonal(&q2).div(&pentagonal(&q));
    let r2 = ratio.square();
    let r4 = r2.square();
    let r8 = r4.square();
    let r16 = r8.square();
    let t = q.mul(&r16.mul(&r8));
    let one = BigComplex::one(w);
    let u = &one + &t.scale(256);
    let j = u.square().mul(&u).div(&t);
    Ok(j.with_bits(precision_bits))
}

fn reduce_to_fundamental_domain(tau: &BigComplex) -> Result<BigComplex> {
    let w = tau.bits;
    let mut z = tau.clone();
    let one = BigInt::one() << w;
    let half = BigInt::one() << (w - 1);
    for _ in 0..10_000 {
        let shift = (&z.re + &half).div_floor(&one);
        z.re -= &shift * &one;
        let norm = mul_fixed(&z.re, &z.re, w) + mul_fixed(&z.im, &z.im, w);
        if norm >= one {
            return Ok(z);
        }
        // τ ↦ -1/τ
        z = (&BigComplex::zero(w) - &BigComplex::one(w)).div(&z);
    }
    Err(Error::Internal("fundamental-domain reduction did not terminate".into()))
}

/// e^(2πiτ) at τ's precision.
fn exp_two_pi_i(tau: &BigComplex) -> BigComplex {
    let w = tau.bits;
    let two_pi = pi(w) * 2;
    let radius = exp_neg(&mul_fixed(&two_pi, &tau.im, w), w);
    let (c, s) = cos_sin(&mul_fixed(&two_pi, &tau.re, w), w);
    BigComplex { re: mul_fixed(&radius, &c, w), im: mul_fixed(&radius, &s, w), bits: w }
}

/// `Σ_k (-1)^k q^(k(3k-1)/2)` over all integers k, i.e. `η(τ) q^(-1/24)`.
fn pentagonal(q: &BigComplex) -> BigComplex {
    let w = q.bits;
    let mut sum = BigComplex::one(w);
    // q^(k(3k-1)/2) and its partner q^(k(3k+1)/2) = q^(k(3k-1)/2) q^k
    let mut qk = BigComplex::one(w);
    let mut lower = BigComplex::one(w);
    let mut step = q.clone(); // q^(3k+1) for k = 0
    let q3 = q.square().mul(q);
    let mut k = 1u64;
    loop {
        lower = lower.mul(&step);
        qk = qk.mul(q);
        let upper = lower.mul(&qk);
        let pair = &lower + &upper;
        if k % 2 == 1 {
            sum = &sum - &pair;
        } else {
            sum = &sum + &pair;
        }
        // flooring shifts leave tiny negative values at -1 ulp, never 0
        if lower.re.abs() <= BigInt::one() && lower.im.abs() <= BigInt::one() {
            return sum;
        }
        step = step.mul(&q3);
        k += 1;
    }
}

/// Outcome of a class polynomial computation with its rounding diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassPolyComputation {
    #[serde(with = "crate::serde_big")]
    pub discriminant: BigInt,
    pub polynomial: IntPolynomial,
    /// Precision at which the rounding succeeded.
    pub precision_bits: u32,
    /// Largest distance of a coefficient from its rounded integer, real and
    /// imaginary parts combined by max.
    pub max_residual: f64,
    pub attempts: u32,
}

/// Coefficients must land within this distance of an integer.
pub const ROUNDING_TOLERANCE: f64 = 1e-6;
const MAX_DOUBLINGS: u32 = 4;

/// Starting precision: coefficient height estimate plus 32 guard bits.
pub fn initial_precision(d: &BigInt) -> Result<u32> {
    let forms = reduced_forms(d)?;
    let sqrt_d = d.abs().to_f64().unwrap_or(f64::INFINITY).sqrt();
    let inv_sum: f64 = forms.iter().map(|f| 1.0 / f.a.to_f64().unwrap_or(f64::INFINITY)).sum();
    let height = std::f64::consts::PI * sqrt_d * inv_sum / std::f64::consts::LN_2;
    if !height.is_finite() || height > 1e7 {
        return Err(Error::domain(format!("discriminant {d} is too large for class polynomial evaluation")));
    }
    Ok(height.ceil() as u32 + 32)
}

/// Class polynomial of `d` with diagnostics.
pub fn class_polynomial_with_diagnostics(d: &BigInt) -> Result<ClassPolyComputation> {
    let forms = reduced_forms(d)?;
    let mut bits = initial_precision(d)?;
    let mut worst = f64::NAN;
    for attempt in 0..=MAX_DOUBLINGS {
        let roots: Vec<BigComplex> = forms
            .iter()
            .map(|f| j_invariant(&BigComplex::cm_point(&f.a, &f.b, d, bits + 32), bits))
            .collect::<Result<_>>()?;
        // ∏ (x - j), constant term first
        let mut coeffs = vec![BigComplex::one(bits)];
        for j in &roots {
            let mut next = vec![BigComplex::zero(bits); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - &c.mul(j);
            }
            coeffs = next;
        }
        let tolerance = (BigInt::one() << bits) / BigInt::from(1_000_000u32);
        let mut ints = Vec::with_capacity(coeffs.len());
        let mut ok = true;
        worst = 0.0;
        for c in &coeffs {
            let (n, residual_re, residual_im) = c.round_real();
            let residual = residual_re.max(residual_im);
            worst = worst.max(fixed_to_f64(&residual, bits));
            if residual >= tolerance {
                ok = false;
            }
            ints.push(n);
        }
        if ok {
            return Ok(ClassPolyComputation {
                discriminant: d.clone(),
                polynomial: IntPolynomial::new(ints),
                precision_bits: bits,
                max_residual: worst,
                attempts: attempt + 1,
            });
        }
        bits *= 2;
    }
    Err(Error::Internal(format!(
        "class polynomial of {d} did not round within {ROUNDING_TOLERANCE} after {MAX_DOUBLINGS} precision doublings (last residual {worst:e})"
    )))
}

/// Monic class polynomial of the negative discriminant `d`; memoized.
pub fn class_polynomial(d: &BigInt) -> Result<IntPolynomial> {
    static CACHE: OnceLock<RwLock<HashMap<BigInt, Arc<IntPolynomial>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().expect("class polynomial cache poisoned").get(d) {
        return Ok((**p).clone());
    }
    let poly = class_polynomial_with_diagnostics(d)?.polynomial;
    cache
        .write()
        .expect("class polynomial cache poisoned")
        .insert(d.clone(), Arc::new(poly.clone()));
    Ok(poly)
}
