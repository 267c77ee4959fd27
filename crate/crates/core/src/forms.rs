//! Positive definite binary quadratic forms `ax² + bxy + cy²`.
//!
//! Reduced representatives, Dirichlet composition, the form class group of
//! a negative discriminant, its genus structure, and which class represents
//! a given prime.

use crate::arith::{self, exact_sqrt, factorize, is_probable_prime, kronecker_prime};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadForm {
    #[serde(with = "crate::serde_big")]
    pub a: BigInt,
    #[serde(with = "crate::serde_big")]
    pub b: BigInt,
    #[serde(with = "crate::serde_big")]
    pub c: BigInt,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl QuadForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        QuadForm { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_positive_definite(&self) -> bool {
        self.discriminant().is_negative() && self.a.is_positive()
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    /// `|b| ≤ a ≤ c`, with `b ≥ 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let abs_b = self.b.abs();
        if abs_b > self.a || self.a > self.c {
            return false;
        }
        if (abs_b == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    /// The form of the inverse class.
    pub fn inverse(&self) -> QuadForm {
        QuadForm { a: self.a.clone(), b: -&self.b, c: self.c.clone() }
    }

    /// Principal form of discriminant `d`: `(1, 0, -d/4)` or `(1, 1, (1-d)/4)`.
    pub fn principal(d: &BigInt) -> Result<QuadForm> {
        check_discriminant(d)?;
        let b = if d.is_even() { BigInt::zero() } else { BigInt::one() };
        let c = (&b * &b - d) / 4;
        Ok(QuadForm { a: BigInt::one(), b, c })
    }

    pub fn is_principal(&self) -> bool {
        self.a.is_one()
    }
}

fn check_discriminant(d: &BigInt) -> Result<()> {
    if !d.is_negative() {
        return Err(Error::domain(format!("discriminant {d} must be negative")));
    }
    let r = d.mod_floor(&BigInt::from(4));
    if !(r.is_zero() || r.is_one()) {
        return Err(Error::domain(format!("discriminant {d} is not 0 or 1 mod 4")));
    }
    Ok(())
}

/// The unique reduced form properly equivalent to `f`.
pub fn reduce(f: &QuadForm) -> Result<QuadForm> {
    if !f.is_positive_definite() {
        return Err(Error::domain(format!("{f} is not positive definite")));
    }
    if !f.is_primitive() {
        return Err(Error::domain(format!("{f} is not primitive")));
    }
    let (mut a, mut b, mut c) = (f.a.clone(), f.b.clone(), f.c.clone());
    loop {
        // normalize: -a < b ≤ a
        if !(-&a < b && b <= a) {
            let two_a = BigInt::from(2) * &a;
            let r = (&a - &b).div_floor(&two_a);
            c += &r * (&b + &a * &r);
            b += &two_a * &r;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b.is_negative() {
            b = -b;
        }
        break;
    }
    Ok(QuadForm { a, b, c })
}

/// All reduced primitive forms of the negative discriminant `d`, ordered by
/// `a`, then `|b|`, then `b ≥ 0` first.
pub fn reduced_forms(d: &BigInt) -> Result<Vec<QuadForm>> {
    check_discriminant(d)?;
    let abs_d = d.abs();
    let mut out = Vec::new();
    let mut a = BigInt::one();
    while BigInt::from(3) * &a * &a <= abs_d {
        let four_a = BigInt::from(4) * &a;
        let mut b_abs = if d.is_odd() { BigInt::one() } else { BigInt::zero() };
        while b_abs <= a {
            let num = &b_abs * &b_abs - d;
            if (&num % &four_a).is_zero() {
                let c = &num / &four_a;
                let signs: &[i32] = if b_abs.is_zero() { &[1] } else { &[1, -1] };
                for &s in signs {
                    let f = QuadForm { a: a.clone(), b: &b_abs * s, c: c.clone() };
                    if f.is_reduced() && f.is_primitive() {
                        out.push(f);
                    }
                }
            }
            b_abs += 2;
        }
        a += 1;
    }
    Ok(out)
}

pub fn class_number(d: &BigInt) -> Result<usize> {
    Ok(reduced_forms(d)?.len())
}

/// Dirichlet composition of two primitive forms of the same discriminant,
/// returned reduced.
pub fn compose(f: &QuadForm, g: &QuadForm) -> Result<QuadForm> {
    let d = f.discriminant();
    if d != g.discriminant() {
        return Err(Error::domain(format!("cannot compose {f} and {g}: discriminants differ")));
    }
    if !f.is_primitive() || !g.is_primitive() {
        return Err(Error::domain("composition needs primitive forms"));
    }
    let (f1, f2) = if f.a > g.a { (g, f) } else { (f, g) };
    let (a1, b1) = (&f1.a, &f1.b);
    let (a2, b2, c2) = (&f2.a, &f2.b, &f2.c);
    let s: BigInt = (b1 + b2) / 2;
    let n = b2 - &s;
    // united form: d1 = gcd(a1, a2, s) = u a1 + v a2 + w s
    let e = a2.extended_gcd(a1);
    let (y1, dd) = if (a2 % a1).is_zero() { (BigInt::zero(), a1.clone()) } else { (e.x.clone(), e.gcd.clone()) };
    let (x2, y2, d1) = if (&s % &dd).is_zero() {
        (BigInt::zero(), -BigInt::one(), dd.clone())
    } else {
        let e2 = s.extended_gcd(&dd);
        (e2.x.clone(), -e2.y.clone(), e2.gcd.clone())
    };
    let v1 = a1 / &d1;
    let v2 = a2 / &d1;
    let r = (&y1 * &y2 * &n - &x2 * c2).mod_floor(&v1);
    let b3 = b2 + BigInt::from(2) * &v2 * &r;
    let a3 = &v1 * &v2;
    let c3 = (c2 * &d1 + &r * (b2 + &v2 * &r)) / &v1;
    let h = QuadForm { a: a3, b: b3, c: c3 };
    debug_assert_eq!(h.discriminant(), d);
    reduce(&h)
}

/// Order of the class of `f` in the class group.
pub fn class_order(f: &QuadForm) -> Result<usize> {
    let f = reduce(f)?;
    let mut acc = f.clone();
    let mut k = 1;
    while !acc.is_principal() {
        acc = compose(&acc, &f)?;
        k += 1;
    }
    Ok(k)
}

/// Number of assigned characters μ; there are `2^(μ-1)` genera.
pub fn assigned_character_count(d: &BigInt) -> Result<u32> {
    check_discriminant(d)?;
    let odd_primes = factorize(d)?.primes().filter(|p| p.is_odd()).count() as u32;
    if d.is_odd() {
        return Ok(odd_primes);
    }
    let n: BigInt = -d / 4;
    let r4 = n.mod_floor(&BigInt::from(4)).to_u32().unwrap_or(0);
    let r8 = n.mod_floor(&BigInt::from(8)).to_u32().unwrap_or(0);
    // odd primes of n are the odd primes of d
    Ok(match (r4, r8) {
        (3, _) => odd_primes,
        (1, _) | (2, _) => odd_primes + 1,
        (_, 4) => odd_primes + 1,
        _ => odd_primes + 2,
    })
}

/// The form class group of a negative discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormClassGroup {
    #[serde(with = "crate::serde_big")]
    pub discriminant: BigInt,
    pub reduced_reps: Vec<QuadForm>,
    pub genus_count: usize,
    pub exponent: usize,
}

impl FormClassGroup {
    pub fn new(d: &BigInt) -> Result<Self> {
        let reps = reduced_forms(d)?;
        let mut exponent = 1;
        for f in &reps {
            exponent = exponent.lcm(&class_order(f)?);
        }
        let genus_count = 1usize << (assigned_character_count(d)?.saturating_sub(1));
        Ok(FormClassGroup { discriminant: d.clone(), reduced_reps: reps, genus_count, exponent })
    }

    /// Shared, memoized instance for `d`.
    pub fn cached(d: &BigInt) -> Result<Arc<FormClassGroup>> {
        static CACHE: OnceLock<RwLock<HashMap<BigInt, Arc<FormClassGroup>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(g) = cache.read().expect("class group cache poisoned").get(d) {
            return Ok(Arc::clone(g));
        }
        let g = Arc::new(FormClassGroup::new(d)?);
        cache.write().expect("class group cache poisoned").insert(d.clone(), Arc::clone(&g));
        Ok(g)
    }

    pub fn class_number(&self) -> usize {
        self.reduced_reps.len()
    }

    pub fn principal(&self) -> QuadForm {
        self.reduced_reps[0].clone()
    }

    /// Number of distinct squares C∘C; genus count computed from the group
    /// itself as `h / |Cl²|`.
    pub fn genus_count_from_squares(&self) -> Result<usize> {
        let mut squares: Vec<QuadForm> = self
            .reduced_reps
            .iter()
            .map(|f| compose(f, f))
            .collect::<Result<_>>()?;
        squares.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
        squares.dedup();
        Ok(self.class_number() / squares.len())
    }

    pub fn is_cyclic(&self) -> bool {
        self.exponent == self.class_number()
    }

    /// A class of maximal order (a generator when the group is cyclic).
    pub fn generator(&self) -> Result<QuadForm> {
        for f in &self.reduced_reps {
            if class_order(f)? == self.exponent {
                return Ok(f.clone());
            }
        }
        Err(Error::consistency("no element attains the group exponent"))
    }
}

/// One class per genus, equivalently every class squares to the principal class.
pub fn is_one_class_per_genus(d: &BigInt) -> Result<bool> {
    let group = FormClassGroup::cached(d)?;
    Ok(group.exponent <= 2)
}

/// Splitting type of a prime relative to a discriminant, with the form
/// classes that represent it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeClass {
    Inert,
    /// `p | d`. The form is absent when `p` divides the conductor and no
    /// primitive form of discriminant `d` represents it.
    Ramified { form: Option<QuadForm> },
    /// The pair `{C, C⁻¹}`; both entries coincide for ambiguous classes.
    Split { form: QuadForm, inverse: QuadForm },
}

/// Classifies `p` against `d` and finds the class pair representing it by
/// complete search over the reduced forms.
pub fn class_of_prime(p: &BigInt, d: &BigInt) -> Result<PrimeClass> {
    if !is_probable_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let reps = reduced_forms(d)?;
    let representing = || -> Result<Option<QuadForm>> {
        for f in &reps {
            if represents(f, p)?.is_some() {
                return Ok(Some(f.clone()));
            }
        }
        Ok(None)
    };
    match kronecker_prime(d, p)? {
        -1 => Ok(PrimeClass::Inert),
        0 => Ok(PrimeClass::Ramified { form: representing()? }),
        _ => {
            let form = representing()?
                .ok_or_else(|| Error::consistency(format!("split prime {p} is represented by no form of discriminant {d}")))?;
            let inverse = reduce(&form.inverse())?;
            Ok(PrimeClass::Split { form, inverse })
        }
    }
}

/// Some `(x, y)` with `f(x, y) = n`, or `None` when there is none.
///
/// Complete: `4a·f(x, y) = (2ax + by)² + |d|y²` bounds `|y| ≤ √(4an/|d|)`,
/// and for each `y` the `x` values are the integer roots of a quadratic.
pub fn represents(f: &QuadForm, n: &BigInt) -> Result<Option<(BigInt, BigInt)>> {
    if !f.is_positive_definite() {
        return Err(Error::domain(format!("{f} is not positive definite")));
    }
    if !n.is_positive() {
        return Err(Error::domain(format!("target {n} must be positive")));
    }
    let abs_d = f.discriminant().abs();
    let y_max = arith::isqrt(&(BigInt::from(4) * &f.a * n / &abs_d));
    let two_a = BigInt::from(2) * &f.a;
    let mut y = BigInt::zero();
    while y <= y_max {
        for y_signed in [y.clone(), -&y] {
            // a x² + (b y) x + (c y² - n) = 0
            let disc = BigInt::from(4) * &f.a * n - &abs_d * &y_signed * &y_signed;
            if let Some(root) = exact_sqrt(&disc) {
                let by = &f.b * &y_signed;
                for num in [&root - &by, -&root - &by] {
                    if (&num % &two_a).is_zero() {
                        let x = &num / &two_a;
                        debug_assert_eq!(f.evaluate(&x, &y_signed), *n);
                        return Ok(Some((x, y_signed)));
                    }
                }
            }
            if y.is_zero() {
                break;
            }
        }
        y += 1;
    }
    Ok(None)
}
