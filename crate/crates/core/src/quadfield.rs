//! Exact arithmetic in the ring of integers of an imaginary quadratic field
//! ℚ(√d), and a bounded search for solutions of `a·x² + b·y² = α` there.
//!
//! Elements are stored as `(u + v√d) / 2` so that both shapes of the ring
//! share one type: for `d ≡ 1 (mod 4)` the ring is ℤ[(1 + √d)/2] and `u ≡ v`
//! (mod 2); otherwise it is ℤ[√d] and `u`, `v` are both even.

use crate::arith::{exact_sqrt, factorize};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadInt {
    #[serde(with = "crate::serde_big")]
    pub u: BigInt,
    #[serde(with = "crate::serde_big")]
    pub v: BigInt,
    /// Squarefree negative radicand.
    #[serde(with = "crate::serde_big")]
    pub d: BigInt,
}

/// Rejects anything but a squarefree negative integer.
pub fn check_radicand(d: &BigInt) -> Result<()> {
    if !d.is_negative() {
        return Err(Error::domain(format!("radicand {d} must be negative")));
    }
    if d == &BigInt::from(-1) {
        return Ok(());
    }
    let f = factorize(d)?;
    if f.factors.iter().any(|pp| pp.exponent > 1) {
        return Err(Error::domain(format!("radicand {d} is not squarefree")));
    }
    Ok(())
}

fn one_mod_four(d: &BigInt) -> bool {
    d.mod_floor(&BigInt::from(4)).is_one()
}

impl QuadInt {
    /// `(u + v√d) / 2`; fails unless that lies in the ring of integers.
    pub fn new(u: impl Into<BigInt>, v: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let (u, v, d) = (u.into(), v.into(), d.into());
        check_radicand(&d)?;
        let ok = if one_mod_four(&d) { u.is_even() == v.is_even() } else { u.is_even() && v.is_even() };
        if !ok {
            return Err(Error::domain(format!("({u} + {v}√{d})/2 is not an algebraic integer")));
        }
        Ok(QuadInt { u, v, d })
    }

    /// The integer `k`.
    pub fn from_int(k: impl Into<BigInt>, d: &BigInt) -> Self {
        QuadInt { u: k.into() * 2, v: BigInt::zero(), d: d.clone() }
    }

    /// `x1 + x2·ω` in the integral basis `{1, ω}`, with `ω = (1 + √d)/2` or `√d`.
    pub fn from_basis(x1: &BigInt, x2: &BigInt, d: &BigInt) -> Self {
        if one_mod_four(d) {
            QuadInt { u: x1 * 2 + x2, v: x2.clone(), d: d.clone() }
        } else {
            QuadInt { u: x1 * 2, v: x2 * 2, d: d.clone() }
        }
    }

    /// Coordinates in the integral basis, inverse of [`QuadInt::from_basis`].
    pub fn coords(&self) -> (BigInt, BigInt) {
        if one_mod_four(&self.d) {
            ((&self.u - &self.v) / 2, self.v.clone())
        } else {
            (&self.u / 2, &self.v / 2)
        }
    }

    pub fn is_parity_valid(&self) -> bool {
        if one_mod_four(&self.d) {
            self.u.is_even() == self.v.is_even()
        } else {
            self.u.is_even() && self.v.is_even()
        }
    }

    fn same_field(&self, o: &Self) -> Result<()> {
        if self.d != o.d {
            return Err(Error::domain(format!("elements of ℚ(√{}) and ℚ(√{}) cannot be combined", self.d, o.d)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        Ok(QuadInt { u: &self.u + &o.u, v: &self.v + &o.v, d: self.d.clone() })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        Ok(QuadInt { u: &self.u - &o.u, v: &self.v - &o.v, d: self.d.clone() })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        let u = &self.u * &o.u + &self.d * &self.v * &o.v;
        let v = &self.u * &o.v + &self.v * &o.u;
        // both numerators are even for ring elements
        Ok(QuadInt { u: u / 2, v: v / 2, d: self.d.clone() })
    }

    pub fn square(&self) -> Self {
        self.mul(self).expect("same field")
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        QuadInt { u: &self.u * k, v: &self.v * k, d: self.d.clone() }
    }

    pub fn neg(&self) -> Self {
        QuadInt { u: -&self.u, v: -&self.v, d: self.d.clone() }
    }

    pub fn conj(&self) -> Self {
        QuadInt { u: self.u.clone(), v: -&self.v, d: self.d.clone() }
    }

    pub fn norm(&self) -> BigInt {
        (&self.u * &self.u - &self.d * &self.v * &self.v) / 4
    }

    pub fn trace(&self) -> BigInt {
        self.u.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.v.is_zero() && self.u.is_even()).then(|| &self.u / 2)
    }

    /// `self / k` when the quotient is still an algebraic integer.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        if k.is_zero() || !(&self.u % k).is_zero() || !(&self.v % k).is_zero() {
            return None;
        }
        let q = QuadInt { u: &self.u / k, v: &self.v / k, d: self.d.clone() };
        q.is_parity_valid().then_some(q)
    }

    /// Both square roots in the ring, or none.
    ///
    /// With `n = N(y)` and `T = y + ȳ`: `n² = N(β)`, `T² = Tr β + 2n`, and
    /// `y = (β + n) / T` whenever `T ≠ 0`; `T = 0` means `y = k√d`.
    pub fn sqrt(&self) -> Option<(QuadInt, QuadInt)> {
        let n = exact_sqrt(&self.norm())?;
        let t2 = self.trace() + &n * 2;
        let t = exact_sqrt(&t2)?;
        let root = if t.is_zero() {
            // β = y² = k²d, so β = -n is a negative rational integer
            let k = exact_sqrt(&(&n / -&self.d)).filter(|k| k * k * -&self.d == n)?;
            QuadInt { u: BigInt::zero(), v: k * 2, d: self.d.clone() }
        } else {
            let shifted = QuadInt { u: &self.u + &n * 2, v: self.v.clone(), d: self.d.clone() };
            shifted.div_exact(&t)?
        };
        (&root.square() == self).then(|| (root.clone(), root.neg()))
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let surd = format!("√{}", self.d);
        if self.u.is_odd() || self.v.is_odd() {
            let sign = if self.v.is_negative() { "-" } else { "+" };
            let mag = self.v.abs();
            let coeff = if mag.is_one() { String::new() } else { mag.to_string() };
            return write!(f, "({} {sign} {coeff}{surd})/2", self.u);
        }
        let (a, b): (BigInt, BigInt) = (&self.u / 2, &self.v / 2);
        let b_text = |b: &BigInt| if b.is_one() { surd.clone() } else { format!("{b}{surd}") };
        match (a.is_zero(), b.is_zero()) {
            (_, true) => write!(f, "{a}"),
            (true, false) if b.is_negative() => write!(f, "-{}", b_text(&-b)),
            (true, false) => write!(f, "{}", b_text(&b)),
            (false, false) if b.is_negative() => write!(f, "{a} - {}", b_text(&-b)),
            (false, false) => write!(f, "{a} + {}", b_text(&b)),
        }
    }
}

/// Outcome of [`oracle_search`]. A miss is one-sided: over an imaginary
/// quadratic base the coordinate equations are indefinite, so no finite box
/// certifies that no solution exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OracleOutcome {
    Found {
        x: QuadInt,
        y: QuadInt,
        /// Largest absolute basis coordinate among x and y.
        #[serde(with = "crate::serde_big")]
        shell: BigInt,
    },
    NotFoundWithinBound {
        #[serde(with = "crate::serde_big")]
        bound: BigInt,
    },
}

/// Upper limit on the number of `x` values [`oracle_search`] will visit.
pub const ORACLE_BUDGET: u64 = 100_000_000;

/// 0, 1, -1, 2, -2, ... as 0, 1, 2, 3, 4, ...
fn zigzag(k: &BigInt) -> BigInt {
    if k.is_positive() {
        k * 2 - 1
    } else {
        -k * 2
    }
}

/// Smallest-shell solution of `a·x² + b·y² = α` over the ring of integers,
/// with every basis coordinate of x and y in `[-bound, bound]`.
///
/// Ties inside a shell break on the coordinates in the order
/// `(x1, x2, y1, y2)`, each compared as 0, 1, -1, 2, -2, ...
pub fn oracle_search(a: &BigInt, b: &BigInt, alpha: &QuadInt, bound: &BigInt) -> Result<OracleOutcome> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::domain("coefficients must be positive"));
    }
    if !bound.is_positive() {
        return Err(Error::domain("bound must be at least 1"));
    }
    if !alpha.is_parity_valid() {
        return Err(Error::domain(format!("{alpha} is not an algebraic integer")));
    }
    check_radicand(&alpha.d)?;
    let side: BigInt = bound * 2 + 1;
    if side.pow(2) > BigInt::from(ORACLE_BUDGET) {
        return Err(Error::Budget(format!("oracle box of half-width {bound} exceeds {ORACLE_BUDGET} points")));
    }
    let d = &alpha.d;
    type Key = (BigInt, BigInt, BigInt, BigInt, BigInt);
    let mut best: Option<(Key, QuadInt, QuadInt)> = None;
    let mut x1 = -bound.clone();
    while &x1 <= bound {
        let mut x2 = -bound.clone();
        while &x2 <= bound {
            let x = QuadInt::from_basis(&x1, &x2, d);
            let rest = alpha.sub(&x.square().scale(a))?;
            if let Some(y) = rest.div_exact(b).and_then(|r| if r.is_zero() { Some(None) } else { r.sqrt().map(Some) }) {
                let roots = match y {
                    None => vec![QuadInt::from_int(0, d)],
                    Some((r1, r2)) => vec![r1, r2],
                };
                for y in roots {
                    let (y1, y2) = y.coords();
                    let shell = [&x1, &x2, &y1, &y2].iter().map(|c| c.abs()).max().expect("four coordinates");
                    if &shell > bound {
                        continue;
                    }
                    let key = (shell, zigzag(&x1), zigzag(&x2), zigzag(&y1), zigzag(&y2));
                    if best.as_ref().map_or(true, |(k, _, _)| &key < k) {
                        best = Some((key, x.clone(), y));
                    }
                }
            }
            x2 += 1;
        }
        x1 += 1;
    }
    Ok(match best {
        Some((key, x, y)) => {
            let lhs = x.square().scale(a).add(&y.square().scale(b))?;
            assert_eq!(&lhs, alpha, "oracle hit fails a·x² + b·y² = α");
            OracleOutcome::Found { x, y, shell: key.0 }
        }
        None => OracleOutcome::NotFoundWithinBound { bound: bound.clone() },
    })
}
