//! Solvability of `ax² + by² = n` over the p-adic integers ℤ_p and over ℝ.
//!
//! Odd primes not dividing `2ab` have a closed form. Every other prime goes
//! through [`local_generic`]: a depth-first walk over residue pairs modulo
//! `p^k`, stopping at the first point whose depth exceeds twice the
//! valuation of a partial derivative (Hensel's lemma then lifts it to ℤ_p).
//!
//! The walk only looks for primitive points (`p ∤ x` or `p ∤ y`). Those
//! become liftable by depth `2 v_p(4ab) + 1`, so the walk stays shallow no
//! matter how large `v_p(n)` is; imprimitive points are covered by retrying
//! with `n / p²`.

use crate::arith::{self, is_probable_prime, jacobi, sqrt_mod, valuation};
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A place of ℚ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Place {
    Prime(#[serde(with = "crate::serde_big")] BigInt),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "p = {p}"),
            Place::Infinity => f.write_str("infinity"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalMethod {
    ClosedForm,
    Enumeration,
    RealSign,
}

/// A residue solution `ax² + by² ≡ n (mod modulus)` that lifts to ℤ_p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueWitness {
    #[serde(with = "crate::serde_big")]
    pub x: BigInt,
    #[serde(with = "crate::serde_big")]
    pub y: BigInt,
    #[serde(with = "crate::serde_big")]
    pub modulus: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalVerdict {
    pub place: Place,
    pub solvable: bool,
    pub method: LocalMethod,
    pub witness_mod: Option<ResidueWitness>,
}

/// Per-place verdicts plus the conjunction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalReport {
    pub verdicts: Vec<LocalVerdict>,
    pub all_solvable: bool,
}

impl LocalReport {
    pub fn failing_places(&self) -> impl Iterator<Item = &Place> {
        self.verdicts.iter().filter(|v| !v.solvable).map(|v| &v.place)
    }
}

/// Exponent `K = 2(v_p(4ab) + v_p(n)) + 1` such that solvability modulo
/// `p^K` already decides solvability over ℤ_p.
pub fn hensel_depth(a: &BigInt, b: &BigInt, n: &BigInt, p: &BigInt) -> Result<u32> {
    let four_ab = BigInt::from(4) * a * b;
    Ok(2 * (valuation(&four_ab, p)? + valuation(n, p)?) + 1)
}

/// Depth at which every primitive ℤ_p-point has become liftable.
pub fn primitive_depth(a: &BigInt, b: &BigInt, p: &BigInt) -> Result<u32> {
    let four_ab = BigInt::from(4) * a * b;
    Ok(2 * valuation(&four_ab, p)? + 1)
}

/// Whether a residue pair modulo `p^depth` satisfies the Hensel criterion
/// `depth ≥ 2t + 1`, `t = min(v_p(2ax), v_p(2by))`. A coordinate that is
/// zero modulo `p^depth` has unknown (hence unusable) valuation.
pub fn is_liftable(a: &BigInt, b: &BigInt, p: &BigInt, depth: u32, x: &BigInt, y: &BigInt) -> bool {
    let modulus = num_traits::pow(p.clone(), depth as usize);
    let derivative_valuation = |coef: &BigInt, v: &BigInt| -> Option<u32> {
        let r = v.mod_floor(&modulus);
        if r.is_zero() {
            return None;
        }
        Some(valuation(&(BigInt::from(2) * coef), p).ok()? + valuation(&r, p).ok()?)
    };
    let t = match (derivative_valuation(a, x), derivative_valuation(b, y)) {
        (Some(u), Some(v)) => u.min(v),
        (Some(u), None) | (None, Some(u)) => u,
        (None, None) => return false,
    };
    depth >= 2 * t + 1
}

impl ResidueWitness {
    /// Checks the congruence and the liftability criterion.
    pub fn verify(&self, a: &BigInt, b: &BigInt, n: &BigInt, p: &BigInt) -> bool {
        let lhs = a * &self.x * &self.x + b * &self.y * &self.y - n;
        if !lhs.mod_floor(&self.modulus).is_zero() {
            return false;
        }
        let mut depth = 0u32;
        let mut m = self.modulus.clone();
        while (&m % p).is_zero() {
            m /= p;
            depth += 1;
        }
        m.is_one() && is_liftable(a, b, p, depth, &self.x, &self.y)
    }
}

fn check_prime(p: &BigInt) -> Result<()> {
    if !is_probable_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    Ok(())
}

/// Closed form for odd `p ∤ 2ab`: solvable iff `v_p(n)` is even or
/// `(-ab / p) = 1`.
pub fn local_at_odd_prime(a: &BigInt, b: &BigInt, n: &BigInt, p: &BigInt) -> Result<LocalVerdict> {
    if n.is_zero() {
        return Err(Error::domain("n must be nonzero"));
    }
    check_prime(p)?;
    let two_ab = BigInt::from(2) * a * b;
    if (&two_ab % p).is_zero() {
        return Err(Error::Dispatch(format!(
            "{p} divides 2ab = {two_ab}; use the enumeration test"
        )));
    }
    let v = valuation(n, p)?;
    let d = -(a * b);
    let chi = jacobi(&d, p)?;
    let solvable = v % 2 == 0 || chi == 1;
    let witness_mod = if solvable {
        Some(closed_form_witness(a, b, n, p, v, chi)?)
    } else {
        None
    };
    Ok(LocalVerdict {
        place: Place::Prime(p.clone()),
        solvable,
        method: LocalMethod::ClosedForm,
        witness_mod,
    })
}

/// Builds a liftable residue point modulo `p^(v+1)` for the closed-form case.
fn closed_form_witness(a: &BigInt, b: &BigInt, n: &BigInt, p: &BigInt, v: u32, chi: i8) -> Result<ResidueWitness> {
    let modulus = num_traits::pow(p.clone(), v as usize + 1);
    let b_inv = arith::mod_inverse(b, p).ok_or_else(|| Error::consistency("b not invertible"))?;
    let unit = n / num_traits::pow(p.clone(), v as usize);
    if v % 2 == 0 {
        // a x'² + b y'² ≡ unit (mod p) has a point with a nonzero coordinate
        // on the smooth conic; scale it by p^(v/2).
        let scale = num_traits::pow(p.clone(), (v / 2) as usize);
        let mut x = BigInt::zero();
        loop {
            let r = ((&unit - a * &x * &x) * &b_inv).mod_floor(p);
            if let Some(roots) = sqrt_mod(&r, p) {
                let y = roots[0].clone();
                if !(x.is_zero() && y.is_zero()) {
                    return Ok(ResidueWitness { x: &x * &scale, y: &y * &scale, modulus });
                }
            }
            x += 1;
            if &x >= p {
                return Err(Error::consistency(format!("no point on a smooth conic mod {p}")));
            }
        }
    }
    debug_assert_eq!(chi, 1);
    // v odd: x = p^j, y = p^j y' with j = (v-1)/2 and a + b y'² ≡ p·unit (mod p²).
    let j = (v - 1) / 2;
    let scale = num_traits::pow(p.clone(), j as usize);
    let p2 = p * p;
    let target = (p * &unit - a).mod_floor(&p2);
    let y0 = sqrt_mod(&(-(a * &b_inv)), p)
        .and_then(|r| r.into_iter().find(|r| !r.is_zero()))
        .ok_or_else(|| Error::consistency("-a/b should be a nonzero square"))?;
    // one Newton step: y1 = y0 + p k with 2 b y0 k ≡ (target - b y0²)/p (mod p)
    let excess = (&target - b * &y0 * &y0).mod_floor(&p2) / p;
    let inv = arith::mod_inverse(&(BigInt::from(2) * b * &y0), p)
        .ok_or_else(|| Error::consistency("2 b y0 not invertible"))?;
    let k = (excess * inv).mod_floor(p);
    let y1 = y0 + p * k;
    Ok(ResidueWitness { x: scale.clone(), y: y1 * scale, modulus })
}

/// Residue arithmetic backing the enumeration: `u128` while the modulus fits
/// in 63 bits, `BigUint` beyond.
trait Word: Clone + Ord + Integer + From<u64> {
    fn to_big(&self) -> BigInt;
    fn from_big(v: &BigInt) -> Self;
}

impl Word for u128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_big(v: &BigInt) -> Self {
        v.to_u128().expect("residue fits in u128")
    }
}

impl Word for BigUint {
    fn to_big(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.clone())
    }
    fn from_big(v: &BigInt) -> Self {
        v.magnitude().clone()
    }
}

struct Enumeration<T> {
    p: T,
    a: T,
    b: T,
    n: T,
    /// p^0 ..= p^K
    pows: Vec<T>,
    v2a: u32,
    v2b: u32,
    max_depth: usize,
}

impl<T: Word> Enumeration<T> {
    fn new(a: &BigInt, b: &BigInt, n: &BigInt, p: &BigInt, depth: u32) -> Result<Self> {
        let mut pows = vec![T::one()];
        let pw = T::from_big(p);
        for _ in 0..depth {
            let next = pows.last().unwrap().clone() * pw.clone();
            pows.push(next);
        }
        let top = pows.last().unwrap().to_big();
        let reduce = |v: &BigInt| T::from_big(&v.mod_floor(&top));
        Ok(Enumeration {
            p: pw,
            a: reduce(a),
            b: reduce(b),
            n: reduce(n),
            v2a: valuation(&(BigInt::from(2) * a), p)?,
            v2b: valuation(&(BigInt::from(2) * b), p)?,
            pows,
            max_depth: depth as usize,
        })
    }

    fn val(&self, x: &T, depth: usize) -> Option<u32> {
        let mut r = x.mod_floor(&self.pows[depth]);
        if r.is_zero() {
            return None;
        }
        let mut k = 0;
        while r.is_multiple_of(&self.p) {
            r = r / self.p.clone();
            k += 1;
        }
        Some(k)
    }

    fn liftable(&self, depth: usize, x: &T, y: &T) -> bool {
        let tx = self.val(x, depth).map(|v| v + self.v2a);
        let ty = self.val(y, depth).map(|v| v + self.v2b);
        let t = match (tx, ty) {
            (Some(u), Some(v)) => u.min(v),
            (Some(u), None) | (None, Some(u)) => u,
            (None, None) => return false,
        };
        depth as u32 >= 2 * t + 1
    }

    /// Lifts of `y` (mod p^depth) to `y + j p^depth` with
    /// `b Y² ≡ r (mod p^(depth+1))`, in increasing `j`.
    fn y_children(&self, depth: usize, y: &T, r: &T) -> Vec<T> {
        let m = &self.pows[depth];
        let m1 = &self.pows[depth + 1];
        let p = &self.p;
        let by2 = (self.b.clone() * y.clone() * y.clone()).mod_floor(m1);
        let all = |this: &Self| -> Vec<T> {
            let count = this.p.to_big().to_u64().unwrap_or(u64::MAX);
            (0..count).map(|j| y.clone() + T::from(j) * m.clone()).collect()
        };
        // s = (r - b y²) / p^depth (mod p); the parent congruence makes the
        // difference divisible by p^depth.
        let diff = (r.clone() + m1.clone() - by2).mod_floor(m1);
        if !diff.is_multiple_of(m) {
            return Vec::new();
        }
        let s = (diff / m.clone()).mod_floor(p);
        if depth == 0 {
            // b j² ≡ r (mod p)
            let pb = p.to_big();
            let bb = self.b.mod_floor(p);
            if pb == BigInt::from(2) || bb.is_zero() {
                let count = pb.to_u64().unwrap_or(u64::MAX);
                return (0..count)
                    .map(T::from)
                    .filter(|j| (bb.clone() * j.clone() * j.clone()).mod_floor(p) == s)
                    .collect();
            }
            let inv = arith::mod_inverse(&bb.to_big(), &pb).expect("b is a unit mod p");
            return match sqrt_mod(&(s.to_big() * inv), &pb) {
                Some(roots) => roots.iter().map(T::from_big).collect(),
                None => Vec::new(),
            };
        }
        // depth ≥ 1: the j² term vanishes mod p, leaving 2 b y j ≡ s (mod p)
        let coef = (T::from(2) * self.b.clone() * y.clone()).mod_floor(p);
        if coef.is_zero() {
            return if s.is_zero() { all(self) } else { Vec::new() };
        }
        let inv = arith::mod_inverse(&coef.to_big(), &p.to_big()).expect("unit");
        let j = T::from_big(&(s.to_big() * inv).mod_floor(&p.to_big()));
        vec![y.clone() + j * m.clone()]
    }

    fn search(&self, depth: usize, x: &T, y: &T) -> Option<(T, T, usize)> {
        if depth > 0 && self.liftable(depth, x, y) {
            return Some((x.clone(), y.clone(), depth));
        }
        if depth == self.max_depth {
            return None;
        }
        let m = &self.pows[depth];
        let m1 = &self.pows[depth + 1];
        let count = self.p.to_big().to_u64().unwrap_or(u64::MAX);
        for i in 0..count {
            let xi = x.clone() + T::from(i) * m.clone();
            let ax2 = (self.a.clone() * xi.clone() * xi.clone()).mod_floor(m1);
            let r = (self.n.clone() + m1.clone() - ax2).mod_floor(m1);
            for yj in self.y_children(depth, y, &r) {
                if depth == 0 && xi.is_zero() && yj.is_zero() {
                    continue;
                }
                if let Some(hit) = self.search(depth + 1, &xi, &yj) {
                    return Some(hit);
                }
            }
        }
        None
    }
}

/// Decides ℤ_p-solvability for any prime `p` by Hensel-bounded enumeration.
///
/// Residues are visited lexicographically, depth first; the first liftable
/// primitive point for `n`, then `n/p²`, `n/p⁴`, ... is scaled back and
/// returned as the witness.
pub fn local_generic(a: &BigInt, b: &BigInt, n: &BigInt, p: &BigInt) -> Result<LocalVerdict> {
    if n.is_zero() {
        return Err(Error::domain("n must be nonzero"));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::domain("a and b must be nonzero"));
    }
    check_prime(p)?;
    let depth = primitive_depth(a, b, p)?;
    let top = num_traits::pow(p.clone(), depth as usize);
    let p2 = p * p;
    let mut target = n.clone();
    let mut scale = 0u32;
    let witness_mod = loop {
        let hit = if top.bits() <= 63 {
            Enumeration::<u128>::new(a, b, &target, p, depth)?
                .search(0, &0, &0)
                .map(|(x, y, k)| (x.to_big(), y.to_big(), k))
        } else {
            let zero = BigUint::zero();
            Enumeration::<BigUint>::new(a, b, &target, p, depth)?
                .search(0, &zero, &zero)
                .map(|(x, y, k)| (x.to_big(), y.to_big(), k))
        };
        if let Some((x, y, k)) = hit {
            let factor = num_traits::pow(p.clone(), scale as usize);
            break Some(ResidueWitness {
                x: x * &factor,
                y: y * &factor,
                modulus: num_traits::pow(p.clone(), k + 2 * scale as usize),
            });
        }
        if !(&target % &p2).is_zero() {
            break None;
        }
        target /= &p2;
        scale += 1;
    };
    Ok(LocalVerdict {
        place: Place::Prime(p.clone()),
        solvable: witness_mod.is_some(),
        method: LocalMethod::Enumeration,
        witness_mod,
    })
}

/// Real solvability: the form represents `n` over ℝ.
pub fn local_at_infinity(a: &BigInt, b: &BigInt, n: &BigInt) -> LocalVerdict {
    let solvable = match (a.signum() * b.signum()).sign() {
        Sign::Minus => true,
        _ if a.is_positive() => n.is_positive(),
        _ if a.is_negative() => n.is_negative(),
        _ => n.is_zero(),
    };
    LocalVerdict { place: Place::Infinity, solvable, method: LocalMethod::RealSign, witness_mod: None }
}

/// Checks every place where solvability is in doubt: infinity and each
/// prime dividing `2abn`. All other primes are solvable automatically.
pub fn local_everywhere(a: &BigInt, b: &BigInt, n: &BigInt) -> Result<LocalReport> {
    if n.is_zero() {
        return Err(Error::domain("n must be nonzero"));
    }
    let d = -(a * b);
    if arith::is_square(&d) {
        return Err(Error::domain(format!("-ab = {d} is a perfect square")));
    }
    let real = local_at_infinity(a, b, n);
    let definite = (a * b).is_positive();
    if !real.solvable && definite {
        return Ok(LocalReport { verdicts: vec![real], all_solvable: false });
    }
    let mut primes: Vec<BigInt> = [BigInt::from(2), a.clone(), b.clone(), n.clone()]
        .iter()
        .map(arith::factorize)
        .collect::<Result<Vec<_>>>()?
        .iter()
        .flat_map(|f| f.primes().cloned().collect::<Vec<_>>())
        .collect();
    primes.sort();
    primes.dedup();
    let two_ab = BigInt::from(2) * a * b;
    let mut verdicts = vec![real];
    for p in primes {
        let verdict = if (&two_ab % &p).is_zero() {
            local_generic(a, b, n, &p)?
        } else {
            local_at_odd_prime(a, b, n, &p)?
        };
        verdicts.push(verdict);
    }
    // report finite places in increasing order, infinity last
    verdicts.rotate_left(1);
    let all_solvable = verdicts.iter().all(|v| v.solvable);
    Ok(LocalReport { verdicts, all_solvable })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn generic(a: i64, b: i64, n: i64, p: i64) -> LocalVerdict {
        local_generic(&big(a), &big(b), &big(n), &big(p)).unwrap()
    }

    fn assert_sound(v: &LocalVerdict, a: i64, b: i64, n: i64) {
        if let (Place::Prime(p), Some(w)) = (&v.place, &v.witness_mod) {
            assert!(w.verify(&big(a), &big(b), &big(n), p), "{v:?}");
        }
        if v.solvable && matches!(v.place, Place::Prime(_)) {
            assert!(v.witness_mod.is_some());
        }
    }

    #[test]
    fn odd_prime_examples() {
        for (n, p, expected) in [(9, 3, true), (5, 5, true), (11, 11, false)] {
            let v = local_at_odd_prime(&big(2), &big(7), &big(n), &big(p)).unwrap();
            assert_eq!(v.solvable, expected, "n = {n}, p = {p}");
            assert_eq!(v.method, LocalMethod::ClosedForm);
            assert_sound(&v, 2, 7, n);
        }
        let err = local_at_odd_prime(&big(2), &big(7), &big(5), &big(7)).unwrap_err();
        assert!(matches!(err, Error::Dispatch(_)));
        let err = local_at_odd_prime(&big(2), &big(7), &big(5), &big(2)).unwrap_err();
        assert!(matches!(err, Error::Dispatch(_)));
    }

    #[test]
    fn generic_examples() {
        assert!(!generic(2, 7, 3, 2).solvable);
        let v = generic(2, 7, 2, 2);
        assert!(v.solvable);
        let w = v.witness_mod.as_ref().unwrap();
        assert_eq!((w.x.clone(), w.y.clone()), (big(1), big(0)));
        assert!(generic(2, 7, 14, 7).solvable);
        assert_eq!(generic(2, 7, 14, 7).method, LocalMethod::Enumeration);
    }

    #[test]
    fn infinity_examples() {
        assert!(!local_at_infinity(&big(2), &big(7), &big(-3)).solvable);
        assert!(local_at_infinity(&big(2), &big(7), &big(5)).solvable);
        assert!(local_at_infinity(&big(1), &big(-2), &big(-1)).solvable);
        assert!(local_at_infinity(&big(-1), &big(-2), &big(-1)).solvable);
        assert!(!local_at_infinity(&big(-1), &big(-2), &big(1)).solvable);
    }

    #[test]
    fn everywhere_examples() {
        let r = local_everywhere(&big(2), &big(7), &big(14)).unwrap();
        assert!(r.all_solvable);
        let places: Vec<_> = r.verdicts.iter().map(|v| v.place.clone()).collect();
        assert_eq!(places, vec![Place::Prime(big(2)), Place::Prime(big(7)), Place::Infinity]);

        // 3 is neither a value mod 8 nor 2x² mod 7
        let r = local_everywhere(&big(2), &big(7), &big(3)).unwrap();
        assert_eq!(
            r.failing_places().cloned().collect::<Vec<_>>(),
            vec![Place::Prime(big(2)), Place::Prime(big(7))]
        );

        // 11 ≡ 3 (mod 8), and (-14/11) = -1 with v_11 odd
        let r = local_everywhere(&big(2), &big(7), &big(11)).unwrap();
        assert_eq!(
            r.failing_places().cloned().collect::<Vec<_>>(),
            vec![Place::Prime(big(2)), Place::Prime(big(11))]
        );

        let r = local_everywhere(&big(2), &big(7), &big(23)).unwrap();
        assert!(r.all_solvable);

        let r = local_everywhere(&big(2), &big(7), &big(-11)).unwrap();
        assert_eq!(r.verdicts.len(), 1);
        assert!(!r.all_solvable);

        assert!(local_everywhere(&big(1), &big(-4), &big(3)).is_err());
        assert!(local_everywhere(&big(2), &big(7), &big(0)).is_err());
    }

    #[test]
    fn large_valuations_use_bigint_residues() {
        // 2^80 needs a modulus far beyond 63 bits
        let n = BigInt::one() << 80;
        let v = local_generic(&big(2), &big(7), &n, &big(2)).unwrap();
        // 2^80 = 2 * (2^79); 2^79 = 2^78 * 2, and 2x² + 7y² represents 2 (x = 1)
        assert!(v.solvable);
        assert!(v.witness_mod.unwrap().verify(&big(2), &big(7), &n, &big(2)));
        let n3 = &n * 3;
        let v = local_generic(&big(2), &big(7), &n3, &big(2)).unwrap();
        assert!(!v.solvable);
    }

    #[test]
    fn closed_form_matches_enumeration_small_grid() {
        for a in [1, 2, 3, 5, 7] {
            for b in [1, 2, 3, 5, 7] {
                for p in [3i64, 5, 7, 11, 13, 17, 19, 23] {
                    if (2 * a * b) % p == 0 {
                        continue;
                    }
                    for n in (-150i64..=150).filter(|&n| n != 0) {
                        let closed = local_at_odd_prime(&big(a), &big(b), &big(n), &big(p)).unwrap();
                        let enumerated = generic(a, b, n, p);
                        assert_eq!(closed.solvable, enumerated.solvable, "a={a} b={b} n={n} p={p}");
                        assert_sound(&closed, a, b, n);
                        assert_sound(&enumerated, a, b, n);
                    }
                }
            }
        }
    }

    /// Exhaustive count over residues mod p^K; independent of the walk.
    fn exists_mod(a: i64, b: i64, n: i64, modulus: i64) -> bool {
        let mut by2 = vec![false; modulus as usize];
        for y in 0..modulus {
            by2[((b * y % modulus) * y % modulus) as usize] = true;
        }
        (0..modulus).any(|x| {
            let r = (n - a * x % modulus * x).rem_euclid(modulus);
            by2[r as usize]
        })
    }

    #[test]
    fn enumeration_complete_at_desk_scale() {
        let mut checked = 0;
        for p in [2i64, 3, 5, 7] {
            for a in [1, 2, 3, 5, 7] {
                for b in [1, 2, 3, 5, 7] {
                    for n in (-200i64..=200).filter(|&n| n != 0) {
                        let k = hensel_depth(&big(a), &big(b), &big(n), &big(p)).unwrap();
                        let modulus = match p.checked_pow(k) {
                            Some(m) if m <= 1 << 16 => m,
                            _ => continue,
                        };
                        let v = generic(a, b, n, p);
                        assert_eq!(v.solvable, exists_mod(a, b, n, modulus), "a={a} b={b} n={n} p={p}");
                        assert_sound(&v, a, b, n);
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 20_000, "only {checked} cases fit the exhaustive budget");
    }

    #[test]
    fn scaling_by_p_squared_preserves_solvability() {
        for p in [2i64, 3, 5, 7] {
            for (a, b) in [(1, 1), (2, 7), (3, 5), (1, 7)] {
                for n in (1..=120).filter(|n| n % p != 0 || n % 4 == 1) {
                    if generic(a, b, n, p).solvable {
                        assert!(generic(a, b, n * p * p, p).solvable, "a={a} b={b} n={n} p={p}");
                    }
                }
            }
        }
    }
}
