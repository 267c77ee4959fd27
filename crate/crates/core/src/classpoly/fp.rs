//! Dense polynomials over the prime field 𝔽_p, constant term first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::mod_inverse;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FpPoly {
    pub coeffs: Vec<BigInt>,
}

pub(crate) struct Field {
    pub p: BigInt,
}

impl FpPoly {
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last().map_or(false, Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn x() -> Self {
        FpPoly { coeffs: vec![BigInt::zero(), BigInt::one()] }
    }
}

impl Field {
    pub fn new(p: &BigInt) -> Self {
        Field { p: p.clone() }
    }

    pub fn reduce(&self, coeffs: &[BigInt]) -> FpPoly {
        FpPoly { coeffs: coeffs.iter().map(|c| c.mod_floor(&self.p)).collect() }.trim()
    }

    pub fn monic(&self, f: &FpPoly) -> FpPoly {
        let Some(lead) = f.coeffs.last() else { return f.clone() };
        let inv = mod_inverse(lead, &self.p).expect("nonzero element of a field is invertible");
        FpPoly { coeffs: f.coeffs.iter().map(|c| (c * &inv).mod_floor(&self.p)).collect() }
    }

    pub fn sub(&self, f: &FpPoly, g: &FpPoly) -> FpPoly {
        let n = f.coeffs.len().max(g.coeffs.len());
        let zero = BigInt::zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = f.coeffs.get(i).unwrap_or(&zero);
                let b = g.coeffs.get(i).unwrap_or(&zero);
                (a - b).mod_floor(&self.p)
            })
            .collect();
        FpPoly { coeffs }.trim()
    }

    pub fn mul(&self, f: &FpPoly, g: &FpPoly) -> FpPoly {
        if f.is_zero() || g.is_zero() {
            return FpPoly { coeffs: Vec::new() };
        }
        let mut out = vec![BigInt::zero(); f.coeffs.len() + g.coeffs.len() - 1];
        for (i, a) in f.coeffs.iter().enumerate() {
            for (j, b) in g.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        self.reduce(&out)
    }

    /// Quotient and remainder of `f` by the nonzero `g`.
    pub fn div_rem(&self, f: &FpPoly, g: &FpPoly) -> (FpPoly, FpPoly) {
        let dg = g.degree().expect("division by the zero polynomial");
        let inv = mod_inverse(&g.coeffs[dg], &self.p).expect("field element invertible");
        let mut r = f.coeffs.clone();
        if r.len() <= dg {
            return (FpPoly { coeffs: Vec::new() }, f.clone());
        }
        let mut q = vec![BigInt::zero(); r.len() - dg];
        for i in (dg..r.len()).rev() {
            let c = (&r[i] * &inv).mod_floor(&self.p);
            if c.is_zero() {
                continue;
            }
            for (j, gj) in g.coeffs.iter().enumerate() {
                let idx = i - dg + j;
                r[idx] = (&r[idx] - &c * gj).mod_floor(&self.p);
            }
            q[i - dg] = c;
        }
        r.truncate(dg);
        (FpPoly { coeffs: q }.trim(), FpPoly { coeffs: r }.trim())
    }

    pub fn rem(&self, f: &FpPoly, g: &FpPoly) -> FpPoly {
        self.div_rem(f, g).1
    }

    /// Monic gcd.
    pub fn gcd(&self, f: &FpPoly, g: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (f.clone(), g.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn derivative(&self, f: &FpPoly) -> FpPoly {
        let coeffs: Vec<BigInt> = f.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * i).collect();
        self.reduce(&coeffs)
    }

    /// `base^e mod modulus`.
    pub fn pow_mod(&self, base: &FpPoly, e: &BigInt, modulus: &FpPoly) -> FpPoly {
        let mut result = self.rem(&FpPoly { coeffs: vec![BigInt::one()] }, modulus);
        let b = self.rem(base, modulus);
        for i in (0..e.bits()).rev() {
            result = self.rem(&self.mul(&result, &result), modulus);
            if e.bit(i) {
                result = self.rem(&self.mul(&result, &b), modulus);
            }
        }
        result
    }

    /// Degrees of the irreducible factors of a monic squarefree `f`, by
    /// distinct-degree splitting with `gcd(x^(p^i) - x, f)`.
    pub fn distinct_degree_pattern(&self, f: &FpPoly) -> Vec<usize> {
        let mut f = self.monic(f);
        let mut degrees = Vec::new();
        let x = FpPoly::x();
        let mut h = self.rem(&x, &f);
        let mut i = 1usize;
        while f.degree().unwrap_or(0) >= 2 * i {
            h = self.pow_mod(&h, &self.p, &f);
            let g = self.gcd(&f, &self.sub(&h, &x));
            let dg = g.degree().unwrap_or(0);
            if dg > 0 {
                degrees.extend(std::iter::repeat(i).take(dg / i));
                f = self.div_rem(&f, &g).0;
                h = self.rem(&h, &f);
            }
            i += 1;
        }
        if let Some(d) = f.degree().filter(|&d| d > 0) {
            degrees.push(d);
        }
        degrees.sort_unstable();
        degrees
    }
}
