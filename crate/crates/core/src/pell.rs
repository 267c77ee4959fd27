//! Continued fractions of √N and the equations `x² - N·y² = m`.

use crate::arith::{exact_sqrt, is_probable_prime, isqrt, jacobi, quartic_symbol};
use crate::error::{Error, Result};
use crate::quadfield::QuadInt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Periodic continued fraction `√N = [a0; period, period, ...]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfExpansion {
    #[serde(with = "crate::serde_big")]
    pub n: BigInt,
    #[serde(with = "crate::serde_big")]
    pub a0: BigInt,
    #[serde(with = "crate::serde_big::vec")]
    pub period: Vec<BigInt>,
}

impl CfExpansion {
    /// Partial quotient `a_k` for any `k ≥ 0`.
    pub fn quotient(&self, k: usize) -> &BigInt {
        if k == 0 {
            &self.a0
        } else {
            &self.period[(k - 1) % self.period.len()]
        }
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }
}

/// A solution of `x² - N·y² = m`; construction checks the equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellSolution {
    #[serde(with = "crate::serde_big")]
    pub x: BigInt,
    #[serde(with = "crate::serde_big")]
    pub y: BigInt,
    #[serde(with = "crate::serde_big")]
    pub n: BigInt,
    #[serde(with = "crate::serde_big")]
    pub m: BigInt,
}

impl PellSolution {
    fn new(x: BigInt, y: BigInt, n: &BigInt, m: &BigInt) -> Self {
        assert_eq!(&x * &x - n * &y * &y, *m, "({x}, {y}) does not solve x² - {n}y² = {m}");
        PellSolution { x, y, n: n.clone(), m: m.clone() }
    }
}

/// Result of [`solve_pell_like`]. A miss is either proven (the search was
/// complete for this equation) or inconclusive (the budget ran out first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PellOutcome {
    Found { solution: PellSolution },
    NotFoundComplete,
    NotFoundBudget,
}

impl PellOutcome {
    pub fn solution(&self) -> Option<&PellSolution> {
        match self {
            PellOutcome::Found { solution } => Some(solution),
            _ => None,
        }
    }
}

/// Largest number of `y` values the brute-force branch will try.
pub const PELL_BRUTE_BUDGET: u64 = 10_000_000;

fn check_nonsquare(n: &BigInt) -> Result<()> {
    if n <= &BigInt::one() {
        return Err(Error::domain(format!("N = {n} must exceed 1")));
    }
    if exact_sqrt(n).is_some() {
        return Err(Error::domain(format!("N = {n} is a perfect square")));
    }
    Ok(())
}

/// Continued fraction of √N by the integer recurrence
/// `m' = d·a - m`, `d' = (N - m'²)/d`, `a' = ⌊(a0 + m')/d'⌋`.
pub fn cf_sqrt(n: &BigInt) -> Result<CfExpansion> {
    check_nonsquare(n)?;
    let a0 = isqrt(n);
    let two_a0 = &a0 * 2;
    let (mut m, mut d, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let mut period = Vec::new();
    loop {
        m = &d * &a - &m;
        d = (n - &m * &m) / &d;
        a = (&a0 + &m) / &d;
        period.push(a.clone());
        // the period of √N closes exactly when a = 2·a0
        if a == two_a0 {
            break;
        }
    }
    Ok(CfExpansion { n: n.clone(), a0, period })
}

/// The first `count` convergents `(p_k, q_k)`, k = 0, 1, ...
pub fn convergents(cf: &CfExpansion, count: usize) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(count);
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (cf.a0.clone(), BigInt::one());
    for k in 0..count {
        if k > 0 {
            let a = cf.quotient(k);
            let p_next = a * &p + &p_prev;
            let q_next = a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
        }
        out.push((p.clone(), q.clone()));
    }
    out
}

/// Minimal positive solution of `x² - N·y² = 1`.
pub fn fundamental_solution(n: &BigInt) -> Result<PellSolution> {
    let cf = cf_sqrt(n)?;
    let l = cf.period_len();
    let k = if l % 2 == 0 { l - 1 } else { 2 * l - 1 };
    let (x, y) = convergents(&cf, k + 1).pop().expect("k + 1 ≥ 1 convergents");
    Ok(PellSolution::new(x, y, n, &BigInt::one()))
}

/// Minimal positive solution of `x² - N·y² = -1`, present iff the period is odd.
pub fn negative_pell(n: &BigInt) -> Result<Option<PellSolution>> {
    let cf = cf_sqrt(n)?;
    let l = cf.period_len();
    if l % 2 == 0 {
        return Ok(None);
    }
    let (x, y) = convergents(&cf, l).pop().expect("l ≥ 1 convergents");
    Ok(Some(PellSolution::new(x, y, n, &-BigInt::one())))
}

/// Some nonnegative solution of `x² - N·y² = m`, smallest `y` first.
///
/// For `m² < N` every primitive solution is a convergent of √N, so scanning
/// two periods (and the `g²`-scaled versions for square divisors of m) is
/// complete. Otherwise `y` is brute-forced up to `⌈√(|m|(t+1)/(2N))⌉`, where
/// `t` is the `x` of the fundamental unit: every solution class has a
/// representative that small.
pub fn solve_pell_like(n: &BigInt, m: &BigInt) -> Result<PellOutcome> {
    check_nonsquare(n)?;
    if m.is_zero() {
        return Err(Error::domain("m must be nonzero"));
    }
    if m * m < *n {
        return Ok(convergent_scan(n, m)?);
    }
    let t = fundamental_solution(n)?.x;
    let limit: BigInt = isqrt(&(m.abs() * (&t + 1) / (n * 2))) + 1;
    if limit > BigInt::from(PELL_BRUTE_BUDGET) {
        return Ok(PellOutcome::NotFoundBudget);
    }
    let limit = limit.to_u64().expect("limit below budget");
    for y in 0..=limit {
        let y = BigInt::from(y);
        let x2 = m + n * &y * &y;
        if x2.is_negative() {
            continue;
        }
        if let Some(x) = exact_sqrt(&x2) {
            return Ok(PellOutcome::Found { solution: PellSolution::new(x, y, n, m) });
        }
    }
    Ok(PellOutcome::NotFoundComplete)
}

fn convergent_scan(n: &BigInt, m: &BigInt) -> Result<PellOutcome> {
    let cf = cf_sqrt(n)?;
    let convs = convergents(&cf, 2 * cf.period_len());
    let mut best: Option<PellSolution> = None;
    // y = 0 needs m to be a square
    if let Some(x) = exact_sqrt(m).filter(|_| m.is_positive()) {
        return Ok(PellOutcome::Found { solution: PellSolution::new(x, BigInt::zero(), n, m) });
    }
    let mut g = BigInt::one();
    while &g * &g <= m.abs() {
        if (m % (&g * &g)).is_zero() {
            let reduced = m / (&g * &g);
            if let Some((p, q)) = convs.iter().find(|(p, q)| p * p - n * q * q == reduced) {
                let y = q * &g;
                if best.as_ref().map_or(true, |b| y < b.y) {
                    best = Some(PellSolution::new(p * &g, y, n, m));
                }
            }
        }
        g += 1;
    }
    Ok(match best {
        Some(solution) => PellOutcome::Found { solution },
        None => PellOutcome::NotFoundComplete,
    })
}

/// Whether `(p, q)` meets the unit-norm hypothesis: distinct primes, both
/// `≡ 1 (mod 4)`, and either `(p/q) = -1` or `(p/q)₄ = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitHypothesis {
    #[serde(with = "crate::serde_big")]
    pub p: BigInt,
    #[serde(with = "crate::serde_big")]
    pub q: BigInt,
    pub legendre: i8,
    /// Only defined when `(p/q) = 1`.
    pub quartic: Option<i8>,
    pub holds: bool,
}

pub fn unit_hypothesis(p: &BigInt, q: &BigInt) -> Result<UnitHypothesis> {
    for r in [p, q] {
        if !is_probable_prime(r) {
            return Err(Error::domain(format!("{r} is not prime")));
        }
    }
    if p == q {
        return Err(Error::domain("p and q must differ"));
    }
    let four = BigInt::from(4);
    let both_one_mod_four = p.mod_floor(&four).is_one() && q.mod_floor(&four).is_one();
    let legendre = jacobi(p, q)?;
    let quartic = if both_one_mod_four && legendre == 1 { Some(quartic_symbol(p, q)?) } else { None };
    let holds = both_one_mod_four && (legendre == -1 || quartic == Some(-1));
    Ok(UnitHypothesis { p: p.clone(), q: q.clone(), legendre, quartic, holds })
}

/// How a [`UnitWitness`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessRoute {
    /// From `x² - pq·y² = -1`: `(x, y√-p)`.
    NegativePell,
    /// From `x² - pq·y² = p` with `x = pX`: `(X√-p, y)`.
    NormP,
}

/// `(x0, y0)` in ℤ[√-p] with `x0² + q·y0² = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitWitness {
    pub x0: QuadInt,
    pub y0: QuadInt,
    pub route: WitnessRoute,
    /// The integer equation the witness was read from.
    pub source: PellSolution,
}

/// Solve `x0² + q·y0² = -1` over ℤ[√-p] for a pair meeting [`unit_hypothesis`].
///
/// The negative Pell equation for `pq` is tried first. Failing that,
/// `x² - pq·y² = p` forces `p | x`, leaving `p·X² - q·y² = 1`; this is
/// solved as `(pX)² - pq·y² = p` when `p < q` and as `(qy)² - pq·X² = -q`
/// otherwise, so the right-hand side stays below √(pq) and the convergent
/// scan applies.
pub fn unit_witness(p: &BigInt, q: &BigInt) -> Result<UnitWitness> {
    let hyp = unit_hypothesis(p, q)?;
    if !hyp.holds {
        return Err(Error::domain(format!("({p}, {q}) does not satisfy the unit-norm hypothesis")));
    }
    let n = p * q;
    let d = -p.clone();
    let witness = if let Some(sol) = negative_pell(&n)? {
        UnitWitness {
            x0: QuadInt::from_int(sol.x.clone(), &d),
            y0: QuadInt::from_basis(&BigInt::zero(), &sol.y, &d),
            route: WitnessRoute::NegativePell,
            source: sol,
        }
    } else {
        let (rhs, from_norm_p) = if p < q { (p.clone(), true) } else { (-q.clone(), false) };
        let sol = match solve_pell_like(&n, &rhs)? {
            PellOutcome::Found { solution } => solution,
            PellOutcome::NotFoundComplete => {
                return Err(Error::consistency(format!(
                    "neither x² - {n}y² = -1 nor x² - {n}y² = {rhs} is solvable, contrary to the hypothesis"
                )))
            }
            PellOutcome::NotFoundBudget => {
                return Err(Error::Budget(format!("x² - {n}y² = {rhs} not settled within budget")))
            }
        };
        let (big_x, y) = if from_norm_p { (&sol.x / p, sol.y.clone()) } else { (sol.y.clone(), &sol.x / q) };
        UnitWitness {
            x0: QuadInt::from_basis(&BigInt::zero(), &big_x, &d),
            y0: QuadInt::from_int(y, &d),
            route: WitnessRoute::NormP,
            source: sol,
        }
    };
    let lhs = witness.x0.square().add(&witness.y0.square().scale(q))?;
    if lhs != QuadInt::from_int(-1, &d) {
        return Err(Error::consistency(format!("witness gives x0² + q·y0² = {lhs}, not -1")));
    }
    Ok(witness)
}
