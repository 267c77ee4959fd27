//! Deciding whether `n = ax² + by²` has an integral solution.
//!
//! Three paths, chosen by the structure of the form class group of
//! `D = -4ab`:
//!
//! * exponent ≤ 2 (one class per genus): local solvability everywhere is
//!   already sufficient;
//! * cyclic of order 4: local solvability plus a parity condition on the
//!   classes of the primes dividing `n`, read from the factorization
//!   pattern of the ring class polynomial of `D` modulo each prime;
//! * anything else: complete search, exact because the form is definite.
//!
//! Every `Solvable` report carries a witness found by complete search.

use crate::arith::{factorize, is_probable_prime, isqrt, jacobi, kronecker_prime, exact_sqrt, valuation};
use crate::classpoly::{class_polynomial, degree_pattern, frobenius_order, IntPolynomial};
use crate::error::{Error, Result};
use crate::forms::{class_of_prime, class_order, is_one_class_per_genus, reduce, FormClassGroup, PrimeClass, QuadForm};
use crate::local::{local_everywhere, LocalReport, Place};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Where a prime's class sits in a cyclic class group of order 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeRole {
    /// Splits into principal ideals.
    SplitPrincipal,
    /// Splits into ideals of order 2.
    SplitOrder2,
    /// Splits into ideals of order 4.
    SplitOrder4,
    Inert,
    /// Divides the discriminant.
    Ramified,
}

impl PrimeRole {
    fn from_split_order(order: usize) -> Result<Self> {
        match order {
            1 => Ok(PrimeRole::SplitPrincipal),
            2 => Ok(PrimeRole::SplitOrder2),
            4 => Ok(PrimeRole::SplitOrder4),
            k => Err(Error::consistency(format!("class order {k} in a group of order 4"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassificationSource {
    /// Factorization pattern of the class polynomial modulo p.
    PolynomialPattern,
    /// The reduced form representing p, and its order under composition.
    FormRepresentation,
    /// The Kronecker symbol alone (inert and ramified primes).
    Character,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeClassification {
    #[serde(with = "crate::serde_big")]
    pub prime: BigInt,
    pub role: PrimeRole,
    /// Order of the class of a prime ideal above p: Frobenius order for
    /// split primes, the ramified ideal's order for ramified ones.
    pub frobenius_order: Option<usize>,
    pub source: ClassificationSource,
    /// True when the pattern and form sources were both computed and agree.
    pub cross_checked: bool,
    /// Exponent of p in n; 0 when classified standalone.
    pub exponent: u32,
}

/// Primes below this are classified from both sources and compared.
pub const CROSS_CHECK_LIMIT: u64 = 10_000_000_000;

fn split_order_from_forms(p: &BigInt, d: &BigInt) -> Result<Option<usize>> {
    match class_of_prime(p, d)? {
        PrimeClass::Split { form, .. } => Ok(Some(class_order(&form)?)),
        _ => Ok(None),
    }
}

/// Classifies a prime relative to a discriminant whose class group is
/// cyclic of order 4, with `poly` a defining polynomial of the ring class
/// field (degree 4).
pub fn classify_prime(p: &BigInt, d: &BigInt, poly: &IntPolynomial) -> Result<PrimeClassification> {
    if !is_probable_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let mk = |role, order, source, cross_checked| PrimeClassification {
        prime: p.clone(),
        role,
        frobenius_order: order,
        source,
        cross_checked,
        exponent: 0,
    };
    match kronecker_prime(d, p)? {
        -1 => return Ok(mk(PrimeRole::Inert, None, ClassificationSource::Character, false)),
        0 => {
            let order = match class_of_prime(p, d)? {
                PrimeClass::Ramified { form: Some(f) } => Some(class_order(&f)?),
                _ => None,
            };
            return Ok(mk(PrimeRole::Ramified, order, ClassificationSource::FormRepresentation, false));
        }
        _ => {}
    }
    let check = p < &BigInt::from(CROSS_CHECK_LIMIT);
    match degree_pattern(poly, p) {
        Ok(pattern) => {
            let order = frobenius_order(&pattern, poly.degree())?;
            let role = PrimeRole::from_split_order(order)?;
            if check {
                let by_forms = split_order_from_forms(p, d)?;
                if by_forms != Some(order) {
                    return Err(Error::consistency(format!(
                        "p = {p}: pattern {:?} gives order {order}, forms give {by_forms:?}",
                        pattern.degrees
                    )));
                }
            }
            Ok(mk(role, Some(order), ClassificationSource::PolynomialPattern, check))
        }
        Err(Error::RamifiedPattern(_)) => {
            let order = split_order_from_forms(p, d)?
                .ok_or_else(|| Error::consistency(format!("split prime {p} has no representing form")))?;
            Ok(mk(PrimeRole::from_split_order(order)?, Some(order), ClassificationSource::FormRepresentation, false))
        }
        Err(e) => Err(e),
    }
}

/// [`classify_prime`] for `D = -56`, where `f` is either the computed class
/// polynomial or any other quartic defining the same field.
pub fn classify_prime_2_7(p: &BigInt, f: &IntPolynomial) -> Result<PrimeClassification> {
    classify_prime(p, &BigInt::from(-56), f)
}

/// `x⁴ - x³ + x + 1`, a smaller defining polynomial for the ring class
/// field of discriminant -56 than the class polynomial itself.
pub fn alternate_quartic_56() -> IntPolynomial {
    IntPolynomial::from_i64(&[1, 1, 0, -1, 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Solvable,
    LocallyObstructed,
    /// Locally solvable everywhere, yet not represented.
    ArtinObstructed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClassField,
    OneClassPerGenus,
    Oracle,
}

/// Caller's preference for [`decide_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    #[default]
    Auto,
    ClassField,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamifiedTerm {
    #[serde(with = "crate::serde_big")]
    pub prime: BigInt,
    pub exponent: u32,
    /// Order of the class of the prime ideal above p (1 or 2).
    pub class_order: usize,
}

/// The class-group bookkeeping behind an order-4 verdict.
///
/// Each prime power `p^e || n` contributes to the exponent of the target
/// class: order-4 split primes any value `≡ e (mod 2)` in `[-e, e]`,
/// order-2 split primes `2e`, ramified primes `e` times their class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityTerms {
    pub ramified: Vec<RamifiedTerm>,
    pub order4_exponent_sum: u64,
    pub order2_exponent_sum: u64,
    pub order4_primes_present: bool,
    /// 1 when `ax² + by²` is the principal form, 2 otherwise.
    pub target_class_order: usize,
    pub holds: bool,
}

impl ParityTerms {
    fn evaluate(
        ramified: Vec<RamifiedTerm>,
        order4_exponent_sum: u64,
        order2_exponent_sum: u64,
        order4_primes_present: bool,
        target_class_order: usize,
    ) -> Self {
        let holds = if order4_primes_present {
            order4_exponent_sum % 2 == 0
        } else {
            // in units of g²: order-2 split primes give e, ramified order-2 give e
            let fixed: u64 = order2_exponent_sum
                + ramified.iter().filter(|r| r.class_order == 2).map(|r| r.exponent as u64).sum::<u64>();
            let target = if target_class_order == 2 { 1 } else { 0 };
            fixed % 2 == target
        };
        ParityTerms { ramified, order4_exponent_sum, order2_exponent_sum, order4_primes_present, target_class_order, holds }
    }
}

/// The explicit conditions for `2x² + 7y² = n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion27Conditions {
    /// `v_2(n)`.
    pub s2: u32,
    /// `v_7(n)`.
    pub s7: u32,
    /// `n / 2^s2 ≡ ±1 (mod 8)`.
    pub two_adic: bool,
    /// `(n / 7^s7 | 7) = 1`.
    pub seven_adic: bool,
    /// `(-14 | p) = 1` for every `p ∤ 14` with `v_p(n)` odd.
    pub odd_exponent_primes_split: bool,
    /// Order-4 primes present: their exponent sum is even; otherwise
    /// `1 + s2 + s7 + Σ order-2 exponents` is even.
    pub parity: bool,
    /// Whether the alternate quartic assigns every prime of `n` the same
    /// role as the class polynomial.
    pub alternate_quartic_agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "crate::serde_big")]
    pub x: BigInt,
    #[serde(with = "crate::serde_big")]
    pub y: BigInt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    #[serde(with = "crate::serde_big")]
    pub a: BigInt,
    #[serde(with = "crate::serde_big")]
    pub b: BigInt,
    #[serde(with = "crate::serde_big")]
    pub n: BigInt,
    pub verdict: Verdict,
    pub method: Method,
    #[serde(with = "crate::serde_big")]
    pub discriminant: BigInt,
    pub class_number: usize,
    pub local: LocalReport,
    pub failing_places: Vec<Place>,
    pub classifications: Vec<PrimeClassification>,
    pub parity_terms: Option<ParityTerms>,
    pub conditions: Option<Criterion27Conditions>,
    pub witness: Option<Witness>,
}

impl DecisionReport {
    /// Checks the report's internal invariants.
    pub fn validate(&self) -> Result<()> {
        match self.verdict {
            Verdict::Solvable => {
                let w = self.witness.as_ref().ok_or_else(|| Error::consistency("solvable without witness"))?;
                if &self.a * &w.x * &w.x + &self.b * &w.y * &w.y != self.n {
                    return Err(Error::consistency("witness does not satisfy the equation"));
                }
            }
            Verdict::LocallyObstructed => {
                if self.failing_places.is_empty() {
                    return Err(Error::consistency("local obstruction without a failing place"));
                }
            }
            Verdict::ArtinObstructed => {
                if !self.local.all_solvable || self.witness.is_some() {
                    return Err(Error::consistency("Artin obstruction must be locally solvable and witness-free"));
                }
                if self.parity_terms.as_ref().map_or(false, |t| t.holds) {
                    return Err(Error::consistency("Artin obstruction with a satisfied parity condition"));
                }
            }
        }
        Ok(())
    }
}

/// Most `y` values [`complete_search`] will try.
pub const SEARCH_BUDGET: u64 = 100_000_000;

/// Solution of `ax² + by² = n` with `x, y ≥ 0` and `y` smallest, or `None`.
///
/// Exact for positive `a`, `b`: `y ≤ √(n/b)` bounds the search.
pub fn complete_search(a: &BigInt, b: &BigInt, n: &BigInt) -> Result<Option<(BigInt, BigInt)>> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::domain("complete search needs a definite form with a, b > 0"));
    }
    if n.is_negative() {
        return Ok(None);
    }
    let y_max = isqrt(&(n / b));
    if y_max > BigInt::from(SEARCH_BUDGET) {
        return Err(Error::Budget(format!("complete search for n = {n} needs {y_max} steps")));
    }
    let mut y = BigInt::zero();
    while y <= y_max {
        let rest = n - b * &y * &y;
        if (&rest % a).is_zero() {
            if let Some(x) = exact_sqrt(&(rest / a)) {
                return Ok(Some((x, y)));
            }
        }
        y += 1;
    }
    Ok(None)
}

/// True iff local solvability decides representation by `ax² + by²`.
pub fn hasse_check(a: &BigInt, b: &BigInt) -> Result<bool> {
    check_coefficients(a, b)?;
    is_one_class_per_genus(&(BigInt::from(-4) * a * b))
}

fn check_coefficients(a: &BigInt, b: &BigInt) -> Result<()> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::domain(format!("a = {a} and b = {b} must both be positive")));
    }
    Ok(())
}

/// Conductor `f` of the order of discriminant `d`: `d = f²·d_K`.
pub fn conductor(d: &BigInt) -> Result<BigInt> {
    let mut f = BigInt::one();
    let mut core = BigInt::from(-1);
    for pp in factorize(d)?.factors {
        let half = pp.exponent / 2;
        f *= num_traits::pow(pp.prime.clone(), half as usize);
        if pp.exponent % 2 == 1 {
            core *= &pp.prime;
        }
    }
    // d = f² · core with core squarefree; d_K = core or 4·core
    if core.mod_floor(&BigInt::from(4)) != BigInt::one() {
        f /= 2;
    }
    Ok(f)
}

pub fn decide(a: &BigInt, b: &BigInt, n: &BigInt) -> Result<DecisionReport> {
    decide_with(a, b, n, MethodChoice::Auto)
}

/// Which path applies for `(a, b, n)` absent a caller preference.
fn applicable_method(a: &BigInt, b: &BigInt, n: &BigInt, group: &FormClassGroup) -> Result<Method> {
    if !a.gcd(b).is_one() {
        return Ok(Method::Oracle);
    }
    if group.exponent <= 2 {
        return Ok(Method::OneClassPerGenus);
    }
    if group.class_number() == 4 && group.is_cyclic() && n.gcd(&conductor(&group.discriminant)?).is_one() {
        return Ok(Method::ClassField);
    }
    Ok(Method::Oracle)
}

pub fn decide_with(a: &BigInt, b: &BigInt, n: &BigInt, choice: MethodChoice) -> Result<DecisionReport> {
    check_coefficients(a, b)?;
    if n.is_zero() {
        return Err(Error::domain("n must be nonzero"));
    }
    let d = BigInt::from(-4) * a * b;
    let group = FormClassGroup::cached(&d)?;
    let natural = applicable_method(a, b, n, &group)?;
    let method = match choice {
        MethodChoice::Auto => natural,
        MethodChoice::Oracle => Method::Oracle,
        MethodChoice::ClassField if natural == Method::Oracle => {
            return Err(Error::Dispatch(format!(
                "no class-field path for D = {d} (class group exponent {}, order {}, gcd(a, b) = {})",
                group.exponent,
                group.class_number(),
                a.gcd(b)
            )))
        }
        MethodChoice::ClassField => natural,
    };
    let local = local_everywhere(a, b, n)?;
    let mut report = DecisionReport {
        a: a.clone(),
        b: b.clone(),
        n: n.clone(),
        verdict: Verdict::LocallyObstructed,
        method,
        discriminant: d.clone(),
        class_number: group.class_number(),
        failing_places: local.failing_places().cloned().collect(),
        local,
        classifications: Vec::new(),
        parity_terms: None,
        conditions: None,
        witness: None,
    };
    if !report.local.all_solvable {
        oracle_agrees(&report, false)?;
        return Ok(report);
    }
    let search = complete_search(a, b, n)?;
    let solvable = match method {
        Method::OneClassPerGenus => true,
        Method::Oracle => search.is_some(),
        Method::ClassField => {
            let (classes, terms) = order_four_terms(a, b, n, &d)?;
            report.classifications = classes;
            let holds = terms.holds;
            report.parity_terms = Some(terms);
            holds
        }
    };
    finish(&mut report, solvable, search)?;
    Ok(report)
}

fn finish(report: &mut DecisionReport, solvable: bool, search: Option<(BigInt, BigInt)>) -> Result<()> {
    if solvable {
        let (x, y) = search.ok_or_else(|| {
            Error::consistency(format!(
                "{:?} path says {} = {}x² + {}y² is solvable but complete search finds nothing",
                report.method, report.n, report.a, report.b
            ))
        })?;
        report.verdict = Verdict::Solvable;
        report.witness = Some(Witness { x, y });
    } else {
        report.verdict = Verdict::ArtinObstructed;
        if cfg!(debug_assertions) && search.is_some() {
            return Err(Error::consistency(format!(
                "{:?} path says {} is not represented but complete search finds {:?}",
                report.method, report.n, search
            )));
        }
    }
    report.validate()
}

/// Under debug assertions, a local obstruction must match an empty search.
fn oracle_agrees(report: &DecisionReport, solvable: bool) -> Result<()> {
    if cfg!(debug_assertions) && !solvable {
        if let Some(hit) = complete_search(&report.a, &report.b, &report.n)? {
            return Err(Error::consistency(format!(
                "local obstruction at {:?} contradicts the solution {hit:?}",
                report.failing_places
            )));
        }
    }
    report.validate()
}

/// Classifies the primes of `n` and evaluates the order-4 parity condition
/// for the target form `(a, 0, b)`.
fn order_four_terms(a: &BigInt, b: &BigInt, n: &BigInt, d: &BigInt) -> Result<(Vec<PrimeClassification>, ParityTerms)> {
    let poly = class_polynomial(d)?;
    order_four_terms_with(a, b, n, d, &poly)
}

fn order_four_terms_with(
    a: &BigInt,
    b: &BigInt,
    n: &BigInt,
    d: &BigInt,
    poly: &IntPolynomial,
) -> Result<(Vec<PrimeClassification>, ParityTerms)> {
    let target = reduce(&QuadForm::new(a.clone(), BigInt::zero(), b.clone()))?;
    let target_class_order = class_order(&target)?;
    let mut classes = Vec::new();
    let mut ramified = Vec::new();
    let (mut sum4, mut sum2, mut any4) = (0u64, 0u64, false);
    for pp in factorize(n)?.factors {
        let mut c = classify_prime(&pp.prime, d, poly)?;
        c.exponent = pp.exponent;
        match c.role {
            PrimeRole::SplitOrder4 => {
                any4 = true;
                sum4 += pp.exponent as u64;
            }
            PrimeRole::SplitOrder2 => sum2 += pp.exponent as u64,
            PrimeRole::Ramified => {
                let order = c.frobenius_order.ok_or_else(|| {
                    Error::Dispatch(format!("{} divides the conductor; use the oracle", pp.prime))
                })?;
                ramified.push(RamifiedTerm { prime: pp.prime.clone(), exponent: pp.exponent, class_order: order });
            }
            PrimeRole::SplitPrincipal | PrimeRole::Inert => {}
        }
        classes.push(c);
    }
    Ok((classes, ParityTerms::evaluate(ramified, sum4, sum2, any4, target_class_order)))
}

/// Explicit criterion for `2x² + 7y² = n`, n ≥ 1, cross-checked against the
/// local module and, for solvable `n`, against complete search.
pub fn criterion_2_7(n: &BigInt) -> Result<DecisionReport> {
    if !n.is_positive() {
        return Err(Error::domain(format!("n = {n} must be positive")));
    }
    let (two, seven) = (BigInt::from(2), BigInt::from(7));
    let d = BigInt::from(-56);
    let s2 = valuation(n, &two)?;
    let s7 = valuation(n, &seven)?;
    let odd_part = n >> s2;
    let r8 = odd_part.mod_floor(&BigInt::from(8)).to_u32().expect("residue mod 8");
    let two_adic = r8 == 1 || r8 == 7;
    let seven_part = n / num_traits::pow(seven.clone(), s7 as usize);
    let seven_adic = jacobi(&seven_part, &seven)? == 1;
    let factors = factorize(n)?;
    let mut odd_exponent_primes_split = true;
    for pp in &factors.factors {
        if pp.prime != two && pp.prime != seven && pp.exponent % 2 == 1 && kronecker_prime(&d, &pp.prime)? != 1 {
            odd_exponent_primes_split = false;
        }
    }

    let poly = class_polynomial(&d)?;
    let (classes, terms) = order_four_terms_with(&two, &seven, n, &d, &poly)?;
    let (alt_classes, _) = order_four_terms_with(&two, &seven, n, &d, &alternate_quartic_56())?;
    let alternate_quartic_agrees =
        classes.iter().zip(&alt_classes).all(|(c, r)| c.role == r.role && c.frobenius_order == r.frobenius_order);

    let parity = if terms.order4_primes_present {
        terms.order4_exponent_sum % 2 == 0
    } else {
        (1 + s2 as u64 + s7 as u64 + terms.order2_exponent_sum) % 2 == 0
    };
    if parity != terms.holds {
        return Err(Error::consistency(format!("n = {n}: explicit parity {parity} but class bookkeeping {}", terms.holds)));
    }
    let conditions = Criterion27Conditions {
        s2,
        s7,
        two_adic,
        seven_adic,
        odd_exponent_primes_split,
        parity,
        alternate_quartic_agrees,
    };

    let local = local_everywhere(&two, &seven, n)?;
    let locally_ok = two_adic && seven_adic && odd_exponent_primes_split;
    if locally_ok != local.all_solvable {
        return Err(Error::consistency(format!(
            "n = {n}: explicit local conditions give {locally_ok}, local module gives {}",
            local.all_solvable
        )));
    }
    let mut report = DecisionReport {
        a: two.clone(),
        b: seven.clone(),
        n: n.clone(),
        verdict: Verdict::LocallyObstructed,
        method: Method::ClassField,
        discriminant: d,
        class_number: 4,
        failing_places: local.failing_places().cloned().collect(),
        local,
        classifications: classes,
        parity_terms: Some(terms),
        conditions: Some(conditions),
        witness: None,
    };
    if !locally_ok {
        report.validate()?;
        return Ok(report);
    }
    let search = if parity { complete_search(&two, &seven, n)? } else { None };
    finish(&mut report, parity, search)?;
    Ok(report)
}

/// Disagreement between two quartics on the role of a prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleMismatch {
    #[serde(with = "crate::serde_big")]
    pub prime: BigInt,
    pub computed: PrimeRole,
    pub alternate: PrimeRole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionAudit {
    pub primes_checked: usize,
    pub order4_primes: usize,
    pub order2_primes: usize,
    pub principal_primes: usize,
    pub mismatches: Vec<RoleMismatch>,
}

/// Compares the split-prime roles induced by the class polynomial of -56
/// and by [`alternate_quartic_56`] for every prime below `bound`.
pub fn partition_audit(bound: u64) -> Result<PartitionAudit> {
    let d = BigInt::from(-56);
    let h = class_polynomial(&d)?;
    let alt = alternate_quartic_56();
    let mut audit =
        PartitionAudit { primes_checked: 0, order4_primes: 0, order2_primes: 0, principal_primes: 0, mismatches: Vec::new() };
    for p in crate::arith::primes_below(bound) {
        let p = BigInt::from(p);
        if kronecker_prime(&d, &p)? != 1 {
            continue;
        }
        let computed = classify_prime(&p, &d, &h)?.role;
        let alternate = classify_prime(&p, &d, &alt)?.role;
        audit.primes_checked += 1;
        match computed {
            PrimeRole::SplitOrder4 => audit.order4_primes += 1,
            PrimeRole::SplitOrder2 => audit.order2_primes += 1,
            _ => audit.principal_primes += 1,
        }
        if computed != alternate {
            audit.mismatches.push(RoleMismatch { prime: p, computed, alternate });
        }
    }
    Ok(audit)
}
