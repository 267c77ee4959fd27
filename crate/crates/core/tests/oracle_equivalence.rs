//! Every fast path against the complete search it is meant to shortcut.

use num_bigint::BigInt;
use quadrep_core::decision::{complete_search, decide_with, Method, MethodChoice};
use quadrep_core::local::{local_at_odd_prime, local_generic};
use quadrep_core::{criterion_2_7, decide, local_everywhere, Verdict};

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

#[test]
fn criterion_2_7_matches_search_to_20000() {
    let (two, seven) = (big(2), big(7));
    let mut solvable = 0;
    for n in 1..=20_000i64 {
        let r = criterion_2_7(&big(n)).unwrap();
        let found = complete_search(&two, &seven, &big(n)).unwrap().is_some();
        assert_eq!(r.verdict == Verdict::Solvable, found, "n = {n}: {:?}", r.verdict);
        assert!(r.conditions.as_ref().unwrap().alternate_quartic_agrees, "n = {n}");
        solvable += found as u32;
    }
    // sanity: the form hits a fair share of the range
    assert!(solvable > 1_000);
}

#[test]
fn decide_paths_match_search() {
    for (a, b) in [(2i64, 7i64), (1, 5), (1, 14), (1, 1), (1, 2), (3, 4), (1, 17), (2, 9)] {
        for n in 1..=5_000i64 {
            let r = decide(&big(a), &big(b), &big(n)).unwrap();
            let oracle = decide_with(&big(a), &big(b), &big(n), MethodChoice::Oracle).unwrap();
            assert_eq!(r.verdict, oracle.verdict, "a={a} b={b} n={n} via {:?}", r.method);
            r.validate().unwrap();
        }
    }
}

#[test]
fn one_class_per_genus_is_local() {
    for n in 1..=10_000i64 {
        let local = local_everywhere(&big(1), &big(5), &big(n)).unwrap().all_solvable;
        let found = complete_search(&big(1), &big(5), &big(n)).unwrap().is_some();
        assert_eq!(local, found, "n = {n}");
    }
    assert_eq!(decide(&big(1), &big(5), &big(29)).unwrap().method, Method::OneClassPerGenus);
}

#[test]
fn local_closed_form_matches_enumeration() {
    let primes: Vec<i64> = quadrep_core::arith::primes_below(200).into_iter().map(|p| p as i64).filter(|&p| p > 2).collect();
    for a in [1i64, 2, 3, 5, 7] {
        for b in [1i64, 2, 3, 5, 7] {
            for &p in &primes {
                if (2 * a * b) % p == 0 {
                    continue;
                }
                for n in (-500i64..=500).filter(|&n| n != 0) {
                    let closed = local_at_odd_prime(&big(a), &big(b), &big(n), &big(p)).unwrap();
                    let walk = local_generic(&big(a), &big(b), &big(n), &big(p)).unwrap();
                    assert_eq!(closed.solvable, walk.solvable, "a={a} b={b} n={n} p={p}");
                }
            }
        }
    }
}

#[test]
fn witnesses_solve_the_equation() {
    for n in [2i64, 9, 15, 71, 9_999, 123_457] {
        let r = decide(&big(2), &big(7), &big(n)).unwrap();
        if let Some(w) = &r.witness {
            assert_eq!(big(2) * &w.x * &w.x + big(7) * &w.y * &w.y, big(n));
        }
    }
}
