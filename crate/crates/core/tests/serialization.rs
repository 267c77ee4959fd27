use num_bigint::BigInt;
use quadrep_core::pell::{cf_sqrt, unit_witness};
use quadrep_core::quadfield::{oracle_search, OracleOutcome};
use quadrep_core::{class_polynomial, criterion_2_7, decide, DecisionReport, FormClassGroup, QuadInt};

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn round_trip<T>(value: &T) -> serde_json::Value
where
    T: serde::Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug,
{
    let text = serde_json::to_string(value).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, value);
    serde_json::from_str(&text).unwrap()
}

#[test]
fn reports_round_trip() {
    for n in [2i64, 3, 9, 14, 23, 19_999] {
        round_trip(&criterion_2_7(&big(n)).unwrap());
    }
    for (a, b, n) in [(1i64, 5i64, 21i64), (1, 5, 3), (3, 11, 47), (2, 7, -3)] {
        round_trip(&decide(&big(a), &big(b), &big(n)).unwrap());
    }
    round_trip(&FormClassGroup::new(&big(-56)).unwrap());
    round_trip(&class_polynomial(&big(-56)).unwrap());
    round_trip(&cf_sqrt(&big(14)).unwrap());
    round_trip(&unit_witness(&big(5), &big(41)).unwrap());
}

#[test]
fn big_integers_are_strings() {
    let v = round_trip(&class_polynomial(&big(-56)).unwrap());
    assert_eq!(v["coefficients"][0], "10064086044321563803648");
    let v = round_trip(&criterion_2_7(&big(14)).unwrap());
    assert_eq!(v["verdict"], "artin_obstructed");
    assert_eq!(v["n"], "14");
    let r: DecisionReport = serde_json::from_value(v).unwrap();
    assert_eq!(r.n, big(14));
}

#[test]
fn oracle_outcomes_are_labelled() {
    let alpha = QuadInt::from_int(-1, &big(-5));
    let hit = round_trip(&oracle_search(&big(1), &big(41), &alpha, &big(70)).unwrap());
    assert_eq!(hit["status"], "found");
    let miss = oracle_search(&big(1), &big(41), &alpha, &big(10)).unwrap();
    assert!(matches!(miss, OracleOutcome::NotFoundWithinBound { .. }));
    assert_eq!(round_trip(&miss)["status"], "not_found_within_bound");
}
