#![allow(dead_code)]

use cyclotower::base_field::is_prime;
use cyclotower::BaseField;
use proptest::prelude::*;

pub fn odd_primes(below: u64) -> Vec<u64> {
    (3..below).filter(|&n| is_prime(n)).collect()
}

/// Odd prime powers `q < below`, as `(p, k)`.
pub fn odd_prime_powers(below: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in odd_primes(below) {
        let mut q = p;
        let mut k = 1;
        while q < below {
            out.push((p, k));
            q *= p;
            k += 1;
        }
    }
    out.sort_by_key(|&(p, k)| p.pow(k));
    out
}

pub fn finite_fields() -> impl Strategy<Value = BaseField> {
    (prop::sample::select(odd_primes(1000)), 1u32..=3).prop_map(|(p, k)| BaseField::finite(p, k).unwrap())
}

pub fn cyclotomic_fields() -> impl Strategy<Value = BaseField> {
    (1u64..=512).prop_filter_map("m = 2 mod 4", |m| (m % 4 != 2).then(|| BaseField::cyclotomic(m).unwrap()))
}

pub fn quadratic_fields() -> impl Strategy<Value = BaseField> {
    (-100i64..=100).prop_filter_map("not squarefree or trivial", |d| BaseField::quadratic(d).ok())
}

pub fn any_field() -> impl Strategy<Value = BaseField> {
    prop_oneof![finite_fields(), cyclotomic_fields(), quadratic_fields()]
}
