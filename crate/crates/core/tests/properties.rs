mod common;

use std::collections::BTreeSet;

use common::*;
use cyclotower::base_field::FieldFamily;
use cyclotower::classifier::{CyclicityReason, MAX_E};
use cyclotower::invariants::nu;
use cyclotower::oracle::ff::{order_mod_pow2, ConcreteCyclotomic};
use cyclotower::oracle::verify::condition_battery;
use cyclotower::oracle::{degree_of, galois_subgroup, label_stabilizer, SubfieldLattice};
use cyclotower::towers::enumerate_towers;
use cyclotower::unit_group::{decompose, order_mod, recompose, reduce, span, SubgroupLattice};
use cyclotower::{classify, BaseField, FieldLabel, Sign, TauSign, UnitSubgroup};
use proptest::prelude::*;

/// `ν + 1 + extra`, unless that exceeds `cap`.
fn e_above_nu(field: &BaseField, extra: u32, cap: u32) -> Option<u32> {
    let e = nu(field).nu + 1 + extra;
    (e <= cap.min(MAX_E)).then_some(e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn decompose_round_trips(e in 3u32..=63, a in any::<i64>()) {
        let a = a | 1;
        let (sign, k) = decompose(e, a).unwrap();
        prop_assert_eq!(recompose(e, sign, k), reduce(e, a));
    }

    #[test]
    fn span_is_a_subgroup(e in 1u32..=12, gens in prop::collection::vec(any::<u64>(), 0..4)) {
        let gens: Vec<u64> = gens.into_iter().map(|g| g | 1).collect();
        let h = span(e, &gens).unwrap();
        prop_assert!(h.contains(1));
        prop_assert!(h.order().is_power_of_two());
        let els = h.elements();
        for &a in els {
            for &b in els {
                prop_assert!(h.contains_residue(a.wrapping_mul(b) & (h.modulus() - 1)));
            }
        }
        for g in gens {
            prop_assert!(h.contains(g as i64 & i64::MAX));
        }
    }

    #[test]
    fn membership_predicates_are_coherent(field in any_field(), k in 3u32..=64) {
        if field.contains_tau(k, TauSign::Plus) {
            prop_assert!(field.contains_tau(k - 1, TauSign::Plus));
        }
        if field.contains_zeta(k) {
            prop_assert!(field.contains_tau(k, TauSign::Plus) && field.contains_tau(k, TauSign::Minus));
        }
        prop_assert_eq!(field.order_over(k) == 1, field.contains_zeta(k));
        let (lo, hi) = (field.order_over(k - 1), field.order_over(k));
        prop_assert!(lo <= hi && hi <= 2 * lo);
    }

    #[test]
    fn invariants_are_consistent(field in any_field()) {
        let inv = nu(&field);
        prop_assert!(inv.nu_plus >= 2);
        prop_assert_eq!(inv.nu, inv.nu_plus + u32::from(inv.has_c2));
        prop_assert_eq!(inv.has_c2, inv.c2_witness.is_some());
        if let Some(w) = inv.c2_witness {
            prop_assert!(!inv.zeta4_in_field);
            prop_assert!(field.contains_tau(w, TauSign::Minus));
            prop_assert_eq!(field.order_over(w), 1u64 << (w - 1));
            prop_assert!(!field.contains_zeta(w));
        }
    }

    #[test]
    fn degree_jumps_to_four_just_above_nu(field in any_field()) {
        let inv = nu(&field);
        prop_assume!(inv.nu + 2 <= MAX_E);
        for e in 2..=inv.nu + 2 {
            let d = degree_of(&field, e, FieldLabel::Zeta(e)).unwrap();
            prop_assert_eq!(d >= 4, e > inv.nu, "e = {}", e);
            if e == inv.nu + 1 {
                prop_assert_eq!(d, 4);
            }
        }
    }

    #[test]
    fn classification_matches_oracle_group(field in any_field(), extra in 0u32..=5) {
        let Some(e) = e_above_nu(&field, extra, 12) else { return Ok(()) };
        let c = classify(&field, e).unwrap();
        let c = c.classified().unwrap();
        let h = galois_subgroup(&field, e).unwrap();
        let inv = c.invariants;
        prop_assert_eq!(c.degree, h.order() as u64);
        prop_assert_eq!(c.degree, 1u64 << (e - inv.nu + 1));
        prop_assert_eq!(c.galois.elements.as_slice(), h.elements());
        prop_assert_eq!(c.cyclic, h.is_cyclic().is_some());
        prop_assert_eq!(c.cyclic, c.reason != CyclicityReason::Neither);
        if c.cyclic {
            prop_assert_eq!(c.tower_count, 1);
        } else {
            prop_assert_eq!(c.tower_count, 2 * u64::from(e - inv.nu) + 1);
            prop_assert_eq!(field.characteristic(), 0);
        }
        if let FieldFamily::FiniteField { .. } = field.family() {
            let q = field.q_mod_2_128().unwrap() as u64;
            prop_assert_eq!(c.degree, order_mod_pow2(q, e));
        }
    }

    #[test]
    fn stabilizers_shrink_with_level(field in any_field(), extra in 0u32..=5) {
        let Some(e) = e_above_nu(&field, extra, 12) else { return Ok(()) };
        let h = galois_subgroup(&field, e).unwrap();
        prop_assert_eq!(label_stabilizer(&h, FieldLabel::Zeta(e)).unwrap().order(), 1);
        for k in 2..e {
            let lower = label_stabilizer(&h, FieldLabel::Zeta(k)).unwrap();
            let upper = label_stabilizer(&h, FieldLabel::Zeta(k + 1)).unwrap();
            prop_assert!(upper.is_subgroup_of(&lower));
        }
    }

    #[test]
    fn zeta4_makes_tau_generate_everything(field in any_field(), extra in 0u32..=5) {
        prop_assume!(field.contains_zeta(2));
        let Some(e) = e_above_nu(&field, extra, 12) else { return Ok(()) };
        let h = galois_subgroup(&field, e).unwrap();
        for label in [FieldLabel::TauPlus(e), FieldLabel::TauMinus(e)] {
            prop_assert_eq!(label_stabilizer(&h, label).unwrap().order(), 1);
        }
    }

    #[test]
    fn cyclic_case_zeta_nu_is_tau_plus_nu(field in any_field(), extra in 0u32..=5) {
        let Some(e) = e_above_nu(&field, extra, 12) else { return Ok(()) };
        let out = classify(&field, e).unwrap();
        prop_assume!(out.is_cyclic());
        let n = out.invariants().nu;
        let h = galois_subgroup(&field, e).unwrap();
        prop_assert_eq!(
            label_stabilizer(&h, FieldLabel::Zeta(n)).unwrap(),
            label_stabilizer(&h, FieldLabel::TauPlus(n)).unwrap()
        );
    }

    #[test]
    fn condition_battery_agrees(field in any_field(), extra in 0u32..=5) {
        let Some(e) = e_above_nu(&field, extra, 12) else { return Ok(()) };
        let b = condition_battery(&field, e).unwrap();
        prop_assert!(b.consistent(), "{:?}", b);
    }

    #[test]
    fn towers_biject_with_maximal_chains(field in any_field(), extra in 0u32..=5) {
        let Some(e) = e_above_nu(&field, extra, 12) else { return Ok(()) };
        let inv = nu(&field);
        let towers = enumerate_towers(&field, e).unwrap();
        let lattice = SubfieldLattice::build(&field, e).unwrap();
        prop_assert!(lattice.labels.iter().all(|names| !names.is_empty()));
        let mut hit = BTreeSet::new();
        for t in &towers {
            prop_assert_eq!(t.length() as u32, e - inv.nu + 1);
            prop_assert_eq!(t.steps().first(), Some(&FieldLabel::Zeta(e)));
            prop_assert_eq!(t.steps().last(), Some(&FieldLabel::Base));
            let chain = lattice.chain_of(t).unwrap();
            prop_assert!(chain.is_some(), "{} is not a maximal chain", t);
            prop_assert!(hit.insert(chain.unwrap()), "{} repeats a chain", t);
        }
        let chains: BTreeSet<Vec<usize>> = lattice.lattice.maximal_chains().into_iter().collect();
        prop_assert_eq!(hit, chains);
    }
}

#[test]
fn unit_group_orders() {
    for e in 3..=20 {
        assert_eq!(UnitSubgroup::full(e).unwrap().order(), 1 << (e - 1));
        assert_eq!(order_mod(e, 5), 1 << (e - 2));
    }
}

#[test]
fn one_plus_half_modulus_is_a_power_of_five() {
    for e in 4..=63 {
        assert_eq!(decompose(e, (1i64 << (e - 1)) + 1).unwrap(), (Sign::Plus, 1 << (e - 3)), "e = {e}");
    }
}

#[test]
fn decompose_covers_every_residue() {
    assert!(decompose(2, 3).is_err() && decompose(5, 4).is_err());
    for e in 3..=12 {
        for a in (1..1i64 << e).step_by(2) {
            let (s, k) = decompose(e, a).unwrap();
            assert_eq!(recompose(e, s, k), a as u64);
        }
    }
}

#[test]
fn cyclicity_matches_order_scan() {
    for e in 1..=8 {
        let lattice = SubgroupLattice::build(&UnitSubgroup::full(e).unwrap()).unwrap();
        for s in lattice.nodes() {
            let scan = s.elements().iter().any(|&a| order_mod(e, a) as usize == s.order());
            assert_eq!(s.is_cyclic().is_some(), scan, "{:?}", s.elements());
        }
    }
}

#[test]
fn full_group_chain_counts() {
    for e in 4..=9 {
        let lattice = SubgroupLattice::build(&UnitSubgroup::full(e).unwrap()).unwrap();
        assert_eq!(lattice.maximal_chains().len(), 2 * (e as usize - 2) + 1);
    }
}

#[test]
fn finite_field_sweep_is_never_non_cyclic() {
    for p in odd_primes(200) {
        for k in 1..=2 {
            let f = BaseField::finite(p, k).unwrap();
            for e in nu(&f).nu + 1..=MAX_E.min(nu(&f).nu + 4) {
                assert!(classify(&f, e).unwrap().is_cyclic(), "{f} e={e}");
            }
        }
    }
}

/// Congruence membership tests against explicit arithmetic in `F_{q^d}`.
#[test]
fn membership_matches_explicit_finite_fields() {
    const LEVEL: u32 = 8;
    for (p, k) in odd_prime_powers(200) {
        let f = BaseField::finite(p, k).unwrap();
        let c = ConcreteCyclotomic::new(p, k, LEVEL).unwrap();
        for j in 1..=LEVEL {
            assert_eq!(f.contains_zeta(j), c.in_base(&c.zeta_level(j)), "{f} zeta level {j}");
            assert_eq!(f.contains_tau(j, TauSign::Plus), c.in_base(&c.tau(j, false)), "{f} tau+ level {j}");
            assert_eq!(f.contains_tau(j, TauSign::Minus), c.in_base(&c.tau(j, true)), "{f} tau- level {j}");
        }
    }
}

/// `ζ² − τ⁺ζ + 1 = 0`, `ζ² − τ⁻ζ − 1 = 0` and the halving relations for `τ`, at every level.
#[test]
fn tau_relations_hold_concretely() {
    for p in odd_primes(60) {
        let c = ConcreteCyclotomic::new(p, 1, 8).unwrap();
        let fld = &c.field;
        for j in 1..=8 {
            let z = c.zeta_level(j);
            let z2 = fld.mul(&z, &z);
            let (tp, tm) = (c.tau(j, false), c.tau(j, true));
            let plus = fld.add(&fld.sub(&z2, &fld.mul(&tp, &z)), &fld.one());
            let minus = fld.sub(&fld.sub(&z2, &fld.mul(&tm, &z)), &fld.one());
            assert!(fld.is_zero(&plus) && fld.is_zero(&minus), "p = {p}, level {j}");
            if j >= 2 {
                let below = c.tau(j - 1, false);
                assert_eq!(fld.mul(&tp, &tp), fld.add(&below, &fld.from_int(2)));
                assert_eq!(fld.mul(&tm, &tm), fld.sub(&below, &fld.from_int(2)));
            }
        }
    }
}
