//! Clause-by-clause comparison of the classifier against the oracle.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ff::ConcreteCyclotomic;
use super::{galois_subgroup, index2_supergroups, involutions, label_stabilizer, product_subgroup, SubfieldLattice};
use crate::base_field::{BaseField, FieldFamily, TauSign};
use crate::classifier::{self, classify, min_poly_zeta, tau_report, FieldLabel, Outcome};
use crate::error::{Error, Result};
use crate::towers::{enumerate_towers, TowerDecomposition};
use crate::unit_group::{span, UnitSubgroup};

/// Explicit field arithmetic in `verify` is skipped above this degree over the prime field.
pub const VERIFY_CONCRETE_DEGREE: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub classifier: String,
    pub oracle: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub field: BaseField,
    pub e: u32,
    pub in_scope: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    fn push(&mut self, name: &str, classifier: impl ToString, oracle: impl ToString) {
        let (classifier, oracle) = (classifier.to_string(), oracle.to_string());
        let status = if classifier == oracle { CheckStatus::Pass } else { CheckStatus::Fail };
        self.checks.push(Check { name: name.to_string(), status, classifier, oracle });
    }

    fn skip(&mut self, name: &str, why: impl ToString) {
        self.checks.push(Check {
            name: name.to_string(),
            status: CheckStatus::Skipped,
            classifier: String::new(),
            oracle: why.to_string(),
        });
    }
}

fn set_text(elements: &[u64]) -> String {
    let parts: Vec<String> = elements.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn chain_set(lattice: &SubfieldLattice, towers: &[TowerDecomposition]) -> Result<Option<BTreeSet<Vec<usize>>>> {
    let mut out = BTreeSet::new();
    for t in towers {
        match lattice.chain_of(t)? {
            Some(path) => {
                out.insert(path);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Compares every classifier claim about `F(ζ_{2^e})/F` with the oracle.
pub fn verify(field: &BaseField, e: u32) -> Result<VerificationReport> {
    let outcome = classify(field, e)?;
    let h = galois_subgroup(field, e)?;
    let mut report = VerificationReport { field: *field, e, in_scope: false, checks: Vec::new() };
    report.push("degree", outcome.degree(), h.order());
    report.push("cyclic", outcome.is_cyclic(), h.is_cyclic().is_some());
    if e >= 3 {
        report.push("full_u8", classifier::is_full_u8(field), galois_subgroup(field, 3)?.order() == 4);
    }
    let Outcome::Classified(c) = outcome else {
        return Ok(report);
    };
    report.in_scope = true;
    let lattice = SubfieldLattice::build(field, e)?;

    report.push("galois_elements", set_text(&c.galois.elements), set_text(h.elements()));
    let gens: Vec<u64> = c.galois.generators.iter().map(|g| g.residue()).collect();
    report.push("galois_generators_span", set_text(span(e, &gens)?.elements()), set_text(h.elements()));

    let claimed: BTreeSet<u64> = c.codegree2.iter().map(|x| x.stabilizer.residue()).collect();
    let actual: BTreeSet<u64> = involutions(&h).into_iter().collect();
    report.push("codegree2_stabilizers", format!("{claimed:?}"), format!("{actual:?}"));
    for entry in &c.codegree2 {
        let stab = label_stabilizer(&h, entry.label)?;
        report.push(
            &format!("codegree2_{}", entry.label),
            set_text(&[1, entry.stabilizer.residue()]),
            set_text(stab.elements()),
        );
    }
    let named = lattice.labels.iter().all(|names| !names.is_empty());
    report.push("subfields_all_named", true, named);

    let towers = enumerate_towers(field, e)?;
    report.push("tower_count", c.tower_count, lattice.lattice.maximal_chains().len());
    let oracle_chains: BTreeSet<Vec<usize>> = lattice.lattice.maximal_chains().into_iter().collect();
    match chain_set(&lattice, &towers)? {
        Some(set) => report.push(
            "towers_match_maximal_chains",
            format!("{} distinct maximal chains", set.len()),
            if set == oracle_chains {
                format!("{} distinct maximal chains", set.len())
            } else {
                format!("{} chains, different set", oracle_chains.len())
            },
        ),
        None => report.push("towers_match_maximal_chains", "every tower is a maximal chain", "a tower is not"),
    }

    report.push("min_poly_degree", c.min_poly.degree(), h.order());
    for sign in [TauSign::Plus, TauSign::Minus] {
        check_tau(&mut report, field, e, sign, &h, &lattice)?;
    }

    let zeta_stab = label_stabilizer(&h, FieldLabel::Zeta(e))?;
    for sign in [TauSign::Plus, TauSign::Minus] {
        if c.invariants.zeta4_in_field {
            let tau_stab = label_stabilizer(&h, FieldLabel::tau(sign, e))?;
            report.push(&format!("zeta4_{}_generates_top", tau_tag(sign)), true, tau_stab == zeta_stab);
        }
    }
    if c.cyclic {
        let nu = c.invariants.nu;
        let a = label_stabilizer(&h, FieldLabel::Zeta(nu))?;
        let b = label_stabilizer(&h, FieldLabel::TauPlus(nu))?;
        report.push("cyclic_zeta_nu_equals_tau_plus_nu", true, a == b);
    }

    check_concrete(&mut report, field, e)?;
    Ok(report)
}

fn tau_tag(sign: TauSign) -> &'static str {
    match sign {
        TauSign::Plus => "tau_plus",
        TauSign::Minus => "tau_minus",
    }
}

fn check_tau(
    report: &mut VerificationReport,
    field: &BaseField,
    e: u32,
    sign: TauSign,
    h: &UnitSubgroup,
    lattice: &SubfieldLattice,
) -> Result<()> {
    let tag = tau_tag(sign);
    let r = tau_report(field, e, sign)?;
    let stab = label_stabilizer(h, FieldLabel::tau(sign, e))?;
    report.push(&format!("{tag}_degree"), r.degree, h.order() / stab.order());
    let ups = index2_supergroups(h, &stab);
    let expected = label_stabilizer(h, r.unique_codegree2)?;
    report.push(
        &format!("{tag}_unique_codegree2"),
        format!("1 subfield(s), {}", r.unique_codegree2),
        format!(
            "{} subfield(s), {}",
            ups.len(),
            if ups.first() == Some(&expected) { r.unique_codegree2.to_string() } else { "other".into() }
        ),
    );
    report.push(&format!("{tag}_tower_steps_quadratic"), true, lattice.path_of(&r.tower)?.is_some());
    let modulo = r.quotient_modulo.residue() as i64;
    let quotient = product_subgroup(e, &[r.quotient_generator.residue() as i64, modulo], &UnitSubgroup::trivial(e)?)?;
    let image = product_subgroup(e, &[modulo], h)?;
    report.push(&format!("{tag}_quotient_generator"), set_text(quotient.elements()), set_text(image.elements()));
    Ok(())
}

/// Annihilation and degree checks inside an explicit finite field.
fn check_concrete(report: &mut VerificationReport, field: &BaseField, e: u32) -> Result<()> {
    let FieldFamily::FiniteField { p, k } = field.family() else {
        return Ok(());
    };
    let degree = classify(field, e)?.degree();
    if u64::from(k).saturating_mul(degree) > VERIFY_CONCRETE_DEGREE {
        report.skip("concrete_min_poly", format!("degree {k}·{degree} over F_{p} exceeds {VERIFY_CONCRETE_DEGREE}"));
        return Ok(());
    }
    let concrete = match ConcreteCyclotomic::new(p, k, e) {
        Ok(c) => c,
        Err(Error::SizeGuard(why)) | Err(Error::InvalidArgument(why)) => {
            report.skip("concrete_min_poly", why);
            return Ok(());
        }
        Err(other) => return Err(other),
    };
    let nu = classifier::in_scope(field, e)?.nu;
    for i in 0..=(e - nu) {
        let poly = min_poly_zeta(field, e, i)?;
        let root = concrete.zeta_level(e - i);
        let value = concrete.evaluate(&poly, &root);
        let coefficients_in_base = poly.atoms().into_iter().all(|a| concrete.in_base(&concrete.atom(a)));
        let orbit = concrete.field.orbit_size(&root, concrete.q);
        report.push(&format!("concrete_annihilates_zeta{}", 1u64 << (e - i)), true, concrete.field.is_zero(&value));
        report.push(&format!("concrete_coefficients_in_base_{}", 1u64 << (e - i)), true, coefficients_in_base);
        report.push(&format!("concrete_degree_zeta{}", 1u64 << (e - i)), poly.degree(), orbit);
    }
    Ok(())
}

/// Each numbered condition of the cyclic and non-cyclic characterisations, evaluated on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionBattery {
    pub field: BaseField,
    pub e: u32,
    /// Cyclic conditions: group cyclic; group equals `<ε·5^(2^(ν-3))>`; unique codegree-2
    /// subfield `F(ζ_{2^(e-1)})`; `ζ`, `τ⁺`, `τ⁻` generate the same field; one maximal tower;
    /// `ζ_4 ∈ F` or `τ⁻_{2^ν} ∈ F`.
    pub cyclic: Vec<bool>,
    /// Non-cyclic conditions: group not cyclic; `-1` and `1+2^(e-1)` both in the group; three
    /// codegree-2 subfields named `ζ_{2^(e-1)}`, `τ⁺_{2^e}`, `τ⁻_{2^e}`; the `2(e-ν)+1` listed
    /// towers are exactly the maximal chains; neither `ζ_4` nor `τ⁻_{2^ν}` in `F`.
    pub non_cyclic: Vec<bool>,
    /// The group sits inside `<5>` or `<-5>`.
    pub literal_sign_containment: bool,
}

impl ConditionBattery {
    pub fn consistent(&self) -> bool {
        let first = self.cyclic[0];
        self.cyclic.iter().all(|&b| b == first) && self.non_cyclic.iter().all(|&b| b != first)
    }
}

pub fn condition_battery(field: &BaseField, e: u32) -> Result<ConditionBattery> {
    let inv = classifier::in_scope(field, e)?;
    let nu = inv.nu;
    let h = galois_subgroup(field, e)?;
    let lattice = SubfieldLattice::build(field, e)?;
    let chains: BTreeSet<Vec<usize>> = lattice.lattice.maximal_chains().into_iter().collect();
    let stab = |l: FieldLabel| label_stabilizer(&h, l);
    let half_twist = 1 + (1i64 << (e - 1));
    let order2: Vec<UnitSubgroup> = h.involution_subgroups();

    let predicted = if nu >= 3 {
        let sign = if inv.zeta4_in_field { 1i64 } else { -1 };
        Some(span_signed(e, sign * crate::unit_group::pow_mod(e, 5, 1u64 << (nu - 3)) as i64)?)
    } else {
        None
    };

    let zeta_chain: Vec<FieldLabel> = (nu..=e).rev().map(FieldLabel::Zeta).chain([FieldLabel::Base]).collect();
    let zeta_path = lattice.chain_of(&TowerDecomposition::new(zeta_chain))?;

    let cyclic = vec![
        h.is_cyclic().is_some(),
        predicted.as_ref() == Some(&h),
        order2.len() == 1 && order2[0] == stab(FieldLabel::Zeta(e - 1))?,
        stab(FieldLabel::Zeta(e))? == stab(FieldLabel::TauPlus(e))?
            && stab(FieldLabel::Zeta(e))? == stab(FieldLabel::TauMinus(e))?,
        chains.len() == 1 && zeta_path.is_some_and(|p| chains.contains(&p)),
        field.contains_zeta(2) || field.contains_tau(nu, TauSign::Minus),
    ];

    let expected_three: BTreeSet<Vec<u64>> = [FieldLabel::Zeta(e - 1), FieldLabel::TauPlus(e), FieldLabel::TauMinus(e)]
        .into_iter()
        .map(|l| stab(l).map(|s| s.elements().to_vec()))
        .collect::<Result<_>>()?;
    let actual_order2: BTreeSet<Vec<u64>> = order2.iter().map(|s| s.elements().to_vec()).collect();
    let forms = non_cyclic_forms(e, nu, inv.nu_plus);
    let form_chains = chain_set(&lattice, &forms)?;
    let non_cyclic = vec![
        h.is_cyclic().is_none(),
        h.contains(-1) && h.contains(half_twist),
        order2.len() == 3 && actual_order2 == expected_three,
        form_chains.is_some_and(|set| set.len() == forms.len() && set == chains),
        !field.contains_zeta(2) && !field.contains_tau(nu, TauSign::Minus),
    ];
    let plus5 = span(e, &[5])?;
    let minus5 = span_signed(e, -5)?;
    Ok(ConditionBattery {
        field: *field,
        e,
        cyclic,
        non_cyclic,
        literal_sign_containment: h.is_subgroup_of(&plus5) || h.is_subgroup_of(&minus5),
    })
}

fn span_signed(e: u32, g: i64) -> Result<UnitSubgroup> {
    crate::unit_group::span_signed(e, &[g])
}

/// The `2(e-ν)+1` towers a non-cyclic extension has, written out regardless of whether the
/// extension is in fact non-cyclic.
pub fn non_cyclic_forms(e: u32, nu: u32, nu_plus: u32) -> Vec<TowerDecomposition> {
    let zeta = |lowest: u32| (lowest..=e).rev().map(FieldLabel::Zeta);
    let tp = |from: u32| (nu_plus + 1..=from).rev().map(FieldLabel::TauPlus);
    let mut out = vec![TowerDecomposition::new(zeta(nu).chain([FieldLabel::Base]).collect())];
    for r in 0..(e - nu) {
        out.push(TowerDecomposition::new(zeta(e - r).chain(tp(e - r)).chain([FieldLabel::Base]).collect()));
    }
    for r in 0..(e - nu) {
        out.push(TowerDecomposition::new(
            zeta(e - r).chain([FieldLabel::TauMinus(e - r)]).chain(tp(e - r - 1)).chain([FieldLabel::Base]).collect(),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_fields_verify() {
        for (s, e) in [("qzeta:1", 4), ("fq:3", 4), ("qzeta:4", 4), ("qsqrt:-2", 5), ("fq:7", 6), ("qsqrt:2", 5)] {
            let r = verify(&s.parse().unwrap(), e).unwrap();
            let bad: Vec<_> = r.failures().collect();
            assert!(bad.is_empty(), "{s} e={e}: {bad:?}");
        }
    }

    #[test]
    fn battery_agrees_on_examples() {
        for (s, e, cyclic) in [("qzeta:1", 4, false), ("fq:3", 4, true), ("qzeta:4", 5, true), ("qsqrt:2", 6, false)] {
            let b = condition_battery(&s.parse().unwrap(), e).unwrap();
            assert!(b.consistent(), "{s} e={e}: {b:?}");
            assert_eq!(b.cyclic[0], cyclic);
        }
    }

    #[test]
    fn literal_containment_fails_for_f7() {
        let b = condition_battery(&"fq:7".parse().unwrap(), 5).unwrap();
        assert!(b.cyclic[0]);
        assert!(!b.literal_sign_containment);
    }
}
