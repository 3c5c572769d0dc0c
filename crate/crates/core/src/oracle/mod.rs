//! Independent recomputation of the Galois structure.
//!
//! The Galois group of `F(ζ_{2^e})/F` is built directly as a subgroup of `U_{2^e}`: generated
//! by Frobenius for `F_q`, cut out by a congruence for `Q(ζ_m)`, and read off the quadratic
//! character for `Q(√d)`. Subfields correspond to stabilizers, so degrees, codegree-2 subfields
//! and towers all reduce to subgroup computations. None of this consults `ν`.

pub mod ff;
pub mod kronecker;
pub mod verify;

use std::collections::BTreeMap;

use crate::base_field::{v2, BaseField, FieldFamily};
use crate::classifier::FieldLabel;
use crate::error::{Error, Result};
use crate::towers::TowerDecomposition;
use crate::unit_group::{mask, mul_mod, reduce, span, SubgroupLattice, UnitSubgroup};

pub use kronecker::kronecker;

/// `Gal(F(ζ_{2^e})/F) ⊆ U_{2^e}`.
pub fn galois_subgroup(field: &BaseField, e: u32) -> Result<UnitSubgroup> {
    match field.family() {
        FieldFamily::FiniteField { .. } => {
            let q = field.q_mod_2_128().expect("finite field") as u64 & mask(e);
            span(e, &[q])
        }
        FieldFamily::CyclotomicQ { m } => {
            let full = UnitSubgroup::full(e)?;
            let s = v2(m as u128);
            if s >= 2 {
                let modulus = mask(s.min(e));
                Ok(full.subgroup_where(|a| a & modulus == 1 & modulus))
            } else {
                Ok(full)
            }
        }
        FieldFamily::QuadraticQ { .. } => quadratic_subgroup(field, e),
    }
}

/// Residues `a mod 2^e` having a lift `b ≡ a (mod 2^e)`, coprime to the discriminant `D`, with
/// `(D/b) = 1`; lifts range over `U_L` with `L = lcm(|D|, 2^e)`.
fn quadratic_subgroup(field: &BaseField, e: u32) -> Result<UnitSubgroup> {
    let disc = field.discriminant().expect("quadratic field");
    let full = UnitSubgroup::full(e)?;
    let odd_part = disc.unsigned_abs() >> disc.unsigned_abs().trailing_zeros();
    let two_part = disc.unsigned_abs().trailing_zeros().max(e);
    let lcm = (odd_part as u128) << two_part;
    let step = 1u128 << e;
    let members: Vec<u64> = full
        .elements()
        .iter()
        .copied()
        .filter(|&a| {
            let mut b = a as u128;
            while b < lcm {
                if gcd(b, disc.unsigned_abs() as u128) == 1 && kronecker(disc, b as i64) == 1 {
                    return true;
                }
                b += step;
            }
            false
        })
        .collect();
    Ok(UnitSubgroup::from_closed_elements(e, members))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Whether the automorphism `σ_a : ζ_{2^e} ↦ ζ_{2^e}^a` fixes the generator named by `label`.
pub fn fixes(label: FieldLabel, e: u32, a: u64) -> bool {
    match label {
        FieldLabel::Base => true,
        FieldLabel::Zeta(k) => a & mask(k.min(e)) == 1 & mask(k.min(e)),
        FieldLabel::TauPlus(k) => {
            let r = a & mask(k);
            r == 1 & mask(k) || r == mask(k)
        }
        FieldLabel::TauMinus(k) => {
            let r = a & mask(k);
            r == 1 & mask(k) || (k >= 1 && r == (1u64 << (k - 1)).wrapping_sub(1) & mask(k))
        }
    }
}

/// Stabilizer of `label` inside `h`.
pub fn label_stabilizer(h: &UnitSubgroup, label: FieldLabel) -> Result<UnitSubgroup> {
    let e = h.modulus_exponent();
    if let Some(k) = label.level() {
        if k > e || k < 2 {
            return Err(Error::InvalidArgument(format!("label {label} needs 2 <= k <= e = {e}")));
        }
    }
    Ok(h.subgroup_where(|a| fixes(label, e, a)))
}

/// `[F(label) : F]`.
pub fn degree_of(field: &BaseField, e: u32, label: FieldLabel) -> Result<u64> {
    let h = galois_subgroup(field, e)?;
    let stab = label_stabilizer(&h, label)?;
    Ok((h.order() / stab.order()) as u64)
}

/// Every label at levels `2..=e`, in the order used to pick canonical names.
pub fn all_labels(e: u32) -> Vec<FieldLabel> {
    let mut out = vec![FieldLabel::Base];
    out.extend((2..=e).rev().map(FieldLabel::Zeta));
    out.extend((2..=e).rev().map(FieldLabel::TauPlus));
    out.extend((2..=e).rev().map(FieldLabel::TauMinus));
    out
}

/// The lattice of intermediate fields, as the subgroup lattice of the Galois group with each
/// node annotated by every label whose stabilizer it is.
#[derive(Clone, Debug)]
pub struct SubfieldLattice {
    pub group: UnitSubgroup,
    pub lattice: SubgroupLattice,
    /// `labels[i]` lists the names of node `i`, canonical name first.
    pub labels: Vec<Vec<FieldLabel>>,
}

impl SubfieldLattice {
    pub fn build(field: &BaseField, e: u32) -> Result<Self> {
        let group = galois_subgroup(field, e)?;
        let lattice = SubgroupLattice::build(&group)?;
        let mut labels = vec![Vec::new(); lattice.nodes().len()];
        for label in all_labels(e) {
            let stab = label_stabilizer(&group, label)?;
            let idx = lattice.position(&stab).expect("stabilizers are subgroups of H");
            labels[idx].push(label);
        }
        Ok(SubfieldLattice { group, lattice, labels })
    }

    pub fn canonical(&self, node: usize) -> Option<FieldLabel> {
        self.labels[node].first().copied()
    }

    pub fn node_of(&self, label: FieldLabel) -> Result<usize> {
        let stab = label_stabilizer(&self.group, label)?;
        Ok(self.lattice.position(&stab).expect("stabilizers are subgroups of H"))
    }

    /// Aliases keyed by canonical label.
    pub fn aliases(&self) -> BTreeMap<FieldLabel, Vec<FieldLabel>> {
        self.labels.iter().filter_map(|names| Some((*names.first()?, names.clone()))).collect()
    }

    /// Lattice nodes of a tower ending at the base field, if every step has degree 2.
    pub fn path_of(&self, tower: &TowerDecomposition) -> Result<Option<Vec<usize>>> {
        let mut path = Vec::new();
        for &label in tower.steps() {
            path.push(self.node_of(label)?);
        }
        let ok = path.last() == Some(&self.lattice.top())
            && path.windows(2).all(|w| self.lattice.covers(w[0]).contains(&w[1]));
        Ok(ok.then_some(path))
    }

    /// Like [`Self::path_of`], additionally requiring the tower to start at `F(ζ_{2^e})`.
    pub fn chain_of(&self, tower: &TowerDecomposition) -> Result<Option<Vec<usize>>> {
        Ok(self.path_of(tower)?.filter(|p| p.first() == Some(&self.lattice.bottom())))
    }

    /// Maximal chains rewritten as towers of canonical labels.
    pub fn towers(&self) -> Vec<TowerDecomposition> {
        self.lattice
            .maximal_chains()
            .into_iter()
            .map(|chain| {
                TowerDecomposition::new(
                    chain.iter().map(|&i| self.canonical(i).expect("every subfield is named")).collect(),
                )
            })
            .collect()
    }
}

/// Order-2 elements of `h` other than 1.
pub fn involutions(h: &UnitSubgroup) -> Vec<u64> {
    let e = h.modulus_exponent();
    h.elements().iter().copied().filter(|&a| a != 1 && mul_mod(e, a, a) == 1).collect()
}

/// Subgroups `K ⊇ s` of `h` with `[K : s] = 2`.
pub fn index2_supergroups(h: &UnitSubgroup, s: &UnitSubgroup) -> Vec<UnitSubgroup> {
    let e = h.modulus_exponent();
    let mut out: Vec<UnitSubgroup> = Vec::new();
    for &g in h.elements() {
        if s.contains_residue(g) || !s.contains_residue(mul_mod(e, g, g)) {
            continue;
        }
        if out.iter().any(|k| k.contains_residue(g)) {
            continue;
        }
        let mut elems = s.elements().to_vec();
        elems.extend(s.elements().iter().map(|&a| mul_mod(e, a, g)));
        out.push(UnitSubgroup::from_closed_elements(e, elems));
    }
    out
}

/// `span(gens) · span(modulo)` as a set, for comparing images in a quotient.
pub fn product_subgroup(e: u32, gens: &[i64], extra: &UnitSubgroup) -> Result<UnitSubgroup> {
    let mut all: Vec<u64> = gens.iter().map(|&g| reduce(e, g)).collect();
    all.extend_from_slice(extra.elements());
    span(e, &all)
}
