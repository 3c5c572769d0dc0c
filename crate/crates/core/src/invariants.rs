//! The invariants `ν⁺(F)`, `ν(F)` and property C₂ of a base field.

use serde::{Deserialize, Serialize};

use crate::base_field::{v2, BaseField, FieldFamily, TauSign};

/// Upper limit on the level searched by [`nu_plus`] and [`property_c2`].
pub const LEVEL_CAP: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Invariants {
    pub nu_plus: u32,
    pub nu: u32,
    pub has_c2: bool,
    /// Smallest `e'` witnessing C₂.
    pub c2_witness: Option<u32>,
    pub zeta4_in_field: bool,
    /// Largest `k` with `τ⁺_{2^k} ∈ F`. Equals `ν⁺` unless `ζ_4 ∈ F`, where it is `ν⁺ - 1`.
    pub tau_plus_level: u32,
}

/// `t_F(2^e)`: the order of `ζ_{2^e}` modulo `F^×` if it exceeds 2, else 2 or 1.
pub fn t_f(field: &BaseField, e: u32) -> u64 {
    field.order_over(e)
}

/// A level beyond which no predicate can change; past it the loops below stop.
fn search_bound(field: &BaseField) -> u32 {
    let bound = match field.family() {
        FieldFamily::FiniteField { .. } => {
            let q = field.q_mod_2_128().expect("finite field");
            v2(q.wrapping_mul(q).wrapping_sub(1)) + 2
        }
        FieldFamily::CyclotomicQ { m } => v2(m as u128) + 2,
        FieldFamily::QuadraticQ { .. } => 4,
    };
    bound.min(LEVEL_CAP)
}

/// Largest `k` such that every level `1..=k` has `t_F(2^k) <= 2` or `τ⁺_{2^k} ∈ F`.
pub fn nu_plus(field: &BaseField) -> u32 {
    let bound = search_bound(field);
    let mut k = 1;
    while k < bound {
        let next = k + 1;
        if t_f(field, next) <= 2 || field.contains_tau(next, TauSign::Plus) {
            k = next;
        } else {
            break;
        }
    }
    k
}

/// Smallest `e' >= 3` with `ζ_{2^e'} ∉ F`, `ζ_{2^e'}` of order `2^(e'-1)` modulo `F^×`, and
/// `τ⁻_{2^e'} ∈ F`.
pub fn property_c2(field: &BaseField) -> Option<u32> {
    (3..=search_bound(field)).find(|&e| {
        !field.contains_zeta(e) && field.order_over_log2(e) == e - 1 && field.contains_tau(e, TauSign::Minus)
    })
}

/// Largest `k` with `τ⁺_{2^k} ∈ F`.
pub fn tau_plus_level(field: &BaseField) -> u32 {
    let bound = search_bound(field);
    let mut k = 2;
    while k < bound && field.contains_tau(k + 1, TauSign::Plus) {
        k += 1;
    }
    k
}

pub fn nu(field: &BaseField) -> Invariants {
    let nu_plus = nu_plus(field);
    let c2_witness = property_c2(field);
    Invariants {
        nu_plus,
        nu: nu_plus + u32::from(c2_witness.is_some()),
        has_c2: c2_witness.is_some(),
        c2_witness,
        zeta4_in_field: field.contains_zeta(2),
        tau_plus_level: tau_plus_level(field),
    }
}

impl Invariants {
    pub fn of(field: &BaseField) -> Self {
        nu(field)
    }
}
