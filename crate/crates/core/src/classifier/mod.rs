//! Classification of `F(ζ_{2^e})/F` from the invariants of `F`.
//!
//! For `e > ν(F)` the extension has degree `2^(e-ν+1)` and is cyclic exactly when `ζ_4 ∈ F` or
//! `τ⁻_{2^ν} ∈ F`. Otherwise its Galois group is `Z/2 × Z/2^(e-ν)`, with three codegree-2
//! subfields and `2(e-ν)+1` maximal towers of quadratic steps.

mod label;
pub mod minpoly;

use serde::{Deserialize, Serialize};

use crate::base_field::{BaseField, TauSign};
use crate::error::{Error, Result};
use crate::invariants::{nu, Invariants};
use crate::towers::TowerDecomposition;
use crate::unit_group::{self, Sign, UnitClass};

pub use label::FieldLabel;
pub use minpoly::{Atom, Coefficient, SymbolicMinPoly};

/// Largest `e` handled by [`classify`] and the tower machinery.
pub const MAX_E: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CyclicityReason {
    Zeta4InField,
    TauMinusNuInField,
    Neither,
}

/// `Gal(F(ζ_{2^e})/F)` as a subgroup of `U_{2^e}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisDescriptor {
    pub modulus_exponent: u32,
    pub order: u64,
    pub elements: Vec<u64>,
    pub generators: Vec<UnitClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codegree2Entry {
    pub label: FieldLabel,
    /// The order-2 automorphism fixing the subfield.
    pub stabilizer: UnitClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub field: BaseField,
    pub e: u32,
    pub invariants: Invariants,
    pub cyclic: bool,
    pub reason: CyclicityReason,
    pub degree: u64,
    pub galois: GaloisDescriptor,
    pub codegree2: Vec<Codegree2Entry>,
    pub min_poly: SymbolicMinPoly,
    pub tower_count: u64,
}

/// Result for `e <= ν`, where the extension has degree 1 or 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallDegree {
    pub field: BaseField,
    pub e: u32,
    pub invariants: Invariants,
    pub degree: u64,
    pub out_of_theorem_scope: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Classified(Classification),
    SmallDegree(SmallDegree),
}

impl Outcome {
    pub fn degree(&self) -> u64 {
        match self {
            Outcome::Classified(c) => c.degree,
            Outcome::SmallDegree(s) => s.degree,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        match self {
            Outcome::Classified(c) => c.cyclic,
            Outcome::SmallDegree(_) => true,
        }
    }

    pub fn invariants(&self) -> &Invariants {
        match self {
            Outcome::Classified(c) => &c.invariants,
            Outcome::SmallDegree(s) => &s.invariants,
        }
    }

    pub fn classified(&self) -> Option<&Classification> {
        match self {
            Outcome::Classified(c) => Some(c),
            Outcome::SmallDegree(_) => None,
        }
    }
}

pub(crate) fn check_e(e: u32) -> Result<()> {
    if !(1..=MAX_E).contains(&e) {
        return Err(Error::InvalidArgument(format!("e must lie in 1..={MAX_E}, got {e}")));
    }
    Ok(())
}

/// Invariants of `F`, failing with [`Error::OutOfScope`] unless `e > ν`.
pub(crate) fn in_scope(field: &BaseField, e: u32) -> Result<Invariants> {
    check_e(e)?;
    let inv = nu(field);
    if e <= inv.nu {
        return Err(Error::OutOfScope { e, nu: inv.nu });
    }
    Ok(inv)
}

fn is_cyclic_case(field: &BaseField, inv: &Invariants) -> (bool, CyclicityReason) {
    if inv.zeta4_in_field {
        (true, CyclicityReason::Zeta4InField)
    } else if field.contains_tau(inv.nu, TauSign::Minus) {
        (true, CyclicityReason::TauMinusNuInField)
    } else {
        (false, CyclicityReason::Neither)
    }
}

/// `1 + 2^(e-1)`, the involution inside `<5>`.
fn half_twist(e: u32) -> UnitClass {
    UnitClass::new(e, 1 + (1i64 << (e - 1))).expect("odd residue")
}

/// Generators of the Galois group: `ε·5^(2^(ν-3))` when cyclic, else `-1` and `5^(2^(ν-2))`.
fn galois_generators(inv: &Invariants, cyclic: bool, e: u32) -> Vec<UnitClass> {
    if cyclic {
        let sign = if inv.zeta4_in_field { Sign::Plus } else { Sign::Minus };
        vec![UnitClass::from_coordinates(e, sign, 1u64 << (inv.nu - 3)).expect("e >= 3")]
    } else {
        vec![
            UnitClass::from_coordinates(e, Sign::Minus, 0).expect("e >= 3"),
            UnitClass::from_coordinates(e, Sign::Plus, 1u64 << (inv.nu - 2)).expect("e >= 3"),
        ]
    }
}

pub fn classify(field: &BaseField, e: u32) -> Result<Outcome> {
    check_e(e)?;
    let invariants = nu(field);
    if e <= invariants.nu {
        let degree = if field.contains_zeta(e) { 1 } else { 2 };
        return Ok(Outcome::SmallDegree(SmallDegree {
            field: *field,
            e,
            invariants,
            degree,
            out_of_theorem_scope: true,
        }));
    }
    let (cyclic, reason) = is_cyclic_case(field, &invariants);
    if !cyclic {
        assert_eq!(field.characteristic(), 0, "finite fields always give a cyclic extension");
    }
    let generators = galois_generators(&invariants, cyclic, e);
    let residues: Vec<u64> = generators.iter().map(UnitClass::residue).collect();
    let group = unit_group::span(e, &residues)?;
    let degree = 1u64 << (e - invariants.nu + 1);
    debug_assert_eq!(group.order() as u64, degree);
    Ok(Outcome::Classified(Classification {
        field: *field,
        e,
        invariants,
        cyclic,
        reason,
        degree,
        galois: GaloisDescriptor {
            modulus_exponent: e,
            order: degree,
            elements: group.elements().to_vec(),
            generators,
        },
        codegree2: codegree2_subextensions(field, e)?,
        min_poly: min_poly_zeta(field, e, 0)?,
        tower_count: if cyclic { 1 } else { 2 * u64::from(e - invariants.nu) + 1 },
    }))
}

/// Minimal polynomial of `ζ_{2^(e-i)}` over `F`, for `0 <= i <= e - ν`.
pub fn min_poly_zeta(field: &BaseField, e: u32, i: u32) -> Result<SymbolicMinPoly> {
    let inv = in_scope(field, e)?;
    let nu = inv.nu;
    if i > e - nu {
        return Err(Error::InvalidArgument(format!("i = {i} must lie in 0..={}", e - nu)));
    }
    let top = 1u64 << (e - nu + 1 - i);
    let mid = top / 2;
    let (cyclic, _) = is_cyclic_case(field, &inv);
    let one = Coefficient::int(1);
    Ok(if inv.zeta4_in_field {
        SymbolicMinPoly::new([(top, one), (0, Coefficient::atom(Atom::Zeta(nu - 1), -1))])
    } else if cyclic {
        SymbolicMinPoly::new([(top, one), (mid, Coefficient::atom(Atom::TauMinus(nu), -1)), (0, Coefficient::int(-1))])
    } else {
        SymbolicMinPoly::new([(top, one), (mid, Coefficient::atom(Atom::TauPlus(nu), -1)), (0, Coefficient::int(1))])
    })
}

/// Subfields of codegree 2 in `F(ζ_{2^e})`, each with the involution fixing it.
pub fn codegree2_subextensions(field: &BaseField, e: u32) -> Result<Vec<Codegree2Entry>> {
    let inv = in_scope(field, e)?;
    let (cyclic, _) = is_cyclic_case(field, &inv);
    let twist = half_twist(e);
    let mut out = vec![Codegree2Entry { label: FieldLabel::Zeta(e - 1), stabilizer: twist }];
    if !cyclic {
        out.push(Codegree2Entry { label: FieldLabel::TauPlus(e), stabilizer: UnitClass::new(e, -1).expect("odd") });
        out.push(Codegree2Entry {
            label: FieldLabel::TauMinus(e),
            stabilizer: UnitClass::new(e, -(twist.residue() as i64)).expect("odd"),
        });
    }
    Ok(out)
}

/// `ζ_4 ∉ F` and `ν(F) = 2`, i.e. `Gal(F(ζ_8)/F)` is all of `U_8`.
pub fn is_full_u8(field: &BaseField) -> bool {
    let inv = nu(field);
    !inv.zeta4_in_field && inv.nu == 2
}

/// Structure of `F(τ^±_{2^e})/F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauReport {
    pub field: BaseField,
    pub e: u32,
    pub sign: TauSign,
    /// Largest `ℓ` with `τ⁺_{2^ℓ} ∈ F`; the degree is `2^(e-ℓ)`.
    pub level: u32,
    pub degree: u64,
    pub unique_codegree2: FieldLabel,
    pub step_min_poly: SymbolicMinPoly,
    pub tower: TowerDecomposition,
    /// Generates the Galois group modulo `quotient_modulo`.
    pub quotient_generator: UnitClass,
    pub quotient_modulo: UnitClass,
}

pub fn tau_report(field: &BaseField, e: u32, sign: TauSign) -> Result<TauReport> {
    let inv = in_scope(field, e)?;
    let level = inv.tau_plus_level;
    let mut steps = vec![FieldLabel::tau(sign, e)];
    steps.extend((level + 1..e).rev().map(FieldLabel::TauPlus));
    steps.push(FieldLabel::Base);
    let shift = match sign {
        TauSign::Plus => -2,
        TauSign::Minus => 2,
    };
    let step_min_poly = SymbolicMinPoly::new([
        (2, Coefficient::int(1)),
        (0, Coefficient::atom(Atom::TauPlus(e - 1), -1).plus(Atom::One, shift)),
    ]);
    let quotient_modulo = match sign {
        TauSign::Plus => UnitClass::new(e, -1)?,
        TauSign::Minus => UnitClass::new(e, -(half_twist(e).residue() as i64))?,
    };
    Ok(TauReport {
        field: *field,
        e,
        sign,
        level,
        degree: 1u64 << (e - level),
        unique_codegree2: FieldLabel::TauPlus(e - 1),
        step_min_poly,
        tower: TowerDecomposition::new(steps),
        quotient_generator: UnitClass::from_coordinates(e, Sign::Plus, 1u64 << (level - 2))?,
        quotient_modulo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(s: &str) -> BaseField {
        s.parse().unwrap()
    }

    fn classified(s: &str, e: u32) -> Classification {
        match classify(&field(s), e).unwrap() {
            Outcome::Classified(c) => c,
            other => panic!("expected a classification, got {other:?}"),
        }
    }

    #[test]
    fn rationals_e4() {
        let c = classified("qzeta:1", 4);
        assert!(!c.cyclic);
        assert_eq!(c.reason, CyclicityReason::Neither);
        assert_eq!(c.degree, 8);
        assert_eq!(c.tower_count, 5);
        assert_eq!(c.min_poly.to_string(), "x^8 - tp4*x^4 + 1");
        assert_eq!(c.min_poly.simplified().to_string(), "x^8 + 1");
        let labels: Vec<_> = c.codegree2.iter().map(|x| (x.label.to_string(), x.stabilizer.residue())).collect();
        assert_eq!(labels, [("z8".to_string(), 9), ("tp16".to_string(), 15), ("tm16".to_string(), 7)]);
    }

    #[test]
    fn f3_e4() {
        let c = classified("fq:3", 4);
        assert!(c.cyclic);
        assert_eq!(c.reason, CyclicityReason::TauMinusNuInField);
        assert_eq!(c.degree, 4);
        assert_eq!(c.galois.elements, [1, 3, 9, 11]);
        assert_eq!(c.galois.generators[0].name(), "-5");
        assert_eq!(c.min_poly.to_string(), "x^4 - tm8*x^2 - 1");
        assert_eq!(c.tower_count, 1);
    }

    #[test]
    fn gaussian_e4() {
        let c = classified("qzeta:4", 4);
        assert!(c.cyclic);
        assert_eq!(c.reason, CyclicityReason::Zeta4InField);
        assert_eq!(c.degree, 4);
        assert_eq!(c.min_poly.to_string(), "x^4 - z4");
    }

    #[test]
    fn small_degree() {
        let out = classify(&field("qzeta:1"), 2).unwrap();
        assert_eq!(
            out,
            Outcome::SmallDegree(SmallDegree {
                field: field("qzeta:1"),
                e: 2,
                invariants: nu(&field("qzeta:1")),
                degree: 2,
                out_of_theorem_scope: true,
            })
        );
        assert_eq!(classify(&field("fq:5"), 2).unwrap().degree(), 1);
        assert!(matches!(min_poly_zeta(&field("fq:3"), 3, 0), Err(Error::OutOfScope { .. })));
        assert!(classify(&field("fq:3"), 0).is_err());
        assert!(classify(&field("fq:3"), 21).is_err());
    }

    #[test]
    fn min_poly_levels() {
        let f = field("fq:3");
        assert_eq!(min_poly_zeta(&f, 5, 1).unwrap().to_string(), "x^4 - tm8*x^2 - 1");
        assert_eq!(min_poly_zeta(&f, 5, 2).unwrap().to_string(), "x^2 - tm8*x - 1");
        assert!(min_poly_zeta(&f, 5, 3).is_err());
    }

    #[test]
    fn tau_reports() {
        let q = field("qzeta:1");
        let r = tau_report(&q, 4, TauSign::Plus).unwrap();
        assert_eq!(r.degree, 4);
        assert_eq!(r.tower.to_string(), "tp16/tp8/base");
        assert_eq!(r.unique_codegree2, FieldLabel::TauPlus(3));
        assert_eq!(r.step_min_poly.to_string(), "x^2 - (2 + tp8)");
        let m = tau_report(&q, 4, TauSign::Minus).unwrap();
        assert_eq!(m.tower.to_string(), "tm16/tp8/base");
        assert_eq!(m.step_min_poly.to_string(), "x^2 + (2 - tp8)");
        let gaussian = tau_report(&field("qzeta:4"), 4, TauSign::Plus).unwrap();
        assert_eq!(gaussian.degree, 4);
        assert_eq!(gaussian.tower.to_string(), "tp16/tp8/base");
    }

    #[test]
    fn full_u8() {
        assert!(is_full_u8(&field("qzeta:1")));
        assert!(is_full_u8(&field("qsqrt:5")));
        assert!(!is_full_u8(&field("fq:3")));
        assert!(!is_full_u8(&field("qsqrt:2")));
        assert!(!is_full_u8(&field("qzeta:4")));
    }

    #[test]
    fn json_round_trip() {
        for (s, e) in [("qzeta:1", 4), ("fq:3", 4), ("qzeta:4", 6), ("qsqrt:-2", 7)] {
            let out = classify(&field(s), e).unwrap();
            let text = serde_json::to_string(&out).unwrap();
            let back: Outcome = serde_json::from_str(&text).unwrap();
            assert_eq!(back, out);
        }
        let small = classify(&field("qzeta:1"), 1).unwrap();
        let text = serde_json::to_string(&small).unwrap();
        assert!(text.contains("\"status\":\"small_degree\""));
        assert_eq!(serde_json::from_str::<Outcome>(&text).unwrap(), small);
    }
}
