//! The unit group `U_{2^e} = (Z/2^e Z)^×` and its subgroups.
//!
//! For `e >= 3` every unit is uniquely `ε·5^k` with `ε = ±1` and `0 <= k < 2^(e-2)`, so
//! `U_{2^e} ≅ Z/2 × Z/2^(e-2)`. Subgroups are materialised as sorted residue lists, which is
//! cheap for the exponents used here (at most `2^20` elements).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus exponent accepted by [`UnitClass`].
pub const MAX_CLASS_EXPONENT: u32 = 63;

/// Largest modulus exponent for which subgroups are listed element by element.
pub const MAX_SUBGROUP_EXPONENT: u32 = 21;

/// Largest subgroup order accepted by [`maximal_chains`].
pub const MAX_CHAIN_GROUP_ORDER: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.as_i8()
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be 1 or -1, got {other}")),
        }
    }
}

pub(crate) fn mask(e: u32) -> u64 {
    if e >= 64 {
        u64::MAX
    } else {
        (1u64 << e) - 1
    }
}

pub fn mul_mod(e: u32, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) as u64) & mask(e)
}

pub fn pow_mod(e: u32, mut base: u64, mut exp: u64) -> u64 {
    let m = mask(e);
    let mut acc = 1u64 & m;
    base &= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(e, acc, base);
        }
        base = mul_mod(e, base, base);
        exp >>= 1;
    }
    acc
}

/// Reduces a (possibly negative) integer modulo `2^e`.
pub fn reduce(e: u32, a: i64) -> u64 {
    let m = 1i128 << e;
    (a as i128).rem_euclid(m) as u64
}

fn check_class_exponent(e: u32) -> Result<()> {
    if !(3..=MAX_CLASS_EXPONENT).contains(&e) {
        return Err(Error::InvalidArgument(format!(
            "sign/log5 coordinates need 3 <= e <= {MAX_CLASS_EXPONENT}, got e = {e}"
        )));
    }
    Ok(())
}

/// Writes an odd residue as `ε·5^k` modulo `2^e`.
///
/// The exponent is recovered one bit at a time: after removing the bits already found, the
/// remaining power of 5 lies in the subgroup of order `2^(e-2-i)`, and its `2^(e-3-i)`-th power
/// is trivial exactly when bit `i` is clear.
pub fn decompose(e: u32, a: i64) -> Result<(Sign, u64)> {
    check_class_exponent(e)?;
    let r = reduce(e, a);
    if r.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("{a} is even, not a unit mod 2^{e}")));
    }
    let (sign, b) = if r % 4 == 1 { (Sign::Plus, r) } else { (Sign::Minus, reduce(e, -(r as i128 as i64))) };
    let half_order = 1u64 << (e - 2);
    let inv5 = pow_mod(e, 5, half_order - 1);
    let mut k = 0u64;
    let mut rest = b;
    let mut inv_step = inv5;
    for i in 0..(e - 2) {
        let probe = pow_mod(e, rest, 1u64 << (e - 3 - i));
        if probe != 1 {
            k |= 1u64 << i;
            rest = mul_mod(e, rest, inv_step);
        }
        inv_step = mul_mod(e, inv_step, inv_step);
    }
    Ok((sign, k))
}

/// Inverse of [`decompose`].
pub fn recompose(e: u32, sign: Sign, log5: u64) -> u64 {
    let v = pow_mod(e, 5, log5);
    match sign {
        Sign::Plus => v,
        Sign::Minus => reduce(e, -(v as i128 as i64)),
    }
}

/// Multiplicative order of an odd residue modulo `2^e`. Always a power of two.
pub fn order_mod(e: u32, a: u64) -> u64 {
    let m = mask(e);
    let mut x = a & m;
    let mut n = 1u64;
    while x != 1 & m {
        x = mul_mod(e, x, x);
        n <<= 1;
    }
    n
}

/// An element of `U_{2^e}` (`e >= 3`) with its sign/log5 coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitClass {
    modulus_exponent: u32,
    residue: u64,
    sign: Sign,
    log5: u64,
}

impl UnitClass {
    pub fn new(e: u32, a: i64) -> Result<Self> {
        let (sign, log5) = decompose(e, a)?;
        Ok(UnitClass { modulus_exponent: e, residue: reduce(e, a), sign, log5 })
    }

    pub fn from_coordinates(e: u32, sign: Sign, log5: u64) -> Result<Self> {
        check_class_exponent(e)?;
        let log5 = log5 & mask(e - 2);
        Ok(UnitClass { modulus_exponent: e, residue: recompose(e, sign, log5), sign, log5 })
    }

    pub fn modulus_exponent(&self) -> u32 {
        self.modulus_exponent
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn log5(&self) -> u64 {
        self.log5
    }

    pub fn order(&self) -> u64 {
        order_of(self)
    }

    /// `ε·5^k` written out, e.g. `-5^2`, `5`, `-1`.
    pub fn name(&self) -> String {
        let sign = if self.sign == Sign::Minus { "-" } else { "" };
        match self.log5 {
            0 => format!("{sign}1"),
            1 => format!("{sign}5"),
            k => format!("{sign}5^{k}"),
        }
    }
}

impl fmt::Display for UnitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.residue)
    }
}

pub fn order_of(a: &UnitClass) -> u64 {
    order_mod(a.modulus_exponent, a.residue)
}

/// A subgroup of `U_{2^e}` stored as its sorted element list.
///
/// Equality and hashing look only at the element set; `generators` records how the subgroup was
/// produced.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawSubgroup")]
pub struct UnitSubgroup {
    modulus_exponent: u32,
    elements: Vec<u64>,
    generators: Vec<u64>,
}

#[derive(Deserialize)]
struct RawSubgroup {
    modulus_exponent: u32,
    elements: Vec<u64>,
    generators: Vec<u64>,
}

impl TryFrom<RawSubgroup> for UnitSubgroup {
    type Error = Error;
    fn try_from(raw: RawSubgroup) -> Result<Self> {
        let spanned = span(raw.modulus_exponent, &raw.generators)?;
        let mut elements = raw.elements;
        elements.sort_unstable();
        if spanned.elements != elements {
            return Err(Error::InvalidArgument("element list is not the span of the generators".into()));
        }
        Ok(spanned)
    }
}

impl PartialEq for UnitSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.modulus_exponent == other.modulus_exponent && self.elements == other.elements
    }
}

impl Eq for UnitSubgroup {}

impl std::hash::Hash for UnitSubgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.modulus_exponent.hash(state);
        self.elements.hash(state);
    }
}

fn check_subgroup_exponent(e: u32) -> Result<()> {
    if !(1..=MAX_SUBGROUP_EXPONENT).contains(&e) {
        return Err(Error::SizeGuard(format!(
            "subgroups of U_2^e are listed only for 1 <= e <= {MAX_SUBGROUP_EXPONENT}, got e = {e}"
        )));
    }
    Ok(())
}

/// Bitmap over the odd residues modulo `2^e`.
struct OddSet {
    bits: Vec<bool>,
}

impl OddSet {
    fn new(e: u32) -> Self {
        OddSet { bits: vec![false; 1usize << (e - 1)] }
    }
    fn contains(&self, a: u64) -> bool {
        self.bits[(a >> 1) as usize]
    }
    fn insert(&mut self, a: u64) {
        self.bits[(a >> 1) as usize] = true;
    }
}

/// Subgroup generated by `gens` (which may be given as negative integers).
pub fn span(e: u32, gens: &[u64]) -> Result<UnitSubgroup> {
    let signed: Vec<i64> = gens.iter().map(|&g| g as i64).collect();
    span_signed(e, &signed)
}

pub fn span_signed(e: u32, gens: &[i64]) -> Result<UnitSubgroup> {
    check_subgroup_exponent(e)?;
    let mut reduced = Vec::with_capacity(gens.len());
    for &g in gens {
        let r = reduce(e, g);
        if r.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("{g} is even, not a unit mod 2^{e}")));
        }
        reduced.push(r);
    }
    let mut seen = OddSet::new(e);
    let mut elements = vec![1u64];
    seen.insert(1);
    for &g in &reduced {
        if seen.contains(g) {
            continue;
        }
        let base = elements.clone();
        let mut power = g;
        while !seen.contains(power) {
            for &h in &base {
                let x = mul_mod(e, h, power);
                seen.insert(x);
                elements.push(x);
            }
            power = mul_mod(e, power, g);
        }
    }
    elements.sort_unstable();
    Ok(UnitSubgroup { modulus_exponent: e, elements, generators: reduced })
}

impl UnitSubgroup {
    pub fn trivial(e: u32) -> Result<Self> {
        span(e, &[])
    }

    pub fn full(e: u32) -> Result<Self> {
        check_subgroup_exponent(e)?;
        let elements: Vec<u64> = (0..(1u64 << (e - 1))).map(|i| 2 * i + 1).collect();
        let generators = match e {
            1 => vec![],
            2 => vec![3],
            _ => vec![mask(e), 5],
        };
        Ok(UnitSubgroup { modulus_exponent: e, elements, generators })
    }

    /// Builds a subgroup from an element list already known to be closed under multiplication.
    pub(crate) fn from_closed_elements(e: u32, mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let generators = minimal_generators(e, &elements);
        let sg = UnitSubgroup { modulus_exponent: e, elements, generators };
        debug_assert!(sg.is_closed());
        sg
    }

    /// The elements of `self` satisfying `keep`, which must cut out a subgroup.
    pub fn subgroup_where(&self, keep: impl Fn(u64) -> bool) -> UnitSubgroup {
        let elements = self.elements.iter().copied().filter(|&a| keep(a)).collect();
        UnitSubgroup::from_closed_elements(self.modulus_exponent, elements)
    }

    pub fn modulus_exponent(&self) -> u32 {
        self.modulus_exponent
    }

    pub fn modulus(&self) -> u64 {
        1u64 << self.modulus_exponent
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: i64) -> bool {
        self.elements.binary_search(&reduce(self.modulus_exponent, a)).is_ok()
    }

    pub fn contains_residue(&self, a: u64) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &UnitSubgroup) -> bool {
        self.modulus_exponent == other.modulus_exponent && self.elements.iter().all(|&a| other.contains_residue(a))
    }

    /// Smallest element whose order equals the group order, if the group is cyclic.
    pub fn is_cyclic(&self) -> Option<u64> {
        let n = self.order() as u64;
        self.elements.iter().copied().find(|&a| order_mod(self.modulus_exponent, a) == n)
    }

    /// Subgroups of order 2, in ascending order of their non-trivial element.
    pub fn involution_subgroups(&self) -> Vec<UnitSubgroup> {
        let e = self.modulus_exponent;
        self.elements
            .iter()
            .copied()
            .filter(|&a| a != 1 && mul_mod(e, a, a) == 1)
            .map(|a| UnitSubgroup::from_closed_elements(e, vec![1, a]))
            .collect()
    }

    fn is_closed(&self) -> bool {
        let e = self.modulus_exponent;
        self.elements.first() == Some(&1)
            && self.elements.len().is_power_of_two()
            && self.generators.iter().all(|&g| self.elements.iter().all(|&a| self.contains_residue(mul_mod(e, a, g))))
    }
}

fn minimal_generators(e: u32, elements: &[u64]) -> Vec<u64> {
    let mut gens: Vec<u64> = Vec::new();
    let mut current = span(e, &[]).expect("exponent already validated");
    for &a in elements {
        if !current.contains_residue(a) {
            gens.push(a);
            current = span(e, &gens).expect("exponent already validated");
            if current.order() == elements.len() {
                break;
            }
        }
    }
    gens
}

/// The subgroups lying between the trivial group and `H`, with their covering relation.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    nodes: Vec<UnitSubgroup>,
    covers: Vec<Vec<usize>>,
    index: HashMap<Vec<u64>, usize>,
    top: usize,
}

impl SubgroupLattice {
    pub fn build(h: &UnitSubgroup) -> Result<Self> {
        if h.order() > MAX_CHAIN_GROUP_ORDER {
            return Err(Error::SizeGuard(format!(
                "subgroup lattice limited to |H| <= {MAX_CHAIN_GROUP_ORDER}, got {}",
                h.order()
            )));
        }
        let e = h.modulus_exponent;
        let mut lattice = SubgroupLattice { nodes: Vec::new(), covers: Vec::new(), index: HashMap::new(), top: 0 };
        let bottom = UnitSubgroup::trivial(e)?;
        lattice.intern(bottom);
        let mut next = 0;
        while next < lattice.nodes.len() {
            let k = lattice.nodes[next].clone();
            let mut found: Vec<(u64, usize)> = Vec::new();
            for &g in h.elements() {
                if k.contains_residue(g) || !k.contains_residue(mul_mod(e, g, g)) {
                    continue;
                }
                if found.iter().any(|&(_, idx)| lattice.nodes[idx].contains_residue(g)) {
                    continue;
                }
                let mut elements = k.elements.clone();
                elements.extend(k.elements.iter().map(|&a| mul_mod(e, a, g)));
                let idx = lattice.intern(UnitSubgroup::from_closed_elements(e, elements));
                found.push((g, idx));
            }
            lattice.covers[next] = found.into_iter().map(|(_, idx)| idx).collect();
            next += 1;
        }
        lattice.top = lattice.index[&h.elements];
        Ok(lattice)
    }

    fn intern(&mut self, sg: UnitSubgroup) -> usize {
        if let Some(&i) = self.index.get(&sg.elements) {
            return i;
        }
        let i = self.nodes.len();
        self.index.insert(sg.elements.clone(), i);
        self.nodes.push(sg);
        self.covers.push(Vec::new());
        i
    }

    pub fn nodes(&self) -> &[UnitSubgroup] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &UnitSubgroup {
        &self.nodes[i]
    }

    /// Index-2 supergroups of node `i`, ordered by the smallest element they add.
    pub fn covers(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn position(&self, sg: &UnitSubgroup) -> Option<usize> {
        if sg.modulus_exponent != self.nodes[0].modulus_exponent {
            return None;
        }
        self.index.get(&sg.elements).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.covers.iter().map(Vec::len).sum()
    }

    /// All maximal chains from the trivial group to `H`, as node indices, depth first.
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = vec![self.bottom()];
        self.walk(&mut path, &mut out);
        out
    }

    fn walk(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("path starts at the bottom");
        if last == self.top {
            out.push(path.clone());
            return;
        }
        for &up in &self.covers[last] {
            path.push(up);
            self.walk(path, out);
            path.pop();
        }
    }
}

/// Every maximal chain `{1} = H_0 < H_1 < … < H_s = H` with each step of index 2.
///
/// The trivial group has one chain of length zero.
pub fn maximal_chains(h: &UnitSubgroup) -> Result<Vec<Vec<UnitSubgroup>>> {
    let lattice = SubgroupLattice::build(h)?;
    Ok(lattice
        .maximal_chains()
        .into_iter()
        .map(|chain| chain.into_iter().map(|i| lattice.node(i).clone()).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_log(e: u32, a: u64) -> (Sign, u64) {
        for k in 0..(1u64 << (e - 2)) {
            let v = pow_mod(e, 5, k);
            if v == a {
                return (Sign::Plus, k);
            }
            if reduce(e, -(v as i64)) == a {
                return (Sign::Minus, k);
            }
        }
        panic!("{a} not of the form ±5^k mod 2^{e}");
    }

    #[test]
    fn decompose_matches_brute_force() {
        for e in 3..=12 {
            for a in (1..(1u64 << e)).step_by(2) {
                assert_eq!(decompose(e, a as i64).unwrap(), brute_log(e, a), "e={e} a={a}");
            }
        }
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose(4, 9).unwrap(), (Sign::Plus, 2));
        assert_eq!(decompose(4, 1).unwrap(), (Sign::Plus, 0));
        assert_eq!(decompose(4, 7).unwrap(), (Sign::Minus, 2));
        assert_eq!(decompose(5, -1).unwrap(), (Sign::Minus, 0));
        assert!(decompose(4, 6).is_err());
        assert!(decompose(2, 3).is_err());
    }

    #[test]
    fn large_exponent_round_trip() {
        let e = 63;
        for a in [1i64, 3, 5, 7, -1, -5, 123456789, i64::MAX] {
            let (s, k) = decompose(e, a).unwrap();
            assert_eq!(recompose(e, s, k), reduce(e, a));
        }
    }

    #[test]
    fn orders() {
        assert_eq!(UnitClass::new(4, 9).unwrap().order(), 2);
        assert_eq!(UnitClass::new(5, 7).unwrap().order(), 4);
        assert_eq!(UnitClass::new(5, 1).unwrap().order(), 1);
        assert_eq!(UnitClass::new(6, 5).unwrap().order(), 16);
    }

    #[test]
    fn span_examples() {
        assert_eq!(span(4, &[15, 5]).unwrap(), UnitSubgroup::full(4).unwrap());
        assert_eq!(span(4, &[]).unwrap().elements(), &[1]);
        assert_eq!(span(4, &[11]).unwrap().elements(), &[1, 3, 9, 11]);
        assert_eq!(span_signed(4, &[-1]).unwrap().elements(), &[1, 15]);
        assert_eq!(span(2, &[3]).unwrap().elements(), &[1, 3]);
        assert_eq!(span(1, &[1]).unwrap().elements(), &[1]);
    }

    #[test]
    fn cyclicity_examples() {
        assert_eq!(span(4, &[7, 9]).unwrap().is_cyclic(), None);
        assert_eq!(span(5, &[7]).unwrap().is_cyclic(), Some(7));
        assert_eq!(UnitSubgroup::trivial(5).unwrap().is_cyclic(), Some(1));
    }

    #[test]
    fn chains_of_full_group() {
        for e in 3..=9 {
            let chains = maximal_chains(&UnitSubgroup::full(e).unwrap()).unwrap();
            assert_eq!(chains.len(), 2 * (e as usize - 2) + 1, "e = {e}");
        }
        let trivial = maximal_chains(&UnitSubgroup::trivial(4).unwrap()).unwrap();
        assert_eq!(trivial.len(), 1);
        assert_eq!(trivial[0].len(), 1);
    }

    #[test]
    fn lattice_of_u16() {
        let lattice = SubgroupLattice::build(&UnitSubgroup::full(4).unwrap()).unwrap();
        assert_eq!(lattice.nodes().len(), 8);
        assert_eq!(lattice.edge_count(), 11);
    }

    #[test]
    fn subgroup_serde_round_trip() {
        let h = span(5, &[7]).unwrap();
        let text = serde_json::to_string(&h).unwrap();
        let back: UnitSubgroup = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
        let bad = r#"{"modulus_exponent":5,"elements":[1,7],"generators":[7]}"#;
        assert!(serde_json::from_str::<UnitSubgroup>(bad).is_err());
    }
}
