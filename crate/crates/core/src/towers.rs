//! Maximal towers of quadratic steps from `F(ζ_{2^e})` down to `F`, and their DOT rendering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::base_field::{BaseField, TauSign};
use crate::classifier::{in_scope, FieldLabel};
use crate::error::Result;

/// A chain of fields listed from the top field down to `Base`, each step of degree 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TowerDecomposition {
    steps: Vec<FieldLabel>,
}

impl TowerDecomposition {
    pub fn new(steps: Vec<FieldLabel>) -> Self {
        TowerDecomposition { steps }
    }

    pub fn steps(&self) -> &[FieldLabel] {
        &self.steps
    }

    /// Number of quadratic steps.
    pub fn length(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }
}

impl fmt::Display for TowerDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(FieldLabel::to_string).collect();
        write!(f, "{}", parts.join("/"))
    }
}

/// Every maximal tower of `F(ζ_{2^e})/F`, for `e > ν`.
///
/// A cyclic extension has only the tower through the `ζ_{2^k}`. Otherwise the order is: the
/// `ζ` tower; then for `r = 0..e-ν`, the towers leaving the `ζ` chain at `ζ_{2^(e-r)}` through
/// `τ⁺_{2^(e-r)}`; then those leaving through `τ⁻_{2^(e-r)}`.
pub fn enumerate_towers(field: &BaseField, e: u32) -> Result<Vec<TowerDecomposition>> {
    let inv = in_scope(field, e)?;
    let nu = inv.nu;
    let zeta_chain = |lowest: u32| (lowest..=e).rev().map(FieldLabel::Zeta);
    let cyclic = inv.zeta4_in_field || field.contains_tau(nu, TauSign::Minus);
    let mut out = vec![TowerDecomposition::new(zeta_chain(nu).chain([FieldLabel::Base]).collect())];
    if cyclic {
        return Ok(out);
    }
    debug_assert_eq!(nu, inv.nu_plus);
    let tau_plus_tail = |from: u32| (nu + 1..=from).rev().map(FieldLabel::TauPlus);
    for r in 0..(e - nu) {
        let steps = zeta_chain(e - r).chain(tau_plus_tail(e - r)).chain([FieldLabel::Base]).collect();
        out.push(TowerDecomposition::new(steps));
    }
    for r in 0..(e - nu) {
        let steps = zeta_chain(e - r)
            .chain([FieldLabel::TauMinus(e - r)])
            .chain(tau_plus_tail(e - r - 1))
            .chain([FieldLabel::Base])
            .collect();
        out.push(TowerDecomposition::new(steps));
    }
    Ok(out)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT digraph of the union of `towers`, edges pointing from subfield to extension.
///
/// `aliases` lists other names of the same subfield; they are appended to the node label.
pub fn emit_dot(
    field: &BaseField,
    e: u32,
    towers: &[TowerDecomposition],
    aliases: &BTreeMap<FieldLabel, Vec<FieldLabel>>,
) -> String {
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for t in towers {
        nodes.extend(t.steps().iter().copied());
        for pair in t.steps().windows(2) {
            edges.insert((pair[1], pair[0]));
        }
    }
    let base = field.pretty();
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(&format!("{field} e={e}")));
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=box];");
    for n in &nodes {
        let mut text = n.math_name(&base);
        for a in aliases.get(n).into_iter().flatten().filter(|a| *a != n) {
            let _ = write!(text, " = {}", a.math_name(&base));
        }
        let _ = writeln!(out, "  {} [label={}];", quote(&n.to_string()), quote(&text));
    }
    for (lo, hi) in &edges {
        let _ = writeln!(out, "  {} -> {} [label=\"2\"];", quote(&lo.to_string()), quote(&hi.to_string()));
    }
    out.push_str("}\n");
    out
}
