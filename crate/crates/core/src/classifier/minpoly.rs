//! Minimal polynomials with coefficients written in terms of `ζ`, `τ⁺`, `τ⁻` constants of `F`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A constant of the base field. `Zeta(k)` is `ζ_{2^k}`, `TauPlus(k)` is `ζ_{2^k} + ζ_{2^k}⁻¹`,
/// `TauMinus(k)` is `ζ_{2^k} - ζ_{2^k}⁻¹`, all for one compatible system of roots of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Atom {
    One,
    Zeta(u32),
    TauPlus(u32),
    TauMinus(u32),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::One => write!(f, "1"),
            Atom::Zeta(k) => write!(f, "z{}", 1u128 << k),
            Atom::TauPlus(k) => write!(f, "tp{}", 1u128 << k),
            Atom::TauMinus(k) => write!(f, "tm{}", 1u128 << k),
        }
    }
}

impl FromStr for Atom {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "1" {
            return Ok(Atom::One);
        }
        let (ctor, rest): (fn(u32) -> Atom, &str) = if let Some(r) = s.strip_prefix("tp") {
            (Atom::TauPlus, r)
        } else if let Some(r) = s.strip_prefix("tm") {
            (Atom::TauMinus, r)
        } else if let Some(r) = s.strip_prefix('z') {
            (Atom::Zeta, r)
        } else {
            return Err(Error::Parse(format!("unknown coefficient token {s:?}")));
        };
        let n: u128 = rest.parse().map_err(|_| Error::Parse(format!("bad coefficient token {s:?}")))?;
        if !n.is_power_of_two() {
            return Err(Error::Parse(format!("coefficient token {s:?} needs a power of two")));
        }
        Ok(ctor(n.trailing_zeros()))
    }
}

impl From<Atom> for String {
    fn from(a: Atom) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for Atom {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// An integer combination of [`Atom`]s. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coefficient(BTreeMap<Atom, i64>);

impl Coefficient {
    pub fn int(n: i64) -> Self {
        Coefficient::default().plus(Atom::One, n)
    }

    pub fn atom(a: Atom, scale: i64) -> Self {
        Coefficient::default().plus(a, scale)
    }

    pub fn plus(mut self, a: Atom, scale: i64) -> Self {
        let entry = self.0.entry(a).or_insert(0);
        *entry += scale;
        if *entry == 0 {
            self.0.remove(&a);
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Atom, i64)> + '_ {
        self.0.iter().map(|(&a, &c)| (a, c))
    }

    /// The integer value when no symbolic constant appears.
    pub fn as_integer(&self) -> Option<i64> {
        match self.0.len() {
            0 => Some(0),
            1 => self.0.get(&Atom::One).copied(),
            _ => None,
        }
    }

    fn body(&self) -> String {
        let mut out = String::new();
        for (i, (a, c)) in self.entries().enumerate() {
            let neg = c < 0;
            let mag = c.unsigned_abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (a, mag) {
                (Atom::One, m) => out.push_str(&m.to_string()),
                (a, 1) => out.push_str(&a.to_string()),
                (a, m) => out.push_str(&format!("{m}*{a}")),
            }
        }
        out
    }

    /// Rewrites constants whose value is an integer or a multiple of `ζ_4`.
    pub fn simplified(&self) -> Coefficient {
        let mut out = Coefficient::default();
        for (a, c) in self.entries() {
            out = match a {
                Atom::Zeta(0) => out.plus(Atom::One, c),
                Atom::Zeta(1) => out.plus(Atom::One, -c),
                Atom::TauPlus(0) => out.plus(Atom::One, 2 * c),
                Atom::TauMinus(0) | Atom::TauMinus(1) | Atom::TauPlus(2) => out,
                Atom::TauPlus(1) => out.plus(Atom::One, -2 * c),
                Atom::TauMinus(2) => out.plus(Atom::Zeta(2), 2 * c),
                other => out.plus(other, c),
            };
        }
        out
    }
}

/// A monic polynomial in `x` over `F`, stored as exponent → coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "MinPolyRepr", try_from = "MinPolyRepr")]
pub struct SymbolicMinPoly {
    terms: BTreeMap<u64, Coefficient>,
}

#[derive(Serialize, Deserialize)]
struct MinPolyRepr {
    text: String,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exponent: u64,
    coefficient: Coefficient,
}

impl From<SymbolicMinPoly> for MinPolyRepr {
    fn from(p: SymbolicMinPoly) -> Self {
        MinPolyRepr {
            text: p.to_string(),
            terms: p
                .terms
                .into_iter()
                .rev()
                .map(|(exponent, coefficient)| TermRepr { exponent, coefficient })
                .collect(),
        }
    }
}

impl TryFrom<MinPolyRepr> for SymbolicMinPoly {
    type Error = Error;
    fn try_from(r: MinPolyRepr) -> Result<Self> {
        let mut p = SymbolicMinPoly { terms: BTreeMap::new() };
        for t in r.terms {
            if p.terms.insert(t.exponent, t.coefficient).is_some() {
                return Err(Error::Parse(format!("exponent {} repeated", t.exponent)));
            }
        }
        if p.to_string() != r.text {
            return Err(Error::Parse(format!("text {:?} does not match the terms", r.text)));
        }
        if p.terms.values().last().and_then(Coefficient::as_integer) != Some(1) {
            return Err(Error::Parse("minimal polynomial must be monic".into()));
        }
        Ok(p)
    }
}

impl SymbolicMinPoly {
    pub fn new(terms: impl IntoIterator<Item = (u64, Coefficient)>) -> Self {
        let mut p = SymbolicMinPoly { terms: BTreeMap::new() };
        for (n, c) in terms {
            if !c.is_zero() {
                p.terms.insert(n, c);
            }
        }
        p
    }

    pub fn degree(&self) -> u64 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    /// Terms from the highest exponent down.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Coefficient)> + '_ {
        self.terms.iter().rev().map(|(&n, c)| (n, c))
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out: Vec<Atom> = self.terms.values().flat_map(|c| c.entries().map(|(a, _)| a)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn simplified(&self) -> SymbolicMinPoly {
        SymbolicMinPoly::new(self.terms.iter().map(|(&n, c)| (n, c.simplified())))
    }
}

fn monomial(n: u64) -> String {
    match n {
        0 => String::new(),
        1 => "x".to_string(),
        n => format!("x^{n}"),
    }
}

impl fmt::Display for SymbolicMinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (n, c)) in self.terms().enumerate() {
            let mono = monomial(n);
            let single = c.0.len() == 1;
            let (neg, body) = if single {
                let (a, s) = c.entries().next().expect("non-empty");
                let mag = s.unsigned_abs();
                let body = match (a, mag) {
                    (Atom::One, 1) if n > 0 => String::new(),
                    (Atom::One, m) => m.to_string(),
                    (a, 1) => a.to_string(),
                    (a, m) => format!("{m}*{a}"),
                };
                (s < 0, body)
            } else if c.entries().all(|(_, s)| s < 0) {
                let negated = c.entries().fold(Coefficient::default(), |acc, (a, s)| acc.plus(a, -s));
                (true, format!("({})", negated.body()))
            } else {
                (false, format!("({})", c.body()))
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match (body.is_empty(), mono.is_empty()) {
                (true, _) => write!(f, "{mono}")?,
                (false, true) => write!(f, "{body}")?,
                (false, false) => write!(f, "{body}*{mono}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        let p = SymbolicMinPoly::new([
            (4, Coefficient::int(1)),
            (2, Coefficient::atom(Atom::TauMinus(3), -1)),
            (0, Coefficient::int(-1)),
        ]);
        assert_eq!(p.to_string(), "x^4 - tm8*x^2 - 1");
        let q = SymbolicMinPoly::new([
            (2, Coefficient::int(1)),
            (0, Coefficient::atom(Atom::TauPlus(3), -1).plus(Atom::One, -2)),
        ]);
        assert_eq!(q.to_string(), "x^2 - (2 + tp8)");
        let r = SymbolicMinPoly::new([(1, Coefficient::int(1)), (0, Coefficient::atom(Atom::Zeta(2), -1))]);
        assert_eq!(r.to_string(), "x - z4");
    }

    #[test]
    fn simplification() {
        let p = SymbolicMinPoly::new([
            (8, Coefficient::int(1)),
            (4, Coefficient::atom(Atom::TauPlus(2), -1)),
            (0, Coefficient::int(1)),
        ]);
        assert_eq!(p.simplified().to_string(), "x^8 + 1");
    }

    #[test]
    fn serde_round_trip() {
        let p = SymbolicMinPoly::new([
            (4, Coefficient::int(1)),
            (2, Coefficient::atom(Atom::TauMinus(3), -1)),
            (0, Coefficient::int(-1)),
        ]);
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"tm8\":-1"));
        let back: SymbolicMinPoly = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
}
