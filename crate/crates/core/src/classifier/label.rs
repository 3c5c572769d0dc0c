use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::base_field::TauSign;
use crate::error::{Error, Result};

/// A subfield of `F(ζ_{2^e})` named by its generator over `F`.
///
/// The parameter is the exponent `k` of `2^k`; the string form spells out `2^k`, so
/// `Zeta(4)` is `z16`, `TauPlus(3)` is `tp8` and `TauMinus(3)` is `tm8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FieldLabel {
    Base,
    Zeta(u32),
    TauPlus(u32),
    TauMinus(u32),
}

impl FieldLabel {
    pub fn tau(sign: TauSign, k: u32) -> Self {
        match sign {
            TauSign::Plus => FieldLabel::TauPlus(k),
            TauSign::Minus => FieldLabel::TauMinus(k),
        }
    }

    pub fn level(&self) -> Option<u32> {
        match *self {
            FieldLabel::Base => None,
            FieldLabel::Zeta(k) | FieldLabel::TauPlus(k) | FieldLabel::TauMinus(k) => Some(k),
        }
    }

    /// Name over the given base, e.g. `Q(ζ_16)` or `F_3(τ⁻_8)`.
    pub fn math_name(&self, base: &str) -> String {
        match *self {
            FieldLabel::Base => base.to_string(),
            FieldLabel::Zeta(k) => format!("{base}(ζ_{})", pow2(k)),
            FieldLabel::TauPlus(k) => format!("{base}(τ⁺_{})", pow2(k)),
            FieldLabel::TauMinus(k) => format!("{base}(τ⁻_{})", pow2(k)),
        }
    }
}

fn pow2(k: u32) -> u128 {
    1u128 << k
}

fn parse_pow2(s: &str, whole: &str) -> Result<u32> {
    let n: u128 = s.parse().map_err(|_| Error::Parse(format!("bad field label {whole:?}")))?;
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::Parse(format!("field label {whole:?} needs a power of two >= 2")));
    }
    Ok(n.trailing_zeros())
}

impl fmt::Display for FieldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FieldLabel::Base => write!(f, "base"),
            FieldLabel::Zeta(k) => write!(f, "z{}", pow2(k)),
            FieldLabel::TauPlus(k) => write!(f, "tp{}", pow2(k)),
            FieldLabel::TauMinus(k) => write!(f, "tm{}", pow2(k)),
        }
    }
}

impl FromStr for FieldLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "base" {
            Ok(FieldLabel::Base)
        } else if let Some(rest) = s.strip_prefix("tp") {
            Ok(FieldLabel::TauPlus(parse_pow2(rest, s)?))
        } else if let Some(rest) = s.strip_prefix("tm") {
            Ok(FieldLabel::TauMinus(parse_pow2(rest, s)?))
        } else if let Some(rest) = s.strip_prefix('z') {
            Ok(FieldLabel::Zeta(parse_pow2(rest, s)?))
        } else {
            Err(Error::Parse(format!("unknown field label {s:?}")))
        }
    }
}

impl From<FieldLabel> for String {
    fn from(l: FieldLabel) -> String {
        l.to_string()
    }
}

impl TryFrom<String> for FieldLabel {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
