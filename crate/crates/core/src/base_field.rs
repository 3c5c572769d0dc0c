//! Base fields and their membership predicates for 2-power roots of unity.
//!
//! Three families are supported: finite fields `F_q` (`q = p^k`, `p` odd), cyclotomic fields
//! `Q(ζ_m)` and quadratic fields `Q(√d)`. Each predicate is a closed form in the field
//! parameters; the [`crate::oracle`] module recomputes them from explicit Galois groups.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest characteristic accepted for `F_q`.
pub const MAX_PRIME: u64 = 1 << 32;

/// Which of `τ⁺ = ζ + ζ⁻¹` and `τ⁻ = ζ - ζ⁻¹` is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauSign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldFamily {
    FiniteField { p: u64, k: u32 },
    CyclotomicQ { m: u64 },
    QuadraticQ { d: i64 },
}

/// A validated base field. Construct with [`BaseField::finite`], [`BaseField::cyclotomic`],
/// [`BaseField::quadratic`] or by parsing `fq:<p>[^<k>]`, `qzeta:<m>`, `qsqrt:<d>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BaseField(FieldFamily);

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f * f) {
            return false;
        }
        if n.is_multiple_of(f) {
            n /= f;
        }
        f += 1;
    }
    true
}

/// 2-adic valuation; `v2(0)` is reported as 128.
pub fn v2(n: u128) -> u32 {
    if n == 0 {
        128
    } else {
        n.trailing_zeros()
    }
}

impl BaseField {
    pub fn finite(p: u64, k: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::UnsupportedCharacteristic("characteristic 2 is not supported".into()));
        }
        if !is_prime(p) {
            return Err(Error::UnsupportedCharacteristic(format!("{p} is not prime")));
        }
        if p >= MAX_PRIME {
            return Err(Error::InvalidField(format!("characteristic {p} exceeds 2^32")));
        }
        if k == 0 {
            return Err(Error::InvalidField("finite field degree must be at least 1".into()));
        }
        Ok(BaseField(FieldFamily::FiniteField { p, k }))
    }

    /// `Q(ζ_m)`; `m ≡ 2 (mod 4)` is replaced by `m/2`, which gives the same field.
    pub fn cyclotomic(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidField("cyclotomic index must be positive".into()));
        }
        let m = if m % 4 == 2 { m / 2 } else { m };
        Ok(BaseField(FieldFamily::CyclotomicQ { m }))
    }

    pub fn rationals() -> Self {
        BaseField(FieldFamily::CyclotomicQ { m: 1 })
    }

    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::InvalidField(format!("Q(sqrt({d})) is not a quadratic field")));
        }
        if d == i64::MIN || !is_squarefree(d) {
            return Err(Error::InvalidField(format!("{d} is not squarefree")));
        }
        Ok(BaseField(FieldFamily::QuadraticQ { d }))
    }

    pub fn family(&self) -> FieldFamily {
        self.0
    }

    pub fn characteristic(&self) -> u64 {
        match self.0 {
            FieldFamily::FiniteField { p, .. } => p,
            _ => 0,
        }
    }

    /// `q mod 2^128` for a finite field.
    pub fn q_mod_2_128(&self) -> Option<u128> {
        match self.0 {
            FieldFamily::FiniteField { p, k } => {
                let mut acc: u128 = 1;
                for _ in 0..k {
                    acc = acc.wrapping_mul(p as u128);
                }
                Some(acc)
            }
            _ => None,
        }
    }

    /// `q` itself, when it fits in a `u64`.
    pub fn field_size(&self) -> Option<u64> {
        match self.0 {
            FieldFamily::FiniteField { p, k } => p.checked_pow(k),
            _ => None,
        }
    }

    /// Fundamental discriminant of `Q(√d)`.
    pub fn discriminant(&self) -> Option<i64> {
        match self.0 {
            FieldFamily::QuadraticQ { d } => Some(if d.rem_euclid(4) == 1 { d } else { 4 * d }),
            _ => None,
        }
    }

    /// Whether `ζ_{2^k}` lies in the field.
    pub fn contains_zeta(&self, k: u32) -> bool {
        if k <= 1 {
            return true;
        }
        match self.0 {
            FieldFamily::FiniteField { .. } => self.q_minus_one_v2() >= k,
            FieldFamily::CyclotomicQ { m } => v2(m as u128) >= k,
            FieldFamily::QuadraticQ { d } => k == 2 && d == -1,
        }
    }

    /// Whether `τ^±_{2^k} = ζ_{2^k} ± ζ_{2^k}⁻¹` lies in the field.
    pub fn contains_tau(&self, k: u32, sign: TauSign) -> bool {
        if k <= 1 {
            return true;
        }
        match (self.0, sign) {
            (FieldFamily::FiniteField { .. }, TauSign::Plus) => {
                let r = self.q_mod_pow2(k);
                r == 1 || r == low_mask(k)
            }
            (FieldFamily::FiniteField { .. }, TauSign::Minus) => {
                let r = self.q_mod_pow2(k);
                r == 1 || r == (1u128 << (k - 1)) - 1
            }
            (FieldFamily::CyclotomicQ { m }, TauSign::Plus) => k == 2 || v2(m as u128) >= k,
            (FieldFamily::CyclotomicQ { m }, TauSign::Minus) => {
                let s = v2(m as u128);
                if k == 2 {
                    s >= 2
                } else {
                    s >= k
                }
            }
            (FieldFamily::QuadraticQ { d }, TauSign::Plus) => k == 2 || (k == 3 && d == 2),
            (FieldFamily::QuadraticQ { d }, TauSign::Minus) => (k == 2 && d == -1) || (k == 3 && d == -2),
        }
    }

    /// Base-2 logarithm of the order of `ζ_{2^k}` modulo `F^×`, i.e. of the smallest `2^j` with
    /// `ζ_{2^k}^{2^j} ∈ F`.
    pub fn order_over_log2(&self, k: u32) -> u32 {
        let level = match self.0 {
            FieldFamily::FiniteField { .. } => self.q_minus_one_v2(),
            FieldFamily::CyclotomicQ { m } => v2(m as u128).max(1),
            FieldFamily::QuadraticQ { d } => {
                if d == -1 {
                    2
                } else {
                    1
                }
            }
        };
        k.saturating_sub(level)
    }

    /// Order of `ζ_{2^k}` in `F(ζ_{2^k})^× / F^×`. Requires `k <= 64`.
    pub fn order_over(&self, k: u32) -> u64 {
        assert!(k <= 64, "order_over is defined here for k <= 64");
        1u64 << self.order_over_log2(k)
    }

    fn q_minus_one_v2(&self) -> u32 {
        let q = self.q_mod_2_128().expect("finite field");
        v2(q.wrapping_sub(1))
    }

    fn q_mod_pow2(&self, k: u32) -> u128 {
        self.q_mod_2_128().expect("finite field") & low_mask(k)
    }

    /// Human-readable name such as `F_3`, `F_3^2`, `Q`, `Q(ζ_12)` or `Q(√-2)`.
    pub fn pretty(&self) -> String {
        match self.0 {
            FieldFamily::FiniteField { p, k: 1 } => format!("F_{p}"),
            FieldFamily::FiniteField { p, k } => format!("F_{p}^{k}"),
            FieldFamily::CyclotomicQ { m: 1 } => "Q".to_string(),
            FieldFamily::CyclotomicQ { m } => format!("Q(ζ_{m})"),
            FieldFamily::QuadraticQ { d } => format!("Q(√{d})"),
        }
    }
}

fn low_mask(k: u32) -> u128 {
    if k >= 128 {
        u128::MAX
    } else {
        (1u128 << k) - 1
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            FieldFamily::FiniteField { p, k: 1 } => write!(f, "fq:{p}"),
            FieldFamily::FiniteField { p, k } => write!(f, "fq:{p}^{k}"),
            FieldFamily::CyclotomicQ { m } => write!(f, "qzeta:{m}"),
            FieldFamily::QuadraticQ { d } => write!(f, "qsqrt:{d}"),
        }
    }
}

/// Parses `fq:<p>[^<k>]`, `qzeta:<m>` or `qsqrt:<d>`.
pub fn parse_field(s: &str) -> Result<BaseField> {
    let (tag, rest) =
        s.trim().split_once(':').ok_or_else(|| Error::Parse(format!("expected <family>:<parameter>, got {s:?}")))?;
    let num = |t: &str| -> Result<u64> {
        t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad number {t:?} in {s:?}")))
    };
    match tag.trim() {
        "fq" => {
            let (p, k) = match rest.split_once('^') {
                Some((p, k)) => (num(p)?, num(k)?),
                None => (num(rest)?, 1),
            };
            let k = u32::try_from(k).map_err(|_| Error::InvalidField(format!("degree {k} too large")))?;
            BaseField::finite(p, k)
        }
        "qzeta" => BaseField::cyclotomic(num(rest)?),
        "qsqrt" => {
            let d = rest.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad integer {rest:?} in {s:?}")))?;
            BaseField::quadratic(d)
        }
        other => Err(Error::Parse(format!("unknown field family {other:?}; use fq, qzeta or qsqrt"))),
    }
}

impl FromStr for BaseField {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_field(s)
    }
}

impl From<BaseField> for String {
    fn from(f: BaseField) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for BaseField {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        parse_field(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["fq:3", "fq:3^2", "qzeta:1", "qzeta:8", "qsqrt:-2", "qsqrt:5"] {
            assert_eq!(parse_field(s).unwrap().to_string(), s);
        }
        assert_eq!(parse_field("qzeta:6").unwrap().to_string(), "qzeta:3");
        assert_eq!(parse_field("qzeta:2").unwrap(), BaseField::rationals());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_field("fq:2"), Err(Error::UnsupportedCharacteristic(_))));
        assert!(matches!(parse_field("fq:9"), Err(Error::UnsupportedCharacteristic(_))));
        assert!(matches!(parse_field("qsqrt:0"), Err(Error::InvalidField(_))));
        assert!(matches!(parse_field("qsqrt:1"), Err(Error::InvalidField(_))));
        assert!(matches!(parse_field("qsqrt:8"), Err(Error::InvalidField(_))));
        assert!(matches!(parse_field("qzeta:0"), Err(Error::InvalidField(_))));
        assert!(matches!(parse_field("fq:3^0"), Err(Error::InvalidField(_))));
        assert!(matches!(parse_field("gf:3"), Err(Error::Parse(_))));
        assert!(matches!(parse_field("fq"), Err(Error::Parse(_))));
        assert!(matches!(parse_field("fq:x"), Err(Error::Parse(_))));
    }

    #[test]
    fn membership_examples() {
        let f3 = BaseField::finite(3, 1).unwrap();
        assert!(!f3.contains_zeta(2));
        assert!(f3.contains_tau(3, TauSign::Minus));
        assert!(!f3.contains_tau(3, TauSign::Plus));
        let f7 = BaseField::finite(7, 1).unwrap();
        assert!(f7.contains_tau(3, TauSign::Plus));
        assert!(!f7.contains_tau(3, TauSign::Minus));
        let f9 = BaseField::finite(3, 2).unwrap();
        assert!(f9.contains_zeta(3));
        assert!(!f9.contains_zeta(4));
        let q = BaseField::rationals();
        assert!(q.contains_tau(2, TauSign::Plus));
        assert!(!q.contains_tau(2, TauSign::Minus));
        assert!(!q.contains_zeta(2));
        let qi = BaseField::cyclotomic(4).unwrap();
        assert!(qi.contains_zeta(2) && qi.contains_tau(2, TauSign::Minus));
        assert!(BaseField::quadratic(2).unwrap().contains_tau(3, TauSign::Plus));
        assert!(BaseField::quadratic(-2).unwrap().contains_tau(3, TauSign::Minus));
        assert!(BaseField::quadratic(-1).unwrap().contains_zeta(2));
    }

    #[test]
    fn order_over_examples() {
        let q = BaseField::rationals();
        assert_eq!(q.order_over(4), 8);
        assert_eq!(BaseField::cyclotomic(8).unwrap().order_over(4), 2);
        assert_eq!(BaseField::quadratic(-1).unwrap().order_over(4), 4);
        assert_eq!(BaseField::finite(5, 1).unwrap().order_over(4), 4);
        assert_eq!(BaseField::finite(5, 1).unwrap().order_over(2), 1);
    }

    #[test]
    fn helpers() {
        assert!(is_prime(2) && is_prime(3) && is_prime(4294967291));
        assert!(!is_prime(1) && !is_prime(91));
        assert!(is_squarefree(-30) && !is_squarefree(12) && !is_squarefree(-9));
        assert_eq!(BaseField::quadratic(-1).unwrap().discriminant(), Some(-4));
        assert_eq!(BaseField::quadratic(5).unwrap().discriminant(), Some(5));
        assert_eq!(BaseField::quadratic(2).unwrap().discriminant(), Some(8));
    }
}
