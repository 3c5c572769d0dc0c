use std::ops::RangeInclusive;

use serde::Serialize;

use crate::base_field::{is_prime, BaseField};
use crate::classifier::{classify, Outcome};
use crate::error::{Error, Result};
use crate::invariants::nu;
use crate::oracle::verify::verify;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Primes,
    Qzeta,
    Qsqrt,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primes" | "fq" => Ok(Family::Primes),
            "qzeta" => Ok(Family::Qzeta),
            "qsqrt" => Ok(Family::Qsqrt),
            other => Err(Error::Parse(format!("unknown family {other:?}; use primes, qzeta or qsqrt"))),
        }
    }
}

/// `a..b` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>> {
    let bad = || Error::Parse(format!("bad range {s:?}; expected a..b"));
    let (lo, hi) = match s.find("..") {
        Some(i) => (&s[..i], s[i + 2..].trim_start_matches('=')),
        None => (s, s),
    };
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

/// Fields of a family over a parameter range, in ascending parameter order without repeats.
pub fn family_fields(family: Family, range: RangeInclusive<i64>, k_max: u32) -> Vec<BaseField> {
    let mut out = Vec::new();
    for n in range {
        match family {
            Family::Primes => {
                if n > 2 && is_prime(n as u64) {
                    out.extend((1..=k_max).filter_map(|k| BaseField::finite(n as u64, k).ok()));
                }
            }
            Family::Qzeta => {
                if n >= 1 && n % 4 != 2 {
                    out.extend(BaseField::cyclotomic(n as u64).ok());
                }
            }
            Family::Qsqrt => out.extend(BaseField::quadratic(n).ok()),
        }
    }
    out
}

/// Which `e` values a sweep visits for a given field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ERange {
    Fixed(RangeInclusive<u32>),
    AboveNu { max: u32 },
}

impl ERange {
    pub fn for_field(&self, field: &BaseField) -> RangeInclusive<u32> {
        match self {
            ERange::Fixed(r) => r.clone(),
            ERange::AboveNu { max } => nu(field).nu + 1..=*max,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub field: String,
    pub e: u32,
    pub nu_plus: u32,
    pub nu: u32,
    pub c2: bool,
    pub cyclic: bool,
    pub degree: u64,
    pub tower_count: u64,
    pub verified: bool,
}

pub fn row(field: &BaseField, e: u32) -> Result<SweepRow> {
    let outcome = classify(field, e)?;
    let inv = *outcome.invariants();
    let tower_count = match &outcome {
        Outcome::Classified(c) => c.tower_count,
        Outcome::SmallDegree(_) => 1,
    };
    Ok(SweepRow {
        field: field.to_string(),
        e,
        nu_plus: inv.nu_plus,
        nu: inv.nu,
        c2: inv.has_c2,
        cyclic: outcome.is_cyclic(),
        degree: outcome.degree(),
        tower_count,
        verified: verify(field, e)?.all_passed(),
    })
}

pub fn write_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|err| Error::InvalidArgument(format!("csv: {err}")))?;
    }
    w.flush().map_err(|err| Error::InvalidArgument(format!("csv: {err}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..97").unwrap(), 3..=97);
        assert_eq!(parse_range("-50..50").unwrap(), -50..=50);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
        assert_eq!(parse_range("1..=4").unwrap(), 1..=4);
        assert!(parse_range("9..3").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn families() {
        let primes: Vec<String> = family_fields(Family::Primes, 1..=11, 2).iter().map(ToString::to_string).collect();
        assert_eq!(primes, ["fq:3", "fq:3^2", "fq:5", "fq:5^2", "fq:7", "fq:7^2", "fq:11", "fq:11^2"]);
        assert_eq!(family_fields(Family::Qzeta, 1..=8, 1).len(), 6);
        assert_eq!(family_fields(Family::Qsqrt, -4..=4, 1).len(), 5);
    }

    #[test]
    fn csv_header_and_booleans() {
        let rows = vec![row(&"qsqrt:-2".parse().unwrap(), 5).unwrap()];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "field,e,nu_plus,nu,c2,cyclic,degree,tower_count,verified\nqsqrt:-2,5,2,3,true,true,8,1,true\n"
        );
    }
}
