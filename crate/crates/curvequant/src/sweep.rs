//! `(n, V_n)` tables for the asymptotic statistics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use curvequant_core::asymptotics::{coefficient_statistic, dimension_statistic};
use curvequant_core::closedform;
use curvequant_core::CurveDistribution;
use curvequant_core::SolverConfig;

use crate::parallel;

/// Inclusive integer range written `a..b`, `a..=b` or just `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub start: usize,
    pub end: usize,
}

impl IntRange {
    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad bound {t:?} in range {s:?}: {e}"));
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if start == 0 || start > end {
            return Err(format!("range {s:?} must satisfy 1 <= start <= end"));
        }
        Ok(IntRange { start, end })
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl Serialize for IntRange {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub v: f64,
    pub coeff: f64,
    pub dim: Option<f64>,
}

impl SweepRow {
    pub fn new(n: usize, v: f64, s: f64) -> Self {
        SweepRow {
            n,
            v,
            coeff: coefficient_statistic(n, v, s),
            dim: dimension_statistic(n, v),
        }
    }
}

/// Where a sweep takes `V_n` from.
pub enum Source<'a> {
    Segment { a: f64, b: f64 },
    Circle,
    /// Closed forms for `n <= 6` and `n = 3k + 3`, the solver elsewhere.
    Triangle { dist: &'a CurveDistribution, cfg: SolverConfig },
}

impl Source<'_> {
    pub fn value(&self, n: usize) -> curvequant_core::Result<f64> {
        match self {
            Source::Segment { a, b } => Ok(closedform::segment_error(*a, *b, n)),
            Source::Circle => Ok(closedform::circle_error(n)),
            Source::Triangle { dist, cfg } => match closedform::triangle_codebook(n) {
                Ok(r) => Ok(r.error),
                Err(_) => {
                    let cfg = SolverConfig { n, ..cfg.clone() };
                    Ok(parallel::solve(dist, &cfg)?.distortion)
                }
            },
        }
    }
}

pub fn rows(source: &Source<'_>, ns: impl IntoIterator<Item = usize>, s: f64) -> curvequant_core::Result<Vec<SweepRow>> {
    ns.into_iter().map(|n| Ok(SweepRow::new(n, source.value(n)?, s))).collect()
}

/// RFC 4180 CSV with header `n,V_n,coeff,dim_stat`; `dim_stat` is empty when `V_n >= 1`.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "V_n", "coeff", "dim_stat"]).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.n.to_string(),
            format!("{:.16e}", r.v),
            format!("{:.16e}", r.coeff),
            r.dim.map(|d| format!("{d:.16e}")).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("ascii")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse() {
        assert_eq!("1..100".parse::<IntRange>().unwrap(), IntRange { start: 1, end: 100 });
        assert_eq!("3..=5".parse::<IntRange>().unwrap(), IntRange { start: 3, end: 5 });
        assert_eq!("7".parse::<IntRange>().unwrap(), IntRange { start: 7, end: 7 });
        assert!("0..4".parse::<IntRange>().is_err());
        assert!("5..4".parse::<IntRange>().is_err());
        assert!("a..4".parse::<IntRange>().is_err());
    }

    #[test]
    fn segment_coefficient_column_is_constant() {
        let rows = rows(&Source::Segment { a: 0.0, b: 1.0 }, 1..=100, 1.0).unwrap();
        assert!(rows.iter().all(|r| (r.coeff - 1.0 / 12.0).abs() < 1e-15));
        let csv = to_csv(&rows);
        assert!(csv.starts_with("n,V_n,coeff,dim_stat\n1,"));
        assert_eq!(csv.lines().count(), 101);
    }

    #[test]
    fn circle_first_row_has_no_dimension() {
        let rows = rows(&Source::Circle, 1..=3, 1.0).unwrap();
        assert!(rows[0].dim.is_none());
        assert!(to_csv(&rows).lines().nth(1).unwrap().ends_with(','));
    }
}
