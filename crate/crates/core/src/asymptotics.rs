//! Quantization dimension and coefficient statistics from `(n, V_n)` series.
//!
//! Both statistics are reported at the largest `n` together with their values at every
//! entry; nothing is extrapolated.

use alloc::vec::Vec;

use crate::closedform;
use crate::error::{domain, Error, Result};
use crate::fmath;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesSource {
    ClosedForm,
    Solver,
}

impl SeriesSource {
    pub fn tag(self) -> &'static str {
        match self {
            SeriesSource::ClosedForm => "closed-form",
            SeriesSource::Solver => "solver",
        }
    }
}

/// Quantization errors `V_n` at strictly increasing `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSeries {
    entries: Vec<(usize, f64)>,
    source: SeriesSource,
}

impl AsymptoticSeries {
    pub fn new(entries: Vec<(usize, f64)>, source: SeriesSource) -> Result<Self> {
        for (i, &(n, v)) in entries.iter().enumerate() {
            if n == 0 {
                return Err(domain("series entries need n >= 1"));
            }
            if !(v > 0.0) || !v.is_finite() {
                return Err(domain(alloc::format!("V_{n} = {v} is not a positive number")));
            }
            if i > 0 && entries[i - 1].0 >= n {
                return Err(domain("series n must be strictly increasing"));
            }
        }
        Ok(AsymptoticSeries { entries, source })
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn source(&self) -> SeriesSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `2 log n / (−log V_n)`; `None` when `V_n >= 1`.
pub fn dimension_statistic(n: usize, v: f64) -> Option<f64> {
    (v < 1.0).then(|| 2.0 * fmath::ln(n as f64) / -fmath::ln(v))
}

/// `n^{2/s} V_n`.
pub fn coefficient_statistic(n: usize, v: f64, s: f64) -> f64 {
    fmath::powf(n as f64, 2.0 / s) * v
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate {
    /// Statistic at the largest usable `n`.
    pub value: f64,
    pub n: usize,
    /// `(n, statistic)` for every usable entry.
    pub trend: Vec<(usize, f64)>,
    /// Entries left out because `V_n >= 1`.
    pub excluded: Vec<usize>,
}

pub fn estimate_dimension(series: &AsymptoticSeries) -> Result<DimensionEstimate> {
    let mut trend = Vec::with_capacity(series.len());
    let mut excluded = Vec::new();
    for &(n, v) in series.entries() {
        match dimension_statistic(n, v) {
            Some(d) => trend.push((n, d)),
            None => excluded.push(n),
        }
    }
    if trend.len() < 2 {
        return Err(Error::TooFewEntries {
            usable: trend.len(),
            needed: 2,
        });
    }
    let &(n, value) = trend.last().expect("two entries");
    Ok(DimensionEstimate {
        value,
        n,
        trend,
        excluded,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientEstimate {
    /// `n^{2/s} V_n` at the largest `n`.
    pub value: f64,
    pub n: usize,
    pub s: f64,
    pub trend: Vec<(usize, f64)>,
}

pub fn estimate_coefficient(series: &AsymptoticSeries, s: f64) -> Result<CoefficientEstimate> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain(alloc::format!("dimension s must be positive, got {s}")));
    }
    if series.is_empty() {
        return Err(Error::TooFewEntries { usable: 0, needed: 1 });
    }
    let trend: Vec<(usize, f64)> = series
        .entries()
        .iter()
        .map(|&(n, v)| (n, coefficient_statistic(n, v, s)))
        .collect();
    let &(n, value) = trend.last().expect("non-empty");
    Ok(CoefficientEstimate { value, n, s, trend })
}

/// Closed-form series for the uniform distribution on `[a, b]`.
pub fn segment_series(a: f64, b: f64, ns: impl IntoIterator<Item = usize>) -> Result<AsymptoticSeries> {
    if !(a < b) {
        return Err(domain(alloc::format!("segment needs a < b, got a = {a}, b = {b}")));
    }
    let entries = ns.into_iter().map(|n| (n, closedform::segment_error(a, b, n))).collect();
    AsymptoticSeries::new(entries, SeriesSource::ClosedForm)
}

/// Closed-form series for the unit circle.
pub fn circle_series(ns: impl IntoIterator<Item = usize>) -> Result<AsymptoticSeries> {
    let entries = ns.into_iter().map(|n| (n, closedform::circle_error(n))).collect();
    AsymptoticSeries::new(entries, SeriesSource::ClosedForm)
}

/// Closed-form series for the triangle boundary at `n = 3k + 3`.
pub fn triangle_series(ks: impl IntoIterator<Item = usize>) -> Result<AsymptoticSeries> {
    let mut entries = Vec::new();
    for k in ks {
        if k == 0 {
            return Err(domain("k must be at least 1"));
        }
        entries.push((3 * k + 3, closedform::triangle_3k3_error(k)));
    }
    AsymptoticSeries::new(entries, SeriesSource::ClosedForm)
}
