//! Matsubara-type sums ½·t(0) + Σ_{l≥1} t(l) with relative truncation.

use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SummationSpec {
    /// Stop once |t(l)| falls below this fraction of Σ|t| on two consecutive indices.
    pub term_cutoff_ratio: f64,
    pub max_matsubara_index: usize,
    /// Apply Wynn's epsilon algorithm to the tail of the partial sums.
    #[serde(default)]
    pub accelerate: bool,
}

impl Default for SummationSpec {
    fn default() -> Self {
        SummationSpec {
            term_cutoff_ratio: 1e-10,
            max_matsubara_index: 100_000,
            accelerate: false,
        }
    }
}

impl SummationSpec {
    pub fn new(term_cutoff_ratio: f64, max_matsubara_index: usize) -> Result<Self> {
        let spec = SummationSpec {
            term_cutoff_ratio,
            max_matsubara_index,
            accelerate: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.term_cutoff_ratio > 0.0 && self.term_cutoff_ratio <= 1e-6) {
            return Err(Error::Domain {
                what: "term_cutoff_ratio",
                value: self.term_cutoff_ratio,
                domain: "(0, 1e-6]",
            });
        }
        if self.max_matsubara_index < 100 {
            return Err(Error::Domain {
                what: "max_matsubara_index",
                value: self.max_matsubara_index as f64,
                domain: ">= 100",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SummationResult {
    pub value: f64,
    /// Last index included in the sum.
    pub truncation_index: usize,
    /// Raw (unweighted) terms t(0), t(1), ... when requested.
    pub terms: Option<Vec<f64>>,
}

struct Accumulator<'a> {
    spec: &'a SummationSpec,
    sum: f64,
    scale: f64,
    small_run: u8,
    partials: Vec<f64>,
    terms: Option<Vec<f64>>,
}

impl<'a> Accumulator<'a> {
    fn new(spec: &'a SummationSpec, keep_terms: bool) -> Self {
        Accumulator {
            spec,
            sum: 0.0,
            scale: 0.0,
            small_run: 0,
            partials: Vec::new(),
            terms: keep_terms.then(Vec::new),
        }
    }

    /// Adds t(l); returns true once the cutoff has been reached.
    fn push(&mut self, l: usize, term: f64) -> bool {
        let weighted = if l == 0 { 0.5 * term } else { term };
        self.sum += weighted;
        self.scale += weighted.abs();
        if let Some(t) = self.terms.as_mut() {
            t.push(term);
        }
        if self.spec.accelerate {
            self.partials.push(self.sum);
        }
        if l == 0 {
            return false;
        }
        if weighted.abs() <= self.spec.term_cutoff_ratio * self.scale {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= 2
    }

    fn finish(self, truncation_index: usize) -> SummationResult {
        let value = if self.spec.accelerate && self.partials.len() >= 3 {
            let tail = &self.partials[self.partials.len().saturating_sub(13)..];
            wynn_epsilon(tail)
        } else {
            self.sum
        };
        SummationResult {
            value,
            truncation_index,
            terms: self.terms,
        }
    }

    fn fail(&self) -> Error {
        Error::Convergence {
            what: "Matsubara summation",
            estimate: self.sum,
            error: self.scale * self.spec.term_cutoff_ratio,
        }
    }
}

/// ½·term(0) + Σ_{l≥1} term(l), evaluated sequentially.
pub fn matsubara_sum<F: FnMut(usize) -> f64>(mut term: F, spec: &SummationSpec) -> Result<SummationResult> {
    let mut acc = Accumulator::new(spec, false);
    for l in 0..=spec.max_matsubara_index {
        if acc.push(l, term(l)) {
            return Ok(acc.finish(l));
        }
    }
    Err(acc.fail())
}

/// Parallel variant: terms are evaluated in blocks on the rayon pool and reduced in
/// index order, so the result is independent of the schedule.
pub fn matsubara_sum_par<F>(term: F, spec: &SummationSpec, keep_terms: bool) -> Result<SummationResult>
where
    F: Fn(usize) -> Result<f64> + Sync,
{
    matsubara_sum_par_aux(|l| term(l).map(|v| (v, 0.0)), spec, keep_terms).map(|(r, _)| r)
}

/// Like [`matsubara_sum_par`], but each term carries an auxiliary quantity (an
/// error estimate, say) whose prime-weighted sum over the retained terms is
/// returned alongside.
pub fn matsubara_sum_par_aux<F>(term: F, spec: &SummationSpec, keep_terms: bool) -> Result<(SummationResult, f64)>
where
    F: Fn(usize) -> Result<(f64, f64)> + Sync,
{
    const BLOCK: usize = 64;
    let mut acc = Accumulator::new(spec, keep_terms);
    let mut aux = 0.0;
    let mut start = 0usize;
    while start <= spec.max_matsubara_index {
        let end = (start + BLOCK).min(spec.max_matsubara_index + 1);
        let block: Vec<Result<(f64, f64)>> = (start..end).into_par_iter().map(&term).collect();
        for (offset, value) in block.into_iter().enumerate() {
            let l = start + offset;
            let (v, extra) = value?;
            aux += if l == 0 { 0.5 * extra } else { extra };
            if acc.push(l, v) {
                return Ok((acc.finish(l), aux));
            }
        }
        start = end;
    }
    Err(acc.fail())
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums; returns the
/// highest-order even-column estimate.
pub fn wynn_epsilon(partials: &[f64]) -> f64 {
    let n = partials.len();
    if n < 3 {
        return *partials.last().unwrap_or(&0.0);
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partials.to_vec();
    let mut best = partials[n - 1];
    for k in 1..n {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 {
                return cur[i + 1];
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        if k % 2 == 0 {
            if let Some(&v) = next.last() {
                if v.is_finite() {
                    best = v;
                }
            }
        }
        prev = cur;
        cur = next;
        if cur.len() < 2 {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_term_gets_half_weight() {
        let r = matsubara_sum(|l| if l == 0 { 1.0 } else { 0.0 }, &SummationSpec::default()).unwrap();
        assert_eq!(r.value, 0.5);
    }

    #[test]
    fn geometric_series() {
        let r = matsubara_sum(|l| 0.5f64.powi(l as i32), &SummationSpec::default()).unwrap();
        assert!((r.value - 1.5).abs() < 1e-9);
        assert!(r.truncation_index > 30);
    }

    #[test]
    fn exponential_series_closed_form() {
        let exact = 0.5 + 1.0 / (std::f64::consts::E - 1.0);
        let r = matsubara_sum(|l| (-(l as f64)).exp(), &SummationSpec::default()).unwrap();
        assert!((r.value - exact).abs() < 1e-9);
        let direct: f64 = 0.5 + (1..200).map(|l| (-(l as f64)).exp()).sum::<f64>();
        assert!((direct - exact).abs() < 1e-14);
    }

    #[test]
    fn all_zero_terms_give_exact_zero() {
        let r = matsubara_sum(|_| 0.0, &SummationSpec::default()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn parallel_matches_sequential_bitwise() {
        let spec = SummationSpec::default();
        let f = |l: usize| 1.0 / (1.0 + (l as f64).powi(3)) * (-(l as f64) / 50.0).exp();
        let s = matsubara_sum(f, &spec).unwrap();
        let p = matsubara_sum_par(|l| Ok(f(l)), &spec, true).unwrap();
        assert_eq!(s.value.to_bits(), p.value.to_bits());
        assert_eq!(s.truncation_index, p.truncation_index);
        assert_eq!(p.terms.unwrap().len(), p.truncation_index + 1);
    }

    #[test]
    fn slow_series_reports_failure_with_estimate() {
        let spec = SummationSpec::new(1e-10, 100).unwrap();
        match matsubara_sum(|l| 1.0 / (1.0 + l as f64), &spec) {
            Err(Error::Convergence { estimate, .. }) => assert!(estimate > 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn epsilon_acceleration_on_alternating_series() {
        // ln 2 = 1 − 1/2 + 1/3 − ...
        let mut partials = Vec::new();
        let mut s = 0.0;
        for k in 1..=12 {
            s += if k % 2 == 1 { 1.0 } else { -1.0 } / f64::from(k);
            partials.push(s);
        }
        let accelerated = wynn_epsilon(&partials);
        assert!((accelerated - std::f64::consts::LN_2).abs() < 1e-8);
        assert!((s - std::f64::consts::LN_2).abs() > 1e-2);
    }

    #[test]
    fn spec_invariants() {
        assert!(SummationSpec::new(1e-5, 1000).is_err());
        assert!(SummationSpec::new(1e-10, 99).is_err());
        assert!(SummationSpec::new(1e-6, 100).is_ok());
    }
}
