//! Adaptive Gauss–Kronrod (10/21) quadrature on finite intervals and on [0, ∞) for
//! integrands carrying an exponential e^{−y} envelope.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_282_677_709_604,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    /// Absolute error floor, relative to ∫|f|; also fixes the truncation point of
    /// semi-infinite ranges through e^{−Y_max} < absolute_floor.
    pub absolute_floor: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            relative_tolerance: 1e-9,
            absolute_floor: 1e-15,
            max_subdivisions: 400,
        }
    }
}

impl QuadratureSpec {
    pub fn new(relative_tolerance: f64, absolute_floor: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            relative_tolerance,
            absolute_floor,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0 && self.relative_tolerance <= 1e-3) {
            return Err(Error::Domain {
                what: "relative_tolerance",
                value: self.relative_tolerance,
                domain: "(0, 1e-3]",
            });
        }
        if !(self.absolute_floor > 0.0 && self.absolute_floor < 1e-3) {
            return Err(Error::Domain {
                what: "absolute_floor",
                value: self.absolute_floor,
                domain: "(0, 1e-3)",
            });
        }
        if self.max_subdivisions < 8 {
            return Err(Error::Domain {
                what: "max_subdivisions",
                value: self.max_subdivisions as f64,
                domain: ">= 8",
            });
        }
        Ok(())
    }

    /// Upper limit of the semi-infinite range: e^{−Y}·Y³ drops below the floor.
    pub fn semi_infinite_cutoff(&self) -> f64 {
        let log_floor = -self.absolute_floor.ln();
        log_floor + 4.0 * log_floor.ln()
    }

    pub fn with_relative_tolerance(mut self, rel: f64) -> Self {
        self.relative_tolerance = rel;
        self
    }
}

/// The panels an adaptive run settled on. Re-applying the fixed rule on the same
/// panels gives a result that is a smooth function of any integrand parameter.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Partition {
    pub intervals: Vec<(f64, f64)>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
    pub partition: Partition,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One 21-point Kronrod panel: (value, error estimate, ∫|f|).
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    abs *= half.abs();
    asc *= half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs);
    }
    (value, err, abs)
}

/// Adaptive integration of `f` over [a, b].
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let (value, error, abs) = gk21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error, abs });
    let mut total = value;
    let mut total_err = error;
    let mut total_abs = abs;
    let mut subdivisions = 1usize;
    loop {
        let tol = (spec.relative_tolerance * total.abs()).max(spec.absolute_floor * total_abs);
        if !total.is_finite() {
            return Err(Error::Convergence {
                what: "adaptive quadrature (non-finite integrand)",
                estimate: total,
                error: total_err,
            });
        }
        if total_err <= tol {
            break;
        }
        if subdivisions >= spec.max_subdivisions {
            let (value, error) = sum_panels(&heap);
            return Err(Error::Convergence {
                what: "adaptive quadrature",
                estimate: value,
                error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e3 * f64::EPSILON * mid.abs() {
            // The panel cannot be split further; its error is at roundoff level.
            heap.push(Panel { error: 0.0, ..worst });
            total_err -= worst.error;
            continue;
        }
        let (v1, e1, a1) = gk21(&f, worst.a, mid);
        let (v2, e2, a2) = gk21(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        total_abs += a1 + a2 - worst.abs;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1, abs: a1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2, abs: a2 });
        subdivisions += 1;
    }
    let (value, error) = sum_panels(&heap);
    Ok(QuadratureResult {
        value,
        error,
        subdivisions,
        partition: collect(&heap),
    })
}

/// ∫₀^∞ f(y) dy for integrands with at least an e^{−y} decay, truncated at
/// [`QuadratureSpec::semi_infinite_cutoff`].
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    integrate_interval(f, 0.0, spec.semi_infinite_cutoff(), spec)
}

/// Applies the fixed 21-point rule on every panel of `partition`.
pub fn integrate_on_partition<F: Fn(f64) -> f64>(f: F, partition: &Partition) -> f64 {
    partition
        .intervals
        .iter()
        .map(|&(a, b)| gk21(&f, a, b).0)
        .sum()
}

fn collect(heap: &BinaryHeap<Panel>) -> Partition {
    let mut intervals: Vec<(f64, f64)> = heap.iter().map(|p| (p.a, p.b)).collect();
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    Partition { intervals }
}

// Summation in abscissa order so the result does not depend on heap layout.
fn sum_panels(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    panels
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::polylog3;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let k: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-14);
        assert!((g - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rule_is_exact_for_high_degree_polynomials() {
        for n in 0..=29 {
            let (v, _, _) = gk21(&|x: f64| x.powi(n), 0.0, 1.0);
            assert!((v - 1.0 / f64::from(n + 1)).abs() < 1e-14, "degree {n}");
        }
    }

    #[test]
    fn gamma_function_moments() {
        let spec = QuadratureSpec::default();
        let one = integrate_semi_infinite(|y| y * (-y).exp(), &spec).unwrap();
        assert!((one.value - 1.0).abs() < 1e-12);
        let two = integrate_semi_infinite(|y| y * y * (-y).exp(), &spec).unwrap();
        assert!((two.value - 2.0).abs() < 1e-12);
        assert!(two.subdivisions >= 1 && !two.partition.is_empty());
    }

    #[test]
    fn log_integral_is_minus_trilog() {
        let spec = QuadratureSpec::default();
        let x: f64 = 0.25;
        let r = integrate_semi_infinite(|y| y * (-x * (-y).exp()).ln_1p(), &spec).unwrap();
        assert!((r.value + polylog3(x).unwrap()).abs() < 1e-11);
    }

    #[test]
    fn endpoint_log_singularity() {
        let spec = QuadratureSpec::default();
        // ∫ y ln(1 − e^{−y}) dy = −ζ(3)
        let r = integrate_semi_infinite(|y| y * (-(-y).exp()).ln_1p(), &spec).unwrap();
        assert!((r.value + crate::numerics::zeta3()).abs() < 1e-10);
    }

    #[test]
    fn partition_reuse_reproduces_value() {
        let spec = QuadratureSpec::default();
        let r = integrate_semi_infinite(|y| y * y * (-y).exp() / (1.0 + y), &spec).unwrap();
        let again = integrate_on_partition(|y| y * y * (-y).exp() / (1.0 + y), &r.partition);
        assert!((again - r.value).abs() < 1e-15 * r.value.abs().max(1.0) * 10.0);
    }

    #[test]
    fn non_convergence_reports_best_estimate() {
        let spec = QuadratureSpec::new(1e-12, 1e-16, 8).unwrap();
        let err = integrate_interval(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &spec).unwrap_err();
        match err {
            Error::Convergence { estimate, .. } => assert!(estimate.is_finite()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn spec_invariants() {
        assert!(QuadratureSpec::new(0.0, 1e-15, 100).is_err());
        assert!(QuadratureSpec::new(1e-2, 1e-15, 100).is_err());
        assert!(QuadratureSpec::new(1e-9, 1e-15, 7).is_err());
        assert!(QuadratureSpec::new(1e-3, 1e-15, 8).is_ok());
    }
}
