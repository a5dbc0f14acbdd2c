//! Low-temperature thermodynamics: closed-form asymptotes, entropy evaluation and
//! the Nernst heat-theorem audit.

mod asymptotics;
mod fit;

pub use asymptotics::*;
pub use fit::{fit_powers, fit_powers_weighted, PowerFit};

use crate::constants::effective_temperature;
use crate::dielectric::{screening_kappa, DielectricModel, Statistics};
use crate::engine::{entropy_atom_wall, entropy_plates, AtomJob, EnergyResult, LifshitzJob};
use crate::error::{Error, Result};
use crate::reflection::ReflectionPolicy;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// A temperature-parameterised job of either geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "geometry", rename_all = "kebab-case")]
pub enum System {
    Plates(LifshitzJob),
    AtomWall(AtomJob),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    Plates,
    AtomWall,
}

impl System {
    pub fn geometry(&self) -> Geometry {
        match self {
            System::Plates(_) => Geometry::Plates,
            System::AtomWall(_) => Geometry::AtomWall,
        }
    }

    pub fn separation(&self) -> f64 {
        match self {
            System::Plates(j) => j.separation,
            System::AtomWall(j) => j.separation,
        }
    }

    pub fn temperature(&self) -> f64 {
        match self {
            System::Plates(j) => j.temperature,
            System::AtomWall(j) => j.temperature,
        }
    }

    pub fn policy(&self) -> ReflectionPolicy {
        match self {
            System::Plates(j) => j.policy,
            System::AtomWall(j) => j.policy,
        }
    }

    /// The wall material; plates must be symmetric for the closed forms to apply.
    pub fn wall(&self) -> Result<&DielectricModel> {
        match self {
            System::Plates(j) if j.material_1 == j.material_2 => Ok(&j.material_1),
            System::Plates(_) => Err(Error::invalid("the asymptotic audit needs two identical plates")),
            System::AtomWall(j) => Ok(&j.wall),
        }
    }

    pub fn at_temperature(&self, temperature: f64) -> Self {
        match self {
            System::Plates(j) => System::Plates(j.at(j.separation, temperature)),
            System::AtomWall(j) => System::AtomWall(j.at(j.separation, temperature)),
        }
    }

    /// Leading power of the entropy of a Nernst-compliant system.
    pub fn entropy_power(&self) -> i32 {
        match self {
            System::Plates(_) => 2,
            System::AtomWall(_) => 3,
        }
    }
}

/// S = −∂𝓕/∂T in J·K⁻¹·m⁻² (plates) or J/K (atom).
pub fn entropy(system: &System) -> Result<EnergyResult> {
    match system {
        System::Plates(j) => entropy_plates(j),
        System::AtomWall(j) => entropy_atom_wall(j),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelClass {
    OscillatorOnly,
    DcAugmented,
    ScreenedVanishingN,
    ScreenedFixedN,
    PlasmaLike,
}

impl ModelClass {
    pub const ALL: [ModelClass; 5] = [
        ModelClass::OscillatorOnly,
        ModelClass::DcAugmented,
        ModelClass::ScreenedVanishingN,
        ModelClass::ScreenedFixedN,
        ModelClass::PlasmaLike,
    ];

    /// Classifies a wall material under a reflection policy.
    pub fn infer(model: &DielectricModel, policy: ReflectionPolicy) -> Result<Self> {
        use ReflectionPolicy as P;
        if matches!(policy, P::PlasmaLike | P::IdealMetal) {
            return Ok(ModelClass::PlasmaLike);
        }
        match model {
            DielectricModel::Oscillator(_) | DielectricModel::SiLorentz(_) | DielectricModel::SiLogBand(_) => {
                Ok(ModelClass::OscillatorOnly)
            }
            DielectricModel::PlasmaLike { plasma_frequency, .. } => Ok(if *plasma_frequency > 0.0 {
                ModelClass::PlasmaLike
            } else {
                ModelClass::OscillatorOnly
            }),
            DielectricModel::Drude { .. } => Err(Error::invalid(
                "Drude metals have no model class in the Nernst audit; use the plasma policy",
            )),
            DielectricModel::DcAugmented { carriers, .. } => match policy {
                P::Screened | P::StaticScreened => Ok(if carriers.density.vanishes_at_zero() {
                    ModelClass::ScreenedVanishingN
                } else {
                    ModelClass::ScreenedFixedN
                }),
                _ if !carriers.is_dielectric() => Err(Error::invalid(
                    "carriers that do not freeze out describe a metal; use the plasma or screened policy",
                )),
                P::Standard => Ok(ModelClass::OscillatorOnly),
                _ => Ok(ModelClass::DcAugmented),
            },
        }
    }

    /// Verdict the theory predicts for this class.
    pub fn expected(self) -> ExpectedVerdict {
        match self {
            ModelClass::DcAugmented | ModelClass::ScreenedFixedN => ExpectedVerdict::Violated,
            _ => ExpectedVerdict::Satisfied,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectedVerdict {
    Satisfied,
    Violated,
}

impl std::str::FromStr for ExpectedVerdict {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "satisfied" => Ok(ExpectedVerdict::Satisfied),
            "violated" => Ok(ExpectedVerdict::Violated),
            other => Err(Error::invalid(format!("expected `satisfied` or `violated`, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NernstSatisfied,
    NernstViolated { residual_entropy: f64 },
}

impl Verdict {
    pub fn matches(&self, expected: ExpectedVerdict) -> bool {
        matches!(
            (self, expected),
            (Verdict::NernstSatisfied, ExpectedVerdict::Satisfied)
                | (Verdict::NernstViolated { .. }, ExpectedVerdict::Violated)
        )
    }
}

/// Log-spaced temperature grid in units of T_eff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditGrid {
    pub tau_min: f64,
    pub tau_max: f64,
    pub points: usize,
}

impl Default for AuditGrid {
    fn default() -> Self {
        AuditGrid {
            tau_min: 1e-3,
            tau_max: 5e-2,
            points: 12,
        }
    }
}

impl AuditGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_min > 0.0 && self.tau_min < self.tau_max && self.tau_max < 0.1) {
            return Err(Error::invalid(format!(
                "audit window [{}, {}] must lie inside (0, 0.1) in units of T_eff",
                self.tau_min, self.tau_max
            )));
        }
        if self.points < 6 {
            return Err(Error::IllConditioned(format!("{} grid points, at least 6 needed", self.points)));
        }
        Ok(())
    }

    /// Temperatures in kelvin at separation a.
    pub fn temperatures(&self, separation: f64) -> Vec<f64> {
        let t_eff = effective_temperature(separation);
        let ratio = self.tau_max / self.tau_min;
        (0..self.points)
            .map(|i| t_eff * self.tau_min * ratio.powf(i as f64 / (self.points - 1) as f64))
            .collect()
    }

    /// The same window with twice the point density.
    pub fn refined(&self) -> Self {
        AuditGrid {
            points: 2 * self.points - 1,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropySample {
    /// K.
    pub temperature: f64,
    pub entropy: f64,
    /// Absolute numerical error estimate of `entropy`.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub schema_version: u32,
    pub model_class: ModelClass,
    pub geometry: Geometry,
    pub policy: ReflectionPolicy,
    /// m.
    pub separation: f64,
    /// (T_min, T_max) in K.
    pub fit_window: (f64, f64),
    pub effective_temperature: f64,
    /// Closed-form S(T → 0).
    pub predicted_s0: f64,
    pub fitted_s0: f64,
    pub s0_uncertainty: f64,
    /// Powers of T in the fit, the constant included.
    pub fit_powers: Vec<i32>,
    /// Fitted coefficient of the leading power T^p.
    pub leading_coefficient: f64,
    /// Closed-form T^p coefficient where one exists (oscillator plates).
    pub predicted_leading_coefficient: Option<f64>,
    pub verdict: Verdict,
    /// |fitted − predicted|/|predicted| for a violation with a non-zero prediction.
    pub relative_discrepancy: Option<f64>,
    pub samples: Vec<EntropySample>,
    pub skipped_points: usize,
}

impl AsymptoticReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are serialisable")
    }
}

/// The closed-form residual entropy S(T → 0) of a model class.
pub fn predicted_residual(system: &System, class: ModelClass) -> Result<f64> {
    let wall = system.wall()?;
    let (a, eps0) = (system.separation(), wall.static_permittivity());
    Ok(match (class, system) {
        (ModelClass::DcAugmented, System::Plates(_)) => dc_residual_entropy_plates(a, eps0)?,
        (ModelClass::DcAugmented, System::AtomWall(j)) => dc_residual_entropy_atom(a, eps0, j.atom.static_polarizability),
        (ModelClass::ScreenedFixedN, _) => {
            let carriers = wall
                .carriers()
                .ok_or_else(|| Error::invalid("a screened model class needs a dc-augmented material"))?;
            // Debye–Hückel lengths shrink to zero with T at fixed n; Thomas–Fermi ones stay put.
            let kappa0 = match carriers.statistics {
                Statistics::MaxwellBoltzmann => f64::INFINITY,
                Statistics::FermiDirac => screening_kappa(carriers, eps0, 0.0)?,
            };
            match system {
                System::Plates(_) => -BOLTZMANN_OVER_16PI * screened_bracket_plates(a, eps0, kappa0)? / (a * a),
                System::AtomWall(j) => {
                    crate::constants::BOLTZMANN * j.atom.static_polarizability / (8.0 * a.powi(3))
                        * screened_bracket_atom(a, eps0, kappa0)?
                }
            }
        }
        _ => 0.0,
    })
}

const BOLTZMANN_OVER_16PI: f64 = crate::constants::BOLTZMANN / (16.0 * std::f64::consts::PI);

/// Entropy on every grid temperature. Points whose evaluation fails are dropped.
pub fn entropy_samples(system: &System, temperatures: &[f64]) -> (Vec<EntropySample>, usize) {
    let results: Vec<Option<EntropySample>> = temperatures
        .par_iter()
        .map(|&t| {
            entropy(&system.at_temperature(t)).ok().map(|r| EntropySample {
                temperature: t,
                entropy: r.value,
                error: r.quadrature_error * r.value.abs(),
            })
        })
        .collect();
    let skipped = results.iter().filter(|r| r.is_none()).count();
    (results.into_iter().flatten().collect(), skipped)
}

/// Fit of S(T) = S₀ + Σ_j c_j T^{p+j} with its S₀ uncertainty.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyFit {
    pub fit: PowerFit,
    pub s0: f64,
    /// Quadrature sum of the statistical error, the shift against the fit with one
    /// power fewer, and the propagated sample errors.
    pub s0_uncertainty: f64,
}

/// Fits samples with the constant, the leading power p and up to three higher
/// powers (fewer when the grid is short).
pub fn fit_entropy(samples: &[EntropySample], power: i32) -> Result<EntropyFit> {
    let n = samples.len();
    if n < 6 {
        return Err(Error::IllConditioned(format!("{n} usable grid points, at least 6 needed")));
    }
    let extra = ((n - 3) / 2).min(3) as i32;
    let basis = |k: i32| -> Vec<i32> { std::iter::once(0).chain((0..=k).map(|j| power + j)).collect() };
    let t: Vec<f64> = samples.iter().map(|s| s.temperature).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.entropy).collect();
    let sigma: Vec<f64> = samples.iter().map(|s| s.error).collect();
    let full = fit_powers(&t, &y, &basis(extra))?;
    let reduced = fit_powers(&t, &y, &basis(extra - 1))?;
    let s0 = full.coefficients[0];
    let truncation = s0 - reduced.coefficients[0];
    let s0_uncertainty =
        (full.standard_errors[0].powi(2) + truncation.powi(2) + full.propagated_error(0, &sigma).powi(2)).sqrt();
    Ok(EntropyFit {
        fit: full,
        s0,
        s0_uncertainty,
    })
}

/// Entropy on the grid, fit, and classification against 3× the S₀ uncertainty.
pub fn nernst_audit(system: &System, class: ModelClass, grid: &AuditGrid) -> Result<AsymptoticReport> {
    grid.validate()?;
    let a = system.separation();
    let temperatures = grid.temperatures(a);
    let (samples, skipped) = entropy_samples(system, &temperatures);
    let power = system.entropy_power();
    let fitted = fit_entropy(&samples, power)?;
    let predicted_s0 = predicted_residual(system, class)?;
    let eps0 = system.wall()?.static_permittivity();
    let verdict = if fitted.s0.abs() < 3.0 * fitted.s0_uncertainty || fitted.s0 == 0.0 {
        Verdict::NernstSatisfied
    } else {
        Verdict::NernstViolated {
            residual_entropy: fitted.s0,
        }
    };
    let relative_discrepancy = match verdict {
        Verdict::NernstViolated { .. } if predicted_s0 != 0.0 => {
            Some(((fitted.s0 - predicted_s0) / predicted_s0).abs())
        }
        _ => None,
    };
    let predicted_leading_coefficient = match (system, class) {
        (System::Plates(_), ModelClass::OscillatorOnly | ModelClass::ScreenedVanishingN) => {
            Some(AsymptoticCoefficients::new(a, eps0, 1.0, 1.0)?.quadratic_entropy_coefficient)
        }
        _ => None,
    };
    Ok(AsymptoticReport {
        schema_version: REPORT_SCHEMA_VERSION,
        model_class: class,
        geometry: system.geometry(),
        policy: system.policy(),
        separation: a,
        fit_window: (temperatures[0], temperatures[temperatures.len() - 1]),
        effective_temperature: effective_temperature(a),
        predicted_s0,
        fitted_s0: fitted.s0,
        s0_uncertainty: fitted.s0_uncertainty,
        fit_powers: fitted.fit.powers.clone(),
        leading_coefficient: fitted.fit.coefficient(power).unwrap_or(0.0),
        predicted_leading_coefficient,
        verdict,
        relative_discrepancy,
        samples,
        skipped_points: skipped,
    })
}

/// C_D from the T³ coefficient of the atom–wall entropy of an oscillator wall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdFit {
    pub c_d: f64,
    /// One standard error of the T³ coefficient, propagated to C_D.
    pub uncertainty: f64,
    pub samples: Vec<EntropySample>,
}

/// Fits S^A = Σ_{j=0..3} c_j T^{3+j} (no constant: the oscillator wall obeys the
/// Nernst theorem) and converts c_0 to C_D through the (π³k_B/30a³)α(0)C_D/T_eff³ law.
pub fn fit_c_d_from_samples(separation: f64, alpha0: f64, samples: &[EntropySample]) -> Result<CdFit> {
    let n = samples.len();
    if n < 6 {
        return Err(Error::IllConditioned(format!("{n} usable grid points, at least 6 needed")));
    }
    let t: Vec<f64> = samples.iter().map(|s| s.temperature).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.entropy).collect();
    let powers: Vec<i32> = (3..=3 + ((n - 3) / 2).min(3) as i32).collect();
    let f = fit_powers(&t, &y, &powers)?;
    let unit = AsymptoticCoefficients::new(separation, 2.0, alpha0, 1.0)?.cubic_entropy_coefficient;
    let c_d = f.coefficients[0] / unit;
    if !(c_d > 0.0 && c_d.is_finite()) {
        return Err(Error::IllConditioned(format!("fitted C_D = {c_d} is not positive")));
    }
    Ok(CdFit {
        c_d,
        uncertainty: f.standard_errors[0] / unit,
        samples: samples.to_vec(),
    })
}

/// Fits C_D for the wall and atom of `job` (its temperature is ignored).
pub fn fit_c_d(job: &AtomJob, grid: &AuditGrid) -> Result<CdFit> {
    grid.validate()?;
    if ModelClass::infer(&job.wall, job.policy)? != ModelClass::OscillatorOnly {
        return Err(Error::invalid("C_D is defined for walls without free carriers"));
    }
    let system = System::AtomWall(job.clone());
    let (samples, _) = entropy_samples(&system, &grid.temperatures(job.separation));
    fit_c_d_from_samples(job.separation, job.atom.static_polarizability, &samples)
}

fn cd_cache() -> &'static Mutex<HashMap<String, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<String, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// [`fit_c_d`] memoised on (wall, atom, separation, policy, numerics, grid).
pub fn cached_c_d(job: &AtomJob, grid: &AuditGrid) -> Result<f64> {
    let key = serde_json::to_string(&(&job.at(job.separation, 0.0), grid)).expect("jobs are serialisable");
    if let Some(&c) = cd_cache().lock().expect("cache lock").get(&key) {
        return Ok(c);
    }
    let c = fit_c_d(job, grid)?.c_d;
    cd_cache().lock().expect("cache lock").insert(key, c);
    Ok(c)
}
