//! Lifshitz free energies, forces and entropies for plate–plate and atom–wall
//! geometries.
//!
//! Everything is evaluated in the variables ζ = 2aξ/c, y = 2aq. The plate free
//! energy per unit area is
//! F = (k_B T/8πa²) Σ'_l ∫_{ζ_l}^∞ y dy {ln[1 − r_TM² e^{−y}] + ln[1 − r_TE² e^{−y}]},
//! the atom–wall free energy
//! F^A = −(k_B T/8a³) Σ'_l α_l ∫_{ζ_l}^∞ y² e^{−y} [2r_TM − (ζ_l²/y²)(r_TM + r_TE)] dy.
//! Inner integrals run over t = y − ζ_l ∈ [0, ∞).

use crate::constants::{effective_temperature, BOLTZMANN, HBAR, SPEED_OF_LIGHT};
use crate::dielectric::{AtomModel, DielectricModel};
use crate::error::{Error, Result};
use crate::numerics::{
    derivative_central, integrate_on_partition, integrate_semi_infinite, matsubara_sum_par_aux, QuadratureResult,
    QuadratureSpec, SummationSpec,
};
use crate::reflection::{resolve, Interface, ReflectionPolicy};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::PI;

/// Tolerances shared by every evaluation of a job.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    pub quadrature: QuadratureSpec,
    pub summation: SummationSpec,
    /// Keep the individual Matsubara terms in the result.
    pub breakdown: bool,
}

impl Numerics {
    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        self.summation.validate()
    }
}

/// Two parallel plates (semispaces) at separation a and temperature T.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifshitzJob {
    /// Separation a, m.
    pub separation: f64,
    /// Temperature T, K.
    pub temperature: f64,
    pub material_1: DielectricModel,
    pub material_2: DielectricModel,
    pub policy: ReflectionPolicy,
    #[serde(default)]
    pub numerics: Numerics,
}

impl LifshitzJob {
    pub fn new(
        separation: f64,
        temperature: f64,
        material_1: DielectricModel,
        material_2: DielectricModel,
        policy: ReflectionPolicy,
    ) -> Result<Self> {
        let job = LifshitzJob {
            separation,
            temperature,
            material_1,
            material_2,
            policy,
            numerics: Numerics::default(),
        };
        job.validate()?;
        Ok(job)
    }

    /// Two plates of the same material.
    pub fn symmetric(separation: f64, temperature: f64, material: DielectricModel, policy: ReflectionPolicy) -> Result<Self> {
        LifshitzJob::new(separation, temperature, material.clone(), material, policy)
    }

    pub fn with_numerics(mut self, numerics: Numerics) -> Self {
        self.numerics = numerics;
        self
    }

    pub fn at(&self, separation: f64, temperature: f64) -> Self {
        LifshitzJob {
            separation,
            temperature,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_geometry(self.separation, self.temperature)?;
        self.numerics.validate()
    }

    fn interfaces(&self, xi: f64, temperature: f64, separation: f64) -> Result<(Interface, Interface)> {
        Ok((
            resolve(self.policy, &self.material_1, xi, temperature, separation)?,
            resolve(self.policy, &self.material_2, xi, temperature, separation)?,
        ))
    }
}

/// A ground-state atom at distance a from a wall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomJob {
    pub separation: f64,
    pub temperature: f64,
    pub wall: DielectricModel,
    pub atom: AtomModel,
    pub policy: ReflectionPolicy,
    #[serde(default)]
    pub numerics: Numerics,
}

impl AtomJob {
    pub fn new(separation: f64, temperature: f64, wall: DielectricModel, atom: AtomModel, policy: ReflectionPolicy) -> Result<Self> {
        let job = AtomJob {
            separation,
            temperature,
            wall,
            atom,
            policy,
            numerics: Numerics::default(),
        };
        job.validate()?;
        Ok(job)
    }

    pub fn with_numerics(mut self, numerics: Numerics) -> Self {
        self.numerics = numerics;
        self
    }

    pub fn at(&self, separation: f64, temperature: f64) -> Self {
        AtomJob {
            separation,
            temperature,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_geometry(self.separation, self.temperature)?;
        self.numerics.validate()
    }
}

fn check_geometry(separation: f64, temperature: f64) -> Result<()> {
    if !(separation > 0.0 && separation.is_finite()) {
        return Err(Error::Domain {
            what: "separation",
            value: separation,
            domain: "a > 0",
        });
    }
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::Domain {
            what: "temperature",
            value: temperature,
            domain: "T >= 0",
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    /// J/m² for plates, J for an atom.
    pub value: f64,
    /// Last Matsubara index summed (0 for the zero-temperature branch).
    pub truncation_index: usize,
    /// Accumulated quadrature error estimate relative to |value|.
    pub quadrature_error: f64,
    /// Unweighted Matsubara terms in the dimensionless normalisation.
    pub per_term_breakdown: Option<Vec<f64>>,
}

/// ζ_l = 2aξ_l/c = 2πl·T/T_eff.
fn zeta_l(separation: f64, temperature: f64, l: usize) -> f64 {
    2.0 * PI * l as f64 * temperature / effective_temperature(separation)
}

fn xi_from_zeta(separation: f64, zeta: f64) -> f64 {
    zeta * SPEED_OF_LIGHT / (2.0 * separation)
}

#[inline]
fn plate_integrand(i1: Interface, i2: Interface, zeta: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| {
        let y = zeta + t;
        let e = (-y).exp();
        let (tm1, te1) = i1.coefficients(zeta, y);
        let (tm2, te2) = i2.coefficients(zeta, y);
        y * ((-tm1 * tm2 * e).ln_1p() + (-te1 * te2 * e).ln_1p())
    }
}

/// y² e^{−y}[2r_TM − (ζ²/y²)(r_TM + r_TE)]·(−y/a)ⁿ, the n-th separation derivative
/// of the atom–wall kernel.
#[inline]
fn atom_integrand(wall: Interface, zeta: f64, order: i32, separation: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| {
        let y = zeta + t;
        let (tm, te) = wall.coefficients(zeta, y);
        let bracket = 2.0 * y * y * tm - zeta * zeta * (tm + te);
        let base = bracket * (-y).exp();
        if order == 0 {
            base
        } else {
            base * (-y / separation).powi(order)
        }
    }
}

fn transparent(i1: &Interface, i2: &Interface) -> bool {
    i1.is_transparent() || i2.is_transparent()
}

/// Re-labels a dimensionless convergence failure with the physical prefactor so the
/// attached estimate is in the units of the quantity requested.
fn rescale(err: Error, factor: f64) -> Error {
    match err {
        Error::Convergence { what, estimate, error } => Error::Convergence {
            what,
            estimate: estimate * factor,
            error: error * factor.abs(),
        },
        other => other,
    }
}

fn finish(value: f64, sum: f64, err: f64, truncation_index: usize, terms: Option<Vec<f64>>) -> EnergyResult {
    EnergyResult {
        value,
        truncation_index,
        quadrature_error: if sum == 0.0 { 0.0 } else { (err / sum).abs() },
        per_term_breakdown: terms,
    }
}

fn plate_term(job: &LifshitzJob, l: usize) -> Result<(f64, f64)> {
    let (a, t) = (job.separation, job.temperature);
    let xi = crate::constants::matsubara_frequency(t, l);
    let (i1, i2) = job.interfaces(xi, t, a)?;
    if transparent(&i1, &i2) {
        return Ok((0.0, 0.0));
    }
    let q = integrate_semi_infinite(plate_integrand(i1, i2, zeta_l(a, t, l)), &job.numerics.quadrature)?;
    Ok((q.value, q.error))
}

/// Casimir free energy per unit area, J/m². T = 0 is evaluated by the
/// continuous-frequency branch.
pub fn free_energy_plates(job: &LifshitzJob) -> Result<EnergyResult> {
    job.validate()?;
    if job.temperature == 0.0 {
        return free_energy_plates_zero_t(job);
    }
    let prefactor = BOLTZMANN * job.temperature / (8.0 * PI * job.separation.powi(2));
    let (sum, err) = matsubara_sum_par_aux(|l| plate_term(job, l), &job.numerics.summation, job.numerics.breakdown)
        .map_err(|e| rescale(e, prefactor))?;
    Ok(finish(prefactor * sum.value, sum.value, err, sum.truncation_index, sum.terms))
}

/// Nested quadrature ∫₀^∞ dζ g(ζ) where g itself is an adaptive integral.
fn integrate_over_zeta<G>(spec: &QuadratureSpec, inner: G) -> Result<QuadratureResult>
where
    G: Fn(f64, &QuadratureSpec) -> Result<f64>,
{
    let inner_spec = spec.with_relative_tolerance((0.1 * spec.relative_tolerance).max(1e-14));
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let outer = integrate_semi_infinite(
        |zeta| match inner(zeta, &inner_spec) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        spec,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    outer
}

/// Zero-temperature Casimir energy per unit area,
/// E = ħc/(32π²a³) ∫₀^∞ dζ ∫_ζ^∞ y dy {…}.
pub fn free_energy_plates_zero_t(job: &LifshitzJob) -> Result<EnergyResult> {
    job.validate()?;
    let a = job.separation;
    let prefactor = HBAR * SPEED_OF_LIGHT / (32.0 * PI * PI * a.powi(3));
    let outer = integrate_over_zeta(&job.numerics.quadrature, |zeta, spec| {
        let (i1, i2) = job.interfaces(xi_from_zeta(a, zeta), 0.0, a)?;
        if transparent(&i1, &i2) {
            return Ok(0.0);
        }
        Ok(integrate_semi_infinite(plate_integrand(i1, i2, zeta), spec)?.value)
    })
    .map_err(|e| rescale(e, prefactor))?;
    Ok(finish(prefactor * outer.value, outer.value, outer.error, 0, None))
}

fn atom_term(job: &AtomJob, l: usize, order: i32) -> Result<(f64, f64)> {
    let (a, t) = (job.separation, job.temperature);
    let xi = crate::constants::matsubara_frequency(t, l);
    let alpha = job.atom.polarizability(xi);
    let wall = resolve(job.policy, &job.wall, xi, t, a)?;
    if alpha == 0.0 || wall.is_transparent() {
        return Ok((0.0, 0.0));
    }
    let q = integrate_semi_infinite(atom_integrand(wall, zeta_l(a, t, l), order, a), &job.numerics.quadrature)?;
    Ok((alpha * q.value, alpha * q.error))
}

/// Casimir–Polder free energy of the atom, J.
pub fn free_energy_atom_wall(job: &AtomJob) -> Result<EnergyResult> {
    atom_wall_derivative(job, 0)
}

/// n-th derivative ∂ⁿ𝓕^A/∂aⁿ (J/mⁿ), taken under the integral sign.
pub fn atom_wall_derivative(job: &AtomJob, order: i32) -> Result<EnergyResult> {
    job.validate()?;
    if job.temperature == 0.0 {
        return atom_wall_zero_t(job, order);
    }
    let prefactor = -BOLTZMANN * job.temperature / (8.0 * job.separation.powi(3));
    let (sum, err) = matsubara_sum_par_aux(|l| atom_term(job, l, order), &job.numerics.summation, job.numerics.breakdown)
        .map_err(|e| rescale(e, prefactor))?;
    Ok(finish(prefactor * sum.value, sum.value, err, sum.truncation_index, sum.terms))
}

/// Zero-temperature atom–wall energy, E^A = −ħc/(32πa⁴) ∫₀^∞ dζ α ∫_ζ^∞ y² e^{−y}[…] dy.
pub fn free_energy_atom_wall_zero_t(job: &AtomJob) -> Result<EnergyResult> {
    job.validate()?;
    atom_wall_zero_t(job, 0)
}

fn atom_wall_zero_t(job: &AtomJob, order: i32) -> Result<EnergyResult> {
    let a = job.separation;
    let prefactor = -HBAR * SPEED_OF_LIGHT / (32.0 * PI * a.powi(4));
    let outer = integrate_over_zeta(&job.numerics.quadrature, |zeta, spec| {
        let xi = xi_from_zeta(a, zeta);
        let alpha = job.atom.polarizability(xi);
        let wall = resolve(job.policy, &job.wall, xi, 0.0, a)?;
        if alpha == 0.0 || wall.is_transparent() {
            return Ok(0.0);
        }
        Ok(alpha * integrate_semi_infinite(atom_integrand(wall, zeta, order, a), spec)?.value)
    })
    .map_err(|e| rescale(e, prefactor))?;
    Ok(finish(prefactor * outer.value, outer.value, outer.error, 0, None))
}

/// Casimir pressure −∂F/∂a (N/m²) by central differences with step a·10⁻⁴.
pub fn pressure_plates(job: &LifshitzJob) -> Result<f64> {
    job.validate()?;
    let a = job.separation;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let d = derivative_central(
        |s| match free_energy_plates(&job.at(s, job.temperature)) {
            Ok(r) => r.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        a,
        a * 1e-4,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(-d.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForceResult {
    /// N.
    pub value: f64,
    pub energy: EnergyResult,
    pub warnings: Vec<String>,
}

/// Sphere–plate force in the proximity-force approximation, F = 2πR·F_plates(a, T).
pub fn pfa_sphere_force(job: &LifshitzJob, radius: f64) -> Result<ForceResult> {
    if !(radius > 0.0) {
        return Err(Error::Domain {
            what: "sphere radius",
            value: radius,
            domain: "R > 0",
        });
    }
    let energy = free_energy_plates(job)?;
    let mut warnings = Vec::new();
    if radius / job.separation < 100.0 {
        warnings.push(format!(
            "R/a = {:.3} is below 100; the proximity-force approximation is unreliable",
            radius / job.separation
        ));
    }
    Ok(ForceResult {
        value: 2.0 * PI * radius * energy.value,
        energy,
        warnings,
    })
}

/// ΔF = F^L − F^D for two jobs that differ only in their materials.
pub fn difference_force(dark: &LifshitzJob, light: &LifshitzJob, radius: f64) -> Result<f64> {
    if dark.separation != light.separation || dark.temperature != light.temperature {
        return Err(Error::invalid(
            "difference force needs jobs with identical separation and temperature",
        ));
    }
    if dark == light {
        return Ok(0.0);
    }
    Ok(pfa_sphere_force(light, radius)?.value - pfa_sphere_force(dark, radius)?.value)
}

/// Harmonic trap holding the condensate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trap {
    /// ω₀, rad/s.
    pub frequency: f64,
    /// Atomic mass, kg.
    pub mass: f64,
}

impl Default for Trap {
    fn default() -> Self {
        Trap {
            frequency: 2.0 * PI * 229.0,
            mass: 1.443e-25,
        }
    }
}

/// Relative shift γ_z = |∂_z F^A|/(2mω₀²) of the centre-of-mass oscillation
/// frequency, with F^A = −∂_z 𝓕^A, for a point atom.
pub fn frequency_shift_gamma_z(job: &AtomJob, trap: &Trap) -> Result<f64> {
    Ok(frequency_shift_with_curvature(job, trap)?.0)
}

/// γ_z together with the ∂²𝓕^A/∂a² evaluation it came from.
pub fn frequency_shift_with_curvature(job: &AtomJob, trap: &Trap) -> Result<(f64, EnergyResult)> {
    if !(trap.frequency > 0.0 && trap.mass > 0.0) {
        return Err(Error::invalid("trap frequency and atomic mass must be positive"));
    }
    let curvature = atom_wall_derivative(job, 2)?;
    let gamma = curvature.value.abs() / (2.0 * trap.mass * trap.frequency * trap.frequency);
    Ok((gamma, curvature))
}

/// Temperature step of the entropy derivatives.
pub fn temperature_step(temperature: f64) -> f64 {
    (temperature * 1e-3).max(1e-3).min(0.25 * temperature)
}

/// The entropy sums cancel to roughly (T/T_eff)² of their largest terms, so they
/// are truncated six orders later than the free-energy sums.
fn entropy_summation(spec: &SummationSpec) -> SummationSpec {
    SummationSpec {
        term_cutoff_ratio: (spec.term_cutoff_ratio * 1e-6).max(1e-18),
        ..*spec
    }
}

/// Casimir entropy per unit area S = −∂F/∂T (J·K⁻¹·m⁻²).
///
/// Each Matsubara term T·I_l(T) is differentiated separately, with the
/// quadrature panels of the central temperature frozen across the stencil.
/// The sum of these derivatives cancels to a small fraction of its terms at
/// low T, and frozen panels keep the quadrature error a smooth function of T.
pub fn entropy_plates(job: &LifshitzJob) -> Result<EnergyResult> {
    job.validate()?;
    positive_temperature(job.temperature)?;
    let (a, t) = (job.separation, job.temperature);
    let h = temperature_step(t);
    let prefactor = -BOLTZMANN / (8.0 * PI * a * a);
    let term = |l: usize| -> Result<(f64, f64)> {
        let xi = crate::constants::matsubara_frequency(t, l);
        let (i1, i2) = job.interfaces(xi, t, a)?;
        if transparent(&i1, &i2) {
            return Ok((0.0, 0.0));
        }
        let q = integrate_semi_infinite(plate_integrand(i1, i2, zeta_l(a, t, l)), &job.numerics.quadrature)?;
        let partition = q.partition;
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let d = derivative_central(
            |tt| {
                let xi = crate::constants::matsubara_frequency(tt, l);
                match job.interfaces(xi, tt, a) {
                    Ok((j1, j2)) => tt * integrate_on_partition(plate_integrand(j1, j2, zeta_l(a, tt, l)), &partition),
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                }
            },
            t,
            h,
        )?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok((d.value, d.error + q.error))
    };
    let (sum, err) = matsubara_sum_par_aux(term, &entropy_summation(&job.numerics.summation), job.numerics.breakdown)
        .map_err(|e| rescale(e, prefactor))?;
    Ok(finish(prefactor * sum.value, sum.value, err, sum.truncation_index, sum.terms))
}

/// Casimir–Polder entropy S^A = −∂𝓕^A/∂T (J/K), differentiated term by term as
/// in [`entropy_plates`].
pub fn entropy_atom_wall(job: &AtomJob) -> Result<EnergyResult> {
    job.validate()?;
    positive_temperature(job.temperature)?;
    let (a, t) = (job.separation, job.temperature);
    let h = temperature_step(t);
    let prefactor = BOLTZMANN / (8.0 * a.powi(3));
    let term = |l: usize| -> Result<(f64, f64)> {
        let xi = crate::constants::matsubara_frequency(t, l);
        let wall = resolve(job.policy, &job.wall, xi, t, a)?;
        if wall.is_transparent() {
            return Ok((0.0, 0.0));
        }
        let q = integrate_semi_infinite(atom_integrand(wall, zeta_l(a, t, l), 0, a), &job.numerics.quadrature)?;
        let partition = q.partition;
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let d = derivative_central(
            |tt| {
                let xi = crate::constants::matsubara_frequency(tt, l);
                match resolve(job.policy, &job.wall, xi, tt, a) {
                    Ok(w) => {
                        tt * job.atom.polarizability(xi)
                            * integrate_on_partition(atom_integrand(w, zeta_l(a, tt, l), 0, a), &partition)
                    }
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                }
            },
            t,
            h,
        )?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok((d.value, d.error + job.atom.polarizability(xi) * q.error))
    };
    let (sum, err) = matsubara_sum_par_aux(term, &entropy_summation(&job.numerics.summation), job.numerics.breakdown)
        .map_err(|e| rescale(e, prefactor))?;
    Ok(finish(prefactor * sum.value, sum.value, err, sum.truncation_index, sum.terms))
}

fn positive_temperature(t: f64) -> Result<()> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "temperature",
            value: t,
            domain: "T > 0 for entropies",
        })
    }
}

#[cfg(test)]
mod tests;
