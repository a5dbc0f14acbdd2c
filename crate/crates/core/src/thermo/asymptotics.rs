//! Closed-form low-temperature asymptotics of the free energies and entropies.
//!
//! τ = T/T_eff throughout. The exponentially small remainders of the
//! dc-conductivity and screened corrections are neglected; they are below
//! e^{−1/τ}-type bounds inside the audit window.

use crate::constants::{effective_temperature, BOLTZMANN, HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::numerics::{integrate_semi_infinite, polylog3, zeta3, QuadratureSpec};
use crate::reflection::{r0, r0_bar};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn tau(separation: f64, temperature: f64) -> f64 {
    let t = temperature / effective_temperature(separation);
    if t > 0.1 {
        log::warn!("T/T_eff = {t:.3} exceeds 0.1; the low-temperature asymptote is unreliable");
    }
    t
}

fn quadrature() -> QuadratureSpec {
    QuadratureSpec {
        relative_tolerance: 1e-12,
        absolute_floor: 1e-16,
        max_subdivisions: 2000,
    }
}

/// T³ correction of the plate free energy, −(ħc/32πa³)ζ(3)r₀²(ε₀+1)τ³ (J/m²).
pub fn plate_thermal_correction(separation: f64, temperature: f64, eps0: f64) -> f64 {
    let r = r0(eps0);
    -HBAR * SPEED_OF_LIGHT / (32.0 * PI * separation.powi(3)) * zeta3() * r * r * (eps0 + 1.0)
        * tau(separation, temperature).powi(3)
}

/// E(a) plus the T³ correction.
pub fn asymptotic_free_energy_plates(zero_t_energy: f64, separation: f64, temperature: f64, eps0: f64) -> f64 {
    zero_t_energy + plate_thermal_correction(separation, temperature, eps0)
}

/// T⁴ correction of the atom–wall free energy, −(ħcπ³/240a⁴)α(0)C_D τ⁴ (J).
pub fn atom_thermal_correction(separation: f64, temperature: f64, alpha0: f64, c_d: f64) -> f64 {
    -HBAR * SPEED_OF_LIGHT * PI.powi(3) / (240.0 * separation.powi(4)) * alpha0 * c_d
        * tau(separation, temperature).powi(4)
}

pub fn asymptotic_free_energy_atom(zero_t_energy: f64, separation: f64, temperature: f64, alpha0: f64, c_d: f64) -> f64 {
    zero_t_energy + atom_thermal_correction(separation, temperature, alpha0, c_d)
}

/// (3k_B/16πa²)ζ(3)r₀²(ε₀+1)τ², J·K⁻¹·m⁻².
pub fn asymptotic_entropy_plates(separation: f64, temperature: f64, eps0: f64) -> f64 {
    let r = r0(eps0);
    3.0 * BOLTZMANN / (16.0 * PI * separation.powi(2)) * zeta3() * r * r * (eps0 + 1.0)
        * tau(separation, temperature).powi(2)
}

/// (π³k_B/30a³)α(0)C_D τ³, J/K.
pub fn asymptotic_entropy_atom(separation: f64, temperature: f64, alpha0: f64, c_d: f64) -> f64 {
    PI.powi(3) * BOLTZMANN / (30.0 * separation.powi(3)) * alpha0 * c_d * tau(separation, temperature).powi(3)
}

/// Power-law coefficients of the asymptotes in SI units per power of kelvin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCoefficients {
    /// Coefficient of T³ in the plate free energy, J·m⁻²·K⁻³.
    pub cubic_t_coefficient: f64,
    /// Coefficient of T⁴ in the atom free energy, J·K⁻⁴.
    pub quartic_t_coefficient: f64,
    /// Coefficient of T² in the plate entropy, J·m⁻²·K⁻³.
    pub quadratic_entropy_coefficient: f64,
    /// Coefficient of T³ in the atom entropy, J·K⁻⁴.
    pub cubic_entropy_coefficient: f64,
    #[serde(rename = "C_D")]
    pub c_d: f64,
}

impl AsymptoticCoefficients {
    pub fn new(separation: f64, eps0: f64, alpha0: f64, c_d: f64) -> Result<Self> {
        if !(c_d > 0.0 && c_d.is_finite()) {
            return Err(Error::Domain {
                what: "C_D",
                value: c_d,
                domain: "C_D > 0",
            });
        }
        let t_eff = effective_temperature(separation);
        let r = r0(eps0);
        let plates = zeta3() * r * r * (eps0 + 1.0);
        let c = AsymptoticCoefficients {
            cubic_t_coefficient: -HBAR * SPEED_OF_LIGHT / (32.0 * PI * separation.powi(3)) * plates / t_eff.powi(3),
            quartic_t_coefficient: -HBAR * SPEED_OF_LIGHT * PI.powi(3) / (240.0 * separation.powi(4)) * alpha0 * c_d
                / t_eff.powi(4),
            quadratic_entropy_coefficient: 3.0 * BOLTZMANN / (16.0 * PI * separation.powi(2)) * plates / t_eff.powi(2),
            cubic_entropy_coefficient: PI.powi(3) * BOLTZMANN / (30.0 * separation.powi(3)) * alpha0 * c_d
                / t_eff.powi(3),
            c_d,
        };
        let all = [
            c.cubic_t_coefficient,
            c.quartic_t_coefficient,
            c.quadratic_entropy_coefficient,
            c.cubic_entropy_coefficient,
        ];
        if all.iter().all(|v| v.is_finite()) {
            Ok(c)
        } else {
            Err(Error::invalid("asymptotic coefficients are not finite"))
        }
    }
}

fn bracket_prefactor_plates(separation: f64) -> f64 {
    BOLTZMANN / (16.0 * PI * separation.powi(2))
}

/// (k_B/16πa²)[ζ(3) − Li₃(r₀²)], the residual plate entropy with dc conductivity.
pub fn dc_residual_entropy_plates(separation: f64, eps0: f64) -> Result<f64> {
    let r = r0(eps0);
    Ok(bracket_prefactor_plates(separation) * (zeta3() - polylog3(r * r)?))
}

/// (k_B/4a³)(1 − r₀)α(0), the residual atom–wall entropy with dc conductivity.
pub fn dc_residual_entropy_atom(separation: f64, eps0: f64, alpha0: f64) -> f64 {
    BOLTZMANN / (4.0 * separation.powi(3)) * (1.0 - r0(eps0)) * alpha0
}

/// Linear-in-T change of the plate free energy when dc conductivity is included, J/m².
pub fn dc_free_energy_correction_plates(separation: f64, temperature: f64, eps0: f64) -> Result<f64> {
    Ok(-temperature * dc_residual_entropy_plates(separation, eps0)?)
}

/// Linear-in-T change of the atom free energy when dc conductivity is included, J.
pub fn dc_free_energy_correction_atom(separation: f64, temperature: f64, eps0: f64, alpha0: f64) -> f64 {
    -temperature * dc_residual_entropy_atom(separation, eps0, alpha0)
}

/// ∂r̃₀/∂K² at dimensionless wavenumber y, K = 2aκ.
fn r0_bar_slope(eps0: f64, big_k: f64, y: f64) -> f64 {
    let root = (y * y + big_k * big_k).sqrt();
    eps0 * y / (root * (eps0 * root + y).powi(2))
}

/// G(κ) = ∫₀^∞ y ln[1 − r̃₀²(y)e^{−y}] dy + Li₃(r₀²). Zero at κ = 0, −ζ(3) + Li₃(r₀²)
/// at κ = ∞.
pub fn screened_bracket_plates(separation: f64, eps0: f64, kappa: f64) -> Result<f64> {
    let r = r0(eps0);
    if kappa == 0.0 {
        return Ok(0.0);
    }
    let q = integrate_semi_infinite(
        |y| {
            let rb = r0_bar(eps0, separation, kappa, y);
            y * (-rb * rb * (-y).exp()).ln_1p()
        },
        &quadrature(),
    )?;
    Ok(q.value + polylog3(r * r)?)
}

/// dG/dκ² in m².
fn screened_bracket_plates_slope(separation: f64, eps0: f64, kappa: f64) -> Result<f64> {
    if kappa.is_infinite() {
        return Ok(0.0);
    }
    if kappa == 0.0 {
        return Err(Error::Domain {
            what: "screening wavenumber",
            value: kappa,
            domain: "κ > 0 where dκ²/dT ≠ 0 (the κ² slope diverges at κ = 0)",
        });
    }
    let big_k = 2.0 * separation * kappa;
    let q = integrate_semi_infinite(
        |y| {
            let rb = r0_bar(eps0, separation, kappa, y);
            let e = (-y).exp();
            -2.0 * y * rb * e * r0_bar_slope(eps0, big_k, y) / (1.0 - rb * rb * e)
        },
        &quadrature(),
    )?;
    Ok(4.0 * separation * separation * q.value)
}

/// Screened plate free energy: `oscillator_free_energy` (the T³ asymptote) plus
/// (k_B T/16πa²)G(κ).
pub fn screened_free_energy_asymptote(
    oscillator_free_energy: f64,
    separation: f64,
    temperature: f64,
    eps0: f64,
    kappa: f64,
) -> Result<f64> {
    Ok(oscillator_free_energy
        + bracket_prefactor_plates(separation) * temperature * screened_bracket_plates(separation, eps0, kappa)?)
}

/// Screened plate entropy
/// S = S_osc − (k_B/16πa²)[G(κ) + T (dG/dκ²)(dκ²/dT)].
pub fn screened_entropy_asymptote(
    separation: f64,
    temperature: f64,
    eps0: f64,
    kappa: f64,
    dkappa2_dt: f64,
) -> Result<f64> {
    let g = screened_bracket_plates(separation, eps0, kappa)?;
    let slope = if dkappa2_dt == 0.0 {
        0.0
    } else {
        temperature * screened_bracket_plates_slope(separation, eps0, kappa)? * dkappa2_dt
    };
    Ok(asymptotic_entropy_plates(separation, temperature, eps0) - bracket_prefactor_plates(separation) * (g + slope))
}

/// H(κ) = ∫₀^∞ y² r̃₀(y) e^{−y} dy − 2r₀, in [0, 2 − 2r₀].
pub fn screened_bracket_atom(separation: f64, eps0: f64, kappa: f64) -> Result<f64> {
    let r = r0(eps0);
    if kappa == 0.0 {
        return Ok(0.0);
    }
    if kappa.is_infinite() {
        return Ok(2.0 - 2.0 * r);
    }
    let q = integrate_semi_infinite(
        |y| y * y * r0_bar(eps0, separation, kappa, y) * (-y).exp(),
        &quadrature(),
    )?;
    Ok(q.value - 2.0 * r)
}

fn screened_bracket_atom_slope(separation: f64, eps0: f64, kappa: f64) -> Result<f64> {
    if kappa.is_infinite() {
        return Ok(0.0);
    }
    let big_k = 2.0 * separation * kappa;
    let q = integrate_semi_infinite(|y| y * y * (-y).exp() * r0_bar_slope(eps0, big_k, y), &quadrature())?;
    Ok(4.0 * separation * separation * q.value)
}

/// Free energy and entropy of an atom near a screened dielectric wall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomAsymptote {
    /// J.
    pub free_energy: f64,
    /// J/K.
    pub entropy: f64,
}

/// Atom–wall asymptotes with screening:
/// 𝓕^A = E^A − (ħcπ³/240a⁴)α(0)C_D τ⁴ − (k_B T/8a³)α(0)H(κ),
/// S^A = (π³k_B/30a³)α(0)C_D τ³ + (k_Bα(0)/8a³)[H + T (dH/dκ²)(dκ²/dT)].
#[allow(clippy::too_many_arguments)]
pub fn screened_atom_asymptotes(
    zero_t_energy: f64,
    c_d: f64,
    separation: f64,
    temperature: f64,
    eps0: f64,
    alpha0: f64,
    kappa: f64,
    dkappa2_dt: f64,
) -> Result<AtomAsymptote> {
    let h = screened_bracket_atom(separation, eps0, kappa)?;
    let slope = if dkappa2_dt == 0.0 {
        0.0
    } else {
        temperature * screened_bracket_atom_slope(separation, eps0, kappa)? * dkappa2_dt
    };
    let pre = BOLTZMANN * alpha0 / (8.0 * separation.powi(3));
    Ok(AtomAsymptote {
        free_energy: asymptotic_free_energy_atom(zero_t_energy, separation, temperature, alpha0, c_d)
            - pre * temperature * h,
        entropy: asymptotic_entropy_atom(separation, temperature, alpha0, c_d) + pre * (h + slope),
    })
}
