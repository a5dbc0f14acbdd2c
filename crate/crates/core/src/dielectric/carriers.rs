//! Charge-carrier scenarios: density and mobility laws, conductivity, and the
//! Debye–Hückel / Thomas–Fermi screening lengths.

use crate::constants::{
    conductivity_si_to_gaussian, BOLTZMANN, ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR, VACUUM_PERMITTIVITY,
};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// `prefactor · exp(−activation / k_B T)`; a zero activation energy gives a
/// temperature-independent law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalLaw {
    pub prefactor: f64,
    /// Activation energy C in joules.
    pub activation: f64,
}

impl ThermalLaw {
    pub fn constant(value: f64) -> Self {
        ThermalLaw {
            prefactor: value,
            activation: 0.0,
        }
    }

    pub fn arrhenius(prefactor: f64, activation: f64) -> Self {
        ThermalLaw { prefactor, activation }
    }

    pub fn value(&self, temperature: f64) -> f64 {
        if self.activation == 0.0 {
            return self.prefactor;
        }
        if temperature <= 0.0 {
            return 0.0;
        }
        self.prefactor * (-self.activation / (BOLTZMANN * temperature)).exp()
    }

    /// d ln(value)/dT, analytic so it stays finite when the value underflows.
    pub fn log_derivative(&self, temperature: f64) -> f64 {
        if self.activation == 0.0 {
            0.0
        } else {
            self.activation / (BOLTZMANN * temperature * temperature)
        }
    }

    /// True when the law is strictly positive at every T > 0.
    pub fn positive(&self) -> bool {
        self.prefactor > 0.0
    }

    /// True when the law decays exponentially to zero as T → 0.
    pub fn vanishes_at_zero(&self) -> bool {
        self.activation > 0.0 || self.prefactor == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistics {
    MaxwellBoltzmann,
    FermiDirac,
}

/// Free carriers of a material: n(T), μ(T), their statistics and effective mass.
///
/// Plasma frequency and relaxation rate follow from n, μ and m*:
/// ω_p² = n e²/(ε_vac m*), γ = e/(m* μ), so that σ = n|e|μ = ε_vac ω_p²/γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarrierScenario {
    /// Carrier density law, m⁻³.
    pub density: ThermalLaw,
    /// Mobility law, m²/(V·s).
    pub mobility: ThermalLaw,
    pub statistics: Statistics,
    /// Effective mass, kg.
    pub effective_mass: f64,
}

impl CarrierScenario {
    pub fn new(
        density: ThermalLaw,
        mobility: ThermalLaw,
        statistics: Statistics,
        effective_mass: f64,
    ) -> Result<Self> {
        if density.prefactor < 0.0 || mobility.prefactor < 0.0 {
            return Err(Error::invalid("carrier density and mobility must be non-negative"));
        }
        if density.activation < 0.0 || mobility.activation < 0.0 {
            return Err(Error::invalid("activation energies must be non-negative"));
        }
        if !(effective_mass > 0.0) {
            return Err(Error::invalid("effective mass must be positive"));
        }
        Ok(CarrierScenario {
            density,
            mobility,
            statistics,
            effective_mass,
        })
    }

    /// No carriers at all.
    pub fn empty() -> Self {
        CarrierScenario {
            density: ThermalLaw::constant(0.0),
            mobility: ThermalLaw::constant(0.0),
            statistics: Statistics::MaxwellBoltzmann,
            effective_mass: ELECTRON_MASS,
        }
    }

    pub fn with_density(mut self, density: ThermalLaw) -> Self {
        self.density = density;
        self
    }

    pub fn density(&self, temperature: f64) -> f64 {
        self.density.value(temperature)
    }

    pub fn mobility(&self, temperature: f64) -> f64 {
        self.mobility.value(temperature)
    }

    /// σ = n|e|μ in S/m.
    pub fn conductivity_si(&self, temperature: f64) -> f64 {
        self.density(temperature) * ELEMENTARY_CHARGE * self.mobility(temperature)
    }

    /// Whether σ(T) > 0, decided from the laws rather than the floating-point value,
    /// which underflows long before T reaches zero for realistic activation energies.
    pub fn conducts(&self, temperature: f64) -> bool {
        let alive = |law: &ThermalLaw| law.positive() && (law.activation == 0.0 || temperature > 0.0);
        alive(&self.density) && alive(&self.mobility)
    }

    /// True when σ(T) → 0 as T → 0 (a dielectric in the thermodynamic sense).
    pub fn is_dielectric(&self) -> bool {
        self.density.vanishes_at_zero() || self.mobility.vanishes_at_zero()
    }

    /// ω_p(T) in rad/s.
    pub fn plasma_frequency(&self, temperature: f64) -> f64 {
        (self.density(temperature) * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE
            / (VACUUM_PERMITTIVITY * self.effective_mass))
            .sqrt()
    }

    /// γ(T) = e/(m* μ) in rad/s; infinite when the mobility vanishes.
    pub fn relaxation(&self, temperature: f64) -> f64 {
        let mu = self.mobility(temperature);
        if mu == 0.0 {
            f64::INFINITY
        } else {
            ELEMENTARY_CHARGE / (self.effective_mass * mu)
        }
    }
}

/// σ(T) in Gaussian angular-frequency units (s⁻¹), the form entering 4πσ/ξ.
pub fn conductivity(scenario: &CarrierScenario, temperature: f64) -> f64 {
    conductivity_si_to_gaussian(scenario.conductivity_si(temperature))
}

/// Inverse screening length κ (m⁻¹) for a medium of static core permittivity ε₀.
///
/// Maxwell–Boltzmann carriers give the Debye–Hückel length
/// R_D² = ε₀ k_B T/(4π e² n) (Gaussian), Fermi–Dirac carriers the Thomas–Fermi
/// length R_TF² = ε₀ E_F/(6π e² n) with E_F = ħω_p.
pub fn screening_kappa(scenario: &CarrierScenario, eps0: f64, temperature: f64) -> Result<f64> {
    let n = scenario.density(temperature);
    if n == 0.0 {
        return Ok(0.0);
    }
    let e2 = ELEMENTARY_CHARGE * ELEMENTARY_CHARGE;
    match scenario.statistics {
        Statistics::MaxwellBoltzmann => {
            if !(temperature > 0.0) {
                return Err(Error::Domain {
                    what: "temperature",
                    value: temperature,
                    domain: "T > 0 for Maxwell-Boltzmann screening",
                });
            }
            Ok((e2 * n / (eps0 * VACUUM_PERMITTIVITY * BOLTZMANN * temperature)).sqrt())
        }
        Statistics::FermiDirac => {
            let fermi_energy = HBAR * scenario.plasma_frequency(temperature);
            Ok((1.5 * e2 * n / (eps0 * VACUUM_PERMITTIVITY * fermi_energy)).sqrt())
        }
    }
}

/// dκ²/dT (m⁻²·K⁻¹) from the analytic temperature dependence of the screening length.
pub fn screening_kappa_squared_derivative(scenario: &CarrierScenario, eps0: f64, temperature: f64) -> Result<f64> {
    let kappa2 = screening_kappa(scenario, eps0, temperature)?.powi(2);
    let dln_n = scenario.density.log_derivative(temperature);
    Ok(match scenario.statistics {
        // κ² ∝ n/T
        Statistics::MaxwellBoltzmann => kappa2 * (dln_n - 1.0 / temperature),
        // κ² ∝ n/ω_p ∝ √n
        Statistics::FermiDirac => kappa2 * 0.5 * dln_n,
    })
}
