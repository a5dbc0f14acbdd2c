//! Permittivity models along the imaginary frequency axis.
//!
//! All permittivities are evaluated at ξ in rad/s. Carrier terms use the Gaussian
//! forms 4πσ/ξ, ω_p²/ξ² and ω_p²/[ξ(ξ+γ)] with σ already converted to s⁻¹.

mod carriers;
pub mod material_file;

pub use carriers::{
    conductivity, screening_kappa, screening_kappa_squared_derivative, CarrierScenario, Statistics, ThermalLaw,
};

use crate::constants::{ev_to_rad_per_s, BOHR_RADIUS};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Oscillator {
    /// g_j, rad²/s².
    pub strength: f64,
    /// ω_j, rad/s.
    pub frequency: f64,
    /// γ_j, rad/s.
    pub damping: f64,
}

impl Oscillator {
    /// Oscillator contributing `delta_eps` to the static permittivity.
    pub fn from_static_contribution(delta_eps: f64, frequency: f64, damping: f64) -> Self {
        Oscillator {
            strength: delta_eps * frequency * frequency,
            frequency,
            damping,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OscillatorSet {
    entries: Vec<Oscillator>,
}

impl OscillatorSet {
    pub fn new(entries: Vec<Oscillator>) -> Result<Self> {
        for o in &entries {
            if !(o.frequency > 0.0) {
                return Err(Error::invalid(format!("oscillator frequency must be > 0, got {}", o.frequency)));
            }
            if !(o.strength >= 0.0) || !(o.damping >= 0.0) {
                return Err(Error::invalid("oscillator strength and damping must be >= 0"));
            }
        }
        Ok(OscillatorSet { entries })
    }

    /// Vacuum.
    pub fn empty() -> Self {
        OscillatorSet::default()
    }

    /// Single undamped oscillator with static permittivity `eps0`.
    pub fn single(eps0: f64, frequency: f64) -> Result<Self> {
        OscillatorSet::new(vec![Oscillator::from_static_contribution(eps0 - 1.0, frequency, 0.0)])
    }

    pub fn entries(&self) -> &[Oscillator] {
        &self.entries
    }

    pub fn eps(&self, xi: f64) -> f64 {
        1.0 + self
            .entries
            .iter()
            .map(|o| o.strength / (o.frequency * o.frequency + xi * xi + o.damping * xi))
            .sum::<f64>()
    }

    pub fn static_permittivity(&self) -> f64 {
        self.eps(0.0)
    }
}

/// ε(iξ) = ε_∞ + (ε₀ − ε_∞) ω₀²/(ω₀² + ξ²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiLorentz {
    pub eps_infinity: f64,
    pub eps_static: f64,
    pub omega0: f64,
}

impl Default for SiLorentz {
    fn default() -> Self {
        SiLorentz {
            eps_infinity: 1.035,
            eps_static: 11.87,
            omega0: 6.6e15,
        }
    }
}

impl SiLorentz {
    pub fn eps(&self, xi: f64) -> f64 {
        let w2 = self.omega0 * self.omega0;
        self.eps_infinity + (self.eps_static - self.eps_infinity) * w2 / (w2 + xi * xi)
    }
}

/// Kramers–Kronig image of a constant Im ε = ε̄ on [ω₀, ω₁]:
/// ε(iξ) = 1 + (ε̄/π) ln[(ω₁² + ξ²)/(ω₀² + ξ²)].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiLogBand {
    pub eps_bar: f64,
    /// Band edges in rad/s.
    pub omega0: f64,
    pub omega1: f64,
}

impl Default for SiLogBand {
    fn default() -> Self {
        SiLogBand {
            eps_bar: 48.0,
            omega0: ev_to_rad_per_s(3.22),
            omega1: ev_to_rad_per_s(4.62),
        }
    }
}

impl SiLogBand {
    pub fn eps(&self, xi: f64) -> f64 {
        let x2 = xi * xi;
        1.0 + self.eps_bar / PI
            * ((self.omega1 * self.omega1 + x2) / (self.omega0 * self.omega0 + x2)).ln()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DielectricModel {
    Oscillator(OscillatorSet),
    SiLorentz(SiLorentz),
    SiLogBand(SiLogBand),
    /// Core permittivity plus the dc-conductivity term 4πσ(T)/ξ.
    DcAugmented {
        core: Box<DielectricModel>,
        carriers: CarrierScenario,
    },
    /// Core permittivity plus ω_p²/ξ².
    PlasmaLike {
        core: Box<DielectricModel>,
        plasma_frequency: f64,
    },
    /// Core permittivity plus ω_p²/[ξ(ξ + γ)].
    Drude {
        core: Box<DielectricModel>,
        plasma_frequency: f64,
        relaxation: f64,
    },
}

impl DielectricModel {
    pub fn vacuum() -> Self {
        DielectricModel::Oscillator(OscillatorSet::empty())
    }

    pub fn dc_augmented(core: DielectricModel, carriers: CarrierScenario) -> Self {
        DielectricModel::DcAugmented {
            core: Box::new(core),
            carriers,
        }
    }

    pub fn plasma_like(core: DielectricModel, plasma_frequency: f64) -> Self {
        DielectricModel::PlasmaLike {
            core: Box::new(core),
            plasma_frequency,
        }
    }

    pub fn drude(core: DielectricModel, plasma_frequency: f64, relaxation: f64) -> Self {
        DielectricModel::Drude {
            core: Box::new(core),
            plasma_frequency,
            relaxation,
        }
    }

    /// Bound-electron part of the response (no free-carrier term).
    pub fn core(&self) -> &DielectricModel {
        match self {
            DielectricModel::DcAugmented { core, .. }
            | DielectricModel::PlasmaLike { core, .. }
            | DielectricModel::Drude { core, .. } => core.core(),
            other => other,
        }
    }

    /// ε(iξ) of the bound electrons; finite for every ξ ≥ 0.
    pub fn core_eps(&self, xi: f64) -> f64 {
        match self.core() {
            DielectricModel::Oscillator(set) => set.eps(xi),
            DielectricModel::SiLorentz(m) => m.eps(xi),
            DielectricModel::SiLogBand(m) => m.eps(xi),
            _ => unreachable!("core() always returns a bound-electron model"),
        }
    }

    /// ε₀ = ε(0) of the bound electrons.
    pub fn static_permittivity(&self) -> f64 {
        self.core_eps(0.0)
    }

    pub fn carriers(&self) -> Option<&CarrierScenario> {
        match self {
            DielectricModel::DcAugmented { carriers, .. } => Some(carriers),
            _ => None,
        }
    }

    /// Full ε(iξ, T) including this model's own free-carrier term.
    pub fn eps(&self, xi: f64, temperature: f64) -> Result<f64> {
        if !(xi >= 0.0) {
            return Err(Error::Domain {
                what: "frequency",
                value: xi,
                domain: "xi >= 0",
            });
        }
        match self {
            DielectricModel::Oscillator(_) | DielectricModel::SiLorentz(_) | DielectricModel::SiLogBand(_) => {
                Ok(self.core_eps(xi))
            }
            DielectricModel::DcAugmented { core, carriers } => eps_dc_augmented(core, carriers, xi, temperature),
            DielectricModel::PlasmaLike { core, plasma_frequency } => {
                positive_frequency(xi)?;
                Ok(core.core_eps(xi) + plasma_frequency * plasma_frequency / (xi * xi))
            }
            DielectricModel::Drude {
                core,
                plasma_frequency,
                relaxation,
            } => {
                positive_frequency(xi)?;
                Ok(core.core_eps(xi) + drude_term(*plasma_frequency, *relaxation, xi))
            }
        }
    }
}

fn positive_frequency(xi: f64) -> Result<()> {
    if xi > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "frequency",
            value: xi,
            domain: "xi > 0 (the carrier term diverges at zero frequency)",
        })
    }
}

/// ω_p²/[ξ(ξ + γ)], zero for infinite γ.
pub(crate) fn drude_term(plasma_frequency: f64, relaxation: f64, xi: f64) -> f64 {
    if plasma_frequency == 0.0 || relaxation.is_infinite() {
        0.0
    } else {
        plasma_frequency * plasma_frequency / (xi * (xi + relaxation))
    }
}

pub fn eps_oscillator(model: &OscillatorSet, xi: f64) -> Result<f64> {
    if !(xi >= 0.0) {
        return Err(Error::Domain {
            what: "frequency",
            value: xi,
            domain: "xi >= 0",
        });
    }
    Ok(model.eps(xi))
}

/// ε(iξ) + 4πσ(T)/ξ.
pub fn eps_dc_augmented(core: &DielectricModel, carriers: &CarrierScenario, xi: f64, temperature: f64) -> Result<f64> {
    positive_frequency(xi)?;
    Ok(core.core_eps(xi) + 4.0 * PI * conductivity(carriers, temperature) / xi)
}

/// 1 + ω_p²/ξ² + Σ g_j/(ω_j² + ξ² + γ_j ξ).
pub fn eps_plasma_like(model: &OscillatorSet, plasma_frequency: f64, xi: f64) -> Result<f64> {
    positive_frequency(xi)?;
    Ok(model.eps(xi) + plasma_frequency * plasma_frequency / (xi * xi))
}

pub fn eps_si_lorentz(xi: f64) -> f64 {
    SiLorentz::default().eps(xi)
}

pub fn eps_si_logband(xi: f64) -> f64 {
    SiLogBand::default().eps(xi)
}

/// Single-oscillator atomic polarizability α(iξ) = α₀ ω_a²/(ω_a² + ξ²), with α₀ as a
/// polarizability volume in m³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomModel {
    pub static_polarizability: f64,
    pub absorption_frequency: f64,
}

impl AtomModel {
    pub fn new(static_polarizability: f64, absorption_frequency: f64) -> Result<Self> {
        if !(static_polarizability > 0.0) || !(absorption_frequency > 0.0) {
            return Err(Error::invalid("atomic polarizability and absorption frequency must be > 0"));
        }
        Ok(AtomModel {
            static_polarizability,
            absorption_frequency,
        })
    }

    /// Ground-state ⁸⁷Rb in the single-oscillator approximation
    /// (α₀ = 319 a.u., ω_a = 1.41 eV).
    pub fn rubidium() -> Self {
        AtomModel {
            static_polarizability: 319.0 * BOHR_RADIUS.powi(3),
            absorption_frequency: ev_to_rad_per_s(1.41),
        }
    }

    pub fn polarizability(&self, xi: f64) -> f64 {
        let w2 = self.absorption_frequency * self.absorption_frequency;
        self.static_polarizability * w2 / (w2 + xi * xi)
    }
}
