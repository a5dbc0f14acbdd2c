//! Reflection coefficients at imaginary frequencies.
//!
//! The kernels work in scale-free variables: `zeta` is a frequency divided by c
//! times any length scale and `y` the matching q. The engine uses ζ = 2aξ/c and
//! y = 2aq; the SI wrappers use ζ = ξ/c and y = q directly.
//!
//! Zero frequency is never reached by limiting ξ → 0 numerically. Each
//! material/policy pair names a [`ZeroFrequencyRule`] instead.

use crate::constants::SPEED_OF_LIGHT;
use crate::dielectric::{screening_kappa, CarrierScenario, DielectricModel, Statistics};
use crate::error::Result;
use crate::numerics::guarded_sqrt;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which reflection-coefficient family a calculation uses for materials with
/// free carriers. Bound-electron-only materials are unaffected by the choice
/// (except [`ReflectionPolicy::IdealMetal`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ReflectionPolicy {
    /// Fresnel coefficients; the dc conductivity of dielectrics is neglected.
    #[default]
    Standard,
    /// Fresnel coefficients with the 4πσ/ξ term and the Drude zero-frequency rule.
    #[serde(alias = "dc")]
    DcConductivity,
    /// Screened TM coefficient at every Matsubara frequency.
    Screened,
    /// Fresnel for ξ > 0, screened static TM coefficient at ξ = 0.
    StaticScreened,
    /// Free carriers described by ω_p²/ξ² (no relaxation).
    #[serde(alias = "plasma")]
    PlasmaLike,
    /// r_TM = 1, r_TE = −1 at every frequency.
    #[serde(alias = "ideal")]
    IdealMetal,
}

impl ReflectionPolicy {
    pub fn name(self) -> &'static str {
        match self {
            ReflectionPolicy::Standard => "standard",
            ReflectionPolicy::DcConductivity => "dc",
            ReflectionPolicy::Screened => "screened",
            ReflectionPolicy::StaticScreened => "static-screened",
            ReflectionPolicy::PlasmaLike => "plasma",
            ReflectionPolicy::IdealMetal => "ideal",
        }
    }
}

impl std::str::FromStr for ReflectionPolicy {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "standard" => ReflectionPolicy::Standard,
            "dc" => ReflectionPolicy::DcConductivity,
            "screened" => ReflectionPolicy::Screened,
            "static-screened" => ReflectionPolicy::StaticScreened,
            "plasma" => ReflectionPolicy::PlasmaLike,
            "ideal" => ReflectionPolicy::IdealMetal,
            other => {
                return Err(crate::error::Error::invalid(format!(
                    "unknown policy `{other}` (expected standard, dc, screened, static-screened, plasma or ideal)"
                )))
            }
        })
    }
}

/// Reflection coefficients at ξ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroFrequencyRule {
    /// r_TM = r₀, r_TE = 0.
    DielectricFinite { r0: f64 },
    /// r_TM = 1 while σ(T) > 0 (else r₀ of the bound electrons), r_TE = 0.
    DrudeRule { conducting: bool, r0: f64 },
    /// r_TM = 1, r_TE = (y − √(y² + K_p²))/(y + √(y² + K_p²)) with K_p the
    /// plasma wavenumber in the same units as y.
    PlasmaRule { plasma_wavenumber: f64 },
    /// Screened static TM coefficient with screening wavenumber K; r_TE = 0.
    ScreenedStatic { eps0: f64, screening_wavenumber: f64 },
}

impl ZeroFrequencyRule {
    pub fn coefficients(&self, y: f64) -> (f64, f64) {
        match *self {
            ZeroFrequencyRule::DielectricFinite { r0 } => (r0, 0.0),
            ZeroFrequencyRule::DrudeRule { conducting, r0 } => (if conducting { 1.0 } else { r0 }, 0.0),
            ZeroFrequencyRule::PlasmaRule { plasma_wavenumber: kp } => {
                let s = (y * y + kp * kp).sqrt();
                (1.0, -kp * kp / ((y + s) * (y + s)))
            }
            ZeroFrequencyRule::ScreenedStatic {
                eps0,
                screening_wavenumber,
            } => (static_tm(eps0, screening_wavenumber, y), 0.0),
        }
    }
}

/// A resolved interface: everything needed to evaluate (r_TM, r_TE) at one
/// frequency for any y ≥ ζ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interface {
    /// Fresnel coefficients of a local permittivity.
    Local { eps: f64 },
    /// Screened TM coefficient; TE is Fresnel with `eps_tilde`.
    Screened {
        eps_core: f64,
        eps_tilde: f64,
        eps0: f64,
        screening_wavenumber: f64,
    },
    Zero(ZeroFrequencyRule),
    IdealMetal,
}

impl Interface {
    /// (r_TM, r_TE) at (ζ, y), y ≥ ζ.
    #[inline]
    pub fn coefficients(&self, zeta: f64, y: f64) -> (f64, f64) {
        match *self {
            Interface::Local { eps } => fresnel_pair(eps, zeta, y),
            Interface::Screened {
                eps_core,
                eps_tilde,
                eps0,
                screening_wavenumber,
            } => (
                screened_tm_pair(eps_core, eps_tilde, eps0, screening_wavenumber, zeta, y),
                fresnel_te(eps_tilde, zeta, y),
            ),
            Interface::Zero(rule) => rule.coefficients(y),
            Interface::IdealMetal => (1.0, -1.0),
        }
    }

    /// True when both coefficients vanish identically.
    pub fn is_transparent(&self) -> bool {
        match *self {
            Interface::Local { eps } => eps == 1.0,
            Interface::Zero(ZeroFrequencyRule::DielectricFinite { r0 }) => r0 == 0.0,
            Interface::Zero(ZeroFrequencyRule::DrudeRule { conducting, r0 }) => !conducting && r0 == 0.0,
            _ => false,
        }
    }
}

/// r₀ = (ε₀ − 1)/(ε₀ + 1).
pub fn r0(eps0: f64) -> f64 {
    (eps0 - 1.0) / (eps0 + 1.0)
}

#[inline]
fn fresnel_tm(eps: f64, zeta: f64, y: f64) -> f64 {
    // (εy − s)/(εy + s) rewritten without the cancellation near ε = 1.
    let s = guarded_sqrt(y * y + (eps - 1.0) * zeta * zeta);
    let den = eps * y + s;
    if den == 0.0 {
        return 0.0;
    }
    (eps - 1.0) * ((eps + 1.0) * y * y - zeta * zeta) / (den * den)
}

#[inline]
fn fresnel_te(eps: f64, zeta: f64, y: f64) -> f64 {
    let s = guarded_sqrt(y * y + (eps - 1.0) * zeta * zeta);
    let den = y + s;
    if den == 0.0 {
        return 0.0;
    }
    -(eps - 1.0) * zeta * zeta / (den * den)
}

#[inline]
fn fresnel_pair(eps: f64, zeta: f64, y: f64) -> (f64, f64) {
    if eps.is_infinite() {
        return (1.0, -1.0);
    }
    (fresnel_tm(eps, zeta, y), fresnel_te(eps, zeta, y))
}

#[inline]
fn screened_tm_pair(eps: f64, eps_tilde: f64, eps0: f64, kappa: f64, zeta: f64, y: f64) -> f64 {
    let d = eps_tilde - eps;
    if d == 0.0 {
        return fresnel_tm(eps, zeta, y);
    }
    let p2 = guarded_sqrt(y * y - zeta * zeta).powi(2);
    // k⊥²(ε̃ − ε)/(ηε) with the 1/(ε̃ − ε) inside η cleared, so that tiny
    // carrier terms neither overflow η nor lose the correction.
    let correction = if kappa.is_infinite() {
        0.0
    } else {
        p2 * d * d.sqrt() / (eps * (p2 * d + kappa * kappa * eps0 * eps_tilde / eps).sqrt())
    };
    let s = guarded_sqrt(y * y + (eps_tilde - 1.0) * zeta * zeta);
    let plain = (eps_tilde - 1.0) * ((eps_tilde + 1.0) * y * y - zeta * zeta) / (eps_tilde * y + s);
    (plain - correction) / (eps_tilde * y + s + correction)
}

#[inline]
fn static_tm(eps0: f64, kappa: f64, k: f64) -> f64 {
    if kappa.is_infinite() {
        return 1.0;
    }
    let root = (k * k + kappa * kappa).sqrt();
    (eps0 * root - k) / (eps0 * root + k)
}

/// Fresnel pair at (ξ, k⊥) in SI units; ξ ≥ 0, k⊥ ≥ 0.
pub fn fresnel<E: Fn(f64) -> f64>(eps: E, xi: f64, k_perp: f64) -> (f64, f64) {
    let zeta = xi / SPEED_OF_LIGHT;
    let q = (k_perp * k_perp + zeta * zeta).sqrt();
    fresnel_pair(eps(xi), zeta, q)
}

/// Screened TM coefficient at (ξ, k⊥, T) for a bound-electron permittivity and a
/// carrier scenario; ξ > 0.
pub fn screened_tm<E: Fn(f64) -> f64>(
    core_eps: E,
    scenario: &CarrierScenario,
    xi: f64,
    k_perp: f64,
    temperature: f64,
) -> Result<f64> {
    let eps = core_eps(xi);
    let eps0 = core_eps(0.0);
    let eps_tilde = eps
        + crate::dielectric::drude_term(
            scenario.plasma_frequency(temperature),
            scenario.relaxation(temperature),
            xi,
        );
    let kappa = kappa_or_infinite(scenario, eps0, temperature)?;
    let zeta = xi / SPEED_OF_LIGHT;
    let q = (k_perp * k_perp + zeta * zeta).sqrt();
    Ok(screened_tm_pair(eps, eps_tilde, eps0, kappa, zeta, q))
}

/// [ε₀√(k⊥² + κ²) − k⊥]/[ε₀√(k⊥² + κ²) + k⊥].
pub fn screened_tm_static(eps0: f64, kappa: f64, k_perp: f64) -> f64 {
    static_tm(eps0, kappa, k_perp)
}

/// Uniaxial-crystal pair with ε_x = ε_y (in-plane) and ε_z (normal) evaluated at
/// the requested point.
pub fn uniaxial(eps_x: f64, eps_z: f64, xi: f64, k_perp: f64) -> (f64, f64) {
    let zeta2 = (xi / SPEED_OF_LIGHT).powi(2);
    let q = (k_perp * k_perp + zeta2).sqrt();
    let kz = guarded_sqrt(k_perp * k_perp + eps_z * zeta2);
    let kx = guarded_sqrt(k_perp * k_perp + eps_x * zeta2);
    let g = (eps_x * eps_z).sqrt() * q;
    ((g - kz) / (g + kz), (q - kx) / (q + kx))
}

/// r̃₀(y) = [ε₀√(y² + (2aκ)²) − y]/[ε₀√(y² + (2aκ)²) + y].
pub fn r0_bar(eps0: f64, separation: f64, kappa: f64, y: f64) -> f64 {
    static_tm(eps0, 2.0 * separation * kappa, y)
}

/// Zeroth- and first-order coefficients of r(ε + β) in β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaExpansion {
    pub r_tm0: f64,
    pub c_tm: f64,
    pub r_te0: f64,
    pub c_te: f64,
}

/// Expansion of the Fresnel pair in the small addition β = 4πσ/ξ to the
/// permittivity ε at (ζ, y): r(ε + β) = r(ε) + β·c + O(β²).
pub fn beta_expansion(eps: f64, zeta: f64, y: f64) -> BetaExpansion {
    let s = (y * y + (eps - 1.0) * zeta * zeta).sqrt();
    let (r_tm0, r_te0) = fresnel_pair(eps, zeta, y);
    BetaExpansion {
        r_tm0,
        c_tm: y * (2.0 * y * y + (eps - 2.0) * zeta * zeta) / (s * (eps * y + s).powi(2)),
        r_te0,
        c_te: -y * zeta * zeta / (s * (y + s).powi(2)),
    }
}

fn kappa_or_infinite(scenario: &CarrierScenario, eps0: f64, temperature: f64) -> Result<f64> {
    if temperature <= 0.0 && scenario.statistics == Statistics::MaxwellBoltzmann && scenario.density(0.0) > 0.0 {
        // Debye–Hückel screening length shrinks to zero with T.
        return Ok(f64::INFINITY);
    }
    screening_kappa(scenario, eps0, temperature)
}

/// Resolves the interface of `model` at ξ (rad/s) and temperature T under
/// `policy`, in the dimensionless variables of a gap of width `separation`
/// (ζ = 2aξ/c, y = 2aq).
pub fn resolve(
    policy: ReflectionPolicy,
    model: &DielectricModel,
    xi: f64,
    temperature: f64,
    separation: f64,
) -> Result<Interface> {
    if policy == ReflectionPolicy::IdealMetal {
        return Ok(Interface::IdealMetal);
    }
    let to_wavenumber = 2.0 * separation / SPEED_OF_LIGHT;
    let core_eps = model.core_eps(xi);
    let r0_core = || r0(model.static_permittivity());
    let drude_like = |wp: f64, gamma: f64, conducting: bool| {
        if xi == 0.0 {
            Interface::Zero(ZeroFrequencyRule::DrudeRule {
                conducting,
                r0: r0_core(),
            })
        } else {
            Interface::Local {
                eps: core_eps + crate::dielectric::drude_term(wp, gamma, xi),
            }
        }
    };
    let plasma_like = |wp: f64| {
        if wp == 0.0 {
            return bound_only(xi, core_eps, r0_core());
        }
        if xi == 0.0 {
            Interface::Zero(ZeroFrequencyRule::PlasmaRule {
                plasma_wavenumber: wp * to_wavenumber,
            })
        } else {
            Interface::Local {
                eps: core_eps + wp * wp / (xi * xi),
            }
        }
    };

    Ok(match model {
        DielectricModel::Oscillator(_) | DielectricModel::SiLorentz(_) | DielectricModel::SiLogBand(_) => {
            bound_only(xi, core_eps, r0_core())
        }
        DielectricModel::PlasmaLike { plasma_frequency, .. } => plasma_like(*plasma_frequency),
        DielectricModel::Drude {
            plasma_frequency,
            relaxation,
            ..
        } => {
            if policy == ReflectionPolicy::PlasmaLike {
                plasma_like(*plasma_frequency)
            } else {
                drude_like(
                    *plasma_frequency,
                    *relaxation,
                    *plasma_frequency > 0.0 && relaxation.is_finite(),
                )
            }
        }
        DielectricModel::DcAugmented { carriers, .. } => {
            let wp = carriers.plasma_frequency(temperature);
            let gamma = carriers.relaxation(temperature);
            let conducting = carriers.conducts(temperature);
            let standard = || {
                if carriers.is_dielectric() {
                    bound_only(xi, core_eps, r0_core())
                } else {
                    drude_like(wp, gamma, conducting)
                }
            };
            match policy {
                ReflectionPolicy::Standard => standard(),
                ReflectionPolicy::DcConductivity => {
                    if !carriers.is_dielectric() {
                        standard()
                    } else if xi == 0.0 {
                        Interface::Zero(ZeroFrequencyRule::DrudeRule {
                            conducting,
                            r0: r0_core(),
                        })
                    } else {
                        Interface::Local {
                            eps: core_eps + 4.0 * PI * crate::dielectric::conductivity(carriers, temperature) / xi,
                        }
                    }
                }
                ReflectionPolicy::Screened | ReflectionPolicy::StaticScreened => {
                    let eps0 = model.static_permittivity();
                    let kappa = kappa_or_infinite(carriers, eps0, temperature)?;
                    if xi == 0.0 {
                        Interface::Zero(ZeroFrequencyRule::ScreenedStatic {
                            eps0,
                            screening_wavenumber: kappa * 2.0 * separation,
                        })
                    } else if policy == ReflectionPolicy::StaticScreened {
                        standard()
                    } else {
                        Interface::Screened {
                            eps_core: core_eps,
                            eps_tilde: core_eps + crate::dielectric::drude_term(wp, gamma, xi),
                            eps0,
                            screening_wavenumber: kappa * 2.0 * separation,
                        }
                    }
                }
                ReflectionPolicy::PlasmaLike => plasma_like(wp),
                ReflectionPolicy::IdealMetal => unreachable!(),
            }
        }
    })
}

fn bound_only(xi: f64, core_eps: f64, r0: f64) -> Interface {
    if xi == 0.0 {
        Interface::Zero(ZeroFrequencyRule::DielectricFinite { r0 })
    } else {
        Interface::Local { eps: core_eps }
    }
}
