//! TOML material definitions.
//!
//! ```toml
//! [variant]
//! kind = "dc-augmented"      # oscillator | dc-augmented | plasma-like | drude | si-lorentz | si-logband | vacuum
//! core = "oscillator"        # bound-electron part for the carrier variants
//!
//! [[oscillators]]
//! delta_eps = 2.81           # or `strength` in rad²/s²
//! frequency = 2.0e16         # rad/s, or `frequency_ev`
//! damping = 0.0
//!
//! [carriers]
//! statistics = "maxwell-boltzmann"
//! effective_mass = 1.0       # in electron masses
//! density = { value = 1e18, activation_ev = 0.0 }     # cm⁻³
//! mobility = { value = 100.0, activation_ev = 0.3 }   # cm²/(V·s)
//! ```
//!
//! Plasma-like and Drude variants take `plasma_frequency` (rad/s) or
//! `plasma_frequency_ev`, and the Drude variant `relaxation` or `relaxation_ev`.
//! The Si variants accept overrides of their defaults in `[variant]`.

use super::{CarrierScenario, DielectricModel, Oscillator, OscillatorSet, SiLogBand, SiLorentz, Statistics, ThermalLaw};
use crate::constants::{ev_to_rad_per_s, CM2_TO_M2, ELECTRON_MASS, ELEMENTARY_CHARGE, PER_CM3_TO_PER_M3};
use crate::error::{Error, Result};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    variant: RawVariant,
    #[serde(default)]
    oscillators: Vec<RawOscillator>,
    carriers: Option<RawCarriers>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVariant {
    kind: String,
    core: Option<String>,
    plasma_frequency: Option<f64>,
    plasma_frequency_ev: Option<f64>,
    relaxation: Option<f64>,
    relaxation_ev: Option<f64>,
    eps_infinity: Option<f64>,
    eps_static: Option<f64>,
    omega0: Option<f64>,
    eps_bar: Option<f64>,
    omega0_ev: Option<f64>,
    omega1_ev: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOscillator {
    delta_eps: Option<f64>,
    strength: Option<f64>,
    frequency: Option<f64>,
    frequency_ev: Option<f64>,
    #[serde(default)]
    damping: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCarriers {
    statistics: Statistics,
    effective_mass: f64,
    density: RawLaw,
    mobility: RawLaw,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLaw {
    value: f64,
    #[serde(default)]
    activation_ev: f64,
}

/// Reads a material file from disk.
pub fn load_material(path: &Path) -> Result<DielectricModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_material(&text, &path.display().to_string())
}

/// Parses a material definition; `origin` names the source in diagnostics.
pub fn parse_material(text: &str, origin: &str) -> Result<DielectricModel> {
    let raw: RawMaterial = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of_offset(text, s.start));
        parse_error(origin, line, e.message())
    })?;
    let fail = |key: &str, msg: String| parse_error(origin, line_of_key(text, key), &msg);

    let oscillators = raw
        .oscillators
        .iter()
        .map(|o| {
            let frequency = match (o.frequency, o.frequency_ev) {
                (Some(w), None) => w,
                (None, Some(ev)) => ev_to_rad_per_s(ev),
                _ => return Err(fail("frequency", "give exactly one of `frequency` or `frequency_ev`".into())),
            };
            let strength = match (o.strength, o.delta_eps) {
                (Some(g), None) => g,
                (None, Some(d)) => d * frequency * frequency,
                _ => return Err(fail("oscillators", "give exactly one of `strength` or `delta_eps`".into())),
            };
            Ok(Oscillator { strength, frequency, damping: o.damping })
        })
        .collect::<Result<Vec<_>>>()?;
    let oscillators = OscillatorSet::new(oscillators).map_err(|e| fail("oscillators", e.to_string()))?;

    let v = &raw.variant;
    let bound = |name: &str| -> Result<DielectricModel> {
        match name {
            "oscillator" => Ok(DielectricModel::Oscillator(oscillators.clone())),
            "vacuum" => Ok(DielectricModel::vacuum()),
            "si-lorentz" => {
                let d = SiLorentz::default();
                Ok(DielectricModel::SiLorentz(SiLorentz {
                    eps_infinity: v.eps_infinity.unwrap_or(d.eps_infinity),
                    eps_static: v.eps_static.unwrap_or(d.eps_static),
                    omega0: v.omega0.unwrap_or(d.omega0),
                }))
            }
            "si-logband" => {
                let d = SiLogBand::default();
                Ok(DielectricModel::SiLogBand(SiLogBand {
                    eps_bar: v.eps_bar.unwrap_or(d.eps_bar),
                    omega0: v.omega0_ev.map(ev_to_rad_per_s).unwrap_or(d.omega0),
                    omega1: v.omega1_ev.map(ev_to_rad_per_s).unwrap_or(d.omega1),
                }))
            }
            other => Err(fail("core", format!("unknown bound-electron model `{other}`"))),
        }
    };
    let core = || bound(v.core.as_deref().unwrap_or("oscillator"));
    let either = |key: &str, rad: Option<f64>, ev: Option<f64>| -> Result<f64> {
        match (rad, ev) {
            (Some(w), None) => Ok(w),
            (None, Some(e)) => Ok(ev_to_rad_per_s(e)),
            _ => Err(fail(key, format!("give exactly one of `{key}` or `{key}_ev`"))),
        }
    };

    let model = match v.kind.as_str() {
        "oscillator" | "vacuum" | "si-lorentz" | "si-logband" => bound(&v.kind)?,
        "dc-augmented" => {
            let c = raw
                .carriers
                .as_ref()
                .ok_or_else(|| fail("kind", "dc-augmented materials need a [carriers] section".into()))?;
            let law = |l: &RawLaw, unit: f64| ThermalLaw::arrhenius(l.value * unit, l.activation_ev * ELEMENTARY_CHARGE);
            let carriers = CarrierScenario::new(
                law(&c.density, PER_CM3_TO_PER_M3),
                law(&c.mobility, CM2_TO_M2),
                c.statistics,
                c.effective_mass * ELECTRON_MASS,
            )
            .map_err(|e| fail("carriers", e.to_string()))?;
            DielectricModel::dc_augmented(core()?, carriers)
        }
        "plasma-like" => {
            let wp = either("plasma_frequency", v.plasma_frequency, v.plasma_frequency_ev)?;
            DielectricModel::plasma_like(core()?, wp)
        }
        "drude" => {
            let wp = either("plasma_frequency", v.plasma_frequency, v.plasma_frequency_ev)?;
            let gamma = either("relaxation", v.relaxation, v.relaxation_ev)?;
            DielectricModel::drude(core()?, wp, gamma)
        }
        other => return Err(fail("kind", format!("unknown material kind `{other}`"))),
    };
    for w in [v.plasma_frequency, v.relaxation].into_iter().flatten() {
        if !(w >= 0.0) {
            return Err(fail("plasma_frequency", "frequencies must be non-negative".into()));
        }
    }
    Ok(model)
}

fn parse_error(origin: &str, line: Option<usize>, message: &str) -> Error {
    let message = message.trim();
    Error::Parse {
        path: origin.to_string(),
        message: match line {
            Some(l) => format!("line {l}: {message}"),
            None => message.to_string(),
        },
    }
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn line_of_key(text: &str, key: &str) -> Option<usize> {
    text.lines()
        .position(|l| {
            let l = l.trim_start();
            l.starts_with(key) || l.contains(&format!("{key} ="))
        })
        .map(|i| i + 1)
}
