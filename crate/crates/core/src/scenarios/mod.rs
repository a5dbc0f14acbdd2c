//! Packaged theory runs: the optical modulation of the sphere–Si force, the
//! condensate frequency shift near a silica wall, and the entropy audit across
//! the five model classes.
//!
//! Spec files are TOML with a `scenario` discriminator:
//!
//! ```toml
//! scenario = "optical-modulation"
//! light_density_cm3 = 2.1e19
//! power_label = "9.3 mW"
//! separations = { start = 1.0e-7, stop = 5.0e-7, points = 41 }
//! ```
//!
//! Relative paths inside a spec (materials, overlay data) resolve against the
//! directory of the spec file.

mod grid;

pub use grid::GridSpec;

use crate::constants::{BOLTZMANN, CM2_TO_M2, ELECTRON_MASS, ELEMENTARY_CHARGE, PER_CM3_TO_PER_M3};
use crate::dielectric::material_file::load_material;
use crate::dielectric::{
    AtomModel, CarrierScenario, DielectricModel, OscillatorSet, SiLorentz, Statistics, ThermalLaw,
};
use crate::engine::{
    free_energy_plates_zero_t, frequency_shift_with_curvature, pfa_sphere_force, AtomJob, EnergyResult, LifshitzJob,
    Numerics, Trap,
};
use crate::error::{Error, Result};
use crate::reflection::ReflectionPolicy;
use crate::thermo::{nernst_audit, AsymptoticReport, AuditGrid, ExpectedVerdict, ModelClass, System};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "kebab-case")]
pub enum ScenarioSpec {
    OpticalModulation(OpticalModulation),
    CondensateShift(CondensateShift),
    EntropyAudit(EntropyAudit),
}

/// Sphere above a Si plate in the dark and under illumination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OpticalModulation {
    /// Dark-phase hole density at the run temperature, cm⁻³.
    pub dark_density_cm3: f64,
    /// Photo-excited density, cm⁻³.
    pub light_density_cm3: f64,
    /// Free-form label for the absorbed power that produced `light_density_cm3`.
    pub power_label: Option<String>,
    pub temperature: f64,
    pub sphere_radius: f64,
    /// Material file for the sphere; the built-in placeholder is used when absent.
    pub sphere_material: Option<PathBuf>,
    pub separations: GridSpec,
    pub overlay: Option<PathBuf>,
    pub numerics: Numerics,
}

impl Default for OpticalModulation {
    fn default() -> Self {
        OpticalModulation {
            dark_density_cm3: 5e14,
            light_density_cm3: 2.1e19,
            power_label: None,
            temperature: 300.0,
            sphere_radius: 100e-6,
            sphere_material: None,
            separations: GridSpec::Range {
                start: 100e-9,
                stop: 500e-9,
                points: 41,
                log: false,
            },
            overlay: None,
            numerics: Numerics::default(),
        }
    }
}

/// Condensate of point atoms oscillating in a trap above a dielectric wall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CondensateShift {
    /// Material file for the wall; fused silica with and without ionic
    /// conduction is used when absent.
    pub wall_material: Option<PathBuf>,
    pub surface_temperature: f64,
    pub environment_temperature: f64,
    pub atom: AtomModel,
    pub trap: Trap,
    pub distances: GridSpec,
    pub overlay: Option<PathBuf>,
    pub numerics: Numerics,
}

impl Default for CondensateShift {
    fn default() -> Self {
        CondensateShift {
            wall_material: None,
            surface_temperature: 310.0,
            environment_temperature: 310.0,
            atom: AtomModel::rubidium(),
            trap: Trap::default(),
            distances: GridSpec::Range {
                start: 7e-6,
                stop: 11e-6,
                points: 21,
                log: false,
            },
            overlay: None,
            numerics: Numerics::default(),
        }
    }
}

/// Nernst audit of plates made from one bound-electron core with the carrier
/// scenario of each model class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EntropyAudit {
    pub separation: f64,
    /// Static permittivity of the single-oscillator core.
    pub eps0: f64,
    /// Oscillator frequency of the core, rad/s.
    pub oscillator_frequency: f64,
    pub families: Vec<ModelClass>,
    pub grid: AuditGrid,
    pub numerics: Numerics,
}

impl Default for EntropyAudit {
    fn default() -> Self {
        EntropyAudit {
            separation: 1e-6,
            eps0: 3.81,
            oscillator_frequency: 2e16,
            families: ModelClass::ALL.to_vec(),
            grid: AuditGrid::default(),
            numerics: Numerics::default(),
        }
    }
}

impl ScenarioSpec {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            path: "scenario".into(),
            message: e.to_string(),
        })
    }

    /// Reads a spec and resolves its relative paths against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut spec = Self::parse(&text).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                path: path.display().to_string(),
                message,
            },
            other => other,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(q) = p.as_mut() {
                if q.is_relative() {
                    *q = base.join(&*q);
                }
            }
        };
        match &mut spec {
            ScenarioSpec::OpticalModulation(s) => {
                fix(&mut s.sphere_material);
                fix(&mut s.overlay);
            }
            ScenarioSpec::CondensateShift(s) => {
                fix(&mut s.wall_material);
                fix(&mut s.overlay);
            }
            ScenarioSpec::EntropyAudit(_) => {}
        }
        Ok(spec)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioSpec::OpticalModulation(_) => "optical-modulation",
            ScenarioSpec::CondensateShift(_) => "condensate-shift",
            ScenarioSpec::EntropyAudit(_) => "entropy-audit",
        }
    }

    pub fn numerics_mut(&mut self) -> &mut Numerics {
        match self {
            ScenarioSpec::OpticalModulation(s) => &mut s.numerics,
            ScenarioSpec::CondensateShift(s) => &mut s.numerics,
            ScenarioSpec::EntropyAudit(s) => &mut s.numerics,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ScenarioOutput {
    Sweep(SweepResult),
    Audit(AuditTable),
}

pub fn run(spec: &ScenarioSpec) -> Result<ScenarioOutput> {
    Ok(match spec {
        ScenarioSpec::OpticalModulation(s) => ScenarioOutput::Sweep(run_optical_modulation(s)?),
        ScenarioSpec::CondensateShift(s) => ScenarioOutput::Sweep(run_condensate_shift(s)?),
        ScenarioSpec::EntropyAudit(s) => ScenarioOutput::Audit(AuditTable::new(run_entropy_audit(s)?)),
    })
}

/// One computed quantity with the diagnostics of the evaluations behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub value: Option<f64>,
    pub truncation_index: usize,
    pub quadrature_error: f64,
    pub error: Option<String>,
}

impl Cell {
    fn ok(value: f64, parts: &[&EnergyResult]) -> Self {
        Cell {
            value: Some(value),
            truncation_index: parts.iter().map(|r| r.truncation_index).max().unwrap_or(0),
            quadrature_error: parts.iter().map(|r| r.quadrature_error).fold(0.0, f64::max),
            error: None,
        }
    }

    fn failed(e: &Error) -> Self {
        Cell {
            value: None,
            truncation_index: 0,
            quadrature_error: 0.0,
            error: Some(e.to_string()),
        }
    }

    fn from(r: Result<Cell>) -> Self {
        r.unwrap_or_else(|e| Cell::failed(&e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub abscissa: f64,
    pub cells: Vec<Cell>,
}

impl SweepRow {
    pub fn failed(&self) -> bool {
        self.cells.iter().any(|c| c.value.is_none())
    }
}

/// User-supplied measurement points plotted against the theory columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Overlay {
    pub source: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub scenario: String,
    /// Name of the abscissa column, with its unit.
    pub abscissa: String,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub metadata: BTreeMap<String, String>,
    pub warnings: Vec<String>,
    pub overlay: Option<Overlay>,
}

impl SweepResult {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.cells[i].value).collect())
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.failed()).count()
    }

    /// CSV with 12 significant digits, a diagnostics block and a status column.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{}", self.abscissa);
        for c in &self.columns {
            let _ = write!(out, ",{c}");
        }
        out.push_str(",max_truncation_index,max_quadrature_error,status\n");
        for row in &self.rows {
            let _ = write!(out, "{:.11e}", row.abscissa);
            for cell in &row.cells {
                match cell.value {
                    Some(v) => {
                        let _ = write!(out, ",{v:.11e}");
                    }
                    None => out.push_str(",nan"),
                }
            }
            let n = row.cells.iter().map(|c| c.truncation_index).max().unwrap_or(0);
            let q = row.cells.iter().map(|c| c.quadrature_error).fold(0.0, f64::max);
            let failed: Vec<&str> = self
                .columns
                .iter()
                .zip(&row.cells)
                .filter(|(_, c)| c.value.is_none())
                .map(|(name, _)| name.as_str())
                .collect();
            let status = if failed.is_empty() {
                "ok".to_string()
            } else {
                format!("failed:{}", failed.join(";"))
            };
            let _ = writeln!(out, ",{n},{q:.11e},{status}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep fields are serialisable")
    }
}

/// Reads a two-column (abscissa, value) file. Columns may be separated by
/// whitespace or commas; `#` starts a comment.
pub fn load_overlay(path: &Path) -> Result<Overlay> {
    let text = std::fs::read_to_string(path)?;
    parse_overlay(&text, &path.display().to_string())
}

pub fn parse_overlay(text: &str, origin: &str) -> Result<Overlay> {
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
        let bad = |msg: &str| Error::Parse {
            path: origin.to_string(),
            message: format!("line {}: {msg}", i + 1),
        };
        if fields.len() != 2 {
            return Err(bad("expected two columns"));
        }
        let x = fields[0].parse::<f64>().map_err(|_| bad("abscissa is not a number"))?;
        let y = fields[1].parse::<f64>().map_err(|_| bad("value is not a number"))?;
        points.push((x, y));
    }
    Ok(Overlay {
        source: origin.to_string(),
        points,
    })
}

fn overlay(path: &Option<PathBuf>) -> Result<Option<Overlay>> {
    path.as_deref().map(load_overlay).transpose()
}

/// Arrhenius law through `value` at temperature `t`.
pub fn arrhenius_through(value: f64, t: f64, activation: f64) -> ThermalLaw {
    ThermalLaw::arrhenius(value * (activation / (BOLTZMANN * t)).exp(), activation)
}

pub const SI_HOLE_MASS: f64 = 0.206 * ELECTRON_MASS;
/// Acceptor ionisation energy of B-doped Si, J.
pub const SI_ACCEPTOR_ENERGY: f64 = 0.045 * ELEMENTARY_CHARGE;
pub const SI_DARK_MOBILITY: f64 = 450.0 * CM2_TO_M2;
/// Gives a relaxation rate of 1.1e14 rad/s with the hole mass.
pub const SI_LIGHT_MOBILITY: f64 = 77.6 * CM2_TO_M2;

/// Dark B-doped Si: holes freeze out onto the acceptors as T → 0.
pub fn si_dark(density_cm3: f64, temperature: f64) -> Result<DielectricModel> {
    let carriers = CarrierScenario::new(
        arrhenius_through(density_cm3 * PER_CM3_TO_PER_M3, temperature, SI_ACCEPTOR_ENERGY),
        ThermalLaw::constant(SI_DARK_MOBILITY),
        Statistics::MaxwellBoltzmann,
        SI_HOLE_MASS,
    )?;
    Ok(DielectricModel::dc_augmented(DielectricModel::SiLorentz(SiLorentz::default()), carriers))
}

/// Illuminated Si: a photo-excited electron–hole plasma of fixed density.
pub fn si_light(density_cm3: f64) -> Result<DielectricModel> {
    let carriers = CarrierScenario::new(
        ThermalLaw::constant(density_cm3 * PER_CM3_TO_PER_M3),
        ThermalLaw::constant(SI_LIGHT_MOBILITY),
        Statistics::MaxwellBoltzmann,
        SI_HOLE_MASS,
    )?;
    Ok(DielectricModel::dc_augmented(DielectricModel::SiLorentz(SiLorentz::default()), carriers))
}

/// NON-PHYSICAL placeholder for the Au sphere coating: a bare plasma model with
/// ω_p = 9 eV and no bound electrons. Supply a real oscillator file for physics.
pub fn placeholder_gold() -> DielectricModel {
    DielectricModel::plasma_like(DielectricModel::vacuum(), crate::constants::ev_to_rad_per_s(9.0))
}

pub const OPTICAL_COLUMNS: [&str; 4] = [
    "dF_dc_neglected_N",
    "dF_dc_included_N",
    "dF_screened_N",
    "dF_zero_T_N",
];

/// ΔF(a) = F^L(a) − F^D(a) between sphere and Si plate for the four
/// descriptions of the dark plate's free carriers.
pub fn run_optical_modulation(spec: &OpticalModulation) -> Result<SweepResult> {
    let separations = spec.separations.positive_increasing("separation")?;
    if !(spec.temperature > 0.0) {
        return Err(Error::invalid("temperature must be positive"));
    }
    if !(spec.dark_density_cm3 >= 0.0 && spec.light_density_cm3 >= 0.0) {
        return Err(Error::invalid("carrier densities must be non-negative"));
    }
    let (sphere, sphere_label) = match &spec.sphere_material {
        Some(p) => (load_material(p)?, p.display().to_string()),
        None => (placeholder_gold(), "placeholder plasma-like Au (non-physical)".to_string()),
    };
    let dark = si_dark(spec.dark_density_cm3, spec.temperature)?;
    let light = if spec.light_density_cm3 == spec.dark_density_cm3 {
        dark.clone()
    } else {
        si_light(spec.light_density_cm3)?
    };
    let r = spec.sphere_radius;
    let job = |material: &DielectricModel, t: f64, policy| -> Result<LifshitzJob> {
        Ok(LifshitzJob::new(separations[0], t, sphere.clone(), material.clone(), policy)?.with_numerics(spec.numerics))
    };
    let variants = [
        (spec.temperature, ReflectionPolicy::Standard),
        (spec.temperature, ReflectionPolicy::DcConductivity),
        (spec.temperature, ReflectionPolicy::Screened),
        (0.0, ReflectionPolicy::Standard),
    ];
    let pairs = variants
        .iter()
        .map(|&(t, p)| Ok((job(&dark, t, p)?, job(&light, t, p)?)))
        .collect::<Result<Vec<_>>>()?;

    let rows: Vec<(SweepRow, Vec<String>)> = separations
        .par_iter()
        .map(|&a| {
            let mut warnings = Vec::new();
            let cells = pairs
                .iter()
                .map(|(d, l)| {
                    let (d, l) = (d.at(a, d.temperature), l.at(a, l.temperature));
                    Cell::from(difference_cell(&d, &l, r, &mut warnings))
                })
                .collect();
            (SweepRow { abscissa: a, cells }, warnings)
        })
        .collect();

    let mut warnings = Vec::new();
    let mut out_rows = Vec::with_capacity(rows.len());
    for (row, w) in rows {
        for w in w {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        out_rows.push(row);
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("temperature_K".into(), format!("{}", spec.temperature));
    metadata.insert("dark_density_cm3".into(), format!("{:e}", spec.dark_density_cm3));
    metadata.insert("light_density_cm3".into(), format!("{:e}", spec.light_density_cm3));
    metadata.insert("sphere_radius_m".into(), format!("{:e}", r));
    metadata.insert("sphere_material".into(), sphere_label);
    if let Some(label) = &spec.power_label {
        metadata.insert("absorbed_power".into(), label.clone());
    }
    Ok(SweepResult {
        scenario: "optical-modulation".into(),
        abscissa: "a_m".into(),
        columns: OPTICAL_COLUMNS.iter().map(|s| s.to_string()).collect(),
        rows: out_rows,
        metadata,
        warnings,
        overlay: overlay(&spec.overlay)?,
    })
}

fn difference_cell(dark: &LifshitzJob, light: &LifshitzJob, radius: f64, warnings: &mut Vec<String>) -> Result<Cell> {
    if dark.temperature == 0.0 {
        let fd = free_energy_plates_zero_t(dark)?;
        if dark == light {
            return Ok(Cell::ok(0.0, &[&fd]));
        }
        let fl = free_energy_plates_zero_t(light)?;
        return Ok(Cell::ok(2.0 * PI * radius * (fl.value - fd.value), &[&fd, &fl]));
    }
    let fd = pfa_sphere_force(dark, radius)?;
    warnings.extend(fd.warnings.iter().cloned());
    if dark == light {
        return Ok(Cell::ok(0.0, &[&fd.energy]));
    }
    let fl = pfa_sphere_force(light, radius)?;
    Ok(Cell::ok(fl.value - fd.value, &[&fd.energy, &fl.energy]))
}

pub const CONDENSATE_COLUMNS: [&str; 2] = ["gamma_z_dc_neglected", "gamma_z_dc_included"];

/// Fused silica: one oscillator with ε₀ = 3.81.
pub fn silica() -> DielectricModel {
    DielectricModel::Oscillator(OscillatorSet::single(3.81, 2e16).expect("valid oscillator"))
}

/// Fused silica with thermally activated ionic conduction, σ(310 K) = 1e-9 S/m.
pub fn silica_with_ions() -> DielectricModel {
    let n = 1e24;
    let activation = 0.9 * ELEMENTARY_CHARGE;
    let mobility = 1e-9 / (n * ELEMENTARY_CHARGE);
    let carriers = CarrierScenario::new(
        ThermalLaw::constant(n),
        arrhenius_through(mobility, 310.0, activation),
        Statistics::MaxwellBoltzmann,
        ELECTRON_MASS,
    )
    .expect("valid carriers");
    DielectricModel::dc_augmented(silica(), carriers)
}

/// γ_z(z) of a condensate in thermal equilibrium with the wall, with the dc
/// conductivity of the wall neglected and included.
pub fn run_condensate_shift(spec: &CondensateShift) -> Result<SweepResult> {
    if spec.surface_temperature != spec.environment_temperature {
        return Err(Error::OutOfScope(format!(
            "surface at {} K and environment at {} K: out-of-equilibrium atom-wall forces are not modelled; \
             only runs with equal temperatures are supported",
            spec.surface_temperature, spec.environment_temperature
        )));
    }
    let distances = spec.distances.positive_increasing("distance")?;
    let t = spec.surface_temperature;
    if !(t > 0.0) {
        return Err(Error::invalid("temperature must be positive"));
    }
    let mut warnings = Vec::new();
    let (neglected, included, wall_label) = match &spec.wall_material {
        Some(p) => {
            let m = load_material(p)?;
            if m.carriers().is_none() {
                warnings.push("wall material has no carriers; both columns describe the same model".to_string());
            }
            (m.clone(), m, p.display().to_string())
        }
        None => (silica(), silica_with_ions(), "fused silica, eps0 = 3.81".to_string()),
    };
    let job = |wall: DielectricModel, policy| -> Result<AtomJob> {
        Ok(AtomJob::new(distances[0], t, wall, spec.atom, policy)?.with_numerics(spec.numerics))
    };
    let jobs = [
        job(neglected, ReflectionPolicy::Standard)?,
        job(included, ReflectionPolicy::DcConductivity)?,
    ];
    let rows: Vec<SweepRow> = distances
        .par_iter()
        .map(|&z| SweepRow {
            abscissa: z,
            cells: jobs
                .iter()
                .map(|j| {
                    Cell::from(
                        frequency_shift_with_curvature(&j.at(z, t), &spec.trap).map(|(g, c)| Cell::ok(g, &[&c])),
                    )
                })
                .collect(),
        })
        .collect();

    for (k, name) in CONDENSATE_COLUMNS.iter().enumerate() {
        let col: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.cells[k].value.map(|v| (r.abscissa, v))).collect();
        if col.iter().any(|(_, g)| !(*g > 0.0)) {
            warnings.push(format!("{name} is not strictly positive"));
        }
        if col.windows(2).any(|w| w[1].1 >= w[0].1) {
            warnings.push(format!("{name} does not decrease monotonically with z"));
        }
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("temperature_K".into(), format!("{t}"));
    metadata.insert("wall_material".into(), wall_label);
    metadata.insert("trap_frequency_rad_s".into(), format!("{:e}", spec.trap.frequency));
    metadata.insert("atomic_mass_kg".into(), format!("{:e}", spec.trap.mass));
    metadata.insert("atom_alpha0_m3".into(), format!("{:e}", spec.atom.static_polarizability));
    Ok(SweepResult {
        scenario: "condensate-shift".into(),
        abscissa: "z_m".into(),
        columns: CONDENSATE_COLUMNS.iter().map(|s| s.to_string()).collect(),
        rows,
        metadata,
        warnings,
        overlay: overlay(&spec.overlay)?,
    })
}

/// Plate material and policy that realise a model class from a single-oscillator core.
pub fn audit_family(class: ModelClass, eps0: f64, frequency: f64) -> Result<(DielectricModel, ReflectionPolicy)> {
    let core = DielectricModel::Oscillator(OscillatorSet::single(eps0, frequency)?);
    let activation = 0.3 * ELEMENTARY_CHARGE;
    let fixed_n = CarrierScenario::new(
        ThermalLaw::constant(1e24),
        ThermalLaw::arrhenius(1e-2, activation),
        Statistics::MaxwellBoltzmann,
        ELECTRON_MASS,
    )?;
    let vanishing_n = CarrierScenario::new(
        ThermalLaw::arrhenius(1e24, activation),
        ThermalLaw::constant(1e-2),
        Statistics::MaxwellBoltzmann,
        ELECTRON_MASS,
    )?;
    Ok(match class {
        ModelClass::OscillatorOnly => (core, ReflectionPolicy::Standard),
        ModelClass::DcAugmented => (DielectricModel::dc_augmented(core, fixed_n), ReflectionPolicy::DcConductivity),
        ModelClass::ScreenedFixedN => (DielectricModel::dc_augmented(core, fixed_n), ReflectionPolicy::Screened),
        ModelClass::ScreenedVanishingN => (DielectricModel::dc_augmented(core, vanishing_n), ReflectionPolicy::Screened),
        ModelClass::PlasmaLike => (
            DielectricModel::plasma_like(DielectricModel::vacuum(), crate::constants::ev_to_rad_per_s(9.0)),
            ReflectionPolicy::PlasmaLike,
        ),
    })
}

/// One Nernst audit of plates per requested model class, in request order.
pub fn run_entropy_audit(spec: &EntropyAudit) -> Result<Vec<AsymptoticReport>> {
    if spec.families.is_empty() {
        return Err(Error::invalid("entropy audit needs at least one model family"));
    }
    spec.grid.validate()?;
    spec.families
        .iter()
        .map(|&class| {
            let (material, policy) = audit_family(class, spec.eps0, spec.oscillator_frequency)?;
            let inferred = ModelClass::infer(&material, policy)?;
            debug_assert_eq!(inferred, class);
            let job = LifshitzJob::symmetric(spec.separation, 1.0, material, policy)?.with_numerics(spec.numerics);
            nernst_audit(&System::Plates(job), class, &spec.grid)
        })
        .collect()
}

/// Audit reports with their comparison against the expected verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditTable {
    pub reports: Vec<AsymptoticReport>,
    pub mismatches: usize,
}

impl AuditTable {
    pub fn new(reports: Vec<AsymptoticReport>) -> Self {
        let mismatches = reports
            .iter()
            .filter(|r| !r.verdict.matches(r.model_class.expected()))
            .count();
        AuditTable { reports, mismatches }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "model_class,policy,expected,verdict,fitted_s0,s0_uncertainty,predicted_s0,leading_coefficient,match\n",
        );
        for r in &self.reports {
            let expected = match r.model_class.expected() {
                ExpectedVerdict::Satisfied => "satisfied",
                ExpectedVerdict::Violated => "violated",
            };
            let verdict = match r.verdict {
                crate::thermo::Verdict::NernstSatisfied => "satisfied",
                crate::thermo::Verdict::NernstViolated { .. } => "violated",
            };
            let class = serde_json::to_value(r.model_class).expect("unit variant");
            let _ = writeln!(
                out,
                "{},{},{expected},{verdict},{:.11e},{:.11e},{:.11e},{:.11e},{}",
                class.as_str().unwrap_or_default(),
                r.policy.name(),
                r.fitted_s0,
                r.s0_uncertainty,
                r.predicted_s0,
                r.leading_coefficient,
                r.verdict.matches(r.model_class.expected())
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are serialisable")
    }
}
