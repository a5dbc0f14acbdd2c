use crate::config::{Format, RunConfig};
use crate::fail::CliError;
use crate::output::{self, Meta};
use lifshitz::constants::{ev_to_rad_per_s, BOHR_RADIUS};
use lifshitz::dielectric::material_file::load_material;
use lifshitz::dielectric::{AtomModel, DielectricModel};
use lifshitz::engine::{
    free_energy_atom_wall, free_energy_atom_wall_zero_t, free_energy_plates, free_energy_plates_zero_t,
    pfa_sphere_force, AtomJob, EnergyResult, LifshitzJob, Numerics,
};
use lifshitz::scenarios::{self, GridSpec, ScenarioOutput, ScenarioSpec};
use lifshitz::thermo::{nernst_audit, AuditGrid, ExpectedVerdict, ModelClass, System};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const DEFAULT_EPS_SWEEP: &str = "1e12:1e18:61:log";

fn material(path: &Option<PathBuf>, flag: &str) -> Result<DielectricModel, CliError> {
    let p = path.as_ref().ok_or_else(|| CliError::Input(format!("{flag} is required")))?;
    Ok(load_material(p)?)
}

fn atom(spec: &str) -> Result<AtomModel, CliError> {
    if matches!(spec, "rubidium" | "rb" | "Rb") {
        return Ok(AtomModel::rubidium());
    }
    let bad = || CliError::Input(format!("atom `{spec}` is neither `rubidium` nor ALPHA0_AU:OMEGA_EV"));
    let (alpha, omega) = spec.split_once(':').ok_or_else(bad)?;
    let alpha: f64 = alpha.trim().parse().map_err(|_| bad())?;
    let omega: f64 = omega.trim().parse().map_err(|_| bad())?;
    Ok(AtomModel::new(alpha * BOHR_RADIUS.powi(3), ev_to_rad_per_s(omega))?)
}

fn grid(sweep: Option<&str>, default: Option<f64>, what: &str, allow_zero: bool) -> Result<Vec<f64>, CliError> {
    let Some(s) = sweep else {
        return Ok(vec![default.expect("a default abscissa")]);
    };
    let g: GridSpec = s.parse()?;
    let v = g.values();
    if v.is_empty() {
        return Err(CliError::Input(format!("{what} sweep is empty")));
    }
    if !v.iter().all(|x| x.is_finite() && (*x > 0.0 || (allow_zero && *x == 0.0))) {
        return Err(CliError::Input(format!("{what} sweep values must be {}", if allow_zero { "non-negative" } else { "positive" })));
    }
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Input(format!("{what} sweep must be strictly increasing")));
    }
    Ok(v)
}

fn fmt_value(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".into(), |x| format!("{x:.11e}"))
}

#[derive(Serialize)]
struct EpsRow {
    xi: f64,
    eps: Option<f64>,
    error: Option<String>,
}

pub fn eps(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let model = material(&cfg.material, "--material")?;
    let xs = grid(Some(cfg.sweep.as_deref().unwrap_or(DEFAULT_EPS_SWEEP)), None, "xi", true)?;
    let rows: Vec<EpsRow> = xs
        .iter()
        .map(|&xi| match model.eps(xi, cfg.temperature) {
            Ok(e) => EpsRow { xi, eps: Some(e), error: None },
            Err(e) => EpsRow {
                xi,
                eps: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let meta = Meta::new(cfg, &[]);
    let text = match cfg.format {
        Format::Json => output::json(&meta, &rows),
        Format::Csv => {
            let mut body = String::from("xi_rad_s,eps,status\n");
            for r in &rows {
                let status = r.error.as_ref().map_or("ok".to_string(), |e| format!("failed:{}", e.replace(',', ";")));
                let _ = writeln!(body, "{:.11e},{},{status}", r.xi, fmt_value(r.eps));
            }
            output::csv(&meta, &[format!("T = {} K", cfg.temperature)], &body)
        }
    };
    output::emit(&text, out)?;
    match rows.iter().find(|r| r.error.is_some()) {
        Some(r) => Err(CliError::Numerical(format!("ε(iξ) failed at ξ = {:e}: {}", r.xi, r.error.as_ref().unwrap()))),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct Row {
    abscissa: f64,
    value: Option<f64>,
    truncation_index: usize,
    quadrature_error: f64,
    error: Option<String>,
}

enum Geometry {
    Plates(LifshitzJob),
    Atom(AtomJob),
}

pub fn free_energy(cfg: &RunConfig, sweep_var: &str, out: Option<&Path>) -> Result<(), CliError> {
    let m1 = material(&cfg.material, "--material")?;
    let geometry = match &cfg.atom {
        Some(spec) => {
            if cfg.radius.is_some() {
                return Err(CliError::Input("--R applies to plate runs only".into()));
            }
            if cfg.material2.is_some() {
                return Err(CliError::Input("atom-wall runs take a single --material".into()));
            }
            Geometry::Atom(AtomJob::new(cfg.a, cfg.temperature, m1, atom(spec)?, cfg.policy)?.with_numerics(cfg.numerics))
        }
        None => {
            let m2 = match &cfg.material2 {
                Some(_) => material(&cfg.material2, "--material2")?,
                None => m1.clone(),
            };
            Geometry::Plates(LifshitzJob::new(cfg.a, cfg.temperature, m1, m2, cfg.policy)?.with_numerics(cfg.numerics))
        }
    };
    let (xs, abscissa) = match sweep_var {
        "T" => (grid(cfg.sweep.as_deref(), Some(cfg.temperature), "T", true)?, "T_K"),
        _ => (grid(cfg.sweep.as_deref(), Some(cfg.a), "a", false)?, "a_m"),
    };
    let value_name = match (&geometry, cfg.radius) {
        (Geometry::Atom(_), _) => "free_energy_J",
        (Geometry::Plates(_), Some(_)) => "force_N",
        (Geometry::Plates(_), None) => "free_energy_J_m2",
    };
    let point = |x: f64| -> Result<(f64, EnergyResult, Vec<String>), lifshitz::Error> {
        let (a, t) = if sweep_var == "T" { (cfg.a, x) } else { (x, cfg.temperature) };
        match &geometry {
            Geometry::Atom(job) => {
                let j = job.at(a, t);
                let r = if t == 0.0 { free_energy_atom_wall_zero_t(&j)? } else { free_energy_atom_wall(&j)? };
                Ok((r.value, r, vec![]))
            }
            Geometry::Plates(job) => {
                let j = job.at(a, t);
                match cfg.radius {
                    Some(radius) if t > 0.0 => {
                        let f = pfa_sphere_force(&j, radius)?;
                        Ok((f.value, f.energy, f.warnings))
                    }
                    Some(radius) => {
                        let r = free_energy_plates_zero_t(&j)?;
                        Ok((2.0 * std::f64::consts::PI * radius * r.value, r, vec![]))
                    }
                    None => {
                        let r = if t == 0.0 { free_energy_plates_zero_t(&j)? } else { free_energy_plates(&j)? };
                        Ok((r.value, r, vec![]))
                    }
                }
            }
        }
    };
    let results: Vec<Result<(f64, EnergyResult, Vec<String>), lifshitz::Error>> = xs.par_iter().map(|&x| point(x)).collect();
    let mut warnings: Vec<String> = Vec::new();
    let mut first_error = None;
    let rows: Vec<Row> = xs
        .iter()
        .zip(results)
        .map(|(&x, r)| match r {
            Ok((value, e, w)) => {
                for w in w {
                    if !warnings.contains(&w) {
                        warnings.push(w);
                    }
                }
                Row {
                    abscissa: x,
                    value: Some(value),
                    truncation_index: e.truncation_index,
                    quadrature_error: e.quadrature_error,
                    error: None,
                }
            }
            Err(e) => {
                let msg = e.to_string();
                first_error.get_or_insert(e);
                Row {
                    abscissa: x,
                    value: None,
                    truncation_index: 0,
                    quadrature_error: 0.0,
                    error: Some(msg),
                }
            }
        })
        .collect();
    let meta = Meta::new(cfg, &[]);
    let text = match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Table<'a> {
                abscissa: &'a str,
                value: &'a str,
                rows: &'a [Row],
                warnings: &'a [String],
            }
            output::json(
                &meta,
                &Table {
                    abscissa,
                    value: value_name,
                    rows: &rows,
                    warnings: &warnings,
                },
            )
        }
        Format::Csv => {
            let mut body = format!("{abscissa},{value_name},truncation_index,quadrature_error,status\n");
            for r in &rows {
                let status = r.error.as_ref().map_or("ok".to_string(), |e| format!("failed:{}", e.replace(',', ";")));
                let _ = writeln!(
                    body,
                    "{:.11e},{},{},{:.11e},{status}",
                    r.abscissa,
                    fmt_value(r.value),
                    r.truncation_index,
                    r.quadrature_error
                );
            }
            let mut comments = vec![format!("policy = {}", cfg.policy.name())];
            comments.extend(warnings.iter().map(|w| format!("warning: {w}")));
            output::csv(&meta, &comments, &body)
        }
    };
    output::emit(&text, out)?;
    match first_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn parse_class(s: &str) -> Result<ModelClass, CliError> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| {
        CliError::Input(format!(
            "unknown model class `{s}` (oscillator-only, dc-augmented, screened-vanishing-n, screened-fixed-n, plasma-like)"
        ))
    })
}

fn parse_grid(s: &str) -> Result<AuditGrid, CliError> {
    let bad = || CliError::Input(format!("audit grid `{s}` is not tau_min:tau_max:points"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let grid = AuditGrid {
        tau_min: parts[0].parse().map_err(|_| bad())?,
        tau_max: parts[1].parse().map_err(|_| bad())?,
        points: parts[2].parse().map_err(|_| bad())?,
    };
    grid.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(grid)
}

pub fn audit(
    cfg: &RunConfig,
    class: Option<&str>,
    grid: Option<&str>,
    expect: Option<&str>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let grid = grid.map(parse_grid).transpose()?.unwrap_or_default();
    let expect: Option<ExpectedVerdict> = expect.map(|e| e.parse()).transpose()?;
    let requested = class.map(parse_class).transpose()?;
    let (wall, policy, class) = match (&cfg.material, requested) {
        (Some(_), requested) => {
            let wall = material(&cfg.material, "--material")?;
            let inferred = ModelClass::infer(&wall, cfg.policy)?;
            if let Some(r) = requested {
                if r != inferred {
                    return Err(CliError::Input(format!(
                        "--class {r:?} does not match the class {inferred:?} of the material under policy {}",
                        cfg.policy.name()
                    )));
                }
            }
            (wall, cfg.policy, inferred)
        }
        (None, Some(c)) => {
            let (wall, policy) = scenarios::audit_family(c, 3.81, 2e16)?;
            (wall, policy, c)
        }
        (None, None) => return Err(CliError::Input("audit needs --material or --class".into())),
    };
    let system = match &cfg.atom {
        Some(spec) => System::AtomWall(AtomJob::new(cfg.a, 1.0, wall, atom(spec)?, policy)?.with_numerics(cfg.numerics)),
        None => System::Plates(LifshitzJob::symmetric(cfg.a, 1.0, wall, policy)?.with_numerics(cfg.numerics)),
    };
    let report = nernst_audit(&system, class, &grid)?;
    let meta = Meta::new(cfg, &[]);
    let text = match cfg.format {
        Format::Json => output::json(&meta, &report),
        Format::Csv => output::csv(&meta, &[], &scenarios::AuditTable::new(vec![report.clone()]).to_csv()),
    };
    output::emit(&text, out)?;
    match expect {
        Some(e) if !report.verdict.matches(e) => Err(CliError::Mismatch(format!(
            "expected {e:?}, audit gave {:?} (S0 = {:e} ± {:e})",
            report.verdict, report.fitted_s0, report.s0_uncertainty
        ))),
        _ => Ok(()),
    }
}

pub fn scenario(cfg: &RunConfig, spec_path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let mut spec = ScenarioSpec::load(spec_path)?;
    if cfg.numerics != Numerics::default() {
        *spec.numerics_mut() = cfg.numerics;
    }
    let mut inputs: Vec<PathBuf> = vec![spec_path.to_path_buf()];
    match &spec {
        ScenarioSpec::OpticalModulation(s) => inputs.extend(s.sphere_material.iter().chain(&s.overlay).cloned()),
        ScenarioSpec::CondensateShift(s) => inputs.extend(s.wall_material.iter().chain(&s.overlay).cloned()),
        ScenarioSpec::EntropyAudit(_) => {}
    }
    let refs: Vec<&Path> = inputs.iter().map(|p| p.as_path()).collect();
    let meta = Meta::new(cfg, &refs);
    let result = scenarios::run(&spec)?;

    let dir = out.unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let name = spec.name();
    let csv_path = dir.join(format!("{name}.csv"));
    let json_path = dir.join(format!("{name}.summary.json"));
    let (body, comments) = match &result {
        ScenarioOutput::Sweep(s) => {
            let mut c: Vec<String> = s.metadata.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            c.extend(s.warnings.iter().map(|w| format!("warning: {w}")));
            (s.to_csv(), c)
        }
        ScenarioOutput::Audit(t) => (t.to_csv(), vec![]),
    };
    output::emit(&output::csv(&meta, &comments, &body), Some(&csv_path))?;
    output::emit(&output::json(&meta, &result), Some(&json_path))?;
    eprintln!("wrote {} and {}", csv_path.display(), json_path.display());
    match &result {
        ScenarioOutput::Sweep(s) if s.failed_rows() > 0 => {
            Err(CliError::Numerical(format!("{} of {} rows failed", s.failed_rows(), s.rows.len())))
        }
        ScenarioOutput::Audit(t) if t.mismatches > 0 => {
            Err(CliError::Mismatch(format!("{} model classes disagree with the expected verdicts", t.mismatches)))
        }
        _ => Ok(()),
    }
}
