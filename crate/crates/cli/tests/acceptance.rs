//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Reference values are computed here from closed forms with independent series
//! (ζ(3), Li₃) rather than through the library's special functions.

use lifshitz::constants::{effective_temperature, BOLTZMANN, ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR, SPEED_OF_LIGHT};
use lifshitz::dielectric::{
    eps_si_logband, eps_si_lorentz, screening_kappa, AtomModel, CarrierScenario, DielectricModel, OscillatorSet,
    Statistics, ThermalLaw,
};
use lifshitz::engine::{free_energy_plates, free_energy_plates_zero_t, AtomJob, LifshitzJob};
use lifshitz::reflection::{beta_expansion, fresnel, screened_tm, screened_tm_static, uniaxial, ReflectionPolicy};
use lifshitz::scenarios::{run_entropy_audit, AuditTable, EntropyAudit};
use lifshitz::thermo::{
    dc_residual_entropy_plates, nernst_audit, predicted_residual, AuditGrid, ModelClass, System, Verdict,
};
use rand::{rngs::StdRng, Rng, SeedableRng};
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn zeta3_series() -> f64 {
    // Σ_{k≤N} 1/k³ plus the Euler–Maclaurin tail 1/(2N²) − 1/(2N³) + 1/(4N⁴).
    let n = 100_000u64;
    let head: f64 = (1..=n).rev().map(|k| 1.0 / (k as f64).powi(3)).sum();
    let nf = n as f64;
    head + 1.0 / (2.0 * nf * nf) - 1.0 / (2.0 * nf.powi(3)) + 1.0 / (4.0 * nf.powi(4))
}

fn li3_series(z: f64) -> f64 {
    assert!((0.0..0.9).contains(&z));
    (1..2000).rev().map(|k| z.powi(k) / (k as f64).powi(3)).sum()
}

fn r0(eps0: f64) -> f64 {
    (eps0 - 1.0) / (eps0 + 1.0)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn oscillator(eps0: f64) -> DielectricModel {
    DielectricModel::Oscillator(OscillatorSet::single(eps0, 2e16).unwrap())
}

fn fixed_n_carriers() -> CarrierScenario {
    CarrierScenario::new(
        ThermalLaw::constant(1e24),
        ThermalLaw::arrhenius(1e-2, 0.3 * ELEMENTARY_CHARGE),
        Statistics::MaxwellBoltzmann,
        ELECTRON_MASS,
    )
    .unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ideal_metal_limit() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for a in [100e-9, 1e-6] {
        let job = LifshitzJob::symmetric(a, 0.0, DielectricModel::vacuum(), ReflectionPolicy::IdealMetal).unwrap();
        let start = Instant::now();
        let f = free_energy_plates_zero_t(&job).map_err(|e| e.to_string())?.value;
        let took = start.elapsed();
        let exact = -PI * PI * HBAR * SPEED_OF_LIGHT / (720.0 * a.powi(3));
        let r = rel(f, exact);
        ok &= r < 1e-3 && took < Duration::from_secs(1);
        details.push(format!("a={a:e}: rel {r:.1e} in {:.3}s", took.as_secs_f64()));
    }
    check(ok, details.join(", "))
}

fn oscillator_quadratic_entropy() -> Outcome {
    let a = 1e-6;
    let eps0 = 3.81;
    let job = LifshitzJob::symmetric(a, 1.0, oscillator(eps0), ReflectionPolicy::Standard).unwrap();
    let start = Instant::now();
    let grid = AuditGrid::default();
    let report = nernst_audit(&System::Plates(job), ModelClass::OscillatorOnly, &grid).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let t_eff = effective_temperature(a);
    let r = r0(eps0);
    let expected = 3.0 * BOLTZMANN / (16.0 * PI * a * a) * zeta3_series() * r * r * (eps0 + 1.0) / (t_eff * t_eff);
    let d = rel(report.leading_coefficient, expected);
    check(
        d < 0.05 && report.samples.len() == 12 && took < Duration::from_secs(120),
        format!("T² coefficient rel. error {:.1e} over {} points in {:.1}s", d, report.samples.len(), took.as_secs_f64()),
    )
}

fn plate_residual_oracle(a: f64, eps0: f64) -> f64 {
    let r = r0(eps0);
    BOLTZMANN / (16.0 * PI * a * a) * (zeta3_series() - li3_series(r * r))
}

fn dc_residual() -> Outcome {
    let a = 1e-6;
    let wall = DielectricModel::dc_augmented(oscillator(3.81), fixed_n_carriers());
    let job = LifshitzJob::symmetric(a, 1.0, wall, ReflectionPolicy::DcConductivity).unwrap();
    let report = nernst_audit(&System::Plates(job), ModelClass::DcAugmented, &AuditGrid::default())
        .map_err(|e| e.to_string())?;
    let d = rel(report.fitted_s0, plate_residual_oracle(a, 3.81));
    check(
        d < 0.02 && matches!(report.verdict, Verdict::NernstViolated { .. }),
        format!("S0 = {:.6e}, rel. error {:.1e}", report.fitted_s0, d),
    )
}

fn screened_residual() -> Outcome {
    let a = 1e-6;
    let wall = DielectricModel::dc_augmented(oscillator(3.81), fixed_n_carriers());
    let system = System::Plates(LifshitzJob::symmetric(a, 1.0, wall, ReflectionPolicy::Screened).unwrap());
    let screened = predicted_residual(&system, ModelClass::ScreenedFixedN).map_err(|e| e.to_string())?;
    let dc = dc_residual_entropy_plates(a, 3.81).map_err(|e| e.to_string())?;
    let closed = rel(screened, dc);
    let report = nernst_audit(&system, ModelClass::ScreenedFixedN, &AuditGrid::default()).map_err(|e| e.to_string())?;
    let engine = rel(report.fitted_s0, plate_residual_oracle(a, 3.81));
    check(
        closed < 1e-12 && engine < 0.05 && matches!(report.verdict, Verdict::NernstViolated { .. }),
        format!("closed forms agree to {closed:.1e}, engine S0 rel. error {:.1e}", engine),
    )
}

fn atom_residual() -> Outcome {
    let a = 1e-6;
    let atom = AtomModel::rubidium();
    let mut details = Vec::new();
    let mut ok = true;
    for eps0 in [3.81, 11.87] {
        let wall = DielectricModel::dc_augmented(oscillator(eps0), fixed_n_carriers());
        let job = AtomJob::new(a, 1.0, wall, atom, ReflectionPolicy::DcConductivity).unwrap();
        let report = nernst_audit(&System::AtomWall(job), ModelClass::DcAugmented, &AuditGrid::default())
            .map_err(|e| e.to_string())?;
        let expected = BOLTZMANN * atom.static_polarizability / (4.0 * a.powi(3)) * (1.0 - r0(eps0));
        let d = rel(report.fitted_s0, expected);
        ok &= d < 0.02;
        details.push(format!("eps0={eps0}: rel. error {:.1e}", d));
    }
    check(ok, details.join(", "))
}

fn screened_coefficient_chain() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let eps0 = rng.random_range(1.5..30.0);
        let n = 10f64.powf(rng.random_range(18.0..26.0));
        let k = 10f64.powf(rng.random_range(4.0..8.0));
        let carriers = CarrierScenario::new(
            ThermalLaw::constant(n),
            ThermalLaw::constant(0.05),
            Statistics::MaxwellBoltzmann,
            ELECTRON_MASS,
        )
        .unwrap();
        let t = 300.0;
        let kappa = screening_kappa(&carriers, eps0, t).unwrap();
        let core = |xi: f64| 1.0 + (eps0 - 1.0) * 4e32 / (4e32 + xi * xi);
        let limit = screened_tm(core, &carriers, 1e-6, k, t).map_err(|e| e.to_string())?;
        let stat = screened_tm_static(eps0, kappa, k);
        let (uni, _) = uniaxial(eps0, eps0 * (1.0 + kappa * kappa / (k * k)), 0.0, k);
        worst = worst.max((limit - stat).abs()).max((stat - uni).abs());
    }
    check(worst < 1e-12, format!("largest deviation {worst:.1e} over 20 triples"))
}

fn beta_slopes() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let beta = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let zeta: f64 = rng.random_range(0.01..20.0);
        let y = zeta + rng.random_range(0.0..20.0);
        let eps = rng.random_range(1.0..20.0);
        let b = beta_expansion(eps, zeta, y);
        // fresnel takes (ξ, k⊥); the pair is homogeneous, so ξ/c = ζ, q = y will do.
        let xi = zeta * SPEED_OF_LIGHT;
        let k = (y * y - zeta * zeta).max(0.0).sqrt();
        let (tm0, te0) = fresnel(|_| eps, xi, k);
        let (tm1, te1) = fresnel(|_| eps + beta, xi, k);
        worst = worst.max(rel((tm1 - tm0) / beta, b.c_tm)).max(rel((te1 - te0) / beta, b.c_te));
    }
    check(worst < 1e-5, format!("largest relative slope error {worst:.1e} over 50 samples"))
}

fn si_models() -> Outcome {
    let endpoints = eps_si_lorentz(0.0) == 11.87 && eps_si_lorentz(f64::INFINITY) == 1.035;
    let worst = (0..=300)
        .map(|i| 10f64.powf(14.0 + 3.0 * i as f64 / 300.0))
        .map(|xi| rel(eps_si_logband(xi), eps_si_lorentz(xi)))
        .fold(0.0, f64::max);
    check(endpoints && worst < 0.15, format!("endpoints exact: {endpoints}, largest gap {:.2}%", 100.0 * worst))
}

fn classical_limit() -> Outcome {
    let a = 1e-6;
    let eps0 = 3.81;
    let t = 10.0 * HBAR * SPEED_OF_LIGHT / (a * BOLTZMANN);
    let plain = LifshitzJob::symmetric(a, t, oscillator(eps0), ReflectionPolicy::Standard).unwrap();
    let f = free_energy_plates(&plain).map_err(|e| e.to_string())?.value;
    let r = r0(eps0);
    let classical = -BOLTZMANN * t * li3_series(r * r) / (16.0 * PI * a * a);
    let d1 = rel(f, classical);
    // Carriers whose σ is negligible at every ξ_l ≥ ξ₁ yet non-zero.
    let weak = CarrierScenario::new(
        ThermalLaw::constant(1e10),
        ThermalLaw::arrhenius(1e-2, 0.3 * ELEMENTARY_CHARGE),
        Statistics::MaxwellBoltzmann,
        ELECTRON_MASS,
    )
    .unwrap();
    let dc = LifshitzJob::symmetric(a, t, DielectricModel::dc_augmented(oscillator(eps0), weak), ReflectionPolicy::DcConductivity)
        .unwrap();
    let f_dc = free_energy_plates(&dc).map_err(|e| e.to_string())?.value;
    let correction = -BOLTZMANN * t / (16.0 * PI * a * a) * (zeta3_series() - li3_series(r * r));
    let d2 = rel(f_dc - f, correction);
    check(
        d1 < 0.01 && d2 < 0.01,
        format!("classical limit rel. error {:.1e}, dc difference rel. error {:.1e}", d1, d2),
    )
}

fn verdict_table() -> Outcome {
    let start = Instant::now();
    let table = AuditTable::new(run_entropy_audit(&EntropyAudit::default()).map_err(|e| e.to_string())?);
    let took = start.elapsed();
    let classes: Vec<ModelClass> = table.reports.iter().map(|r| r.model_class).collect();
    check(
        table.mismatches == 0 && classes == ModelClass::ALL && took < Duration::from_secs(900),
        format!("{} classes, {} mismatches, {:.1}s", table.reports.len(), table.mismatches, took.as_secs_f64()),
    )
}

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_lifshitz"))
        .args(args)
        .current_dir(repo())
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {:?}", out.status.code()));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = 0;
    let commands: [&[&str]; 3] = [
        &["eps", "--material", "materials/si-logband.toml", "--deterministic"],
        &["free-energy", "--material", "materials/silica-dc.toml", "--policy", "dc", "--sweep", "1e-7:1e-6:8:log", "--deterministic"],
        &["audit", "--class", "screened-fixed-n", "--format", "json", "--deterministic"],
    ];
    for args in commands {
        let first = run_cli(args)?;
        let second = run_cli(args)?;
        if first != second || first.is_empty() {
            return Err(format!("{} output differs between runs", args[0]));
        }
        compared += 1;
    }
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        run_cli(&["scenario", "scenarios/condensate-shift.toml", "--out", out.to_str().unwrap(), "--deterministic"])?;
    }
    for file in ["condensate-shift.csv", "condensate-shift.summary.json"] {
        let a = std::fs::read(dir.path().join("a").join(file)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dir.path().join("b").join(file)).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{file} differs between runs"));
        }
        compared += 1;
    }
    Ok(format!("{compared} outputs byte-identical across reruns"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("ideal-metal limit", ideal_metal_limit),
        ("oscillator entropy T² law", oscillator_quadratic_entropy),
        ("dc residual entropy", dc_residual),
        ("screened fixed-n residual", screened_residual),
        ("atom-wall residual entropy", atom_residual),
        ("screened coefficient chain", screened_coefficient_chain),
        ("beta-expansion slopes", beta_slopes),
        ("Si permittivity models", si_models),
        ("classical limit and dc correction", classical_limit),
        ("scenario verdict table", verdict_table),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
