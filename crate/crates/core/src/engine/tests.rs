use super::*;
use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE};
use crate::dielectric::{CarrierScenario, OscillatorSet, Statistics, ThermalLaw};
use crate::numerics::{polylog3, zeta3};
use crate::reflection::r0;

fn silica() -> DielectricModel {
    DielectricModel::Oscillator(OscillatorSet::single(3.81, 2e16).unwrap())
}

fn ideal(a: f64, t: f64) -> LifshitzJob {
    LifshitzJob::symmetric(a, t, DielectricModel::vacuum(), ReflectionPolicy::IdealMetal).unwrap()
}

fn casimir_ideal(a: f64) -> f64 {
    -PI * PI * HBAR * SPEED_OF_LIGHT / (720.0 * a.powi(3))
}

fn frozen_carriers() -> CarrierScenario {
    CarrierScenario::new(
        ThermalLaw::constant(1e24),
        ThermalLaw::arrhenius(1e-2, 0.3 * ELEMENTARY_CHARGE),
        Statistics::MaxwellBoltzmann,
        ELECTRON_MASS,
    )
    .unwrap()
}

#[test]
fn vacuum_gives_zero() {
    let job = LifshitzJob::symmetric(1e-6, 300.0, DielectricModel::vacuum(), ReflectionPolicy::Standard).unwrap();
    assert_eq!(free_energy_plates(&job).unwrap().value, 0.0);
    assert_eq!(free_energy_plates(&job.at(1e-6, 0.0)).unwrap().value, 0.0);
    let atom = AtomJob::new(1e-6, 300.0, DielectricModel::vacuum(), AtomModel::rubidium(), ReflectionPolicy::Standard)
        .unwrap();
    assert_eq!(free_energy_atom_wall(&atom).unwrap().value, 0.0);
}

#[test]
fn ideal_metal_zero_temperature() {
    for &a in &[1e-7, 1e-6] {
        let e = free_energy_plates_zero_t(&ideal(a, 0.0)).unwrap().value;
        assert!((e / casimir_ideal(a) - 1.0).abs() < 1e-3, "{}", e / casimir_ideal(a));
    }
}

#[test]
fn ideal_metal_low_temperature() {
    let a = 1e-6;
    let t = 0.01 * effective_temperature(a);
    let f = free_energy_plates(&ideal(a, t)).unwrap().value;
    assert!((f / casimir_ideal(a) - 1.0).abs() < 5e-3, "{}", f / casimir_ideal(a));
}

#[test]
fn classical_limit_is_the_zero_frequency_term() {
    // a k_B T/ħc = 10
    let a = 1e-6;
    let t = 10.0 * HBAR * SPEED_OF_LIGHT / (a * BOLTZMANN);
    let r = r0(3.81);
    let f = free_energy_plates(&LifshitzJob::symmetric(a, t, silica(), ReflectionPolicy::Standard).unwrap())
        .unwrap()
        .value;
    let classical = -BOLTZMANN * t * polylog3(r * r).unwrap() / (16.0 * PI * a * a);
    assert!((f / classical - 1.0).abs() < 1e-2, "{}", f / classical);
}

#[test]
fn zero_temperature_branch_is_the_low_temperature_limit() {
    let a = 1e-7;
    let job = LifshitzJob::symmetric(a, 1.0, silica(), ReflectionPolicy::Standard).unwrap();
    let f = free_energy_plates(&job).unwrap().value;
    let e = free_energy_plates(&job.at(a, 0.0)).unwrap();
    assert_eq!(e.truncation_index, 0);
    assert!((f / e.value - 1.0).abs() < 1e-3, "{}", f / e.value);
}

#[test]
fn free_energy_is_attractive_and_decays_with_separation() {
    let mut last = f64::NEG_INFINITY;
    for &a in &[1e-7, 2e-7, 5e-7, 1e-6, 2e-6] {
        let f = free_energy_plates(&LifshitzJob::symmetric(a, 300.0, silica(), ReflectionPolicy::Standard).unwrap())
            .unwrap()
            .value;
        assert!(f < 0.0 && f > last, "a = {a}: {f}");
        last = f;
    }
}

#[test]
fn truncation_index_grows_as_temperature_falls() {
    let job = LifshitzJob::symmetric(1e-6, 300.0, silica(), ReflectionPolicy::Standard).unwrap();
    let hot = free_energy_plates(&job).unwrap().truncation_index;
    let cold = free_energy_plates(&job.at(1e-6, 30.0)).unwrap().truncation_index;
    assert!(cold > 5 * hot, "{hot} {cold}");
}

#[test]
fn dc_term_only_changes_the_zero_frequency_term() {
    let a = 1e-6;
    let t = 1e-3 * effective_temperature(a);
    let numerics = Numerics {
        breakdown: true,
        ..Numerics::default()
    };
    let osc = LifshitzJob::symmetric(a, t, silica(), ReflectionPolicy::Standard)
        .unwrap()
        .with_numerics(numerics);
    let dc = LifshitzJob::symmetric(
        a,
        t,
        DielectricModel::dc_augmented(silica(), frozen_carriers()),
        ReflectionPolicy::DcConductivity,
    )
    .unwrap()
    .with_numerics(numerics);
    let p = free_energy_plates(&osc).unwrap().per_term_breakdown.unwrap();
    let q = free_energy_plates(&dc).unwrap().per_term_breakdown.unwrap();
    let r = r0(3.81);
    assert!((p[0] / -polylog3(r * r).unwrap() - 1.0).abs() < 1e-6);
    assert!((q[0] / -zeta3() - 1.0).abs() < 1e-6);
    for l in 1..p.len().min(q.len()) {
        assert!((p[l] - q[l]).abs() <= 1e-6 * p[l].abs(), "l = {l}");
    }
}

#[test]
fn dc_free_energy_shift_is_linear_in_temperature() {
    let a = 1e-6;
    let dc_model = DielectricModel::dc_augmented(silica(), frozen_carriers());
    let r = r0(3.81);
    let bracket = zeta3() - polylog3(r * r).unwrap();
    for &tau in &[0.01, 0.02] {
        let t = tau * effective_temperature(a);
        let osc = free_energy_plates(&LifshitzJob::symmetric(a, t, silica(), ReflectionPolicy::Standard).unwrap())
            .unwrap()
            .value;
        let dc = free_energy_plates(&LifshitzJob::symmetric(a, t, dc_model.clone(), ReflectionPolicy::DcConductivity).unwrap())
            .unwrap()
            .value;
        let expected = -BOLTZMANN * t * bracket / (16.0 * PI * a * a);
        assert!(((dc - osc) / expected - 1.0).abs() < 0.1, "{}", (dc - osc) / expected);
    }
}

#[test]
fn atom_without_polarizability_feels_nothing() {
    let atom = AtomModel {
        static_polarizability: 0.0,
        absorption_frequency: 1e15,
    };
    let job = AtomJob::new(1e-6, 300.0, silica(), AtomModel::rubidium(), ReflectionPolicy::Standard).unwrap();
    let job = AtomJob { atom, ..job };
    assert_eq!(free_energy_atom_wall(&job).unwrap().value, 0.0);
}

#[test]
fn atom_high_temperature_limit() {
    // At a k_B T/ħc = 10 only the l = 0 term survives: −k_B T α(0) r₀/(4a³).
    let a = 1e-6;
    let t = 10.0 * HBAR * SPEED_OF_LIGHT / (a * BOLTZMANN);
    let rb = AtomModel::rubidium();
    let job = AtomJob::new(a, t, silica(), rb, ReflectionPolicy::Standard).unwrap();
    let f = free_energy_atom_wall(&job).unwrap().value;
    let limit = -BOLTZMANN * t * rb.static_polarizability * r0(3.81) / (4.0 * a.powi(3));
    assert!((f / limit - 1.0).abs() < 1e-2, "{}", f / limit);
}

#[test]
fn atom_energy_power_law_bracket() {
    // Between the a⁻³ (non-retarded) and a⁻⁴ (retarded) laws.
    let rb = AtomModel::rubidium();
    for &a in &[1e-8, 1e-7, 1e-6] {
        let job = AtomJob::new(a, 0.0, silica(), rb, ReflectionPolicy::Standard).unwrap();
        let e1 = free_energy_atom_wall(&job).unwrap().value;
        let e2 = free_energy_atom_wall(&job.at(2.0 * a, 0.0)).unwrap().value;
        let ratio = e2 / e1;
        assert!(e1 < 0.0 && ratio > 1.0 / 16.0 && ratio < 1.0 / 8.0, "a = {a}: {ratio}");
    }
}

#[test]
fn atom_separation_derivative_matches_finite_differences() {
    let rb = AtomModel::rubidium();
    let a = 2e-6;
    let job = AtomJob::new(a, 300.0, silica(), rb, ReflectionPolicy::Standard).unwrap();
    let analytic = atom_wall_derivative(&job, 1).unwrap().value;
    let d = derivative_central(|s| free_energy_atom_wall(&job.at(s, 300.0)).unwrap().value, a, a * 1e-3).unwrap();
    assert!((analytic / d.value - 1.0).abs() < 1e-6, "{}", analytic / d.value);
}

#[test]
fn pfa_is_linear_in_radius() {
    let job = LifshitzJob::symmetric(1e-7, 300.0, silica(), ReflectionPolicy::Standard).unwrap();
    let f1 = pfa_sphere_force(&job, 1e-4).unwrap();
    let f2 = pfa_sphere_force(&job, 2e-4).unwrap();
    assert!((f2.value / f1.value - 2.0).abs() < 1e-14);
    assert!(f1.warnings.is_empty());
    assert_eq!(pfa_sphere_force(&job, 5e-6).unwrap().warnings.len(), 1);
    assert!(pfa_sphere_force(&job, 0.0).is_err());
}

#[test]
fn ideal_metal_pressure() {
    for &a in &[1e-7, 1e-6] {
        let p = pressure_plates(&ideal(a, 0.0)).unwrap();
        let expected = -PI * PI * HBAR * SPEED_OF_LIGHT / (240.0 * a.powi(4));
        assert!((p / expected - 1.0).abs() < 1e-3, "{}", p / expected);
    }
}

#[test]
fn integrated_pressure_recovers_free_energy() {
    // F(a) = ∫_a^∞ P da' for an ideal metal at T = 0; check F(a₁) − F(a₂) on a Gauss grid.
    let (a1, a2) = (1e-7, 2e-7);
    let nodes = [-0.906_179_845_938_664, -0.538_469_310_105_683, 0.0, 0.538_469_310_105_683, 0.906_179_845_938_664];
    let weights = [0.236_926_885_056_189, 0.478_628_670_499_366, 0.568_888_888_888_889, 0.478_628_670_499_366, 0.236_926_885_056_189];
    let (mid, half) = (0.5 * (a1 + a2), 0.5 * (a2 - a1));
    let integral: f64 = nodes
        .iter()
        .zip(weights)
        .map(|(x, w)| w * half * pressure_plates(&ideal(mid + half * x, 0.0)).unwrap())
        .sum();
    let df = free_energy_plates(&ideal(a1, 0.0)).unwrap().value - free_energy_plates(&ideal(a2, 0.0)).unwrap().value;
    assert!((integral / df - 1.0).abs() < 1e-3, "{}", integral / df);
}

#[test]
fn difference_force_contract() {
    let dark = LifshitzJob::symmetric(1e-7, 300.0, silica(), ReflectionPolicy::Standard).unwrap();
    assert_eq!(difference_force(&dark, &dark.clone(), 1e-4).unwrap(), 0.0);
    assert!(difference_force(&dark, &dark.at(2e-7, 300.0), 1e-4).is_err());
    let light = LifshitzJob {
        material_2: DielectricModel::Oscillator(OscillatorSet::single(11.87, 6.6e15).unwrap()),
        ..dark.clone()
    };
    let d = difference_force(&dark, &light, 1e-4).unwrap();
    // The stiffer plate attracts more strongly.
    assert!(d < 0.0);
}

#[test]
fn condensate_frequency_shift() {
    let trap = Trap::default();
    assert!((trap.frequency - 2.0 * PI * 229.0).abs() < 1e-12);
    let rb = AtomModel::rubidium();
    let base = AtomJob::new(7e-6, 310.0, silica(), rb, ReflectionPolicy::Standard).unwrap();
    let mut last = f64::INFINITY;
    for z in [7e-6, 8e-6, 9e-6, 10e-6, 11e-6] {
        let g = frequency_shift_gamma_z(&base.at(z, 310.0), &trap).unwrap();
        assert!(g > 0.0 && g < last, "z = {z}: {g}");
        last = g;
    }
    let g1 = frequency_shift_gamma_z(&base, &trap).unwrap();
    let doubled = Trap {
        frequency: 2.0 * trap.frequency,
        ..trap
    };
    let g2 = frequency_shift_gamma_z(&base, &doubled).unwrap();
    assert!((g1 / g2 - 4.0).abs() < 1e-12);
    assert!(frequency_shift_gamma_z(&base, &Trap { frequency: 0.0, ..trap }).is_err());
}

#[test]
fn temperature_step_bounds() {
    assert_eq!(temperature_step(300.0), 0.3);
    assert_eq!(temperature_step(0.5), 1e-3);
    assert_eq!(temperature_step(1e-3), 2.5e-4);
}

#[test]
fn entropy_rejects_zero_temperature() {
    let job = LifshitzJob::symmetric(1e-6, 0.0, silica(), ReflectionPolicy::Standard).unwrap();
    assert!(entropy_plates(&job).is_err());
}
