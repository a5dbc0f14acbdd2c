//! Physical constants (CODATA 2018, SI) and unit conversions.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Electron rest mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;

/// Angular frequency (rad/s) corresponding to a photon energy of 1 eV, i.e. e/ħ.
pub const EV_TO_RAD_PER_S: f64 = 1.519_267_448_81e15;

/// Carrier densities are quoted per cm³ in material files.
pub const PER_CM3_TO_PER_M3: f64 = 1.0e6;
/// Mobilities are quoted in cm²/(V·s) in material files.
pub const CM2_TO_M2: f64 = 1.0e-4;

pub fn ev_to_rad_per_s(ev: f64) -> f64 {
    ev * EV_TO_RAD_PER_S
}

pub fn rad_per_s_to_ev(omega: f64) -> f64 {
    omega / EV_TO_RAD_PER_S
}

/// Effective temperature ħc/(2 a k_B) separating the low- and high-temperature regimes.
pub fn effective_temperature(separation: f64) -> f64 {
    HBAR * SPEED_OF_LIGHT / (2.0 * separation * BOLTZMANN)
}

/// Characteristic frequency c/(2a) used to make Matsubara frequencies dimensionless.
pub fn characteristic_frequency(separation: f64) -> f64 {
    SPEED_OF_LIGHT / (2.0 * separation)
}

/// l-th Matsubara frequency 2π k_B T l / ħ in rad/s.
pub fn matsubara_frequency(temperature: f64, index: usize) -> f64 {
    2.0 * std::f64::consts::PI * BOLTZMANN * temperature * index as f64 / HBAR
}

/// Converts an SI conductivity (S/m) to the Gaussian angular-frequency form (s⁻¹)
/// that enters 4πσ/ξ.
pub fn conductivity_si_to_gaussian(sigma_si: f64) -> f64 {
    sigma_si / (4.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY)
}
