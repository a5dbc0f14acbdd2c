//! Lifshitz-theory free energies, forces and entropies for plate–plate and
//! atom–wall geometries, with interchangeable dielectric-response models and a
//! low-temperature Nernst-theorem audit.

pub mod constants;
pub mod dielectric;
pub mod engine;
pub mod error;
pub mod numerics;
pub mod reflection;
pub mod scenarios;
pub mod thermo;

pub use error::{Error, Result};
