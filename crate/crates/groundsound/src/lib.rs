//! Transient sound of a rigid object impacting an elastic-halfspace ground.
//!
//! The library models the ground surface vibration after an impulsive
//! normal impact (the classical halfspace point-load problem), removes the
//! wavefront singularities with a closed-form temporal regularization, and
//! radiates the resulting surface acceleration to listening points either
//! through the Rayleigh integral or through a small FDTD wavesolver driven
//! by acoustic shaders. A Hertzian contact model supplies the impulse and
//! the contact timescale, and a compact dipole/image model provides the
//! impacting ball's own acceleration noise for loudness comparisons.
//!
//! The numerical core is generic over the scalar width through [`Real`];
//! concrete `f64` aliases for the main types sit at the crate root.

pub mod contact;
pub mod error;
pub mod fdtd;
pub mod io;
pub mod jet;
pub mod kernel;
pub mod lamb;
pub mod materials;
pub mod quad;
pub mod radiation;
pub mod real;
pub mod scenario;
pub mod sweeps;

pub mod cli;

pub use error::{Error, Result};
pub use real::Real;

/// `f64` aliases for the main domain types.
pub type Material64 = materials::Material<f64>;
pub type HalfspaceParams64 = materials::HalfspaceParams<f64>;
pub type MaterialDb64 = materials::MaterialDb<f64>;
pub type ScenarioConfig64 = scenario::ScenarioConfig<f64>;
pub type ContactEvent64 = contact::ContactEvent<f64>;
pub type RegularizedField64 = kernel::RegularizedField<f64>;
pub type KernelEval64 = kernel::KernelEval<f64>;
pub type PressureTrace64 = radiation::PressureTrace<f64>;
pub type WaveGrid64 = fdtd::WaveGrid<f64>;
