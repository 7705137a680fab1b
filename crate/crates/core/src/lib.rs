//! Discrete-time quantum walk hydrodynamics.
//!
//! The walk of [`walk`] converges to the 1+1D Dirac equation; [`madelung`]
//! rewrites its state as a relativistic fluid, [`init`] builds plane-wave and
//! shock initial data, [`schrodinger`] and [`asymptotics`] supply the
//! Galilean-limit oracles (Bessel series, Green function, Pearcey integral and
//! its saddle-point zones), and [`nonrel`] checks the non-relativistic
//! expansion of the spinor components. [`cli`] drives named experiments.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod init;
pub mod madelung;
pub mod nonrel;
pub mod parallel;
pub mod quad;
pub mod schrodinger;
pub mod spectral;
pub mod walk;

pub use error::{Error, Result};
pub use walk::{build_walk, evolve, step_walk, SpinorField, Trajectory, WalkParams};
