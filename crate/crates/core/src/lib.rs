//! Steady-state mechanical squeezing in a reservoir-engineered
//! three-cavity optomechanical system.
//!
//! All frequencies are in units of the mechanical frequency.

pub mod classical;
pub mod cli;
pub mod config;
pub mod error;
pub mod langevin;
pub mod lyapunov;
pub mod model;
pub mod optimize;
pub mod presets;
pub mod ode;
pub mod search;
pub mod spectrum;
pub mod sweep;
pub mod table;
pub mod weakcoupling;

pub use error::{Error, Result};
pub use model::{symmetric_setting, SystemParams};
