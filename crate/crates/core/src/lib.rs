//! Godunov finite-volume solver for the 2D isentropic Euler equations, built
//! around a filament trigger that produces a single carbuncle on a steady
//! plane shock, in standard `(t, x)` and similarity `(t, x/t)` coordinates.

pub mod error;
pub mod experiments;
pub mod cli;
pub mod diagnostics;
pub mod gas;
pub mod grid;
pub mod io;
pub mod riemann;
mod roots;
pub mod solver;

pub use error::{Error, Result};
