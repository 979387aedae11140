//! Spontaneous emission rate and `T1` of a transmon from the complex input
//! impedance seen by its Josephson junction.
//!
//! The impedance comes either from a transmission-line network model
//! ([`device`]) or from an imported solver table ([`io`]). [`sweep`] turns it
//! into per-frequency emission rates, and [`fit`] adjusts model parameters to
//! match a reference `T1` curve.

pub mod cli;
pub mod config;
pub mod constants;
pub mod cpw;
pub mod device;
pub mod fit;
pub mod io;
pub mod network;
pub mod sweep;
pub mod transmon;

pub use num_complex::Complex64;
