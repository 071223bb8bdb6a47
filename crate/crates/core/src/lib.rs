//! Periodic distributions on the torus as truncated Fourier coefficient fields
//! on `Z^d`, with coefficient products, lattice-cone geometry, discrete Sobolev
//! wave-front estimation and products in shift-invariant spaces.

pub mod acceptance;
pub mod compat;
pub mod cones;
pub mod distributions;
pub mod error;
mod fft;
pub mod lattice;
pub mod product;
pub mod shiftinv;
pub mod trace;
pub mod wavefront;
pub mod window;

pub use error::{Error, Result};
