//! Numerical core for covariant single-photon wavepackets.
//!
//! The crate is `no_std` (with `alloc`) and works in natural units,
//! `c = ħ = ε₀ = 1`, unless a function takes explicit constants. Modules:
//!
//! * [`relativity`]: four-vectors, z-boosts, helicity polarization bases and
//!   the Faraday tensor.
//! * [`modes`]: invariant one-photon amplitudes `c_λ(k)` on a wavevector grid.
//! * [`synthesis`]: positive-frequency `A⁺`, `E⁺`, `B⁺`, `φ⁺` on spatial grids
//!   and Maxwell diagnostics.
//! * [`current`]: photon number, current and helicity densities and the
//!   continuity residual.
//! * [`medium`]: linear dielectrics, localized emitters/detectors and the 1D
//!   transmission line.
//! * [`fock`]: truncated ladder-operator identities.

#![no_std]
// `!(x > 0.0)` is used deliberately so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod current;
pub mod error;
mod float;
pub mod fock;
pub mod medium;
pub mod modes;
pub mod quadrature;
pub mod relativity;
pub mod stencil;
pub mod synthesis;
pub mod vector;

pub use num_complex::Complex64;

pub use error::{Error, Result};
