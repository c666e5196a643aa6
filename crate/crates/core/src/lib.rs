//! Finite-temperature thermodynamics and structure of an interacting Bose
//! liquid in the pair-correlation approximation.
//!
//! The crate is `no_std` (with `alloc`) and contains only pure numerics:
//! quadrature and root finding, the reference ideal Bose gas, the Bogoliubov
//! interaction layer, the partition function, energy and structure factor,
//! effective-mass prescriptions and a small-N density-matrix evaluator.
//! File formats, configuration and the command line live in the `bosepair`
//! crate.
//!
//! Units: energies and temperatures in Kelvin (k_B = 1), lengths in Å, and
//! ħ enters only through `ħ²/m` expressed in K·Å².

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

mod math;

pub mod collective;
pub mod density_matrix;
pub mod effective_mass;
pub mod error;
pub mod grid;
pub mod ideal_gas;
pub mod pair_theory;
pub mod quadrature;
pub mod special;
pub mod system;
pub mod tabulated;
pub mod thermo;

pub use error::{Error, Result};
pub use grid::{sum_to_integral, QGrid};
pub use ideal_gas::IdealGasState;
pub use pair_theory::{PairPotential, PotentialModel};
pub use system::SystemParams;
pub use tabulated::{Extrapolation, TabulatedFunction};
