//! Exact computations with filtered instanton-type chain complexes over
//! GF(2)[y, 1/y]: truncations, θ-supported cycles and the `r_s` invariants,
//! local maps, tensor products and duals, and finite enriched sequences.

pub mod algebra;
pub mod catalog;
pub mod complex;
pub mod enriched;
pub mod error;
pub mod filt;
pub mod format;
pub mod gf2;
pub mod involutive;
pub mod morphism;
pub mod rs;
pub mod solver;
pub mod window;

pub use complex::{Chain, Flavor, Generator, InstantonComplex, LinearMap};
pub use error::{Error, Result};
pub use filt::FiltValue;
pub use involutive::InvolutiveComplex;
