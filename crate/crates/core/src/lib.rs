//! Euler calculus on finite simplicial complexes with exact rational
//! arithmetic: constructible functions and their integrals, Morse-theoretic
//! evaluation, characteristic cycles on embedded charts, finite group
//! quotients, and the cosheaf of compactly supported functions.
//!
//! ```
//! use std::sync::Arc;
//! use orbindex::complex::SimplicialComplex;
//! use orbindex::constructible::ConstructibleFunction;
//! use orbindex::rational::one;
//!
//! let k = Arc::new(SimplicialComplex::from_maximal([[0, 1], [1, 2], [0, 2]]).unwrap());
//! let f = ConstructibleFunction::constant(k, one());
//! assert_eq!(f.euler_integral(), orbindex::rational::zero());
//! ```

pub mod charts;
pub mod cli;
pub mod complex;
pub mod constructible;
pub mod cosheaf;
pub mod error;
pub mod feasibility;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod morse;
pub mod orbifold;
pub mod rational;
pub mod sample;

pub use error::{Error, Result};
pub use rational::Q;
