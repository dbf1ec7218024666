//! Exact center/focus analysis for planar polynomial vector fields with a
//! linear center at the origin.

pub mod catalog;
pub mod complex;
pub mod error;
pub mod field;
pub mod homological;
pub mod inverse;
pub mod lyapunov;
pub mod numeric;
pub mod poly;
pub mod rational;
pub mod structure;

pub use error::{Error, Result};
pub use field::{Orientation, PlanarField};
pub use homological::{solve_homological, solve_homological_with_gauge, HomologicalSolution};
pub use poly::{poisson_bracket, BiPoly, HomogeneousPoly, Monomial};
pub use rational::Rational;
