//! Geometric graphs, discrete Hodge theory and boundary coloring through
//! even-degree refinement of host complexes.
//!
//! A graph is read as its clique complex. The crate classifies such graphs
//! (spheres, balls, geometric graphs, varieties), computes curvature and
//! cohomology, generates the standard corpus of surfaces, and colors a
//! surface by realizing it as the boundary of a 3-dimensional host whose
//! interior edge degrees are then made even by edge cuts.
//!
//! Linear algebra is generic over the scalar: exact work runs over
//! [`Rational`] or [`Gf2`], spectra over `f32`/`f64`.

pub mod coloring;
pub mod constructions;
pub mod curvature;
pub mod error;
pub mod graph;
pub mod hodge;
pub mod linalg;
pub mod refine;
pub mod scalar;
pub mod topology;

pub use error::{Error, Result};
pub use graph::{Edge, FVector, Simplex, SimplicialGraph, VertexId};
pub use scalar::{Field, Gf2, Rational};

/// Dense matrix over exact rationals.
pub type RationalMatrix = linalg::Matrix<Rational>;
/// Dense matrix over the two-element field.
pub type Gf2Matrix = linalg::Matrix<Gf2>;
/// Dense matrix over `f64`.
pub type RealMatrix = linalg::Matrix<f64>;
/// Dense matrix over `f32`.
pub type Real32Matrix = linalg::Matrix<f32>;
/// Chain with exact rational coefficients.
pub type RationalChain = hodge::ChainVector<Rational>;
/// Chain with GF(2) coefficients.
pub type Gf2Chain = hodge::ChainVector<Gf2>;
