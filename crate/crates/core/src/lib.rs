//! Enriched search spaces for procedural content generation.
//!
//! Each module builds a representation whose random samples are already
//! likely to be useful: weighted Voronoi path networks, apoptotic cellular
//! automata with an evolutionary engine, rooms laid out by self-driving
//! automata, cavern maps from fashion-based cellular automata and polyomino
//! puzzles with large neutral networks.
//!
//! Modules that do floating-point geometry are generic over [`Real`]; the
//! aliases below fix the common choices.

pub mod ca1d;
pub mod dwp;
pub mod error;
pub mod evolve;
pub mod fashionca;
pub mod format;
pub mod geometry;
pub mod image;
pub mod polyomino;
pub mod scalar;
pub mod seed;

pub use error::{Error, Result};
pub use scalar::Real;

pub type TileCenterF64 = geometry::TileCenter<f64>;
pub type TileCenterF32 = geometry::TileCenter<f32>;
pub type CompetitionMatrixF64 = fashionca::CompetitionMatrix<f64>;
pub type CompetitionMatrixF32 = fashionca::CompetitionMatrix<f32>;
pub type CoevolvedPairF64 = fashionca::CoevolvedPair<f64>;
pub type RealSpaceF64 = evolve::RealSpace<f64>;
