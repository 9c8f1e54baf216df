//! Exact computations with rooted cluster algebras.
pub mod colimit;
pub mod format;
pub mod laurent;
pub mod morphism;
pub mod seed;
pub mod triangulation;

pub use colimit::{ColimitError, Filtration, SeedOracle};
pub use format::FormatError;
pub use laurent::{LaurentError, LaurentPoly, Monomial, VarId};
pub use morphism::{ClusterMap, Image, MorphismError};
pub use seed::{ExchangeMatrix, Seed, SeedError};
pub use triangulation::{Arc, ArcFamily, FiniteTriangulation, InfiniteTriangulation, MarkedPoint, TriangulationError};
