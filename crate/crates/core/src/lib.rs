pub mod certificate;
pub mod cone;
pub mod corpus;
pub mod error;
pub mod graded_algebra;
pub mod graded_linalg;
pub mod euclid;
pub mod lattice;
pub mod monoid;
pub mod problem;
pub mod scalar;
pub mod trivializer;
