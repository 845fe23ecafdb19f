//! Exact computations on central hyperplane arrangements: intersection
//! lattices, nice partitions, inductive factorizations, supersolvability,
//! inductive freeness and the Orlik–Solomon tensor criterion.

pub mod arrangement;
pub mod error;
pub mod factor;
pub mod lattice;
pub mod linalg;
pub mod linform;
pub mod os_algebra;
pub mod scalar;

pub use arrangement::{ArrKey, Arrangement, Hyperplane, Triple};
pub use error::{Error, Result};
pub use lattice::{build_lattice, poincare, try_factor_linear, Flat, Lattice, Poly};
pub use linform::{parse_arrangement_file, parse_defining_polynomial, ArrangementSource, LinearForm};
pub use scalar::{FieldSpec, Scalar};
pub use factor::{Certificate, Config, Partition, Session};
