//! Partitions and the factorization hierarchy: independence, niceness,
//! inductive factorizations, supersolvability, inductive freeness, hereditary
//! variants and induction tables.

mod certificate;
mod inductive;
mod nice;
mod partition;
mod session;
mod supersolvable;
mod table;
mod verify;

pub use certificate::{Certificate, Hereditary, Property, Witness};
pub use nice::{induced_partition_at_flat, padded_exponents, restriction_map, AddDelReport, RestrictionMap};
pub use partition::Partition;
pub use session::{Config, Session};
pub use supersolvable::nice_from_modular_chain;
pub use table::{InductionTable, Stuck, TableOutcome, TableRow};
