//! Finitely generated abelian groups, their homomorphisms and the homology of
//! bounded complexes, all through Smith normal form over the integers.

pub mod complex;
pub mod group;
pub mod hom;
pub mod lattice;
pub mod matrix;
pub mod reduce;
pub mod smith;

pub use complex::{ChainComplex, SparseMatrix};
pub use group::FgAbGroup;
pub use hom::Homomorphism;
pub use lattice::{Lattice, Subquotient};
pub use matrix::IntMatrix;
pub use reduce::{induced_map, Homology};
pub use smith::{smith_normal_form, Smith};
