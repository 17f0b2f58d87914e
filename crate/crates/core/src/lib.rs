//! Exact computations for Kummer log flat cohomology at desk scale.
//!
//! The crate is layered bottom-up: [`abelian`] provides Smith normal form and
//! homology over the integers, [`coefficients`] the symbolic divisible
//! modules with Tate twists, [`cohomology`] trivial-action group cohomology of
//! finite abelian groups, [`kummer`] the Čech complexes of Kummer covers,
//! [`direct_image`] the higher direct images, and [`calculators`] the long
//! exact sequence tables over log traits and Dedekind bases.

pub mod abelian;
pub mod coefficients;
pub mod direct_image;
pub mod cohomology;
pub mod arith;
pub mod calculators;
pub mod error;
pub mod kummer;
pub mod serde_int;
pub mod verify;

pub use abelian::{ChainComplex, FgAbGroup, Homomorphism, IntMatrix, SparseMatrix};
pub use error::{Error, Result};
