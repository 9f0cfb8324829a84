//! Exact arithmetic substrate: big integers, dense univariate polynomials,
//! ℤ²-lattices, and staircase bases for ideals of ℤ[Y].

pub mod ints;
pub mod lattice;
pub mod staircase;
pub mod upoly;
