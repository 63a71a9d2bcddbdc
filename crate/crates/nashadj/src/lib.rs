//! Valuative domination between divisors above a smooth surface germ, with
//! the combinatorial machinery needed to decide adjacencies fixing free points
//! and to evaluate Nash-adjacency obstructions between plane curve types.
//!
//! The crate is organised bottom-up:
//!
//! - [`proximity`]: proximity trees of infinitely near points, divisors,
//!   valuations, intersection theory and log-discrepancies.
//! - [`branchinv`]: characteristic and multiplicity sequences, semigroups,
//!   approximate-root profiles, δ and Milnor numbers.
//! - [`valorder`]: the valuative partial order, the enumerator of dominated
//!   types and the decision of adjacency fixing free points.
//! - [`nashcrit`]: Nash-adjacency verdicts.
//! - [`resolver`]: from explicit equations to resolution combinatorics.
//! - [`atlas`]: the singularity catalog and adjacency graphs.

pub mod atlas;
pub mod branchinv;
pub mod nashcrit;
pub mod proximity;
pub mod resolver;
pub mod valorder;

pub use num_bigint::BigInt;
