//! Truncated simplicial and semisimplicial sets with free degeneracies, horn
//! filling, integer homology, fundamental group presentations and necklace
//! categories.

pub mod delta;
pub mod sset;
pub mod adjunction;
pub mod horn;
pub mod homotopy;
pub mod necklace;
pub mod cli;
