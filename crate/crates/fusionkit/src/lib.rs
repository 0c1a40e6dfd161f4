//! Exact fusion-ring, module-graph and modular-invariant data for sl(2) and
//! sl(3) at level k.

pub mod exactnum;
pub mod fusion;
pub mod graphs;
pub mod linalg;
pub mod par;
pub mod modular;
pub mod modact;
pub mod dims;
pub mod qdims;
pub mod tables;
pub mod checks;
