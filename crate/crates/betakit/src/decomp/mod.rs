//! Decomposition machinery relative to a Lipschitz graph: Whitney cubes,
//! exceptional sets, graph cubes, and the stopping-time classification.

pub mod exceptional;
pub mod gamma;
pub mod graph;
pub mod stopping;
pub mod whitney;
