//! Legendrian theta-graph fronts: classical invariants, realization of
//! invariant triples, transverse push-offs and pretzel certificates.

pub mod bracket;
pub mod diagram;
pub mod invariants;
pub mod link;
pub mod moves;
pub mod poly;
pub mod pretzel;
pub mod realization;
pub mod render;
pub mod ribbon;
pub mod walks;
