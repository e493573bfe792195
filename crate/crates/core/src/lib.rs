//! Cactus representations of minimum terminal-separating edge cuts.
//!
//! Terminals stand in for the ends of a graph: a cut is an end cut when it
//! separates two terminals, and a minimal cut is one of least cardinality.
//! The pipeline groups minimal cuts into classes by the terminal bipartition
//! they induce, arranges crossing classes on circles of beads, builds a
//! pretree over isolated classes and circles, completes it to a tree and
//! finally assembles the cactus whose two-edge cuts correspond one-to-one
//! to the classes.

pub mod cactus;
pub mod crossing;
pub mod cuts;
pub mod error;
pub mod fixtures;
pub mod generalized;
pub mod golden;
pub mod graph;
pub mod oracle;
pub mod pipeline;
pub mod pretree;
pub mod random;
pub mod report;

pub use error::{Error, Result};
