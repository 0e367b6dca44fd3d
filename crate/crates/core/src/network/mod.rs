//! Reaction networks and their structural invariants.

pub mod complex;
pub mod graph;
pub mod reaction_network;
pub mod regularity;

pub use complex::Complex;
pub use reaction_network::{DirectedReactionSpec, NetworkNumbers, Reaction, ReactionNetwork, ReactionSpec};
pub use regularity::RegularityReport;
