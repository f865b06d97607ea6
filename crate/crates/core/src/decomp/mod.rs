//! Vertex-partition and assignment decompositions used by purification.

mod bicobip;
mod subcube;

pub use bicobip::{bicobipartite_partitions, BicobipPartition};
pub use subcube::{subcube_decomposition, Subcube, SubcubePair, Trit};
