//! Exact counting of list `M`-partitions of graphs.
//!
//! An `M`-partition assigns every vertex a part so that an edge never joins
//! parts whose matrix entry is `0` and a non-edge never joins parts whose
//! entry is `1`. Lists restrict the parts a vertex may use.
//!
//! [`meta::classify`] decides whether a matrix and list family admit a
//! derectangularising sequence. Without one, [`counter::ListPartitionCounter`]
//! counts in polynomial time by purifying the lists and counting the
//! resulting constraint problems with arc consistency; with one, counting is
//! refused and the certificate returned.
//!
//! ```
//! use listpart::{count_partitions, text, CountOptions, Graph};
//!
//! let split = text::parse_matrix("i c\n0*\n*1\n").unwrap();
//! let count = count_partitions(&Graph::path(3), &split, CountOptions::default()).unwrap();
//! assert_eq!(count, 3u32.into());
//! ```

pub mod cardinality;
pub mod counter;
pub mod csp;
pub mod decomp;
pub mod error;
pub mod family;
pub mod graph;
pub mod matrix;
pub mod meta;
pub mod oracle;
pub mod purify;
pub mod relation;
pub mod subset;
pub mod text;

pub use cardinality::{count_homogeneous_pairs, count_with_cardinality, CardinalityConstraint};
pub use counter::{count_list_partitions, count_partitions, CountOptions, ListPartitionCounter};
pub use error::{Error, Result};
pub use family::{ListFamily, ListFunction};
pub use graph::Graph;
pub use matrix::{Entry, PartSet, PartitionMatrix};
pub use meta::{classify, Classification, DerectCertificate, SearchLimits};
pub use relation::Relation;
pub use subset::{PartSubset, MAX_PARTS};
