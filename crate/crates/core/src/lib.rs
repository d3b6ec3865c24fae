//! Exact shortest-path distances on dynamic unweighted undirected graphs.
//!
//! A small set of landmarks is indexed with a minimal highway cover
//! labelling. Queries combine a label-derived upper bound with a bounded
//! bidirectional search on the graph minus landmarks; edge and vertex
//! insertions repair the labelling in place so it stays identical to a
//! from-scratch rebuild.
//!
//! ```
//! use dynhcl::{build_labelling, select_landmarks, synth, DynamicIndex, EdgeInsertion};
//!
//! let g = synth::path(5);
//! let l = build_labelling(&g, &select_landmarks(&g, 2).unwrap());
//! let mut index = DynamicIndex::new(g, l).unwrap();
//! assert_eq!(index.query(0, 4).unwrap().distance.hops(), Some(4));
//! index.apply_edge_insertion(EdgeInsertion::new(0, 4)).unwrap();
//! assert_eq!(index.query(0, 4).unwrap().distance.hops(), Some(1));
//! ```

pub mod bench;
pub mod distance;
mod epoch;
pub mod error;
pub mod exec;
pub mod graph;
pub mod incremental;
pub mod ingest;
pub mod labelling;
pub mod oracle;
pub mod query;
pub mod snapshot;
pub mod synth;
pub mod workload;

/// Dense internal vertex id.
pub type VertexId = u32;

pub use distance::Distance;
pub use error::{Error, Result};
pub use exec::Execution;
pub use graph::{EdgeInsertion, Graph};
pub use incremental::{
    find_affected, orient_and_filter, repair_affected, AffectedSet, AffectedVertex, DynamicIndex, UpdateStats,
};
pub use ingest::{load_graph, GraphFormat, IdMap, LoadedGraph};
pub use labelling::{
    build_labelling, build_labelling_sequential, build_labelling_with, labelling_size, select_landmarks, Highway,
    HighwayCoverLabelling, LabelEntry, LabellingSize, Landmarks, VertexLabel,
};
pub use query::{bounded_sparse_bfs, query, query_batch, root_distance, upper_bound, QueryResult, SearchScratch};
pub use workload::{gen_insert_workload, gen_query_workload, TraceOp, Workload, WorkloadItems};
