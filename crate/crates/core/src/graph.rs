//! Mutable undirected adjacency structure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::VertexId;

/// Undirected simple graph with dense ids and sorted neighbor lists.
///
/// Vertices are never removed or renumbered, so ids stored in a labelling stay
/// valid across every mutation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<VertexId>>,
    edge_count: usize,
}

/// A requested undirected edge `{a, b}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeInsertion {
    pub a: VertexId,
    pub b: VertexId,
}

impl EdgeInsertion {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        EdgeInsertion { a, b }
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        Graph { adjacency: vec![Vec::new(); n], edge_count: 0 }
    }

    /// Builds a graph from an edge iterator, dropping loops and duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(Error::out_of_range(x, n));
                }
            }
            if u != v {
                adjacency[u as usize].push(v);
                adjacency[v as usize].push(u);
            }
        }
        let mut twice = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Ok(Graph { adjacency, edge_count: twice / 2 })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        (v as usize) < self.adjacency.len()
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(Error::out_of_range(v, self.vertex_count()))
        }
    }

    /// Neighbors of `v` in ascending id order.
    pub fn neighbors(&self, v: VertexId) -> Result<&[VertexId]> {
        self.check(v)?;
        Ok(&self.adjacency[v as usize])
    }

    /// Unchecked variant for hot loops; panics on a bad id.
    #[inline]
    pub(crate) fn adj(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        Ok(self.neighbors(v)?.len())
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.contains_vertex(u) && self.contains_vertex(v) && self.adj(u).binary_search(&v).is_ok()
    }

    /// Adds `{a, b}`. Returns `false` (graph unchanged) for a self-loop or an
    /// edge that is already present.
    pub fn insert_edge(&mut self, e: EdgeInsertion) -> Result<bool> {
        self.check(e.a)?;
        self.check(e.b)?;
        if e.a == e.b {
            return Ok(false);
        }
        let pos = match self.adjacency[e.a as usize].binary_search(&e.b) {
            Ok(_) => return Ok(false),
            Err(pos) => pos,
        };
        self.adjacency[e.a as usize].insert(pos, e.b);
        let list = &mut self.adjacency[e.b as usize];
        let pos = list.binary_search(&e.a).unwrap_err();
        list.insert(pos, e.a);
        self.edge_count += 1;
        Ok(true)
    }

    /// Appends an isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> VertexId {
        let id = self.adjacency.len() as VertexId;
        self.adjacency.push(Vec::new());
        id
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.adjacency.len()).map(|v| v as VertexId)
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let u = u as VertexId;
            list.iter().copied().filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// Full structural audit: symmetry, sortedness, no loops or duplicates, and
    /// a consistent edge count.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let n = self.vertex_count();
        let mut twice = 0usize;
        for (u, list) in self.adjacency.iter().enumerate() {
            twice += list.len();
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("neighbors of {u} not strictly ascending"));
            }
            for &v in list {
                if v as usize >= n {
                    return Err(format!("neighbor {v} of {u} out of range"));
                }
                if v as usize == u {
                    return Err(format!("self-loop at {u}"));
                }
                if self.adjacency[v as usize].binary_search(&(u as VertexId)).is_err() {
                    return Err(format!("edge {u}->{v} has no reverse entry"));
                }
            }
        }
        if twice != 2 * self.edge_count {
            return Err(format!("edge_count {} but adjacency holds {} endpoints", self.edge_count, twice));
        }
        Ok(())
    }
}
