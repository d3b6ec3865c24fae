//! Edge-list ingestion with external-id compaction.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::VertexId;

/// Input formats accepted by [`load_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    /// Whitespace-separated `u v` pairs, `#`/`%` comments, extra columns ignored.
    EdgeList,
    /// Binary adjacency snapshot (see [`crate::snapshot`]); ids are used as-is.
    Binary,
}

/// Bidirectional mapping between external (file) ids and dense internal ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdMap {
    external: Vec<u64>,
    internal: HashMap<u64, VertexId>,
}

impl IdMap {
    pub fn identity(n: usize) -> Self {
        let external: Vec<u64> = (0..n as u64).collect();
        let internal = external.iter().map(|&x| (x, x as VertexId)).collect();
        IdMap { external, internal }
    }

    pub fn from_external(external: Vec<u64>) -> Result<Self> {
        let mut internal = HashMap::with_capacity(external.len());
        for (i, &x) in external.iter().enumerate() {
            if internal.insert(x, i as VertexId).is_some() {
                return Err(Error::Snapshot(format!("external id {x} mapped twice")));
            }
        }
        Ok(IdMap { external, internal })
    }

    pub fn len(&self) -> usize {
        self.external.len()
    }

    pub fn is_empty(&self) -> bool {
        self.external.is_empty()
    }

    pub fn to_internal(&self, external: u64) -> Option<VertexId> {
        self.internal.get(&external).copied()
    }

    pub fn to_external(&self, internal: VertexId) -> u64 {
        self.external[internal as usize]
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.external
    }

    /// Looks up `external`, assigning the next dense id if it is new.
    pub fn intern(&mut self, external: u64) -> VertexId {
        let next = self.external.len() as VertexId;
        *self.internal.entry(external).or_insert_with(|| {
            self.external.push(external);
            next
        })
    }

    /// External id handed to a vertex created after loading: one past the
    /// largest id seen so far.
    pub fn fresh_external(&self) -> u64 {
        self.external.iter().max().map_or(0, |m| m + 1)
    }
}

/// A graph together with the id mapping of the file it came from.
#[derive(Debug, Clone, Default)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub ids: IdMap,
}

pub fn load_graph<R: BufRead>(source: R, format: GraphFormat) -> Result<LoadedGraph> {
    match format {
        GraphFormat::EdgeList => load_edge_list(source),
        GraphFormat::Binary => {
            let graph = crate::snapshot::read_graph(source)?;
            let ids = IdMap::identity(graph.vertex_count());
            Ok(LoadedGraph { graph, ids })
        }
    }
}

pub(crate) fn parse_id(token: &str, line: usize) -> Result<u64> {
    token.parse::<u64>().map_err(|_| Error::Parse { line, message: format!("invalid vertex id {token:?}") })
}

/// Yields `(line_number, tokens)` for every non-blank, non-comment line.
pub(crate) fn data_lines<R: BufRead>(source: R) -> impl Iterator<Item = Result<(usize, String)>> {
    source.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(Error::Io(e))),
        Ok(line) => {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
                None
            } else {
                Some(Ok((i + 1, trimmed.to_owned())))
            }
        }
    })
}

fn load_edge_list<R: BufRead>(source: R) -> Result<LoadedGraph> {
    let mut ids = IdMap::default();
    let mut edges = Vec::new();
    for item in data_lines(source) {
        let (line, text) = item?;
        let mut tokens = text.split_whitespace();
        let (Some(u), Some(v)) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse { line, message: "expected two vertex ids".into() });
        };
        let u = ids.intern(parse_id(u, line)?);
        let v = ids.intern(parse_id(v, line)?);
        edges.push((u, v));
    }
    let graph = Graph::from_edges(ids.len(), edges)?;
    Ok(LoadedGraph { graph, ids })
}

/// Writes the graph as an edge list in external ids, one edge per line.
pub fn write_edge_list<W: Write>(mut out: W, graph: &Graph, ids: &IdMap) -> Result<()> {
    for (u, v) in graph.edges() {
        writeln!(out, "{} {}", ids.to_external(u), ids.to_external(v))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<LoadedGraph> {
        load_graph(text.as_bytes(), GraphFormat::EdgeList)
    }

    #[test]
    fn triangle() {
        let g = load("0 1\n1 2\n2 0\n").unwrap().graph;
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
    }

    #[test]
    fn duplicate_and_loop_dropped() {
        let g = load("0 1\n1 0\n0 0\n").unwrap().graph;
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert_eq!(g.neighbors(0).unwrap(), &[1]);
    }

    #[test]
    fn path_fixture() {
        let g = load("0 1\n1 2\n2 3\n3 4\n").unwrap().graph;
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 4));
        assert_eq!(g.neighbors(2).unwrap(), &[1, 3]);
    }

    #[test]
    fn ids_compacted_in_first_appearance_order() {
        let loaded = load("# comment\n% konect\n100 7\r\n7 42 1 99\n\n").unwrap();
        assert_eq!(loaded.ids.external_ids(), &[100, 7, 42]);
        assert_eq!(loaded.ids.to_internal(42), Some(2));
        assert_eq!(loaded.graph.neighbors(1).unwrap(), &[0, 2]);
        assert_eq!(loaded.ids.fresh_external(), 101);
    }

    #[test]
    fn malformed_token_reports_line() {
        match load("0 1\n# c\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load("5\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_input_is_empty_graph() {
        let g = load("").unwrap().graph;
        assert!(g.is_empty());
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn concatenated_file_loads_identically() {
        let text = "3 9\n9 4\n4 3\n4 11\n";
        let once = load(text).unwrap();
        let twice = load(&format!("{text}{text}")).unwrap();
        assert_eq!(once.graph, twice.graph);
        assert_eq!(once.ids, twice.ids);
    }
}
