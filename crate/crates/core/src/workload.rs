//! Seeded insertion and query workloads and their text formats.
//!
//! Insertion traces hold one operation per line: `E u v` inserts an edge,
//! `V u1 u2 ... uk` inserts a new vertex attached to the listed vertices. A
//! new vertex gets the external id one past the largest id known so far.
//! Query files hold `u v` pairs. All ids in files are external ids.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ingest::{data_lines, parse_id, IdMap};
use crate::VertexId;

/// One insertion in internal ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceOp {
    Edge(VertexId, VertexId),
    Vertex(Vec<VertexId>),
}

/// One insertion as written in a trace file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExternalOp {
    Edge(u64, u64),
    Vertex(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WorkloadItems {
    Inserts(Vec<TraceOp>),
    Queries(Vec<(VertexId, VertexId)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workload {
    pub seed: u64,
    pub items: WorkloadItems,
}

impl Workload {
    pub fn len(&self) -> usize {
        match &self.items {
            WorkloadItems::Inserts(ops) => ops.len(),
            WorkloadItems::Queries(pairs) => pairs.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn inserts(&self) -> Option<&[TraceOp]> {
        match &self.items {
            WorkloadItems::Inserts(ops) => Some(ops),
            WorkloadItems::Queries(_) => None,
        }
    }

    pub fn queries(&self) -> Option<&[(VertexId, VertexId)]> {
        match &self.items {
            WorkloadItems::Queries(pairs) => Some(pairs),
            WorkloadItems::Inserts(_) => None,
        }
    }
}

/// `count` distinct uniformly random non-edges of `g`.
pub fn gen_insert_workload(g: &Graph, count: usize, seed: u64) -> Result<Workload> {
    let n = g.vertex_count() as u128;
    let non_edges = n * n.saturating_sub(1) / 2 - g.edge_count() as u128;
    if count as u128 > non_edges {
        return Err(Error::Workload(format!("{count} insertions requested but only {non_edges} non-edges exist")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(VertexId, VertexId)> = if (count as u128) * 2 <= non_edges {
        let mut seen = HashSet::with_capacity(count);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let u = rng.random_range(0..n as VertexId);
            let v = rng.random_range(0..n as VertexId);
            if u != v && !g.has_edge(u, v) && seen.insert((u.min(v), u.max(v))) {
                out.push((u, v));
            }
        }
        out
    } else {
        // Dense graph: enumerate the complement instead of rejecting.
        let mut chosen = g
            .vertices()
            .flat_map(|u| (u + 1..n as VertexId).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .choose_multiple(&mut rng, count);
        rand::seq::SliceRandom::shuffle(chosen.as_mut_slice(), &mut rng);
        chosen
    };
    let ops = pairs.into_iter().map(|(u, v)| TraceOp::Edge(u, v)).collect();
    Ok(Workload { seed, items: WorkloadItems::Inserts(ops) })
}

/// `count` uniform vertex pairs, repeats allowed.
pub fn gen_query_workload(g: &Graph, count: usize, seed: u64) -> Result<Workload> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::Workload("cannot sample query pairs from an empty graph".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = (0..count).map(|_| (rng.random_range(0..n as VertexId), rng.random_range(0..n as VertexId))).collect();
    Ok(Workload { seed, items: WorkloadItems::Queries(pairs) })
}

pub fn read_trace<R: BufRead>(source: R) -> Result<Vec<ExternalOp>> {
    let mut ops = Vec::new();
    for item in data_lines(source) {
        let (line, text) = item?;
        let mut tokens = text.split_whitespace();
        let op = match tokens.next() {
            Some("E") | Some("e") => {
                let ids = tokens.map(|t| parse_id(t, line)).collect::<Result<Vec<_>>>()?;
                match ids[..] {
                    [u, v] => ExternalOp::Edge(u, v),
                    _ => return Err(Error::Parse { line, message: "edge line needs exactly two ids".into() }),
                }
            }
            Some("V") | Some("v") => {
                let ids = tokens.map(|t| parse_id(t, line)).collect::<Result<Vec<_>>>()?;
                if ids.is_empty() {
                    return Err(Error::Parse { line, message: "vertex line needs at least one attachment".into() });
                }
                ExternalOp::Vertex(ids)
            }
            Some(other) => return Err(Error::Parse { line, message: format!("unknown operation {other:?}") }),
            None => continue,
        };
        ops.push(op);
    }
    Ok(ops)
}

pub fn write_trace<W: Write>(mut out: W, ops: &[ExternalOp]) -> Result<()> {
    for op in ops {
        match op {
            ExternalOp::Edge(u, v) => writeln!(out, "E {u} {v}")?,
            ExternalOp::Vertex(ids) => {
                write!(out, "V")?;
                for id in ids {
                    write!(out, " {id}")?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

/// Maps a trace to internal ids, assigning ids to the vertices it creates.
/// Returns the operations and the id map as it stands after the trace.
pub fn resolve_trace(ops: &[ExternalOp], ids: &IdMap) -> Result<(Vec<TraceOp>, IdMap)> {
    let mut ids = ids.clone();
    let lookup =
        |ids: &IdMap, x: u64| ids.to_internal(x).ok_or(Error::VertexOutOfRange { vertex: x, vertex_count: ids.len() });
    let mut out = Vec::with_capacity(ops.len());
    for op in ops {
        out.push(match op {
            ExternalOp::Edge(u, v) => TraceOp::Edge(lookup(&ids, *u)?, lookup(&ids, *v)?),
            ExternalOp::Vertex(attach) => {
                let internal = attach.iter().map(|&x| lookup(&ids, x)).collect::<Result<Vec<_>>>()?;
                let fresh = ids.fresh_external();
                ids.intern(fresh);
                TraceOp::Vertex(internal)
            }
        });
    }
    Ok((out, ids))
}

pub fn to_external(ops: &[TraceOp], ids: &IdMap) -> Vec<ExternalOp> {
    let mut ids = ids.clone();
    ops.iter()
        .map(|op| match op {
            TraceOp::Edge(u, v) => ExternalOp::Edge(ids.to_external(*u), ids.to_external(*v)),
            TraceOp::Vertex(attach) => {
                let ext = attach.iter().map(|&x| ids.to_external(x)).collect();
                let fresh = ids.fresh_external();
                ids.intern(fresh);
                ExternalOp::Vertex(ext)
            }
        })
        .collect()
}

pub fn read_pairs<R: BufRead>(source: R, ids: &IdMap) -> Result<Vec<(VertexId, VertexId)>> {
    let mut pairs = Vec::new();
    for item in data_lines(source) {
        let (line, text) = item?;
        let mut tokens = text.split_whitespace();
        let (Some(u), Some(v)) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse { line, message: "expected two vertex ids".into() });
        };
        let map = |t: &str| -> Result<VertexId> {
            let x = parse_id(t, line)?;
            ids.to_internal(x).ok_or(Error::Parse { line, message: format!("unknown vertex {x}") })
        };
        pairs.push((map(u)?, map(v)?));
    }
    Ok(pairs)
}

pub fn write_pairs<W: Write>(mut out: W, pairs: &[(VertexId, VertexId)], ids: &IdMap) -> Result<()> {
    for &(u, v) in pairs {
        writeln!(out, "{} {}", ids.to_external(u), ids.to_external(v))?;
    }
    Ok(())
}
