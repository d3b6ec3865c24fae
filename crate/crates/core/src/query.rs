//! Exact distance queries: a label-derived upper bound tightened by a
//! distance-bounded bidirectional BFS over the graph with landmarks removed.

use serde::Serialize;

use crate::distance::Distance;
use crate::epoch::EpochMap;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::Graph;
use crate::labelling::{HighwayCoverLabelling, Landmarks};
use crate::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QueryResult {
    pub distance: Distance,
    /// The label bound the search ran under (the answer itself for landmark
    /// endpoints and `u == v`).
    pub bound_used: Distance,
    /// Vertices marked by the bounded search.
    pub search_expanded: usize,
}

fn check_vertex(l: &HighwayCoverLabelling, v: VertexId) -> Result<()> {
    if (v as usize) < l.vertex_count() {
        Ok(())
    } else {
        Err(Error::out_of_range(v, l.vertex_count()))
    }
}

/// Distance from the landmark of rank `rank` to `v`, recovered from the
/// labelling alone.
pub fn root_distance(l: &HighwayCoverLabelling, rank: usize, v: VertexId) -> Result<Distance> {
    if rank >= l.landmarks().len() {
        return Err(Error::RankOutOfRange { rank, landmarks: l.landmarks().len() });
    }
    check_vertex(l, v)?;
    Ok(root_distance_unchecked(l, rank, v))
}

#[inline]
pub(crate) fn root_distance_unchecked(l: &HighwayCoverLabelling, rank: usize, v: VertexId) -> Distance {
    let row = l.highway().row(rank);
    if let Some(other) = l.landmarks().rank(v) {
        return row[other];
    }
    l.label(v).entries().iter().map(|e| e.dist + row[e.rank as usize]).min().unwrap_or(Distance::UNREACHABLE)
}

/// Best landmark-through distance between two non-landmark vertices.
///
/// Not tight for `u == v` (it returns twice the smallest entry); [`query`]
/// answers that case before reaching here.
pub fn upper_bound(l: &HighwayCoverLabelling, u: VertexId, v: VertexId) -> Result<Distance> {
    check_vertex(l, u)?;
    check_vertex(l, v)?;
    for x in [u, v] {
        if l.landmarks().is_landmark(x) {
            return Err(Error::LandmarkEndpoint(x));
        }
    }
    Ok(upper_bound_unchecked(l, u, v))
}

fn upper_bound_unchecked(l: &HighwayCoverLabelling, u: VertexId, v: VertexId) -> Distance {
    let h = l.highway();
    let lv = l.label(v).entries();
    let mut best = Distance::UNREACHABLE;
    for eu in l.label(u).entries() {
        let row = h.row(eu.rank as usize);
        for ev in lv {
            let d = eu.dist + row[ev.rank as usize] + ev.dist;
            if d < best {
                best = d;
            }
        }
    }
    best
}

/// Reusable buffers for the bounded search. One per worker; never shared.
#[derive(Debug, Clone)]
pub struct SearchScratch {
    forward: EpochMap<u32>,
    backward: EpochMap<u32>,
    front: Vec<VertexId>,
    back: Vec<VertexId>,
    next: Vec<VertexId>,
}

impl SearchScratch {
    pub fn new(vertex_count: usize) -> Self {
        SearchScratch {
            forward: EpochMap::new(vertex_count),
            backward: EpochMap::new(vertex_count),
            front: Vec::new(),
            back: Vec::new(),
            next: Vec::new(),
        }
    }

    /// Shortest `u`–`v` distance in `g` minus landmarks, if one shorter than
    /// `bound` exists; `UNREACHABLE` otherwise. Also returns how many vertices
    /// were marked.
    ///
    /// Each round expands the smaller frontier by one full level. The first
    /// vertex seen from both sides yields the exact distance, because before
    /// that round the two balls were disjoint.
    pub fn bounded_search(
        &mut self,
        g: &Graph,
        landmarks: &Landmarks,
        u: VertexId,
        v: VertexId,
        bound: Distance,
    ) -> (Distance, usize) {
        debug_assert!(!landmarks.is_landmark(u) && !landmarks.is_landmark(v));
        if u == v {
            return (Distance::ZERO, 1);
        }
        let n = g.vertex_count();
        self.forward.grow(n);
        self.backward.grow(n);
        self.forward.clear();
        self.backward.clear();
        self.front.clear();
        self.back.clear();
        self.forward.insert(u as usize, 0);
        self.backward.insert(v as usize, 0);
        self.front.push(u);
        self.back.push(v);
        let (mut depth_f, mut depth_b) = (0u32, 0u32);
        let mut expanded = 2;
        let limit = bound.raw();

        while !self.front.is_empty() && !self.back.is_empty() {
            if u64::from(depth_f) + u64::from(depth_b) + 1 >= u64::from(limit) {
                break;
            }
            let forward_side = self.front.len() <= self.back.len();
            let (frontier, mine, other, depth) = if forward_side {
                (&mut self.front, &mut self.forward, &self.backward, &mut depth_f)
            } else {
                (&mut self.back, &mut self.backward, &self.forward, &mut depth_b)
            };
            self.next.clear();
            let level = *depth + 1;
            for &x in frontier.iter() {
                for &y in g.adj(x) {
                    let yi = y as usize;
                    if mine.contains(yi) || landmarks.is_landmark(y) {
                        continue;
                    }
                    if let Some(other_depth) = other.get(yi) {
                        return (Distance::new(level + other_depth), expanded + 1);
                    }
                    mine.insert(yi, level);
                    self.next.push(y);
                    expanded += 1;
                }
            }
            *depth = level;
            std::mem::swap(frontier, &mut self.next);
        }
        (Distance::UNREACHABLE, expanded)
    }

    /// Exact distance between `u` and `v`.
    pub fn query(&mut self, g: &Graph, l: &HighwayCoverLabelling, u: VertexId, v: VertexId) -> Result<QueryResult> {
        check_vertex(l, u)?;
        check_vertex(l, v)?;
        if !g.contains_vertex(u) || !g.contains_vertex(v) {
            return Err(Error::out_of_range(u.max(v), g.vertex_count()));
        }
        if u == v {
            return Ok(QueryResult { distance: Distance::ZERO, bound_used: Distance::ZERO, search_expanded: 0 });
        }
        let lm = l.landmarks();
        let by_root = match (lm.rank(u), lm.rank(v)) {
            (Some(ru), _) => Some(root_distance_unchecked(l, ru, v)),
            (None, Some(rv)) => Some(root_distance_unchecked(l, rv, u)),
            (None, None) => None,
        };
        if let Some(d) = by_root {
            return Ok(QueryResult { distance: d, bound_used: d, search_expanded: 0 });
        }
        let bound = upper_bound_unchecked(l, u, v);
        let (found, expanded) = self.bounded_search(g, lm, u, v, bound);
        Ok(QueryResult { distance: found.min(bound), bound_used: bound, search_expanded: expanded })
    }
}

/// Distance over `g` with all landmarks removed, searching only for paths
/// strictly shorter than `bound`.
pub fn bounded_sparse_bfs(g: &Graph, landmarks: &Landmarks, u: VertexId, v: VertexId, bound: Distance) -> Distance {
    SearchScratch::new(g.vertex_count()).bounded_search(g, landmarks, u, v, bound).0
}

pub fn query(g: &Graph, l: &HighwayCoverLabelling, u: VertexId, v: VertexId) -> Result<QueryResult> {
    SearchScratch::new(g.vertex_count()).query(g, l, u, v)
}

/// Answers every pair, reusing one scratch per worker.
pub fn query_batch(
    g: &Graph,
    l: &HighwayCoverLabelling,
    pairs: &[(VertexId, VertexId)],
    exec: Execution,
) -> Result<Vec<QueryResult>> {
    exec.map_init(pairs, || SearchScratch::new(g.vertex_count()), |s, &(u, v)| s.query(g, l, u, v))
        .into_iter()
        .collect()
}
