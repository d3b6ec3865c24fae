//! Brute-force ground truth, deliberately sharing no code with the fast path:
//! plain BFS, the canonical labelling recomputed from landmark distances, and
//! the affected-set distance identity.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::distance::Distance;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labelling::{Highway, HighwayCoverLabelling, LabelEntry, Landmarks, VertexLabel};
use crate::VertexId;

/// Distances from one source to every vertex.
pub type DistVector = Vec<Distance>;

pub fn bfs_all_distances(g: &Graph, s: VertexId) -> Result<DistVector> {
    let n = g.vertex_count();
    if s as usize >= n {
        return Err(Error::out_of_range(s, n));
    }
    let mut dist = vec![Distance::UNREACHABLE; n];
    let mut queue = VecDeque::from([s]);
    dist[s as usize] = Distance::ZERO;
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v)? {
            if !dist[w as usize].is_finite() {
                dist[w as usize] = dist[v as usize].succ();
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

/// The unique minimal labelling of `g` for `landmarks`.
///
/// Landmark `r'` lies on a shortest `r`–`v` path iff
/// `d(r, r') + d(r', v) == d(r, v)`, so coverage is decided from the full
/// distance vectors of all landmarks rather than by propagation.
pub fn canonical_labelling(g: &Graph, landmarks: &Landmarks) -> HighwayCoverLabelling {
    let ids = landmarks.ids();
    let k = ids.len();
    let from: Vec<DistVector> = ids.iter().map(|&r| bfs_all_distances(g, r).expect("landmark in range")).collect();

    let mut highway = Highway::new(k);
    for (i, di) in from.iter().enumerate() {
        for (j, &r) in ids.iter().enumerate() {
            highway.set(i, j, di[r as usize]);
        }
    }

    let mut labels = vec![VertexLabel::default(); g.vertex_count()];
    for v in g.vertices() {
        if ids.contains(&v) {
            continue;
        }
        for (i, di) in from.iter().enumerate() {
            let d = di[v as usize];
            if !d.is_finite() {
                continue;
            }
            let blocked = (0..k).any(|j| j != i && from[i][ids[j] as usize] + from[j][v as usize] == d);
            if !blocked {
                labels[v as usize].push_sorted(LabelEntry { rank: i as u16, dist: d });
            }
        }
    }
    HighwayCoverLabelling::from_parts(landmarks.clone(), highway, labels).expect("consistent parts")
}

/// Vertices with a shortest path to landmark `r` through the oriented edge
/// `(a, b)` in the post-insertion graph: `d'(r, a) + 1 + d'(b, v) == d'(r, v)`.
pub fn affected_oracle(g_after: &Graph, (a, b): (VertexId, VertexId), r: VertexId) -> Result<BTreeSet<VertexId>> {
    let from_r = bfs_all_distances(g_after, r)?;
    let from_b = bfs_all_distances(g_after, b)?;
    let via = from_r[a as usize].succ();
    Ok(g_after
        .vertices()
        .filter(|&v| {
            let d = from_r[v as usize];
            d.is_finite() && via + from_b[v as usize] == d
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryDiff {
    pub vertex: VertexId,
    pub landmark: VertexId,
    pub left: Option<Distance>,
    pub right: Option<Distance>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighwayDiff {
    pub from: VertexId,
    pub to: VertexId,
    pub left: Distance,
    pub right: Distance,
}

/// Differences between two labellings, keyed by landmark vertex id so that
/// rank order does not matter.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabellingDiff {
    pub entries: Vec<EntryDiff>,
    pub highway: Vec<HighwayDiff>,
}

impl LabellingDiff {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.highway.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len() + self.highway.len()
    }
}

fn by_landmark(l: &HighwayCoverLabelling, v: VertexId) -> BTreeMap<VertexId, Distance> {
    l.label(v).entries().iter().map(|e| (l.landmarks().id(e.rank as usize), e.dist)).collect()
}

pub fn diff_labellings(left: &HighwayCoverLabelling, right: &HighwayCoverLabelling) -> Result<LabellingDiff> {
    let lset: BTreeSet<_> = left.landmarks().ids().iter().collect();
    let rset: BTreeSet<_> = right.landmarks().ids().iter().collect();
    if lset != rset {
        return Err(Error::LandmarkMismatch);
    }
    if left.vertex_count() != right.vertex_count() {
        return Err(Error::Snapshot(format!(
            "labellings cover {} and {} vertices",
            left.vertex_count(),
            right.vertex_count()
        )));
    }
    let mut diff = LabellingDiff::default();
    for v in 0..left.vertex_count() as VertexId {
        let (a, b) = (by_landmark(left, v), by_landmark(right, v));
        for landmark in a.keys().chain(b.keys()).collect::<BTreeSet<_>>() {
            let (x, y) = (a.get(landmark).copied(), b.get(landmark).copied());
            if x != y {
                diff.entries.push(EntryDiff { vertex: v, landmark: *landmark, left: x, right: y });
            }
        }
    }
    let ids = left.landmarks().ids();
    for (i, &from) in ids.iter().enumerate() {
        for (j, &to) in ids.iter().enumerate().skip(i + 1) {
            let x = left.highway().get(i, j);
            let (ri, rj) = (right.landmarks().rank(from).unwrap(), right.landmarks().rank(to).unwrap());
            let y = right.highway().get(ri, rj);
            if x != y {
                diff.highway.push(HighwayDiff { from, to, left: x, right: y });
            }
        }
    }
    Ok(diff)
}
