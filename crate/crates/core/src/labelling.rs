//! Highway cover labelling: landmark selection, from-scratch construction and
//! size accounting.
//!
//! A labelling stores, for every non-landmark vertex `v`, an entry `(r, d(r, v))`
//! exactly when no other landmark lies on any shortest `r`–`v` path, plus the
//! dense matrix of landmark-to-landmark distances (the highway). Every
//! landmark distance of `v` is then recoverable as `min(entry + highway hop)`.

use std::collections::VecDeque;

use crate::distance::Distance;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::Graph;
use crate::VertexId;

const NO_RANK: u16 = u16::MAX;

/// Bytes per label entry in the compact encoding (`u16` rank + `u32` distance).
pub const ENTRY_BYTES: usize = 6;
/// Bytes per highway cell (`u32` distance).
pub const HIGHWAY_CELL_BYTES: usize = 4;

/// Ordered set of landmark vertices; position in the order is the rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Landmarks {
    ids: Vec<VertexId>,
    rank_of: Vec<u16>,
}

impl Landmarks {
    pub fn new(ids: Vec<VertexId>, vertex_count: usize) -> Result<Self> {
        if ids.is_empty() || ids.len() >= NO_RANK as usize || ids.len() > vertex_count {
            return Err(Error::LandmarkCount { requested: ids.len(), vertex_count });
        }
        let mut rank_of = vec![NO_RANK; vertex_count];
        for (rank, &v) in ids.iter().enumerate() {
            let slot = rank_of.get_mut(v as usize).ok_or_else(|| Error::out_of_range(v, vertex_count))?;
            if *slot != NO_RANK {
                return Err(Error::DuplicateLandmark(v));
            }
            *slot = rank as u16;
        }
        Ok(Landmarks { ids, rank_of })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, rank: usize) -> VertexId {
        self.ids[rank]
    }

    #[inline]
    pub fn rank(&self, v: VertexId) -> Option<usize> {
        match self.rank_of.get(v as usize) {
            Some(&r) if r != NO_RANK => Some(r as usize),
            _ => None,
        }
    }

    #[inline]
    pub fn is_landmark(&self, v: VertexId) -> bool {
        self.rank(v).is_some()
    }

    pub(crate) fn grow(&mut self, vertex_count: usize) {
        if vertex_count > self.rank_of.len() {
            self.rank_of.resize(vertex_count, NO_RANK);
        }
    }
}

/// The `k` highest-degree vertices, ties broken by smaller id.
pub fn select_landmarks(g: &Graph, k: usize) -> Result<Landmarks> {
    let n = g.vertex_count();
    if k == 0 || k > n {
        return Err(Error::LandmarkCount { requested: k, vertex_count: n });
    }
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.adj(v).len()), v));
    order.truncate(k);
    Landmarks::new(order, n)
}

/// Dense symmetric matrix of exact landmark-to-landmark distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Highway {
    k: usize,
    dist: Vec<Distance>,
}

impl Highway {
    pub fn new(k: usize) -> Self {
        let mut dist = vec![Distance::UNREACHABLE; k * k];
        for i in 0..k {
            dist[i * k + i] = Distance::ZERO;
        }
        Highway { k, dist }
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Distance {
        self.dist[i * self.k + j]
    }

    pub fn set(&mut self, i: usize, j: usize, d: Distance) {
        self.dist[i * self.k + j] = d;
        self.dist[j * self.k + i] = d;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Distance] {
        &self.dist[i * self.k..(i + 1) * self.k]
    }

    pub fn cells(&self) -> &[Distance] {
        &self.dist
    }
}

/// One distance entry of a vertex label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelEntry {
    pub rank: u16,
    pub dist: Distance,
}

/// What a label write did to the stored entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelEdit {
    Added,
    Modified,
    Unchanged,
    Removed,
    Absent,
}

/// Label entries of one vertex, sorted by landmark rank.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexLabel {
    entries: Vec<LabelEntry>,
}

impl VertexLabel {
    pub fn entries(&self) -> &[LabelEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, rank: usize) -> Option<Distance> {
        self.find(rank).ok().map(|i| self.entries[i].dist)
    }

    fn find(&self, rank: usize) -> std::result::Result<usize, usize> {
        self.entries.binary_search_by_key(&(rank as u16), |e| e.rank)
    }

    pub fn set(&mut self, rank: usize, dist: Distance) -> LabelEdit {
        match self.find(rank) {
            Ok(i) if self.entries[i].dist == dist => LabelEdit::Unchanged,
            Ok(i) => {
                self.entries[i].dist = dist;
                LabelEdit::Modified
            }
            Err(i) => {
                self.entries.insert(i, LabelEntry { rank: rank as u16, dist });
                LabelEdit::Added
            }
        }
    }

    pub fn remove(&mut self, rank: usize) -> LabelEdit {
        match self.find(rank) {
            Ok(i) => {
                self.entries.remove(i);
                LabelEdit::Removed
            }
            Err(_) => LabelEdit::Absent,
        }
    }

    pub(crate) fn push_sorted(&mut self, entry: LabelEntry) {
        debug_assert!(self.entries.last().is_none_or(|e| e.rank < entry.rank));
        self.entries.push(entry);
    }
}

/// Landmarks, highway and per-vertex labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighwayCoverLabelling {
    pub(crate) landmarks: Landmarks,
    pub(crate) highway: Highway,
    pub(crate) labels: Vec<VertexLabel>,
}

/// Entry count and approximate storage footprint of a labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct LabellingSize {
    pub entries: usize,
    pub bytes: usize,
}

impl HighwayCoverLabelling {
    pub fn from_parts(landmarks: Landmarks, highway: Highway, labels: Vec<VertexLabel>) -> Result<Self> {
        if highway.len() != landmarks.len() {
            return Err(Error::Snapshot("highway size does not match landmark count".into()));
        }
        let mut landmarks = landmarks;
        landmarks.grow(labels.len());
        Ok(HighwayCoverLabelling { landmarks, highway, labels })
    }

    pub fn landmarks(&self) -> &Landmarks {
        &self.landmarks
    }

    pub fn highway(&self) -> &Highway {
        &self.highway
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: VertexId) -> &VertexLabel {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub(crate) fn label_mut(&mut self, v: VertexId) -> &mut VertexLabel {
        &mut self.labels[v as usize]
    }

    pub(crate) fn push_vertex(&mut self) {
        self.labels.push(VertexLabel::default());
        self.landmarks.grow(self.labels.len());
    }

    pub fn size(&self) -> LabellingSize {
        labelling_size(self)
    }
}

pub fn labelling_size(l: &HighwayCoverLabelling) -> LabellingSize {
    let entries: usize = l.labels.iter().map(VertexLabel::len).sum();
    let k = l.landmarks.len();
    LabellingSize { entries, bytes: entries * ENTRY_BYTES + k * k * HIGHWAY_CELL_BYTES }
}

/// Result of one landmark's BFS: its label entries and its highway row.
struct LandmarkPass {
    entries: Vec<(VertexId, Distance)>,
    highway_row: Vec<Distance>,
}

/// Full BFS from landmark `rank`, propagating a "covered" flag down the
/// shortest-path DAG: a vertex is covered when it is another landmark or any
/// of its BFS parents is covered. Uncovered reachable non-landmarks get an
/// entry.
fn landmark_pass(g: &Graph, landmarks: &Landmarks, rank: usize) -> LandmarkPass {
    let n = g.vertex_count();
    let root = landmarks.id(rank);
    let mut dist = vec![u32::MAX; n];
    let mut covered = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    dist[root as usize] = 0;
    queue.push_back(root);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        let dv = dist[v as usize];
        let cv = covered[v as usize];
        for &w in g.adj(v) {
            let wi = w as usize;
            if dist[wi] == u32::MAX {
                dist[wi] = dv + 1;
                covered[wi] = landmarks.is_landmark(w);
                queue.push_back(w);
            }
            if cv && dist[wi] == dv + 1 {
                covered[wi] = true;
            }
        }
    }
    let entries = order
        .into_iter()
        .filter(|&v| !covered[v as usize] && !landmarks.is_landmark(v))
        .map(|v| (v, Distance::new(dist[v as usize])))
        .collect();
    let highway_row = landmarks.ids().iter().map(|&l| Distance::from_raw(dist[l as usize])).collect();
    LandmarkPass { entries, highway_row }
}

/// Builds the minimal highway cover labelling of `g` for `landmarks`.
pub fn build_labelling(g: &Graph, landmarks: &Landmarks) -> HighwayCoverLabelling {
    build_labelling_with(g, landmarks, Execution::default())
}

pub fn build_labelling_sequential(g: &Graph, landmarks: &Landmarks) -> HighwayCoverLabelling {
    build_labelling_with(g, landmarks, Execution::Sequential)
}

pub fn build_labelling_with(g: &Graph, landmarks: &Landmarks, exec: Execution) -> HighwayCoverLabelling {
    let k = landmarks.len();
    let mut landmarks = landmarks.clone();
    landmarks.grow(g.vertex_count());
    let passes = exec.map_indices(k, |rank| landmark_pass(g, &landmarks, rank));

    let mut highway = Highway::new(k);
    let mut labels = vec![VertexLabel::default(); g.vertex_count()];
    for (rank, pass) in passes.into_iter().enumerate() {
        for (other, d) in pass.highway_row.into_iter().enumerate() {
            highway.dist[rank * k + other] = d;
        }
        for (v, dist) in pass.entries {
            labels[v as usize].push_sorted(LabelEntry { rank: rank as u16, dist });
        }
    }
    HighwayCoverLabelling { landmarks, highway, labels }
}
