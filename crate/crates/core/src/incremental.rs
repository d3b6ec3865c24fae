//! Incremental maintenance of a highway cover labelling under edge and vertex
//! insertions.
//!
//! For each landmark `r`, an insertion `{a, b}` with `d(r, a) < d(r, b)` can
//! only change shortest paths that run through the new edge. The update runs
//! in three phases:
//!
//! 1. **find**: a BFS that starts at `b` with depth `d(r, a) + 1` and only
//!    enters vertices whose old distance (read from the labelling) is not
//!    smaller than the candidate depth. The claimed vertices are exactly the
//!    affected set of `r`, each with its new distance.
//! 2. the edge is added to the graph.
//! 3. **repair**: a level-synchronous walk over the affected set that
//!    classifies each vertex as covered (another landmark lies on some new
//!    shortest path) or uncovered, dropping or rewriting its `r` entry, and
//!    refreshing highway cells of affected landmarks.
//!
//! All finds read the pre-insertion labelling. Repair planning reads only the
//! affected set, the new graph, and `r`'s own entries of unaffected vertices,
//! so plans for different landmarks are independent and run in parallel.

use std::time::Instant;

use serde::Serialize;

use crate::distance::Distance;
use crate::epoch::EpochMap;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{EdgeInsertion, Graph};
use crate::labelling::{HighwayCoverLabelling, LabelEdit};
use crate::query::{root_distance_unchecked, QueryResult, SearchScratch};
use crate::VertexId;

/// A vertex whose shortest paths to the landmark change, with its old and
/// new distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AffectedVertex {
    pub vertex: VertexId,
    pub new_depth: Distance,
    pub old_depth: Distance,
}

/// Affected vertices of one landmark for one oriented insertion `(a, b)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AffectedSet {
    pub landmark: usize,
    pub edge: (VertexId, VertexId),
    /// Members in discovery order, so depths are non-decreasing.
    pub members: Vec<AffectedVertex>,
    /// Old distances of the unaffected neighbors seen while searching,
    /// including `a`. Repair reads these instead of the labelling.
    pub(crate) boundary: Vec<(VertexId, Distance)>,
    /// Members dequeued plus neighbor scans.
    pub visited: usize,
}

impl AffectedSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.iter().any(|m| m.vertex == v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.members.iter().map(|m| m.vertex)
    }

    pub fn new_depth(&self, v: VertexId) -> Option<Distance> {
        self.members.iter().find(|m| m.vertex == v).map(|m| m.new_depth)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
enum Status {
    #[default]
    Unclaimed,
    Uncovered,
    Covered,
}

/// Per-vertex working state of one landmark's find/repair pass.
#[derive(Debug, Clone, Copy)]
struct Slot {
    /// New depth for members, `u32::MAX` for unaffected vertices.
    new: u32,
    old: Distance,
    status: Status,
}

impl Default for Slot {
    fn default() -> Self {
        Slot { new: u32::MAX, old: Distance::UNREACHABLE, status: Status::Unclaimed }
    }
}

impl Slot {
    fn is_member(&self) -> bool {
        self.new != u32::MAX
    }
}

/// Reusable per-landmark scratch, cleared in O(1) between updates.
#[derive(Debug, Clone)]
pub struct LandmarkScratch {
    slots: EpochMap<Slot>,
    queue: Vec<VertexId>,
    next_uncovered: Vec<VertexId>,
    next_covered: Vec<VertexId>,
}

impl LandmarkScratch {
    pub fn new(vertex_count: usize) -> Self {
        LandmarkScratch {
            slots: EpochMap::new(vertex_count),
            queue: Vec::new(),
            next_uncovered: Vec::new(),
            next_covered: Vec::new(),
        }
    }

    fn reset(&mut self, vertex_count: usize) {
        self.slots.grow(vertex_count);
        self.slots.clear();
    }
}

/// Orders the endpoints so the one nearer to landmark `rank` comes first, or
/// returns `None` when both are equally far (including both unreachable):
/// then no shortest path to the landmark can use the new edge.
pub fn orient_and_filter(
    l: &HighwayCoverLabelling,
    e: EdgeInsertion,
    rank: usize,
) -> Result<Option<(VertexId, VertexId)>> {
    if rank >= l.landmarks().len() {
        return Err(Error::RankOutOfRange { rank, landmarks: l.landmarks().len() });
    }
    for x in [e.a, e.b] {
        if x as usize >= l.vertex_count() {
            return Err(Error::out_of_range(x, l.vertex_count()));
        }
    }
    Ok(orient(l, e, rank).map(|(a, b, _, _)| (a, b)))
}

fn orient(
    l: &HighwayCoverLabelling,
    e: EdgeInsertion,
    rank: usize,
) -> Option<(VertexId, VertexId, Distance, Distance)> {
    let da = root_distance_unchecked(l, rank, e.a);
    let db = root_distance_unchecked(l, rank, e.b);
    match da.cmp(&db) {
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Less => Some((e.a, e.b, da, db)),
        std::cmp::Ordering::Greater => Some((e.b, e.a, db, da)),
    }
}

/// Affected vertices of landmark `rank` for the oriented insertion `(a, b)`.
/// `g` must not contain the edge yet.
pub fn find_affected(g: &Graph, l: &HighwayCoverLabelling, edge: (VertexId, VertexId), rank: usize) -> AffectedSet {
    let mut scratch = LandmarkScratch::new(g.vertex_count());
    let (a, b) = edge;
    let da = root_distance_unchecked(l, rank, a);
    let db = root_distance_unchecked(l, rank, b);
    if da >= db {
        return AffectedSet { landmark: rank, edge, ..Default::default() };
    }
    find_with(&mut scratch, g, l, rank, (a, b, da, db))
}

fn find_with(
    scratch: &mut LandmarkScratch,
    g: &Graph,
    l: &HighwayCoverLabelling,
    rank: usize,
    (a, b, old_a, old_b): (VertexId, VertexId, Distance, Distance),
) -> AffectedSet {
    scratch.reset(g.vertex_count());
    let slots = &mut scratch.slots;
    let start = old_a.succ();
    let mut set = AffectedSet { landmark: rank, edge: (a, b), ..Default::default() };

    slots.insert(a as usize, Slot { old: old_a, ..Slot::default() });
    set.boundary.push((a, old_a));
    slots.insert(b as usize, Slot { new: start.raw(), old: old_b, status: Status::Unclaimed });
    set.members.push(AffectedVertex { vertex: b, new_depth: start, old_depth: old_b });

    let mut head = 0;
    while head < set.members.len() {
        let AffectedVertex { vertex: v, new_depth, .. } = set.members[head];
        head += 1;
        set.visited += 1;
        let candidate = new_depth.succ();
        for &w in g.adj(v) {
            set.visited += 1;
            if slots.contains(w as usize) {
                continue;
            }
            let old = root_distance_unchecked(l, rank, w);
            if old >= candidate {
                slots.insert(w as usize, Slot { new: candidate.raw(), old, status: Status::Unclaimed });
                set.members.push(AffectedVertex { vertex: w, new_depth: candidate, old_depth: old });
            } else {
                slots.insert(w as usize, Slot { old, ..Slot::default() });
                set.boundary.push((w, old));
            }
        }
    }
    set
}

/// A label write planned by the repair phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlannedEdit {
    Set(Distance),
    Remove,
}

/// Label and highway writes for one landmark, computed without touching the
/// labelling.
#[derive(Debug, Clone, Default)]
pub struct RepairPlan {
    pub landmark: usize,
    pub edits: Vec<(VertexId, PlannedEdit)>,
    /// `(other landmark rank, new distance)` cells of the landmark's row.
    pub highway: Vec<(usize, Distance)>,
    pub covered: usize,
    pub uncovered: usize,
    /// Members claimed plus adjacency entries scanned while expanding queues.
    pub visited: usize,
    /// Adjacency entries scanned while testing coverage.
    pub cover_checks: usize,
}

struct Planner<'a> {
    g: &'a Graph,
    l: &'a HighwayCoverLabelling,
    rank: usize,
}

impl Planner<'_> {
    /// Whether `w`, an affected vertex at new depth `depth`, has another
    /// landmark on some shortest path to the root. Every affected vertex one
    /// level up must already be classified.
    fn is_covered(&self, slots: &EpochMap<Slot>, w: VertexId, depth: u32, checks: &mut usize) -> bool {
        let lm = self.l.landmarks();
        if lm.is_landmark(w) {
            return true;
        }
        let parent_depth = depth - 1;
        for &p in self.g.adj(w) {
            *checks += 1;
            let slot = match slots.get(p as usize) {
                Some(slot) => slot,
                None => {
                    debug_assert!(false, "neighbor {p} of affected {w} was never examined");
                    Slot { old: root_distance_unchecked(self.l, self.rank, p), ..Slot::default() }
                }
            };
            if slot.is_member() {
                if slot.new == parent_depth && slot.status == Status::Covered {
                    return true;
                }
                continue;
            }
            if slot.old != Distance::from_raw(parent_depth) {
                continue;
            }
            match lm.rank(p) {
                Some(other) if other != self.rank => return true,
                Some(_) => {}
                None if self.l.label(p).get(self.rank).is_none() => return true,
                None => {}
            }
        }
        false
    }

    fn mark(&self, plan: &mut RepairPlan, w: VertexId, depth: u32, covered: bool) {
        if covered {
            plan.covered += 1;
            match self.l.landmarks().rank(w) {
                Some(other) => plan.highway.push((other, Distance::new(depth))),
                None => plan.edits.push((w, PlannedEdit::Remove)),
            }
        } else {
            plan.uncovered += 1;
            plan.edits.push((w, PlannedEdit::Set(Distance::new(depth))));
        }
    }

    fn plan(&self, scratch: &mut LandmarkScratch, set: &AffectedSet) -> RepairPlan {
        let mut plan = RepairPlan { landmark: self.rank, ..Default::default() };
        let Some(first) = set.members.first() else {
            return plan;
        };
        scratch.reset(self.g.vertex_count());
        for &(v, old) in &set.boundary {
            scratch.slots.insert(v as usize, Slot { old, ..Slot::default() });
        }
        for m in &set.members {
            scratch.slots.insert(
                m.vertex as usize,
                Slot { new: m.new_depth.raw(), old: m.old_depth, status: Status::Unclaimed },
            );
        }
        let LandmarkScratch { slots, queue: uncovered, next_uncovered, next_covered } = scratch;
        let mut covered = Vec::new();
        uncovered.clear();

        let b = first.vertex;
        let mut depth = first.new_depth.raw();
        let b_covered = self.is_covered(slots, b, depth, &mut plan.cover_checks);
        self.claim(slots, b, b_covered);
        self.mark(&mut plan, b, depth, b_covered);
        plan.visited += 1;
        if b_covered {
            covered.push(b)
        } else {
            uncovered.push(b)
        }

        while !uncovered.is_empty() {
            next_uncovered.clear();
            next_covered.clear();
            let child = depth + 1;
            for &v in uncovered.iter() {
                for &w in self.g.adj(v) {
                    plan.visited += 1;
                    if !self.unclaimed_at(slots, w, child) {
                        continue;
                    }
                    let is_cov = self.is_covered(slots, w, child, &mut plan.cover_checks);
                    self.claim(slots, w, is_cov);
                    self.mark(&mut plan, w, child, is_cov);
                    plan.visited += 1;
                    if is_cov {
                        next_covered.push(w)
                    } else {
                        next_uncovered.push(w)
                    }
                }
            }
            for &v in covered.iter() {
                for &w in self.g.adj(v) {
                    plan.visited += 1;
                    if !self.unclaimed_at(slots, w, child) {
                        continue;
                    }
                    self.claim(slots, w, true);
                    self.mark(&mut plan, w, child, true);
                    plan.visited += 1;
                    next_covered.push(w);
                }
            }
            std::mem::swap(uncovered, next_uncovered);
            std::mem::swap(&mut covered, next_covered);
            depth = child;
        }

        // Whatever is left hangs below covered vertices only.
        for m in &set.members {
            if slots.get(m.vertex as usize).is_some_and(|s| s.status == Status::Unclaimed) {
                self.claim(slots, m.vertex, true);
                self.mark(&mut plan, m.vertex, m.new_depth.raw(), true);
                plan.visited += 1;
            }
        }
        plan
    }

    fn unclaimed_at(&self, slots: &EpochMap<Slot>, w: VertexId, depth: u32) -> bool {
        slots.get(w as usize).is_some_and(|s| s.is_member() && s.new == depth && s.status == Status::Unclaimed)
    }

    fn claim(&self, slots: &mut EpochMap<Slot>, w: VertexId, covered: bool) {
        let mut slot = slots.get(w as usize).unwrap_or_default();
        slot.status = if covered { Status::Covered } else { Status::Uncovered };
        slots.insert(w as usize, slot);
    }
}

fn plan_with(scratch: &mut LandmarkScratch, g: &Graph, l: &HighwayCoverLabelling, set: &AffectedSet) -> RepairPlan {
    Planner { g, l, rank: set.landmark }.plan(scratch, set)
}

/// Counts of label writes that actually changed something.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EditCounts {
    pub added: usize,
    pub modified: usize,
    pub removed: usize,
    pub highway_updates: usize,
}

impl EditCounts {
    fn absorb(&mut self, other: EditCounts) {
        self.added += other.added;
        self.modified += other.modified;
        self.removed += other.removed;
        self.highway_updates += other.highway_updates;
    }
}

fn apply_plan(l: &mut HighwayCoverLabelling, plan: &RepairPlan) -> EditCounts {
    let mut counts = EditCounts::default();
    for &(v, edit) in &plan.edits {
        let outcome = match edit {
            PlannedEdit::Set(d) => l.label_mut(v).set(plan.landmark, d),
            PlannedEdit::Remove => l.label_mut(v).remove(plan.landmark),
        };
        match outcome {
            LabelEdit::Added => counts.added += 1,
            LabelEdit::Modified => counts.modified += 1,
            LabelEdit::Removed => counts.removed += 1,
            LabelEdit::Unchanged | LabelEdit::Absent => {}
        }
    }
    for &(other, d) in &plan.highway {
        if l.highway.get(plan.landmark, other) != d {
            l.highway.set(plan.landmark, other, d);
            counts.highway_updates += 1;
        }
    }
    counts
}

/// Repairs the entries of `set.landmark` on the post-insertion graph `g`.
pub fn repair_affected(g: &Graph, l: &mut HighwayCoverLabelling, set: &AffectedSet) -> (RepairPlan, EditCounts) {
    let mut scratch = LandmarkScratch::new(g.vertex_count());
    let plan = plan_with(&mut scratch, g, l, set);
    let counts = apply_plan(l, &plan);
    (plan, counts)
}

/// Counters for one insertion.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct UpdateStats {
    pub applied: bool,
    pub affected_per_landmark: Vec<usize>,
    /// Size of the union of all affected sets.
    pub affected_total: usize,
    pub skipped_landmarks: usize,
    pub find_visited: usize,
    pub repair_visited: usize,
    pub cover_checks: usize,
    pub covered: usize,
    pub uncovered: usize,
    #[serde(flatten)]
    pub edits: EditCounts,
    pub wall_us: f64,
}

impl UpdateStats {
    /// Adds `other`'s counters into `self`.
    pub fn absorb(&mut self, other: &UpdateStats) {
        self.applied |= other.applied;
        if self.affected_per_landmark.len() < other.affected_per_landmark.len() {
            self.affected_per_landmark.resize(other.affected_per_landmark.len(), 0);
        }
        for (mine, theirs) in self.affected_per_landmark.iter_mut().zip(&other.affected_per_landmark) {
            *mine += theirs;
        }
        self.affected_total += other.affected_total;
        self.skipped_landmarks += other.skipped_landmarks;
        self.find_visited += other.find_visited;
        self.repair_visited += other.repair_visited;
        self.cover_checks += other.cover_checks;
        self.covered += other.covered;
        self.uncovered += other.uncovered;
        self.edits.absorb(other.edits);
        self.wall_us += other.wall_us;
    }
}

/// A graph with its labelling, kept canonical across insertions.
#[derive(Debug, Clone)]
pub struct DynamicIndex {
    graph: Graph,
    labelling: HighwayCoverLabelling,
    exec: Execution,
    scratch: Vec<LandmarkScratch>,
    union: EpochMap<()>,
}

impl DynamicIndex {
    pub fn new(graph: Graph, labelling: HighwayCoverLabelling) -> Result<Self> {
        if graph.vertex_count() != labelling.vertex_count() {
            return Err(Error::Snapshot(format!(
                "labelling covers {} vertices, graph has {}",
                labelling.vertex_count(),
                graph.vertex_count()
            )));
        }
        let n = graph.vertex_count();
        let k = labelling.landmarks().len();
        Ok(DynamicIndex {
            graph,
            labelling,
            exec: Execution::default(),
            scratch: vec![LandmarkScratch::new(n); k],
            union: EpochMap::new(n),
        })
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn labelling(&self) -> &HighwayCoverLabelling {
        &self.labelling
    }

    pub fn into_parts(self) -> (Graph, HighwayCoverLabelling) {
        (self.graph, self.labelling)
    }

    pub fn query(&self, u: VertexId, v: VertexId) -> Result<QueryResult> {
        crate::query::query(&self.graph, &self.labelling, u, v)
    }

    pub fn query_with(&self, scratch: &mut SearchScratch, u: VertexId, v: VertexId) -> Result<QueryResult> {
        scratch.query(&self.graph, &self.labelling, u, v)
    }

    /// Affected sets of every landmark for `e` against the current state,
    /// without modifying anything. Skipped landmarks yield empty sets.
    pub fn find_all(&mut self, e: EdgeInsertion) -> Result<Vec<AffectedSet>> {
        for x in [e.a, e.b] {
            if !self.graph.contains_vertex(x) {
                return Err(Error::out_of_range(x, self.graph.vertex_count()));
            }
        }
        let ranks: Vec<usize> = (0..self.labelling.landmarks().len()).collect();
        let (g, l) = (&self.graph, &self.labelling);
        Ok(self.exec.map_with_scratch(&mut self.scratch, &ranks, |scratch, &rank| match orient(l, e, rank) {
            Some(oriented) => find_with(scratch, g, l, rank, oriented),
            None => AffectedSet { landmark: rank, edge: (e.a, e.b), ..Default::default() },
        }))
    }

    /// Inserts `e` and repairs the labelling. A duplicate edge or self-loop
    /// is a no-op reported with `applied == false`.
    pub fn apply_edge_insertion(&mut self, e: EdgeInsertion) -> Result<UpdateStats> {
        self.apply_edge_insertion_detailed(e).map(|(stats, _)| stats)
    }

    /// Like [`Self::apply_edge_insertion`], also returning the affected sets.
    pub fn apply_edge_insertion_detailed(&mut self, e: EdgeInsertion) -> Result<(UpdateStats, Vec<AffectedSet>)> {
        let started = Instant::now();
        if e.a == e.b || self.graph.has_edge(e.a, e.b) {
            for x in [e.a, e.b] {
                if !self.graph.contains_vertex(x) {
                    return Err(Error::out_of_range(x, self.graph.vertex_count()));
                }
            }
            return Ok((UpdateStats::default(), Vec::new()));
        }
        let sets = self.find_all(e)?;
        self.graph.insert_edge(e)?;

        let mut stats = UpdateStats { applied: true, ..Default::default() };
        stats.affected_per_landmark = sets.iter().map(AffectedSet::len).collect();
        stats.skipped_landmarks = sets.iter().filter(|s| s.is_empty()).count();
        stats.find_visited = sets.iter().map(|s| s.visited).sum();

        self.union.grow(self.graph.vertex_count());
        self.union.clear();
        for v in sets.iter().flat_map(AffectedSet::vertices) {
            if !self.union.contains(v as usize) {
                self.union.insert(v as usize, ());
                stats.affected_total += 1;
            }
        }

        let work: Vec<&AffectedSet> = sets.iter().filter(|s| !s.is_empty()).collect();
        let (g, l) = (&self.graph, &self.labelling);
        let plans = self.exec.map_with_scratch(&mut self.scratch, &work, |scratch, set| plan_with(scratch, g, l, set));
        for plan in &plans {
            stats.repair_visited += plan.visited;
            stats.cover_checks += plan.cover_checks;
            stats.covered += plan.covered;
            stats.uncovered += plan.uncovered;
            stats.edits.absorb(apply_plan(&mut self.labelling, plan));
        }
        stats.wall_us = started.elapsed().as_secs_f64() * 1e6;
        Ok((stats, sets))
    }

    /// Adds a vertex attached to `attach` (existing ids), inserting the edges
    /// one at a time in ascending id order.
    pub fn apply_vertex_insertion(&mut self, attach: &[VertexId]) -> Result<(VertexId, UpdateStats)> {
        if attach.is_empty() {
            return Err(Error::EmptyAttachment);
        }
        for &x in attach {
            if !self.graph.contains_vertex(x) {
                return Err(Error::out_of_range(x, self.graph.vertex_count()));
            }
        }
        let mut targets = attach.to_vec();
        targets.sort_unstable();
        targets.dedup();

        let v = self.graph.add_vertex();
        self.labelling.push_vertex();
        let mut total = UpdateStats::default();
        for t in targets {
            total.absorb(&self.apply_edge_insertion(EdgeInsertion::new(v, t))?);
        }
        Ok((v, total))
    }
}
