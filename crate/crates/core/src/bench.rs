//! Update/query/affected-set measurement and line-delimited JSON reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{EdgeInsertion, Graph};
use crate::incremental::{DynamicIndex, UpdateStats};
use crate::labelling::{build_labelling_with, HighwayCoverLabelling, LabellingSize};
use crate::oracle::{canonical_labelling, diff_labellings};
use crate::query::SearchScratch;
use crate::workload::TraceOp;
use crate::VertexId;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LatencySummary {
    pub count: usize,
    pub mean_us: f64,
    pub median_us: f64,
    pub p95_us: f64,
    pub p99_us: f64,
    pub max_us: f64,
    pub total_us: f64,
}

impl LatencySummary {
    pub fn from_samples(samples: &[f64]) -> Self {
        if samples.is_empty() {
            return Self::default();
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let total: f64 = sorted.iter().sum();
        let pct = |p: f64| sorted[((sorted.len() - 1) as f64 * p).round() as usize];
        LatencySummary {
            count: sorted.len(),
            mean_us: total / sorted.len() as f64,
            median_us: pct(0.5),
            p95_us: pct(0.95),
            p99_us: pct(0.99),
            max_us: *sorted.last().unwrap(),
            total_us: total,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuildReport {
    pub schema_version: u32,
    pub kind: &'static str,
    pub vertices: usize,
    pub edges: usize,
    pub landmarks: usize,
    pub build_us: f64,
    pub labelling: LabellingSize,
}

impl BuildReport {
    pub fn new(g: &Graph, l: &HighwayCoverLabelling, build_us: f64) -> Self {
        BuildReport {
            schema_version: SCHEMA_VERSION,
            kind: "build",
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            landmarks: l.landmarks().len(),
            build_us,
            labelling: l.size(),
        }
    }
}

/// Builds a labelling and times it.
pub fn timed_build(g: &Graph, landmarks: &crate::Landmarks, exec: Execution) -> (HighwayCoverLabelling, f64) {
    let t = Instant::now();
    let l = build_labelling_with(g, landmarks, exec);
    (l, t.elapsed().as_secs_f64() * 1e6)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Checkpoint {
    pub updates: usize,
    pub cumulative_us: f64,
    pub labelling: LabellingSize,
    /// Differences against the recomputed canonical labelling, when verified.
    pub oracle_diffs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpdateSample {
    pub index: usize,
    pub applied: bool,
    pub wall_us: f64,
    pub affected: usize,
    pub affected_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpdateReport {
    pub schema_version: u32,
    pub kind: &'static str,
    pub updates: usize,
    pub applied: usize,
    pub skipped: usize,
    pub latency: LatencySummary,
    pub affected_fraction_mean: f64,
    /// Totals over all updates.
    pub counters: UpdateStats,
    pub checkpoints: Vec<Checkpoint>,
    pub rebuild_us: Option<f64>,
    pub labelling: LabellingSize,
    pub samples: Vec<UpdateSample>,
}

impl UpdateReport {
    pub fn oracle_diffs(&self) -> usize {
        self.checkpoints.iter().filter_map(|c| c.oracle_diffs).sum()
    }
}

#[derive(Debug, Clone, Default)]
pub struct UpdateBenchOptions {
    /// Compare against the canonical labelling at every checkpoint.
    pub verify: bool,
    /// Emit a checkpoint every `sweep` updates (the final one always).
    pub sweep: Option<usize>,
    /// Time a from-scratch build on the final graph.
    pub rebuild: bool,
}

fn apply_op(index: &mut DynamicIndex, op: &TraceOp) -> Result<UpdateStats> {
    match op {
        TraceOp::Edge(u, v) => index.apply_edge_insertion(EdgeInsertion::new(*u, *v)),
        TraceOp::Vertex(attach) => index.apply_vertex_insertion(attach).map(|(_, s)| s),
    }
}

fn diff_count(index: &DynamicIndex) -> Result<usize> {
    let canonical = canonical_labelling(index.graph(), index.labelling().landmarks());
    Ok(diff_labellings(index.labelling(), &canonical)?.len())
}

/// Applies `ops` in order, timing each one.
pub fn run_update_bench(index: &mut DynamicIndex, ops: &[TraceOp], opts: &UpdateBenchOptions) -> Result<UpdateReport> {
    let mut samples = Vec::with_capacity(ops.len());
    let mut counters = UpdateStats::default();
    let mut checkpoints = Vec::new();
    let mut cumulative = 0.0;
    let mut fractions = 0.0;
    for (i, op) in ops.iter().enumerate() {
        let t = Instant::now();
        let stats = apply_op(index, op)?;
        let wall_us = t.elapsed().as_secs_f64() * 1e6;
        cumulative += wall_us;
        let n = index.graph().vertex_count().max(1);
        let fraction = stats.affected_total as f64 / n as f64;
        fractions += fraction;
        samples.push(UpdateSample {
            index: i,
            applied: stats.applied,
            wall_us,
            affected: stats.affected_total,
            affected_fraction: fraction,
        });
        counters.absorb(&stats);

        let done = i + 1;
        let at_sweep = opts.sweep.is_some_and(|s| s > 0 && done % s == 0);
        if at_sweep || done == ops.len() {
            checkpoints.push(Checkpoint {
                updates: done,
                cumulative_us: cumulative,
                labelling: index.labelling().size(),
                oracle_diffs: if opts.verify { Some(diff_count(index)?) } else { None },
            });
        }
    }
    let rebuild_us =
        opts.rebuild.then(|| timed_build(index.graph(), index.labelling().landmarks(), index.execution()).1);
    let wall: Vec<f64> = samples.iter().filter(|s| s.applied).map(|s| s.wall_us).collect();
    let applied = wall.len();
    Ok(UpdateReport {
        schema_version: SCHEMA_VERSION,
        kind: "update",
        updates: ops.len(),
        applied,
        skipped: ops.len() - applied,
        latency: LatencySummary::from_samples(&wall),
        affected_fraction_mean: if ops.is_empty() { 0.0 } else { fractions / ops.len() as f64 },
        counters,
        checkpoints,
        rebuild_us,
        labelling: index.labelling().size(),
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryReport {
    pub schema_version: u32,
    pub kind: &'static str,
    pub queries: usize,
    pub latency: LatencySummary,
    pub mean_search_expanded: f64,
    /// Distance → count; unreachable pairs under `-1`.
    pub histogram: BTreeMap<i64, usize>,
}

/// Answers every pair, timing each query individually.
pub fn run_query_bench(
    g: &Graph,
    l: &HighwayCoverLabelling,
    pairs: &[(VertexId, VertexId)],
    exec: Execution,
) -> Result<QueryReport> {
    let timed = exec.map_init(
        pairs,
        || SearchScratch::new(g.vertex_count()),
        |scratch, &(u, v)| {
            let t = Instant::now();
            let r = scratch.query(g, l, u, v);
            r.map(|r| (r, t.elapsed().as_secs_f64() * 1e6))
        },
    );
    let mut histogram = BTreeMap::new();
    let mut latencies = Vec::with_capacity(pairs.len());
    let mut expanded = 0usize;
    for item in timed {
        let (r, us) = item?;
        *histogram.entry(r.distance.to_signed()).or_insert(0) += 1;
        latencies.push(us);
        expanded += r.search_expanded;
    }
    Ok(QueryReport {
        schema_version: SCHEMA_VERSION,
        kind: "query",
        queries: pairs.len(),
        latency: LatencySummary::from_samples(&latencies),
        mean_search_expanded: if pairs.is_empty() { 0.0 } else { expanded as f64 / pairs.len() as f64 },
        histogram,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffectedReport {
    pub schema_version: u32,
    pub kind: &'static str,
    pub dry_run: bool,
    /// `|Λ| / |V|` per insertion, descending.
    pub fractions: Vec<f64>,
}

/// Fraction of vertices affected by each insertion, sorted descending.
///
/// With `dry_run`, every insertion is evaluated against the unmodified index
/// (edge insertions run discovery only; vertex insertions run on a clone).
/// Otherwise the insertions are applied in order.
pub fn affected_stats(index: &mut DynamicIndex, ops: &[TraceOp], dry_run: bool) -> Result<Vec<f64>> {
    let mut fractions = Vec::with_capacity(ops.len());
    for op in ops {
        let fraction = if !dry_run {
            let s = apply_op(index, op)?;
            s.affected_total as f64 / index.graph().vertex_count() as f64
        } else {
            match op {
                TraceOp::Edge(u, v) => {
                    if u == v || index.graph().has_edge(*u, *v) {
                        0.0
                    } else {
                        let sets = index.find_all(EdgeInsertion::new(*u, *v))?;
                        let mut all: Vec<VertexId> = sets.iter().flat_map(|s| s.vertices()).collect();
                        all.sort_unstable();
                        all.dedup();
                        all.len() as f64 / index.graph().vertex_count() as f64
                    }
                }
                TraceOp::Vertex(_) => {
                    let mut copy = index.clone();
                    let s = apply_op(&mut copy, op)?;
                    s.affected_total as f64 / copy.graph().vertex_count() as f64
                }
            }
        };
        fractions.push(fraction);
    }
    fractions.sort_by(|a, b| b.total_cmp(a));
    Ok(fractions)
}

pub fn affected_report(fractions: Vec<f64>, dry_run: bool) -> AffectedReport {
    AffectedReport { schema_version: SCHEMA_VERSION, kind: "affected", dry_run, fractions }
}

/// One JSON object per line.
pub fn to_json_line<T: Serialize>(report: &T) -> Result<String> {
    serde_json::to_string(report).map_err(|e| Error::Workload(format!("report serialization: {e}")))
}

pub fn update_csv(report: &UpdateReport) -> String {
    let mut out = String::from("index,applied,wall_us,affected,affected_fraction\n");
    for s in &report.samples {
        let _ = writeln!(out, "{},{},{:.3},{},{:.9}", s.index, s.applied, s.wall_us, s.affected, s.affected_fraction);
    }
    out
}

pub fn checkpoint_csv(report: &UpdateReport) -> String {
    let mut out = String::from("updates,cumulative_us,entries,bytes,oracle_diffs,rebuild_us\n");
    for c in &report.checkpoints {
        let diffs = c.oracle_diffs.map(|d| d.to_string()).unwrap_or_default();
        let rebuild = report.rebuild_us.map(|r| format!("{r:.3}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{:.3},{},{},{},{}",
            c.updates, c.cumulative_us, c.labelling.entries, c.labelling.bytes, diffs, rebuild
        );
    }
    out
}

pub fn query_csv(report: &QueryReport) -> String {
    let mut out = String::from("distance,count\n");
    for (d, c) in &report.histogram {
        let _ = writeln!(out, "{d},{c}");
    }
    out
}

pub fn affected_csv(report: &AffectedReport) -> String {
    let mut out = String::from("rank,fraction\n");
    for (i, f) in report.fractions.iter().enumerate() {
        let _ = writeln!(out, "{i},{f:.9}");
    }
    out
}
