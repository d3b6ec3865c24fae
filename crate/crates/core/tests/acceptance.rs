//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use dynhcl::bench::{affected_stats, run_update_bench, timed_build, UpdateBenchOptions};
use dynhcl::oracle::{affected_oracle, bfs_all_distances, canonical_labelling, diff_labellings};
use dynhcl::{
    find_affected, gen_insert_workload, orient_and_filter, query_batch, root_distance, select_landmarks, synth,
    DynamicIndex, EdgeInsertion, Execution, Graph, HighwayCoverLabelling, TraceOp, VertexId,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INSERTIONS: usize = 200;
const QUERY_SOURCES: usize = 40;
const QUERY_TARGETS: usize = 50;
const MONOTONE_PAIRS: usize = 1000;

#[derive(Default)]
struct Tally {
    checks: u64,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn summary(&self) -> String {
        if self.passed() {
            format!("{} checks", self.checks)
        } else {
            let shown: Vec<&str> = self.failures.iter().filter(|f| !f.is_empty()).map(String::as_str).collect();
            format!("{} of {} checks failed; first: {}", self.failures.len(), self.checks, shown.join(" | "))
        }
    }
}

#[derive(Default)]
struct Report {
    lines: Vec<(u32, bool, String)>,
    notes: Vec<String>,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, passed: bool, detail: &str) {
        self.lines.push((id, passed, format!("criterion {id} {name}: {detail}")));
    }

    /// Prints every criterion in order; returns whether all passed.
    fn print(mut self) -> bool {
        self.lines.sort_by_key(|l| l.0);
        for (_, passed, text) in &self.lines {
            println!("[{}] {text}", if *passed { "PASS" } else { "FAIL" });
        }
        for note in &self.notes {
            println!("       {note}");
        }
        self.lines.iter().all(|l| l.1)
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_label_bounds(l: &HighwayCoverLabelling, tally: &mut Tally, ctx: &str) {
    let k = l.landmarks().len();
    let mut total = 0;
    for (v, label) in l.labels().iter().enumerate() {
        total += label.len();
        tally.check(label.len() <= k, || format!("{ctx}: |L({v})| = {} > {k}", label.len()));
        if l.landmarks().is_landmark(v as VertexId) {
            tally.check(label.is_empty(), || format!("{ctx}: landmark {v} has a label"));
        }
    }
    let cap = l.vertex_count() * k;
    tally.check(total <= cap, || format!("{ctx}: {total} entries > {cap}"));
}

/// Random pairs grouped by source so each source needs one oracle BFS.
fn grouped_pairs(n: usize, rng: &mut ChaCha8Rng) -> Vec<(VertexId, VertexId)> {
    let mut pairs = Vec::with_capacity(QUERY_SOURCES * QUERY_TARGETS);
    for _ in 0..QUERY_SOURCES {
        let s = rng.random_range(0..n as VertexId);
        for _ in 0..QUERY_TARGETS {
            pairs.push((s, rng.random_range(0..n as VertexId)));
        }
    }
    pairs
}

struct RunTallies {
    correctness: Tally,
    minimality: Tally,
    monotone: Tally,
    locality: Tally,
    bounds: Tally,
    insertions: usize,
    short_runs: Vec<String>,
}

fn correctness_run(name: &str, g: Graph, k: usize, seed: u64, t: &mut RunTallies) {
    let n = g.vertex_count();
    let requested = k;
    let k = k.min(n);
    let lm = select_landmarks(&g, k).unwrap();
    let l = dynhcl::build_labelling(&g, &lm);
    let mut index = DynamicIndex::new(g.clone(), l).unwrap();
    let non_edges = n * (n - 1) / 2 - g.edge_count();
    let count = INSERTIONS.min(non_edges);
    if count < INSERTIONS {
        t.short_runs.push(format!("{name}/|R|={k} (requested {requested}): {count} insertions"));
    }
    let ops = gen_insert_workload(&g, count, seed).unwrap();
    let mut rng = rng(seed ^ 0x5eed);
    let monotone_pairs: Vec<(VertexId, VertexId)> =
        (0..MONOTONE_PAIRS).map(|_| (rng.random_range(0..n as VertexId), rng.random_range(0..n as VertexId))).collect();
    let mut before = query_batch(index.graph(), index.labelling(), &monotone_pairs, Execution::default()).unwrap();

    for (step, op) in ops.inserts().unwrap().iter().enumerate() {
        let TraceOp::Edge(a, b) = *op else { unreachable!("generator emits edges only") };
        let ctx = format!("{name}/|R|={k}/step {step} ({a},{b})");
        let (stats, sets) = index.apply_edge_insertion_detailed(EdgeInsertion::new(a, b)).unwrap();
        t.insertions += 1;
        let g = index.graph();
        let l = index.labelling();

        // 1: exact answers against BFS
        let pairs = grouped_pairs(n, &mut rng);
        let answers = query_batch(g, l, &pairs, Execution::default()).unwrap();
        for chunk in pairs.chunks(QUERY_TARGETS).zip(answers.chunks(QUERY_TARGETS)) {
            let truth = bfs_all_distances(g, chunk.0[0].0).unwrap();
            for (&(u, v), r) in chunk.0.iter().zip(chunk.1) {
                t.correctness.check(r.distance == truth[v as usize], || {
                    format!("{ctx}: d({u},{v}) = {} expected {}", r.distance, truth[v as usize])
                });
            }
        }

        // 2: canonical equality
        let diff = diff_labellings(l, &canonical_labelling(g, &lm)).unwrap();
        t.minimality.check(diff.is_empty(), || format!("{ctx}: {} differences", diff.len()));

        // 5: distances never grow
        let after = query_batch(g, l, &monotone_pairs, Execution::default()).unwrap();
        for ((&(u, v), pre), post) in monotone_pairs.iter().zip(&before).zip(&after) {
            t.monotone.check(post.distance <= pre.distance, || {
                format!("{ctx}: d({u},{v}) grew {} -> {}", pre.distance, post.distance)
            });
        }
        before = after;

        // 6: repair work bounded by oracle sets and post-insertion degrees
        let mut budget = 0usize;
        for set in &sets {
            let oracle = affected_oracle(g, set.edge, lm.id(set.landmark)).unwrap();
            budget += oracle.len() + oracle.iter().map(|&v| g.degree(v).unwrap()).sum::<usize>();
        }
        t.locality.check(stats.repair_visited <= budget, || {
            format!("{ctx}: repair visited {} > bound {budget}", stats.repair_visited)
        });

        // 9
        check_label_bounds(l, &mut t.bounds, &ctx);
    }
}

fn affected_exactness(report: &mut Report) {
    let mut tally = Tally::default();
    let mut rng = rng(3);
    let mut triples = 0;
    let mut nonempty = 0;
    let mut attempts = 0;
    while triples < 500 {
        attempts += 1;
        assert!(attempts < 100_000, "could not sample 500 non-skipped triples");
        let n = rng.random_range(20..=1000);
        let graph_seed = rng.random();
        let g = match rng.random_range(0..3) {
            0 => synth::erdos_renyi(n, rng.random_range(1.5..8.0), graph_seed),
            1 => synth::preferential_attachment(n, rng.random_range(1..4), graph_seed),
            _ => synth::grid(n / 20, 20),
        };
        let n = g.vertex_count();
        let lm = select_landmarks(&g, rng.random_range(1..=16usize).min(n)).unwrap();
        let l = dynhcl::build_labelling(&g, &lm);
        let (a, b) = loop {
            let a = rng.random_range(0..n as VertexId);
            let b = rng.random_range(0..n as VertexId);
            if a != b && !g.has_edge(a, b) {
                break (a, b);
            }
        };
        let rank = rng.random_range(0..lm.len());
        let Some(edge) = orient_and_filter(&l, EdgeInsertion::new(a, b), rank).unwrap() else { continue };
        triples += 1;
        let set = find_affected(&g, &l, edge, rank);
        let mut after = g.clone();
        after.insert_edge(EdgeInsertion::new(a, b)).unwrap();
        let oracle = affected_oracle(&after, edge, lm.id(rank)).unwrap();
        let mine: BTreeSet<VertexId> = set.vertices().collect();
        nonempty += usize::from(!mine.is_empty());
        tally.check(mine == oracle, || {
            format!("triple {triples}: |found| = {} |oracle| = {}", mine.len(), oracle.len())
        });
        let floor = root_distance(&l, rank, edge.0).unwrap().succ();
        let old = bfs_all_distances(&g, lm.id(rank)).unwrap();
        for v in &mine {
            tally.check(old[*v as usize] >= floor, || format!("triple {triples}: old d(r,{v}) below d(r,a)+1"));
        }
    }
    report.line(
        3,
        "affected-set exactness",
        tally.passed(),
        &format!("{triples} triples ({nonempty} non-empty), {}", tally.summary()),
    );
}

fn skip_rule(report: &mut Report) {
    let mut tally = Tally::default();
    let g = synth::erdos_renyi(1000, 6.0, 11);
    let lm = select_landmarks(&g, 4).unwrap();
    let l = dynhcl::build_labelling(&g, &lm);
    let mut index = DynamicIndex::new(g, l).unwrap();
    let mut rng = rng(4);
    let mut generated = 0;
    let mut attempts = 0;
    while generated < 100 {
        attempts += 1;
        assert!(attempts < 1_000_000, "could not generate 100 equidistant insertions");
        let a = rng.random_range(0..1000);
        let b = rng.random_range(0..1000);
        if a == b || index.graph().has_edge(a, b) {
            continue;
        }
        let l = index.labelling();
        let equidistant = (0..lm.len()).all(|r| root_distance(l, r, a).unwrap() == root_distance(l, r, b).unwrap());
        if !equidistant {
            continue;
        }
        generated += 1;
        for rank in 0..lm.len() {
            let skipped = orient_and_filter(l, EdgeInsertion::new(a, b), rank).unwrap().is_none();
            tally.check(skipped, || format!("({a},{b}) not filtered for rank {rank}"));
        }
        let sets = index.find_all(EdgeInsertion::new(a, b)).unwrap();
        tally.check(sets.iter().all(|s| s.is_empty()), || format!("({a},{b}) found affected vertices"));
        let before = index.labelling().clone();
        let edges = index.graph().edge_count();
        let stats = index.apply_edge_insertion(EdgeInsertion::new(a, b)).unwrap();
        tally.check(stats.applied && index.graph().edge_count() == edges + 1, || format!("({a},{b}) not inserted"));
        tally.check(index.labelling() == &before, || format!("({a},{b}) changed the labelling"));
    }
    report.line(4, "skip rule", tally.passed(), &format!("{generated} insertions, {}", tally.summary()));
}

fn large_graph(report: &mut Report, bounds: &mut Tally) {
    let t = Instant::now();
    let g = synth::preferential_attachment(100_000, 5, 7);
    let lm = select_landmarks(&g, 20).unwrap();
    let (l, build_us) = timed_build(&g, &lm, Execution::default());
    let mut index = DynamicIndex::new(g.clone(), l).unwrap();

    let ops = gen_insert_workload(&g, 1000, 70).unwrap();
    let opts = UpdateBenchOptions { verify: false, sweep: None, rebuild: false };
    let bench = run_update_bench(&mut index, ops.inserts().unwrap(), &opts).unwrap();
    let median = bench.latency.median_us;
    let ratio = build_us / median.max(f64::MIN_POSITIVE);
    report.line(
        7,
        "incremental vs rebuild",
        ratio >= 2.0,
        &format!(
            "n={} m={} |R|=20 build {:.1} ms, median update {:.1} us, ratio {:.0}x (10x target {})",
            g.vertex_count(),
            g.edge_count(),
            build_us / 1e3,
            median,
            ratio,
            if ratio >= 10.0 { "met" } else { "missed" }
        ),
    );

    let more = gen_insert_workload(index.graph(), 1000, 80).unwrap();
    let fractions = affected_stats(&mut index, more.inserts().unwrap(), false).unwrap();
    let sorted = fractions.windows(2).all(|w| w[0] >= w[1]);
    let distinct = fractions.first() != fractions.last();
    let positive: Vec<f64> = fractions.iter().copied().filter(|&f| f > 0.0).collect();
    let span = match (positive.first(), positive.last()) {
        (Some(hi), Some(lo)) => (hi / lo).log10(),
        _ => 0.0,
    };
    let median_fraction = fractions[fractions.len() / 2];
    report.line(
        8,
        "affected distribution",
        sorted && distinct && fractions.len() == 1000,
        &format!(
            "max {:.3e} median {:.3e} min {:.3e}; {} of 1000 non-zero span {span:.2} orders of magnitude (3 targeted)",
            fractions[0],
            median_fraction,
            fractions[fractions.len() - 1],
            positive.len(),
        ),
    );

    check_label_bounds(index.labelling(), bounds, "n=100k after 2000 insertions");
    let diff = diff_labellings(index.labelling(), &canonical_labelling(index.graph(), &lm)).unwrap();
    bounds.check(diff.is_empty(), || format!("n=100k: {} differences from canonical", diff.len()));
    report.notes.push(format!("n=100k stage finished in {:.1} s", t.elapsed().as_secs_f64()));
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut report = Report::default();

    let mut t = RunTallies {
        correctness: Tally::default(),
        minimality: Tally::default(),
        monotone: Tally::default(),
        locality: Tally::default(),
        bounds: Tally::default(),
        insertions: 0,
        short_runs: Vec::new(),
    };
    let p5 = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
    let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    for k in [4, 16] {
        let seed = k as u64;
        correctness_run("ER(2000,8)", synth::erdos_renyi(2000, 8.0, 100 + seed), k, seed, &mut t);
        correctness_run("PA(5000)", synth::preferential_attachment(5000, 3, 200 + seed), k, seed + 1, &mut t);
        correctness_run("grid(50x50)", synth::grid(50, 50), k, seed + 2, &mut t);
        correctness_run("P5", p5.clone(), k, seed + 3, &mut t);
        correctness_run("C4", c4.clone(), k, seed + 4, &mut t);
    }
    let runs = format!("{} insertions over 10 runs", t.insertions);
    report.line(1, "correctness", t.correctness.passed(), &format!("{runs}, {}", t.correctness.summary()));
    if !t.short_runs.is_empty() {
        report.notes.push(format!("non-edges exhausted: {}", t.short_runs.join(", ")));
    }
    report.line(2, "minimality", t.minimality.passed(), &format!("{runs}, {}", t.minimality.summary()));
    affected_exactness(&mut report);
    skip_rule(&mut report);
    report.line(5, "monotonicity", t.monotone.passed(), &format!("{runs}, {}", t.monotone.summary()));
    report.line(6, "repair locality", t.locality.passed(), &format!("{runs}, {}", t.locality.summary()));
    large_graph(&mut report, &mut t.bounds);
    report.line(9, "label bounds", t.bounds.passed(), &format!("{runs} plus the n=100k run, {}", t.bounds.summary()));

    report.notes.push(format!("acceptance finished in {:.1} s", started.elapsed().as_secs_f64()));
    if report.print() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
