use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dynhcl::bench::{
    affected_csv, affected_report, affected_stats, checkpoint_csv, query_csv, run_query_bench, run_update_bench,
    timed_build, to_json_line, update_csv, BuildReport, UpdateBenchOptions, SCHEMA_VERSION,
};
use dynhcl::oracle::{bfs_all_distances, canonical_labelling, diff_labellings};
use dynhcl::snapshot::{read_labelling, write_graph, write_labelling};
use dynhcl::workload::{read_pairs, read_trace, resolve_trace, to_external, write_pairs, write_trace};
use dynhcl::{
    gen_insert_workload, gen_query_workload, load_graph, query_batch, select_landmarks, DynamicIndex, EdgeInsertion,
    Execution, Graph, GraphFormat, HighwayCoverLabelling, IdMap, LoadedGraph, TraceOp,
};

const GRAPH_MAGIC: &[u8] = b"DHCLG1";

#[derive(Parser)]
#[command(name = "dynhcl", version, about = "Exact distance queries on graphs under insertions")]
struct Cli {
    /// Worker threads for parallel phases; 1 runs sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Emit flat CSV tables instead of JSON lines.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select landmarks and build a labelling.
    Build {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 20)]
        landmarks: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also save the graph in binary form.
        #[arg(long)]
        save_graph: Option<PathBuf>,
    },
    /// Answer distance queries.
    Query {
        #[command(flatten)]
        index: IndexArgs,
        /// File of "u v" pairs; distances go to stdout, or to --out with a report on stdout.
        #[arg(long, conflicts_with_all = ["u", "v"])]
        pairs: Option<PathBuf>,
        #[arg(long, requires = "v")]
        u: Option<u64>,
        #[arg(long, requires = "u")]
        v: Option<u64>,
        #[arg(long, requires = "pairs")]
        out: Option<PathBuf>,
    },
    /// Apply an insertion trace and report timings.
    Update {
        #[command(flatten)]
        index: IndexArgs,
        #[arg(long)]
        trace: PathBuf,
        /// Compare against a rebuilt labelling at every checkpoint.
        #[arg(long)]
        verify: bool,
        /// Emit a checkpoint every N updates.
        #[arg(long)]
        sweep: Option<usize>,
        /// Time a full rebuild on the final graph.
        #[arg(long)]
        rebuild: bool,
        /// Save the updated labelling.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Save the updated graph in binary form.
        #[arg(long)]
        save_graph: Option<PathBuf>,
    },
    /// Generate a random workload.
    Gen {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report the fraction of vertices affected by each insertion.
    Stats {
        #[command(flatten)]
        index: IndexArgs,
        #[arg(long)]
        trace: PathBuf,
        /// Evaluate each insertion against the unmodified index.
        #[arg(long)]
        dry_run: bool,
    },
    /// Build, apply a trace, and check every step against a rebuild.
    Verify {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 20)]
        landmarks: usize,
        #[arg(long)]
        trace: PathBuf,
        /// Random pairs checked against BFS after the trace.
        #[arg(long, default_value_t = 1000)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct GraphArg {
    /// Edge list or binary graph snapshot.
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct IndexArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long)]
    labelling: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Insert,
    Query,
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    VerificationFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Status> {
    let exec = match cli.threads {
        Some(0) => bail!("--threads must be at least 1"),
        Some(1) => Execution::Sequential,
        Some(n) => {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker threads")?;
            Execution::default()
        }
        None => Execution::default(),
    };
    let out = &mut io::stdout().lock();
    match cli.command {
        Command::Build { graph, landmarks, out: path, save_graph } => {
            let LoadedGraph { graph, ids } = open_graph(&graph.graph)?;
            let lm = select_landmarks(&graph, landmarks)?;
            let (l, build_us) = timed_build(&graph, &lm, exec);
            save_labelling(&path, &l, &ids)?;
            if let Some(p) = save_graph {
                save_graph_file(&p, &graph)?;
            }
            let report = BuildReport::new(&graph, &l, build_us);
            if cli.csv {
                writeln!(out, "vertices,edges,landmarks,build_us,entries,bytes")?;
                writeln!(
                    out,
                    "{},{},{},{:.3},{},{}",
                    report.vertices,
                    report.edges,
                    report.landmarks,
                    report.build_us,
                    report.labelling.entries,
                    report.labelling.bytes
                )?;
            } else {
                writeln!(out, "{}", to_json_line(&report)?)?;
            }
        }
        Command::Query { index, pairs, u, v, out: dest } => {
            let (graph, l, ids) = open_index(&index)?;
            match (pairs, u, v) {
                (Some(p), _, _) => {
                    let pairs = read_pairs(BufReader::new(open(&p)?), &ids).with_context(|| p.display().to_string())?;
                    match dest {
                        None => {
                            let mut w = BufWriter::new(out);
                            for r in query_batch(&graph, &l, &pairs, exec)? {
                                writeln!(w, "{}", r.distance.to_signed())?;
                            }
                            w.flush()?;
                        }
                        Some(dest) => {
                            let report = run_query_bench(&graph, &l, &pairs, exec)?;
                            let mut w = BufWriter::new(create(&dest)?);
                            for r in query_batch(&graph, &l, &pairs, exec)? {
                                writeln!(w, "{}", r.distance.to_signed())?;
                            }
                            w.flush()?;
                            if cli.csv {
                                write!(out, "{}", query_csv(&report))?;
                            } else {
                                writeln!(out, "{}", to_json_line(&report)?)?;
                            }
                        }
                    }
                }
                (None, Some(a), Some(b)) => {
                    let a = internal(&ids, a)?;
                    let b = internal(&ids, b)?;
                    writeln!(out, "{}", dynhcl::query(&graph, &l, a, b)?.distance.to_signed())?;
                }
                _ => bail!("query needs --pairs or both --u and --v"),
            }
        }
        Command::Update { index, trace, verify, sweep, rebuild, out: dest, save_graph } => {
            let (graph, l, ids) = open_index(&index)?;
            let (ops, ids) = open_trace(&trace, &ids)?;
            let mut dynamic = DynamicIndex::new(graph, l)?.with_execution(exec);
            let opts = UpdateBenchOptions { verify, sweep, rebuild };
            let report = run_update_bench(&mut dynamic, &ops, &opts)?;
            if cli.csv {
                write!(out, "{}", update_csv(&report))?;
                writeln!(out)?;
                write!(out, "{}", checkpoint_csv(&report))?;
            } else {
                writeln!(out, "{}", to_json_line(&report)?)?;
            }
            if let Some(p) = dest {
                save_labelling(&p, dynamic.labelling(), &ids)?;
            }
            if let Some(p) = save_graph {
                save_graph_file(&p, dynamic.graph())?;
            }
            if verify && report.oracle_diffs() > 0 {
                eprintln!("verification failed: {} differences from a rebuilt labelling", report.oracle_diffs());
                return Ok(Status::VerificationFailed);
            }
        }
        Command::Gen { graph, kind, count, seed, out: dest } => {
            let LoadedGraph { graph, ids } = open_graph(&graph.graph)?;
            let mut w = BufWriter::new(create(&dest)?);
            match kind {
                Kind::Insert => {
                    let workload = gen_insert_workload(&graph, count, seed)?;
                    write_trace(&mut w, &to_external(workload.inserts().unwrap_or_default(), &ids))?;
                }
                Kind::Query => {
                    let workload = gen_query_workload(&graph, count, seed)?;
                    write_pairs(&mut w, workload.queries().unwrap_or_default(), &ids)?;
                }
            }
            w.flush()?;
        }
        Command::Stats { index, trace, dry_run } => {
            let (graph, l, ids) = open_index(&index)?;
            let (ops, _) = open_trace(&trace, &ids)?;
            let mut dynamic = DynamicIndex::new(graph, l)?.with_execution(exec);
            let report = affected_report(affected_stats(&mut dynamic, &ops, dry_run)?, dry_run);
            if cli.csv {
                write!(out, "{}", affected_csv(&report))?;
            } else {
                writeln!(out, "{}", to_json_line(&report)?)?;
            }
        }
        Command::Verify { graph, landmarks, trace, queries, seed } => {
            let LoadedGraph { graph, ids } = open_graph(&graph.graph)?;
            let (ops, _) = open_trace(&trace, &ids)?;
            let report = verify(graph, landmarks, &ops, queries, seed, exec)?;
            let ok = report.failed_steps.is_empty() && report.query_mismatches == 0;
            if cli.csv {
                writeln!(out, "updates,failed_steps,queries,query_mismatches,ok")?;
                writeln!(
                    out,
                    "{},{},{},{},{ok}",
                    report.updates,
                    report.failed_steps.len(),
                    report.queries,
                    report.query_mismatches
                )?;
            } else {
                let line = serde_json::json!({
                    "schema_version": SCHEMA_VERSION,
                    "kind": "verify",
                    "updates": report.updates,
                    "failed_steps": report.failed_steps,
                    "queries": report.queries,
                    "query_mismatches": report.query_mismatches,
                    "ok": ok,
                });
                writeln!(out, "{line}")?;
            }
            if !ok {
                return Ok(Status::VerificationFailed);
            }
        }
    }
    Ok(Status::Ok)
}

struct VerifyReport {
    updates: usize,
    /// Trace positions after which the labelling differed from a rebuild.
    failed_steps: Vec<usize>,
    queries: usize,
    query_mismatches: usize,
}

fn verify(graph: Graph, k: usize, ops: &[TraceOp], queries: usize, seed: u64, exec: Execution) -> Result<VerifyReport> {
    let lm = select_landmarks(&graph, k)?;
    let l = dynhcl::build_labelling_with(&graph, &lm, exec);
    let mut index = DynamicIndex::new(graph, l)?.with_execution(exec);
    let mut failed_steps = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        match op {
            TraceOp::Edge(a, b) => {
                index.apply_edge_insertion(EdgeInsertion::new(*a, *b))?;
            }
            TraceOp::Vertex(attach) => {
                index.apply_vertex_insertion(attach)?;
            }
        }
        let landmarks = index.labelling().landmarks();
        if !diff_labellings(index.labelling(), &canonical_labelling(index.graph(), landmarks))?.is_empty() {
            failed_steps.push(i);
        }
    }
    let mut query_mismatches = 0;
    let mut checked = 0;
    if queries > 0 && index.graph().vertex_count() > 0 {
        let workload = gen_query_workload(index.graph(), queries, seed)?;
        let mut pairs = workload.queries().unwrap_or_default().to_vec();
        pairs.sort_unstable();
        let answers = query_batch(index.graph(), index.labelling(), &pairs, exec)?;
        let mut truth = None;
        for (&(u, v), r) in pairs.iter().zip(&answers) {
            let dist = match &truth {
                Some((s, d)) if *s == u => d,
                _ => &truth.insert((u, bfs_all_distances(index.graph(), u)?)).1,
            };
            query_mismatches += usize::from(dist[v as usize] != r.distance);
            checked += 1;
        }
    }
    Ok(VerifyReport { updates: ops.len(), failed_steps, queries: checked, query_mismatches })
}

fn open(path: &Path) -> Result<File> {
    File::open(path).with_context(|| format!("opening {}", path.display()))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).with_context(|| format!("creating {}", path.display()))
}

/// Loads a binary snapshot if the file starts with its magic, else an edge list.
fn open_graph(path: &Path) -> Result<LoadedGraph> {
    Ok(open_graph_with_format(path)?.0)
}

fn open_graph_with_format(path: &Path) -> Result<(LoadedGraph, GraphFormat)> {
    let mut reader = BufReader::new(open(path)?);
    let format = if reader.fill_buf()?.starts_with(GRAPH_MAGIC) { GraphFormat::Binary } else { GraphFormat::EdgeList };
    let loaded = load_graph(reader, format).with_context(|| format!("loading {}", path.display()))?;
    Ok((loaded, format))
}

fn open_index(args: &IndexArgs) -> Result<(Graph, HighwayCoverLabelling, IdMap)> {
    let (loaded, format) = open_graph_with_format(&args.graph.graph)?;
    let mut bytes = Vec::new();
    open(&args.labelling)?.read_to_end(&mut bytes)?;
    let (l, label_ids) =
        read_labelling(bytes.as_slice()).with_context(|| format!("loading {}", args.labelling.display()))?;
    let n = loaded.graph.vertex_count();
    if l.vertex_count() != n {
        bail!("labelling covers {} vertices but the graph has {n}", l.vertex_count());
    }
    // Binary graphs carry no id map; the labelling's map applies to them.
    if format == GraphFormat::EdgeList && loaded.ids != label_ids {
        bail!("labelling was built for a graph with different vertex ids");
    }
    Ok((loaded.graph, l, label_ids))
}

fn open_trace(path: &Path, ids: &IdMap) -> Result<(Vec<TraceOp>, IdMap)> {
    let ops = read_trace(BufReader::new(open(path)?)).with_context(|| format!("reading {}", path.display()))?;
    resolve_trace(&ops, ids).with_context(|| format!("resolving {}", path.display()))
}

fn save_labelling(path: &Path, l: &HighwayCoverLabelling, ids: &IdMap) -> Result<()> {
    let mut w = BufWriter::new(create(path)?);
    write_labelling(&mut w, l, ids)?;
    w.flush()?;
    Ok(())
}

fn save_graph_file(path: &Path, g: &Graph) -> Result<()> {
    let mut w = BufWriter::new(create(path)?);
    write_graph(&mut w, g)?;
    w.flush()?;
    Ok(())
}

fn internal(ids: &IdMap, external: u64) -> Result<dynhcl::VertexId> {
    ids.to_internal(external).with_context(|| format!("vertex {external} is not in the graph"))
}
