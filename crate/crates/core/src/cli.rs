// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 success, 1 infeasible query, 2 usage or input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::eval::{self, EvalConfig, TSV_HEADER};
use crate::graph::{LabelId, LabeledGraph, VertexId};
use crate::index::BcIndex;
use crate::io::{
    load_communities, load_graph_files, read_edges, read_raw_communities, save_graph, write_communities, LoadOptions,
};
use crate::kcore::core_decompose;
use crate::local::l2p_search;
use crate::mbcc::{mbcc_search, MbccQuery, MbccResult};
use crate::online::online_search;
use crate::query::{Algorithm, BccQuery, BccResult, CoreParam, DeletionMode, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "bcc", version, about = "Butterfly-core community search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Precompute coreness and butterfly degrees for one label pair.
    BuildIndex(BuildIndexArgs),
    /// Search a community around two query vertices.
    Query(QueryArgs),
    /// Search a community around two or more query vertices.
    QueryMulti(QueryMultiArgs),
    /// Sample query pairs for evaluation.
    GenQueries(GenQueriesArgs),
    /// Run a query file and report quality against ground truth.
    Eval(EvalArgs),
    /// Print graph statistics.
    Stats(GraphArgs),
    /// Label an unlabeled graph from its communities and add cross edges.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge list, one `u v` pair per line.
    #[arg(long)]
    pub graph: PathBuf,
    /// Vertex labels, one `id label` pair per line.
    #[arg(long)]
    pub labels: PathBuf,
    /// Reject labeled vertices that never appear in an edge.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct BuildIndexArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Left label name; may be omitted when the graph has exactly two labels.
    #[arg(long)]
    pub left: Option<String>,
    #[arg(long)]
    pub right: Option<String>,
    /// Output path; defaults to `<graph>.bcindex`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AlgorithmArg {
    Online,
    Lp,
    L2p,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Online => Algorithm::Online,
            AlgorithmArg::Lp => Algorithm::Lp,
            AlgorithmArg::L2p => Algorithm::L2p,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DeletionArg {
    Bulk,
    Single,
}

/// Search knobs shared by every query-running subcommand.
#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Butterfly threshold for leaders.
    #[arg(long, default_value_t = 1)]
    pub b: u64,
    /// Local expansion budget (l2p only).
    #[arg(long)]
    pub eta: Option<usize>,
    /// Leader search radius in hops (lp and l2p).
    #[arg(long)]
    pub rho: Option<u32>,
    /// Coreness penalty weight of the path (l2p only).
    #[arg(long)]
    pub gamma1: Option<f64>,
    /// Butterfly penalty weight of the path (l2p only).
    #[arg(long)]
    pub gamma2: Option<f64>,
    #[arg(long, value_enum, default_value = "bulk")]
    pub deletion: DeletionArg,
    /// Index file for l2p; defaults to `<graph>.bcindex`.
    #[arg(long)]
    pub index: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Left query vertex (external id).
    #[arg(long)]
    pub ql: u64,
    /// Right query vertex (external id).
    #[arg(long)]
    pub qr: u64,
    /// Left core parameter; the query's coreness when omitted.
    #[arg(long)]
    pub k1: Option<u32>,
    #[arg(long)]
    pub k2: Option<u32>,
    #[arg(long, value_enum, default_value = "lp")]
    pub algorithm: AlgorithmArg,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct QueryMultiArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Query vertex (external id); repeat once per group.
    #[arg(long = "q", required = true, num_args = 1)]
    pub queries: Vec<u64>,
    /// Core parameter per query, in the same order; all automatic when omitted.
    #[arg(long = "k", num_args = 1)]
    pub ks: Vec<u32>,
    #[arg(long, value_enum, default_value = "lp")]
    pub algorithm: AlgorithmArg,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct GenQueriesArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Query vertices rank above this percentage of their label by degree.
    #[arg(long, default_value_t = 80.0)]
    pub degree_rank: f64,
    /// Exact hop distance between the two query vertices.
    #[arg(long, default_value_t = 1)]
    pub inter_distance: u32,
    #[arg(long, default_value_t = 100)]
    pub num_queries: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Query pairs, one `ql qr` line each.
    #[arg(long)]
    pub queries: PathBuf,
    /// Ground-truth communities, one per line.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Algorithms to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "lp")]
    pub algorithms: Vec<AlgorithmArg>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Report file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Unlabeled edge list.
    #[arg(long)]
    pub graph: PathBuf,
    /// Communities, one per line.
    #[arg(long)]
    pub communities: PathBuf,
    /// Output prefix; writes `.edges`, `.labels` and `.truth` files.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0.10)]
    pub local_ratio: f64,
    #[arg(long, default_value_t = 0.10)]
    pub global_ratio: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// A failure that maps to an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Infeasible(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::BuildIndex(a) => build_index(a, out, err),
        Command::Query(a) => query(a, out, err),
        Command::QueryMulti(a) => query_multi(a, out, err),
        Command::GenQueries(a) => gen_queries(a, out),
        Command::Eval(a) => run_eval(a, out, err),
        Command::Stats(a) => stats(a, out),
        Command::Synth(a) => synth(a, out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Infeasible(msg)) => {
            let _ = writeln!(err, "{msg}");
            EXIT_INFEASIBLE
        }
    }
}

fn load(a: &GraphArgs) -> Result<LabeledGraph, CliError> {
    Ok(load_graph_files(&a.graph, &a.labels, LoadOptions { strict: a.strict })?)
}

fn default_index_path(graph: &Path) -> PathBuf {
    let mut s = graph.as_os_str().to_owned();
    s.push(".bcindex");
    PathBuf::from(s)
}

fn label_by_name(g: &LabeledGraph, name: &str) -> Result<LabelId, CliError> {
    g.label_id(name)
        .ok_or_else(|| CliError::Usage(format!("unknown label {name:?}")))
}

fn vertex(g: &LabeledGraph, id: u64) -> Result<VertexId, CliError> {
    g.vertex_of(id)
        .ok_or_else(|| CliError::Usage(format!("query vertex {id} is not in the graph")))
}

fn build_index(a: BuildIndexArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let (left, right) = match (&a.left, &a.right) {
        (Some(l), Some(r)) => (l.clone(), r.clone()),
        (None, None) => (String::new(), String::new()),
        _ => return Err(CliError::Usage("--left and --right must be given together".into())),
    };
    let g = load(&a.graph)?;
    let (l, r) = if left.is_empty() {
        if g.label_count() != 2 {
            return Err(CliError::Usage(format!(
                "graph has {} labels; choose a pair with --left and --right",
                g.label_count()
            )));
        }
        (0, 1)
    } else {
        (label_by_name(&g, &left)?, label_by_name(&g, &right)?)
    };
    let idx = BcIndex::build(&g, l, r)?;
    let path = a.out.unwrap_or_else(|| default_index_path(&a.graph.graph));
    idx.save(&path)?;
    if idx.delta_max() == 0 {
        writeln!(err, "warning: index labels have no edges inside either side")?;
    }
    writeln!(out, "index: {}", path.display())?;
    writeln!(out, "labels: {} {}", idx.label_names()[0], idx.label_names()[1])?;
    writeln!(out, "delta_max: {}", idx.delta_max())?;
    writeln!(out, "chi_max: {}", idx.chi_max())?;
    Ok(())
}

/// Warns about flags the chosen algorithm does not read.
fn warn_inapplicable(s: &SearchArgs, algorithm: Algorithm, err: &mut dyn Write) -> io::Result<()> {
    let mut ignored = Vec::new();
    if algorithm != Algorithm::L2p {
        if s.eta.is_some() {
            ignored.push("--eta");
        }
        if s.gamma1.is_some() {
            ignored.push("--gamma1");
        }
        if s.gamma2.is_some() {
            ignored.push("--gamma2");
        }
        if s.index.is_some() {
            ignored.push("--index");
        }
    }
    if algorithm == Algorithm::Online && s.rho.is_some() {
        ignored.push("--rho");
    }
    for flag in ignored {
        writeln!(err, "warning: {flag} has no effect with --algorithm {algorithm}")?;
    }
    Ok(())
}

fn deletion(d: DeletionArg) -> DeletionMode {
    match d {
        DeletionArg::Bulk => DeletionMode::Bulk,
        DeletionArg::Single => DeletionMode::Single,
    }
}

fn apply_search(q: &mut BccQuery, s: &SearchArgs) {
    q.b = s.b;
    q.eta = s.eta.unwrap_or(BccQuery::DEFAULT_ETA);
    q.rho = s.rho.unwrap_or(BccQuery::DEFAULT_RHO);
    q.gamma1 = s.gamma1.unwrap_or(BccQuery::DEFAULT_GAMMA);
    q.gamma2 = s.gamma2.unwrap_or(BccQuery::DEFAULT_GAMMA);
    q.deletion = deletion(s.deletion);
}

/// Loads the index at `path` if it fits the graph and label pair, otherwise
/// builds one in memory.
fn obtain_index(
    g: &LabeledGraph,
    path: &Path,
    a: LabelId,
    b: LabelId,
    err: &mut dyn Write,
) -> Result<BcIndex, CliError> {
    if path.exists() {
        let idx = BcIndex::load(path)?;
        if idx.check_graph(g).is_ok() && idx.covers(a, b) {
            return Ok(idx);
        }
        writeln!(
            err,
            "warning: index {} does not match this query; rebuilding in memory",
            path.display()
        )?;
    } else {
        writeln!(err, "warning: index {} not found; building in memory", path.display())?;
    }
    Ok(BcIndex::build(g, a, b)?)
}

fn ids(g: &LabeledGraph, vs: &[VertexId]) -> String {
    let mut ext: Vec<u64> = vs.iter().map(|&v| g.external_id(v)).collect();
    ext.sort_unstable();
    ext.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn list_line(out: &mut dyn Write, key: &str, g: &LabeledGraph, vs: &[VertexId]) -> io::Result<()> {
    let body = ids(g, vs);
    if body.is_empty() {
        writeln!(out, "{key}:")
    } else {
        writeln!(out, "{key}: {body}")
    }
}

fn infeasible_message(reason: &str, hint: Option<&str>) -> String {
    match hint {
        Some(h) => format!("infeasible: {reason}\nhint: {h}"),
        None => format!("infeasible: {reason}"),
    }
}

/// Writes the line-oriented result block.
pub fn write_result(out: &mut dyn Write, g: &LabeledGraph, r: &BccResult) -> io::Result<()> {
    match &r.status {
        Status::Found => writeln!(out, "status: found")?,
        Status::Infeasible(reason) => {
            writeln!(out, "status: infeasible {reason}")?;
            return Ok(());
        }
    }
    if let Some(l) = r.leaders {
        writeln!(
            out,
            "leaders: {} {} chi {} {}",
            g.external_id(l.v_l),
            g.external_id(l.v_r),
            l.chi_l,
            l.chi_r
        )?;
    }
    writeln!(out, "query_distance: {}", r.query_distance)?;
    writeln!(out, "diameter: {}", r.diameter)?;
    writeln!(out, "iterations: {}", r.iterations)?;
    list_line(out, "left", g, &r.left)?;
    list_line(out, "right", g, &r.right)
}

fn query(a: QueryArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let g = load(&a.graph)?;
    let algorithm = Algorithm::from(a.algorithm);
    warn_inapplicable(&a.search, algorithm, err)?;
    let mut q = BccQuery::new(vertex(&g, a.ql)?, vertex(&g, a.qr)?).with_algorithm(algorithm);
    q.k1 = a.k1.map_or(CoreParam::Auto, CoreParam::Fixed);
    q.k2 = a.k2.map_or(CoreParam::Auto, CoreParam::Fixed);
    apply_search(&mut q, &a.search);
    q.validate(&g)?;
    let r = if algorithm == Algorithm::L2p {
        let path = a
            .search
            .index
            .clone()
            .unwrap_or_else(|| default_index_path(&a.graph.graph));
        let idx = obtain_index(&g, &path, g.label(q.q_l), g.label(q.q_r), err)?;
        l2p_search(&g, &idx, &q)?
    } else {
        online_search(&g, &q)?
    };
    write_result(out, &g, &r)?;
    match &r.status {
        Status::Found => Ok(()),
        Status::Infeasible(reason) => Err(CliError::Infeasible(infeasible_message(reason, r.hint.as_deref()))),
    }
}

/// Writes the multi-group result block.
pub fn write_multi_result(out: &mut dyn Write, g: &LabeledGraph, r: &MbccResult) -> io::Result<()> {
    match &r.status {
        Status::Found => writeln!(out, "status: found")?,
        Status::Infeasible(reason) => {
            writeln!(out, "status: infeasible {reason}")?;
            return Ok(());
        }
    }
    for p in &r.leaders {
        writeln!(
            out,
            "leaders: {} {} {} {} chi {} {}",
            p.groups.0,
            p.groups.1,
            g.external_id(p.leaders.v_l),
            g.external_id(p.leaders.v_r),
            p.leaders.chi_l,
            p.leaders.chi_r
        )?;
    }
    writeln!(out, "query_distance: {}", r.query_distance)?;
    writeln!(out, "diameter: {}", r.diameter)?;
    writeln!(out, "iterations: {}", r.iterations)?;
    for (i, members) in r.groups.iter().enumerate() {
        list_line(out, &format!("group {i}"), g, members)?;
    }
    Ok(())
}

fn query_multi(a: QueryMultiArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if !a.ks.is_empty() && a.ks.len() != a.queries.len() {
        return Err(CliError::Usage(format!(
            "{} --k values for {} --q values",
            a.ks.len(),
            a.queries.len()
        )));
    }
    let s = &a.search;
    let algorithm = Algorithm::from(a.algorithm);
    warn_inapplicable(s, algorithm, err)?;
    for (flag, given) in [
        ("--gamma1", s.gamma1.is_some()),
        ("--gamma2", s.gamma2.is_some()),
        ("--index", s.index.is_some()),
    ] {
        if given && algorithm == Algorithm::L2p {
            writeln!(err, "warning: {flag} has no effect with query-multi")?;
        }
    }
    let g = load(&a.graph)?;
    let queries = a
        .queries
        .iter()
        .map(|&id| vertex(&g, id))
        .collect::<Result<Vec<_>, _>>()?;
    let mut q = MbccQuery::new(queries);
    if !a.ks.is_empty() {
        q.k = a.ks.iter().map(|&k| CoreParam::Fixed(k)).collect();
    }
    q.b = s.b;
    q.algorithm = algorithm;
    q.eta = s.eta.unwrap_or(BccQuery::DEFAULT_ETA);
    q.rho = s.rho.unwrap_or(BccQuery::DEFAULT_RHO);
    q.deletion = deletion(s.deletion);
    let r = mbcc_search(&g, &q)?;
    write_multi_result(out, &g, &r)?;
    match &r.status {
        Status::Found => Ok(()),
        Status::Infeasible(reason) => Err(CliError::Infeasible(infeasible_message(reason, r.hint.as_deref()))),
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Option<BufWriter<File>>, CliError> {
    match path {
        Some(p) => Ok(Some(BufWriter::new(
            File::create(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        ))),
        None => Ok(None),
    }
}

fn gen_queries(a: GenQueriesArgs, out: &mut dyn Write) -> CliResult {
    let cfg = EvalConfig {
        degree_rank: a.degree_rank,
        inter_distance: a.inter_distance,
        num_queries: a.num_queries,
        rng_seed: a.seed,
        ..EvalConfig::default()
    };
    cfg.validate()?;
    let g = load(&a.graph)?;
    let pairs = eval::generate_queries(&g, &cfg)?;
    let mut file = open_out(&a.out)?;
    let w: &mut dyn Write = match file.as_mut() {
        Some(f) => f,
        None => out,
    };
    for (u, v) in pairs {
        writeln!(w, "{} {}", g.external_id(u), g.external_id(v))?;
    }
    w.flush()?;
    Ok(())
}

fn read_query_file(path: &Path, g: &LabeledGraph) -> Result<Vec<(VertexId, VertexId)>, CliError> {
    let f = File::open(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut pairs = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        let parsed: Option<Vec<u64>> = fields.iter().map(|s| s.parse().ok()).collect();
        match parsed.as_deref() {
            Some(&[a, b]) => pairs.push((vertex(g, a)?, vertex(g, b)?)),
            _ => {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected two vertex ids",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(pairs)
}

fn run_eval(a: EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if a.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let algorithms: Vec<Algorithm> = a.algorithms.iter().map(|&x| x.into()).collect();
    if !algorithms.contains(&Algorithm::L2p) {
        warn_inapplicable(&a.search, Algorithm::Lp, err)?;
    }
    let g = load(&a.graph)?;
    let queries = read_query_file(&a.queries, &g)?;
    let truth = match &a.truth {
        Some(p) => load_communities(p, &g)?,
        None => Vec::new(),
    };
    let mut template = BccQuery::new(0, 0);
    apply_search(&mut template, &a.search);
    crate::query::check_weights(template.gamma1, template.gamma2)?;
    // One shared index per label pair for the local mode.
    let mut index = None;
    if algorithms.contains(&Algorithm::L2p) {
        let pairs: std::collections::BTreeSet<(LabelId, LabelId)> = queries
            .iter()
            .map(|&(u, v)| (g.label(u).min(g.label(v)), g.label(u).max(g.label(v))))
            .collect();
        if let Some(&(l, r)) = pairs.iter().next() {
            let path = a
                .search
                .index
                .clone()
                .unwrap_or_else(|| default_index_path(&a.graph.graph));
            index = Some(obtain_index(&g, &path, l, r, err)?);
            if pairs.len() > 1 {
                writeln!(
                    err,
                    "warning: queries span several label pairs; others build their index per query"
                )?;
            }
        }
    }
    let rows = eval::run_eval(&g, index.as_ref(), &queries, &truth, &algorithms, &template, a.jobs)?;
    let mut file = open_out(&a.out)?;
    let w: &mut dyn Write = match file.as_mut() {
        Some(f) => f,
        None => out,
    };
    writeln!(w, "{TSV_HEADER}")?;
    for row in &rows {
        writeln!(w, "{}", row.to_tsv())?;
    }
    w.flush()?;
    Ok(())
}

fn stats(a: GraphArgs, out: &mut dyn Write) -> CliResult {
    let g = load(&a)?;
    writeln!(out, "vertices: {}", g.vertex_count())?;
    writeln!(out, "edges: {}", g.edge_count())?;
    writeln!(out, "labels: {}", g.label_count())?;
    for l in 0..g.label_count() as LabelId {
        writeln!(out, "label {}: {}", g.label_name(l), g.vertices_with_label(l).count())?;
    }
    writeln!(out, "k_max: {}", core_decompose(&g, None).k_max())?;
    let mut cross: BTreeMap<(LabelId, LabelId), usize> = BTreeMap::new();
    for (u, v) in g.edges() {
        let (a, b) = (g.label(u), g.label(v));
        if a != b {
            *cross.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    for ((a, b), n) in cross {
        writeln!(out, "cross {} {}: {}", g.label_name(a), g.label_name(b), n)?;
    }
    Ok(())
}

fn synth(a: SynthArgs, out: &mut dyn Write) -> CliResult {
    let cfg = EvalConfig {
        cross_edge_ratio_local: a.local_ratio,
        cross_edge_ratio_global: a.global_ratio,
        rng_seed: a.seed,
        ..EvalConfig::default()
    };
    cfg.validate()?;
    let open = |p: &Path| {
        File::open(p)
            .map(BufReader::new)
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
    };
    let edges = read_edges(open(&a.graph)?)?;
    let raw = read_raw_communities(open(&a.communities)?)?;
    let mut labels: BTreeMap<u64, String> = BTreeMap::new();
    for &(u, v, _) in &edges {
        labels.insert(u, "_".into());
        labels.insert(v, "_".into());
    }
    let pairs: Vec<(u64, u64)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    let g = LabeledGraph::from_external(&labels, &pairs)?;
    let communities = raw
        .into_iter()
        .map(|(line, ids)| {
            ids.into_iter()
                .map(|id| {
                    g.vertex_of(id).ok_or_else(|| {
                        CliError::Usage(format!(
                            "{}:{line}: community references unknown vertex {id}",
                            a.communities.display()
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let s = eval::synthesize_labels(&g, &communities, &cfg)?;
    let with_ext = |ext: &str| {
        let mut p = a.out.as_os_str().to_owned();
        p.push(ext);
        PathBuf::from(p)
    };
    let create = |p: PathBuf| {
        File::create(&p)
            .map(BufWriter::new)
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
    };
    save_graph(&s.graph, create(with_ext(".edges"))?, create(with_ext(".labels"))?)?;
    write_communities(&s.graph, &s.truth, create(with_ext(".truth"))?)?;
    writeln!(out, "vertices: {}", s.graph.vertex_count())?;
    writeln!(out, "edges: {}", s.graph.edge_count())?;
    writeln!(out, "local_cross_edges: {}", s.local_edges)?;
    writeln!(out, "global_cross_edges: {}", s.global_edges)?;
    Ok(())
}
