use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use commbench::community::{goodness_for, modularity, nmi};
use commbench::comparison::{run_comparison, Comparison};
use commbench::detection::Algorithm;
use commbench::format::sig6;
use commbench::generator::generate;
use commbench::io::{
    read_edge_list_with, read_partition, write_config, write_edge_list, write_partition, write_report, KeyValues,
    ReportFormat,
};
use commbench::reference::ReferenceTables;
use commbench::structural::metrics_report;
use commbench::sweep::{run_sweep, SweepSpec};
use commbench::{GeneratorConfig, Graph, Partition};

/// Benchmark graphs with planted communities, and the tools to measure them.
#[derive(Parser, Debug)]
#[command(name = "commbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a network and write its edge list, partition and config.
    Generate(GenerateArgs),
    /// Structural metrics of a graph, plus goodness and modularity of a partition.
    Analyze(AnalyzeArgs),
    /// Run a community detector on a graph.
    Detect(DetectArgs),
    /// Generate, measure and detect over a parameter grid.
    Sweep(SweepArgs),
    /// Compare generated networks with published real-network statistics.
    Table3(Table3Args),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    communities: usize,
    #[arg(long)]
    pt: f64,
    #[arg(long)]
    mu: f64,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, env = "COMMBENCH_SEED", default_value_t = 0)]
    seed: u64,
    /// Output prefix; writes PREFIX.edgelist, PREFIX.partition and PREFIX.config.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Partition file for modularity and per-community goodness.
    #[arg(long, conflicts_with = "compact")]
    partition: Option<PathBuf>,
    /// Map arbitrary node ids to 0..n before analysis.
    #[arg(long)]
    compact: bool,
    /// Also write per-community goodness as CSV to this file.
    #[arg(long, requires = "partition")]
    goodness_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DetectArgs {
    #[arg(long)]
    graph: PathBuf,
    /// labelprop or louvain.
    #[arg(long)]
    algorithm: Algorithm,
    #[arg(long, env = "COMMBENCH_SEED", default_value_t = 0)]
    seed: u64,
    /// Where to write the detected partition.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Ground-truth partition; prints NMI against it.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// TOML file with nodes, communities, pt, mu lists and optional m, instances, base_seed.
    #[arg(long, conflicts_with = "lite")]
    spec: Option<PathBuf>,
    /// Small grid: N=1000, communities 10 and 20, pt 0.1/0.5/0.9, four mu values, 3 instances.
    #[arg(long)]
    lite: bool,
    #[arg(long, value_delimiter = ',', conflicts_with = "spec")]
    nodes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', conflicts_with = "spec")]
    communities: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', conflicts_with = "spec")]
    pt: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', conflicts_with = "spec")]
    mu: Option<Vec<f64>>,
    #[arg(long, conflicts_with = "spec")]
    m: Option<usize>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long, env = "COMMBENCH_SEED")]
    seed: Option<u64>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Table3Args {
    /// Instances per model and dataset.
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    #[arg(long, env = "COMMBENCH_SEED", default_value_t = 0)]
    seed: u64,
    /// Emit CSV instead of the aligned table.
    #[arg(long)]
    csv: bool,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(file))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn load_graph(path: &Path, compact: bool) -> Result<Graph> {
    let list = read_edge_list_with(open(path)?, compact).with_context(|| format!("reading {}", path.display()))?;
    if list.duplicates > 0 {
        eprintln!("warning: {} duplicate edge lines ignored in {}", list.duplicates, path.display());
    }
    Ok(list.graph)
}

fn load_partition(path: &Path, node_count: usize) -> Result<Partition> {
    let file = read_partition(open(path)?, node_count).with_context(|| format!("reading {}", path.display()))?;
    Ok(file.partition)
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let config = GeneratorConfig::new(args.nodes, args.communities, args.pt, args.mu, args.m, args.seed);
    let net = generate(&config)?;
    let edges = with_suffix(&args.out, ".edgelist");
    let partition = with_suffix(&args.out, ".partition");
    let provenance = with_suffix(&args.out, ".config");
    write_edge_list(&net.graph, create(&edges)?)?;
    write_partition(&net.ground_truth, create(&partition)?)?;
    write_config(&net, create(&provenance)?)?;
    let d = &net.diagnostics;
    if d.skipped_edges > 0 {
        eprintln!("warning: {} edges could not be placed", d.skipped_edges);
    }
    for path in [edges, partition, provenance] {
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let graph = load_graph(&args.graph, args.compact)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    write_report(&metrics_report(&graph)?, &mut out, ReportFormat::Kv)?;
    if let Some(path) = &args.partition {
        let partition = load_partition(path, graph.node_count())?;
        let q = modularity(&graph, &partition)?;
        let goodness = goodness_for(&graph, &partition)?;
        let summary = KeyValues(vec![
            ("communities", partition.community_count().to_string()),
            ("modularity", sig6(q)),
            ("mean_separability", sig6(goodness.mean_of(|c| c.separability))),
            ("mean_density", sig6(goodness.mean_of(|c| c.density))),
            ("mean_clustering", sig6(goodness.mean_of(|c| c.clustering))),
            ("mean_loyalty", sig6(goodness.mean_of(|c| c.loyalty))),
        ]);
        write_report(&summary, &mut out, ReportFormat::Kv)?;
        write_report(&goodness, &mut out, ReportFormat::Kv)?;
        if let Some(csv) = &args.goodness_out {
            write_report(&goodness, create(csv)?, ReportFormat::Csv)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_detect(args: DetectArgs) -> Result<()> {
    let graph = load_graph(&args.graph, false)?;
    let result = args.algorithm.run(&graph, args.seed)?;
    if let Some(path) = &args.out {
        write_partition(&result.partition, create(path)?)?;
    }
    let mut fields = vec![
        ("algorithm", result.algorithm.name().to_string()),
        ("communities", result.partition.community_count().to_string()),
        ("iterations", result.iterations.to_string()),
        ("modularity", sig6(result.modularity)),
    ];
    if let Some(path) = &args.truth {
        let truth = load_partition(path, graph.node_count())?;
        fields.push(("nmi", sig6(nmi(&truth, &result.partition)?)));
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    write_report(&KeyValues(fields), &mut out, ReportFormat::Kv)?;
    if args.out.is_none() {
        write_partition(&result.partition, &mut out)?;
    }
    Ok(())
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec> {
    let mut spec = if let Some(path) = &args.spec {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        SweepSpec::from_toml(&text).with_context(|| format!("parsing {}", path.display()))?
    } else if args.lite {
        SweepSpec::lite(0)
    } else {
        SweepSpec::full(0)
    };
    if args.spec.is_none() {
        if let Some(v) = &args.nodes {
            spec.nodes = v.clone();
        }
        if let Some(v) = &args.communities {
            spec.communities = v.clone();
        }
        if let Some(v) = &args.pt {
            spec.pt = v.clone();
        }
        if let Some(v) = &args.mu {
            spec.mu = v.clone();
        }
        if let Some(m) = args.m {
            spec.m = m;
        }
    }
    if let Some(k) = args.instances {
        spec.instances = k;
    }
    if let Some(seed) = args.seed {
        spec.base_seed = seed;
    }
    spec.validate()?;
    Ok(spec)
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let spec = sweep_spec(&args)?;
    let jobs = if args.jobs == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        args.jobs
    };
    eprintln!("sweep: {} cells, {} runs, {jobs} jobs", spec.cells().len(), spec.total_runs());
    let table = run_sweep(&spec, jobs)?;
    match &args.out {
        Some(path) => write_report(&table, create(path)?, ReportFormat::Csv)?,
        None => write_report(&table, io::stdout().lock(), ReportFormat::Csv)?,
    }
    let failures = table.failures();
    if failures > 0 {
        bail!("{failures} of {} runs failed; see the error column", spec.total_runs());
    }
    Ok(())
}

fn print_table(comparison: &Comparison, out: &mut impl Write) -> io::Result<()> {
    writeln!(
        out,
        "{:<28} {:<18} {:>5} {:>18} {:>22} {:>20} {:>20}",
        "dataset", "model", "nodes", "edges (pub)", "apl (pub, rel)", "cc (pub, dev)", "alpha (pub, dev)"
    )?;
    let mut notes = Vec::new();
    for row in &comparison.rows {
        let mut model = row.model.name().to_string();
        if let Some(note) = &row.note {
            notes.push(note.clone());
            model.push_str(&"*".repeat(notes.len()));
        }
        let alpha = match (row.measured.alpha, row.alpha_dev()) {
            (Some(a), Some(d)) => format!("{a:.2} ({}, {d:+.2})", row.published.alpha),
            _ => format!("- ({}, -)", row.published.alpha),
        };
        writeln!(
            out,
            "{:<28} {:<18} {:>5} {:>18} {:>22} {:>20} {:>20}",
            row.dataset,
            model,
            row.nodes,
            format!("{:.0} ({})", row.measured.edges, row.published.edges),
            format!("{:.2} ({}, {:+.1}%)", row.measured.apl, row.published.apl, 100.0 * row.apl_rel_dev()),
            format!("{:.3} ({}, {:+.3})", row.measured.cc, row.published.cc, row.cc_dev()),
            alpha,
        )?;
    }
    for (i, note) in notes.iter().enumerate() {
        writeln!(out, "{} {note}", "*".repeat(i + 1))?;
    }
    writeln!(out, "reference data version {}", comparison.version)
}

fn cmd_table3(args: Table3Args) -> Result<()> {
    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let tables = ReferenceTables::embedded()?;
    let comparison = run_comparison(&tables, args.seeds, args.seed)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if args.csv {
        write_report(&comparison, &mut out, ReportFormat::Csv)?;
    } else {
        print_table(&comparison, &mut out)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Generate(args) => cmd_generate(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Detect(args) => cmd_detect(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Table3(args) => cmd_table3(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
