use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use robustnet::components::connected_components;
use robustnet::ingest::write_snap_edgelist;
use robustnet::MetricsOver;
use robustnet_cli::source::{epinions_path, load_edgelist_file, parse_theorem_spec};
use robustnet_cli::spec::{parse_list, ListValue};
use robustnet_cli::{
    emit_csv, emit_plot, emit_summary_csv, privacy_report, read_rows, run_sweep_with_threads,
    run_theorem_check, AxesSpec, MeasuredXi, PointFilter, PrivacyInputs, SweepOptions,
};

#[derive(Parser)]
#[command(
    name = "robustnet",
    version,
    about = "Disconnection-game experiments on social graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load an edge list and print its statistics.
    Ingest(IngestArgs),
    /// Run a parameter sweep and write per-game rows as CSV.
    Sweep(Box<SweepArgs>),
    /// Play the game on constructed theorem instances.
    TheoremCheck(TheoremArgs),
    /// Privacy guarantees for a measured xi.
    Privacy(PrivacyArgs),
    /// Draw an SVG chart from a sweep CSV.
    Plot(PlotArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Edge-list path (optionally .gz) or `epinions`.
    #[arg(long)]
    graph: String,
    /// Write the undirected, compacted graph here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// figure-1 … figure-8
    #[arg(long)]
    preset: Option<String>,
    /// Edge-list path or `epinions`.
    #[arg(long)]
    graph: Option<String>,
    /// Generated BA graph: n,m,seed_size
    #[arg(long)]
    ba: Option<String>,
    /// Theorem instance: C,a,b,alpha,beta,gamma,n
    #[arg(long)]
    theorem: Option<String>,
    /// Comma list of none, 2sff, a3f.
    #[arg(long)]
    protocol: Option<String>,
    /// Comma list of rounds per participant.
    #[arg(long)]
    m: Option<String>,
    /// Comma list of participation fractions.
    #[arg(long)]
    q: Option<String>,
    /// random or targeted.
    #[arg(long)]
    adversary: Option<String>,
    /// a:b:step (inclusive) or a comma list, as fractions of n.
    #[arg(long)]
    fractions: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// A3F fat-list size (default ⌊log₂ n⌋).
    #[arg(long)]
    fat_count: Option<usize>,
    /// Series to plot: all, participants, nonparticipants.
    #[arg(long)]
    metrics: Option<String>,
    /// Draw participants among honest nodes only.
    #[arg(long)]
    participants_among_honest: bool,
    /// Record wall-clock time per row (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Row CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary CSV (default: next to --out, `rows.csv` -> `rows.summary.csv`).
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Also draw an SVG chart.
    #[arg(long)]
    plot: Option<PathBuf>,
}

impl SweepArgs {
    fn options(&self) -> SweepOptions {
        let text = |s: &Option<String>| s.clone().map(ListValue::Text);
        SweepOptions {
            preset: self.preset.clone(),
            graph: self.graph.clone(),
            ba: self.ba.clone(),
            theorem: self.theorem.clone(),
            protocol: text(&self.protocol),
            m: text(&self.m),
            q: text(&self.q),
            adversary: self.adversary.clone(),
            fractions: text(&self.fractions),
            reps: self.reps,
            seed: self.seed,
            fat_count: self.fat_count,
            metrics: text(&self.metrics),
            participants_among_honest: self.participants_among_honest.then_some(true),
            timing: self.timing.then_some(true),
            threads: self.threads,
            out: self.out.clone(),
            summary: self.summary.clone(),
            plot: self.plot.clone(),
        }
    }
}

#[derive(Args)]
struct TheoremArgs {
    /// C,a,b,alpha,beta,gamma,n
    #[arg(long)]
    theorem: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-trial CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct PrivacyArgs {
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    sensitivity: f64,
    /// Group-size parameter of the aggregation protocol.
    #[arg(long)]
    s: f64,
    /// Measured xi.
    #[arg(long, conflicts_with = "run")]
    xi: Option<f64>,
    /// Sweep CSV to take xi from.
    #[arg(long)]
    run: Option<PathBuf>,
    /// Config point in the run, e.g. protocol=a3f,m=15,fraction=0.15
    #[arg(long, requires = "run")]
    point: Option<String>,
    /// Largest-component size for the noiseless-aggregation heuristic.
    #[arg(long)]
    group_threshold: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct PlotArgs {
    /// Sweep CSV.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Comma list of all, participants, nonparticipants.
    #[arg(long, default_value = "all")]
    metrics: String,
    /// Right end of the x axis, percent.
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    title: Option<String>,
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn ingest(args: IngestArgs) -> anyhow::Result<()> {
    let path = if args.graph.eq_ignore_ascii_case("epinions") {
        epinions_path()?
    } else {
        PathBuf::from(&args.graph)
    };
    let snap = load_edgelist_file(&path)?;
    let g = &snap.graph;
    let comps = connected_components(g);
    println!("file: {}", path.display());
    println!("edge lines: {}", snap.data_lines);
    println!("self-loops dropped: {}", snap.self_loops);
    println!("nodes: {}", g.node_count());
    println!("undirected edges: {}", g.edge_count());
    println!("max degree: {}", g.max_degree());
    println!("components: {}", comps.component_count());
    println!(
        "largest component: {} ({:.6})",
        comps.largest_size,
        comps.largest_size as f64 / g.node_count().max(1) as f64
    );
    if let Some(out) = args.out {
        let mut w = create(&out)?;
        write_snap_edgelist(g, &mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn sweep(args: &SweepArgs) -> anyhow::Result<()> {
    let file = match &args.config {
        Some(p) => SweepOptions::from_file(p)?,
        None => SweepOptions::default(),
    };
    let opts = file.merge(args.options());
    let spec = opts.to_spec()?;
    let graph = spec
        .graph
        .resolve(spec.base_seed)
        .with_context(|| format!("loading graph {}", spec.graph.label()))?;
    eprintln!(
        "graph {}: {} nodes, {} edges",
        spec.graph.label(),
        graph.node_count(),
        graph.edge_count()
    );
    let threads = opts.threads.unwrap_or(0);
    let out = run_sweep_with_threads(&spec, &graph, threads)?;

    match &opts.out {
        Some(path) => {
            let mut w = create(path)?;
            emit_csv(&out.rows, &mut w)?;
            w.flush()?;
            let summary = opts.summary.clone().unwrap_or_else(|| summary_path(path));
            let mut w = create(&summary)?;
            emit_summary_csv(&out.summary, &mut w)?;
            w.flush()?;
        }
        None => {
            emit_csv(&out.rows, std::io::stdout().lock())?;
            if let Some(summary) = &opts.summary {
                let mut w = create(summary)?;
                emit_summary_csv(&out.summary, &mut w)?;
                w.flush()?;
            }
        }
    }
    if let Some(plot) = &opts.plot {
        let title = opts.preset.clone().unwrap_or_else(|| spec.graph.label());
        let svg = emit_plot(&out.rows, &AxesSpec::new(title, spec.metrics_over.clone()))?;
        std::fs::write(plot, svg).with_context(|| format!("writing {}", plot.display()))?;
    }
    Ok(())
}

/// `rows.csv` -> `rows.summary.csv`
fn summary_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map_or_else(|| "sweep".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.summary.csv"))
}

fn theorem_check(args: TheoremArgs) -> anyhow::Result<()> {
    let spec = parse_theorem_spec(&args.theorem)?;
    let report = run_theorem_check(spec, args.trials, args.seed)?;
    print!("{}", report.render_text());
    if let Some(path) = args.out {
        let mut w = create(&path)?;
        writeln!(w, "trial,seed,connected,xi,honest,edges_added")?;
        for (i, t) in report.trials.iter().enumerate() {
            writeln!(
                w,
                "{i},{},{},{:.6},{},{}",
                t.seed, t.connected, t.xi, t.honest, t.edges_added
            )?;
        }
        w.flush()?;
    }
    Ok(())
}

fn privacy(args: PrivacyArgs) -> anyhow::Result<()> {
    let inputs = PrivacyInputs {
        epsilon: args.epsilon,
        delta: args.delta,
        sensitivity: args.sensitivity,
        s: args.s,
        group_threshold: args.group_threshold,
    };
    let measured = match (args.xi, &args.run) {
        (Some(xi), None) => MeasuredXi::given(xi),
        (None, Some(run)) => {
            let file = File::open(run).with_context(|| format!("missing run {}", run.display()))?;
            let rows = read_rows(file)?;
            let filter = match &args.point {
                Some(p) => PointFilter::parse(p)?,
                None => PointFilter::default(),
            };
            MeasuredXi::from_rows(&rows, &filter, &run.display().to_string())?
        }
        _ => bail!("give either --xi or --run"),
    };
    let report = privacy_report(inputs, measured)?;
    match args.format {
        Format::Text => print!("{}", report.render_text()),
        Format::Csv => print!("{}", report.render_csv()),
    }
    Ok(())
}

fn plot(args: PlotArgs) -> anyhow::Result<()> {
    let file =
        File::open(&args.input).with_context(|| format!("opening {}", args.input.display()))?;
    let rows = read_rows(file)?;
    let metrics: Vec<MetricsOver> = parse_list(&args.metrics)?;
    let title = args.title.unwrap_or_else(|| {
        args.input
            .file_stem()
            .map_or_else(String::new, |s| s.to_string_lossy().into())
    });
    let axes = AxesSpec {
        title,
        metrics,
        x_max: args.x_max,
    };
    let svg = emit_plot(&rows, &axes)?;
    std::fs::write(&args.out, svg).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(())
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Ingest(a) => ingest(a),
        Command::Sweep(a) => sweep(&a),
        Command::TheoremCheck(a) => theorem_check(a),
        Command::Privacy(a) => privacy(a),
        Command::Plot(a) => plot(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
