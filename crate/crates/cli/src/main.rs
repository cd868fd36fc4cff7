use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use revsq::connecting::{connect_traced, ConnectParams};
use revsq::digraph::io::{read_graph, write_graph, GraphMeta};
use revsq::digraph::{
    check_absorber, check_rs_cycle, check_rs_path, gen_complete, gen_extremal,
    gen_random_semidegree, is_square_cycle,
};
use revsq::experiment::{run_experiment, ExperimentReport, ExperimentSpec, Instance, Target};
use revsq::oracle::{bf_rs_hamiltonian_cycle, Search, SearchBudget};
use revsq::pipeline::{find_rs_hamiltonian, validate_run, PipelineConfig, RunReport};
use revsq::{Arc, Digraph, Error};

const EXIT_FAIL: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "revsq",
    version,
    about = "Reverse-square Hamiltonian cycles in dense digraphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated digraph to a file.
    Gen(GenArgs),
    /// Check a vertex sequence against a digraph.
    Verify(VerifyArgs),
    /// Search for a reverse-square Hamiltonian cycle.
    Find(FindArgs),
    /// Join two disjoint arcs by a reverse-square path.
    Connect(ConnectArgs),
    /// Run Monte Carlo trials of one construction step.
    Experiment(ExperimentArgs),
    /// Read back a run report or an experiment report and print its summary.
    Summary { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Complete,
    Extremal,
    Random,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Minimum semi-degree as a fraction of n.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `.toml` selects the structured format; anything else is an edge list.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectKind {
    Path,
    Cycle,
    Absorber,
    Square,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    kind: ObjectKind,
    /// Vertex sequence, e.g. "0 1 2" or "0,1,2".
    #[arg(long, conflicts_with = "seq_file")]
    seq: Option<String>,
    /// File holding the sequence, as written by `find --out`.
    #[arg(long)]
    seq_file: Option<PathBuf>,
    /// Absorbed vertex, for `--kind absorber`.
    #[arg(long)]
    vertex: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Method {
    Oracle,
    Pipeline,
}

#[derive(Args)]
struct FindArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "pipeline")]
    method: Method,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Pipeline configuration (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    paper_scale: bool,
    /// Where to write the cycle sequence.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the JSON run report (pipeline only).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Node budget of the exact search.
    #[arg(long, default_value_t = 200_000_000)]
    max_nodes: u64,
    /// Wall-clock budget of the exact search, in seconds.
    #[arg(long, default_value_t = 60)]
    time_cap: u64,
}

#[derive(Args)]
struct ConnectArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Start arc as "tail,head".
    #[arg(long)]
    from: String,
    /// End arc as "tail,head".
    #[arg(long)]
    to: String,
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
    /// Skip the order-4 shortcut and always build cascades.
    #[arg(long)]
    no_direct: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment spec (TOML); flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    paper_scale: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Fail,
    Budget,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.cmd {
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Find(a) => cmd_find(a),
        Command::Connect(a) => cmd_connect(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Summary { file } => cmd_summary(&file),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Fail) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Budget) => ExitCode::from(EXIT_BUDGET),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn load(path: &Path) -> Result<Digraph, Failure> {
    read_graph(path)
        .map(|(d, _)| d)
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> CmdResult {
    std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let need =
        |x: Option<usize>, name: &str| x.ok_or_else(|| usage(format!("--{name} is required")));
    let (d, meta) = match a.kind {
        GenKind::Complete => {
            let n = need(a.n, "n")?;
            let meta = GraphMeta {
                generator: Some("complete".into()),
                seed: None,
                params: Some(format!("n={n}")),
            };
            (gen_complete(n), meta)
        }
        GenKind::Extremal => {
            let k = need(a.k, "k")?;
            let meta = GraphMeta {
                generator: Some("extremal".into()),
                seed: None,
                params: Some(format!("k={k}")),
            };
            (gen_extremal(k)?, meta)
        }
        GenKind::Random => {
            let n = need(a.n, "n")?;
            let delta = a.delta.ok_or_else(|| usage("--delta is required"))?;
            let meta = GraphMeta {
                generator: Some("random-semidegree".into()),
                seed: Some(a.seed),
                params: Some(format!("n={n} delta={delta}")),
            };
            (gen_random_semidegree(n, delta, a.seed)?, meta)
        }
    };
    write_graph(&a.out, &d, &meta)?;
    println!(
        "wrote {} (n={}, arcs={}, min semi-degree={})",
        a.out.display(),
        d.n(),
        d.arc_count(),
        d.min_semi_degree().unwrap_or(0)
    );
    Ok(())
}

fn parse_seq(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| usage(format!("bad vertex {t:?}"))))
        .collect()
}

fn parse_arc(text: &str) -> Result<Arc, Failure> {
    match parse_seq(text)?.as_slice() {
        &[u, v] => Ok(Arc::new(u, v)?),
        _ => Err(usage(format!("arc must be \"tail,head\", got {text:?}"))),
    }
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let d = load(&a.graph)?;
    let text = match (&a.seq, &a.seq_file) {
        (Some(s), None) => s.clone(),
        (None, Some(p)) => {
            std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        _ => return Err(usage("give exactly one of --seq and --seq-file")),
    };
    let s = parse_seq(&text)?;
    let missing = match a.kind {
        ObjectKind::Path => check_rs_path(&d, &s)?,
        ObjectKind::Cycle => check_rs_cycle(&d, &s)?,
        ObjectKind::Absorber => {
            let v = a
                .vertex
                .ok_or_else(|| usage("--vertex is required for absorbers"))?;
            let t: [usize; 4] = s
                .as_slice()
                .try_into()
                .map_err(|_| usage("an absorber has exactly 4 vertices"))?;
            check_absorber(&d, t, v)?
        }
        ObjectKind::Square => {
            if is_square_cycle(&d, &s)? {
                None
            } else {
                println!("FAIL: not the square of a cycle");
                return Err(Failure::Fail);
            }
        }
    };
    match missing {
        None => {
            println!("PASS");
            Ok(())
        }
        Some(arc) => {
            println!("FAIL: missing arc {arc}");
            Err(Failure::Fail)
        }
    }
}

fn seq_line(s: &[usize]) -> String {
    s.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_find(a: FindArgs) -> CmdResult {
    let d = load(&a.graph)?;
    let cycle = match a.method {
        Method::Oracle => {
            if a.report.is_some() {
                return Err(usage("--report applies to the pipeline method"));
            }
            let budget = SearchBudget::new(a.max_nodes, Duration::from_secs(a.time_cap))?;
            match bf_rs_hamiltonian_cycle(&d, budget)? {
                Search::Found(c) => c,
                Search::Absent => {
                    println!("ABSENT");
                    return Err(Failure::Fail);
                }
                Search::Exhausted => {
                    println!("BUDGET-EXHAUSTED");
                    return Err(Failure::Budget);
                }
            }
        }
        Method::Pipeline => {
            let mut cfg = match &a.config {
                Some(p) => {
                    let text = std::fs::read_to_string(p)
                        .map_err(|e| usage(format!("{}: {e}", p.display())))?;
                    PipelineConfig::from_toml(&text)?
                }
                None => PipelineConfig::default(),
            };
            if let Some(s) = a.seed {
                cfg.seed = s;
            }
            if let Some(g) = a.gamma {
                cfg.gamma = g;
            }
            cfg.paper_scale |= a.paper_scale;
            cfg.validate()?;
            match find_rs_hamiltonian(&d, &cfg) {
                Ok((c, report)) => {
                    if let Some(p) = &a.report {
                        write_text(p, &report.to_json())?;
                    }
                    c
                }
                Err(f) => {
                    if let Some(p) = &a.report {
                        write_text(p, &f.report.to_json())?;
                    }
                    println!("NOT-FOUND: {f}");
                    return Err(Failure::Fail);
                }
            }
        }
    };
    let ok = validate_run(&d, &cycle);
    println!("FOUND {}", cycle.len());
    println!("{}", seq_line(cycle.verts()));
    println!("validate: {}", if ok { "PASS" } else { "FAIL" });
    if let Some(p) = &a.out {
        write_text(p, &format!("{}\n", seq_line(cycle.verts())))?;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Fail)
    }
}

fn cmd_connect(a: ConnectArgs) -> CmdResult {
    let d = load(&a.graph)?;
    let ab = parse_arc(&a.from)?;
    let cd = parse_arc(&a.to)?;
    let mut p = ConnectParams::new(a.gamma)?;
    p.direct_first = !a.no_direct;
    match connect_traced(&d, ab, cd, &d.empty_set(), &p) {
        Ok((path, trace)) => {
            let ok = check_rs_path(&d, path.verts())?.is_none();
            println!("FOUND {} via {:?}", path.len(), trace.route);
            println!("{}", seq_line(path.verts()));
            println!("validate: {}", if ok { "PASS" } else { "FAIL" });
            if let Some(o) = &a.out {
                write_text(o, &format!("{}\n", seq_line(path.verts())))?;
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Fail)
            }
        }
        Err(e @ (Error::ConnectionFailure { .. } | Error::Precondition(_))) => {
            println!("NOT-FOUND: {e}");
            Err(Failure::Fail)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_experiment(a: ExperimentArgs) -> CmdResult {
    let mut spec = match &a.config {
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            Some(ExperimentSpec::from_toml(&text)?)
        }
        None => None,
    };
    let instance = match (a.n, a.delta, a.k) {
        (Some(n), Some(delta), None) => Some(Instance::Random { n, delta }),
        (Some(n), None, None) => Some(Instance::Complete { n }),
        (None, None, Some(k)) => Some(Instance::Extremal { k }),
        (None, None, None) => None,
        _ => return Err(usage("give --n [--delta] or --k")),
    };
    let target = a.target.as_deref().map(Target::parse).transpose()?;
    if spec.is_none() {
        let t = target.ok_or_else(|| usage("--target or --config is required"))?;
        let inst = instance
            .clone()
            .ok_or_else(|| usage("an instance (--n or --k) is required"))?;
        spec = Some(ExperimentSpec::new(t, inst, 1));
    }
    let mut spec = spec.expect("set above");
    if let Some(t) = target {
        spec.target = t;
    }
    if let Some(i) = instance {
        spec.instance = i;
    }
    if let Some(t) = a.trials {
        spec.trials = t;
    }
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    if let Some(g) = a.gamma {
        spec.gamma = g;
    }
    if a.jobs.is_some() {
        spec.jobs = a.jobs;
    }
    spec.paper_scale |= a.paper_scale;
    spec.validate()?;
    let report = run_experiment(&spec)?;
    let tsv = report.to_tsv();
    match &a.out {
        Some(p) => {
            write_text(p, &tsv)?;
            print_aggregates(&report);
        }
        None => print!("{tsv}"),
    }
    Ok(())
}

fn print_aggregates(r: &ExperimentReport) {
    println!("target {}", r.target.name());
    for (k, v) in &r.aggregates {
        println!("{k}\t{v}");
    }
}

fn cmd_summary(path: &Path) -> CmdResult {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if text.starts_with("#schema") {
        let r = ExperimentReport::from_tsv(&text)?;
        print_aggregates(&r);
        return Ok(());
    }
    let r = RunReport::from_json(&text)?;
    println!(
        "n {} arcs {} min_semi_degree {}",
        r.n, r.arcs, r.min_semi_degree
    );
    println!("attempts {}", r.attempts.len());
    println!("outcome {}", serde_outcome(&r));
    Ok(())
}

fn serde_outcome(r: &RunReport) -> String {
    use revsq::pipeline::Outcome;
    match &r.outcome {
        Outcome::Pending => "pending".into(),
        Outcome::Success {
            cycle_order,
            verified,
        } => {
            format!("success order={cycle_order} verified={verified}")
        }
        Outcome::Failure { stage } => format!("failure stage={stage}"),
    }
}
