use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use listpart::cardinality::count_with_cardinality;
use listpart::csp::partition_to_csp;
use listpart::decomp::{bicobipartite_partitions, subcube_decomposition};
use listpart::meta::reduce_independent_set;
use listpart::oracle;
use listpart::purify::purify;
use listpart::text;
use listpart::{
    classify, count_homogeneous_pairs, Classification, CountOptions, DerectCertificate, Error,
    Graph, ListFamily, ListFunction, ListPartitionCounter, PartSet, PartitionMatrix, SearchLimits,
};

mod selftest;

#[derive(Parser)]
#[command(
    name = "listpart",
    version,
    about = "Exact counting of list matrix partitions"
)]
struct Cli {
    /// Worker threads for purification branches (1 = sequential).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Count list partitions, optionally with minimum part sizes.
    Count {
        #[command(flatten)]
        input: Instance,
        /// Minimum part sizes (`name min` per line); lists must then be omitted.
        #[arg(long)]
        cardinality: Option<PathBuf>,
        /// Count even if the classifier says #P-complete or gives up.
        #[arg(long = "unsafe")]
        unsafe_count: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Report TRACTABLE, HARD or INCONCLUSIVE; certificates go to stderr.
    Classify {
        #[arg(long)]
        matrix: PathBuf,
        /// List family; defaults to every subset of the parts.
        #[arg(long)]
        family: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Print the purified list functions, separated by blank lines.
    Purify {
        #[command(flatten)]
        input: Instance,
    },
    /// Count homogeneous pairs as ordered triples (U, W1, W2).
    Hompairs {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Write the matrix and family encoding independent set of size k.
    ReduceIs {
        #[arg(long)]
        graph: PathBuf,
        /// Size of the independent set.
        #[arg(long)]
        k: usize,
        /// Directory receiving `matrix.m` and `family.f`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Brute-force reference computations.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Print the constraint instance of a purified list partition problem.
    CspDump {
        #[command(flatten)]
        input: Instance,
    },
    /// Print every bipartite-cobipartite partition as a 0/1 string (1 = B).
    DecomposeBicobip {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Print the subcube decomposition between `--left` and the other vertices.
    DecomposeSubcubes {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated vertices of the left side.
        #[arg(long, value_delimiter = ',')]
        left: Vec<usize>,
    },
    /// Compare counts against the brute-force oracle on random instances.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances to generate.
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    Count {
        #[command(flatten)]
        input: Instance,
        #[arg(long)]
        cardinality: Option<PathBuf>,
        /// Refuse searches larger than this many leaves.
        #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
        budget: u128,
    },
    Hompairs {
        #[arg(long)]
        graph: PathBuf,
        /// Refuse searches larger than this many leaves.
        #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
        budget: u128,
    },
    Derect {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        family: Option<PathBuf>,
        /// Longest sequence to try.
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Refuse searches larger than this many leaves.
        #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
        budget: u128,
    },
}

#[derive(Args)]
struct Instance {
    /// Matrix file: part names, then one row of `0`, `1`, `*` per part.
    #[arg(long)]
    matrix: PathBuf,
    /// Graph file: `n m`, then one `u v` line per edge.
    #[arg(long)]
    graph: PathBuf,
    /// Lists file; vertices without a line may use every part.
    #[arg(long)]
    lists: Option<PathBuf>,
    /// List family; defaults to the subset closure of the lists used.
    #[arg(long)]
    family: Option<PathBuf>,
}

#[derive(Args)]
struct Limits {
    /// Stop the classifier after this many maximal cliques.
    #[arg(long)]
    max_cliques: Option<usize>,
    /// Stop the classifier after this many search states.
    #[arg(long)]
    max_states: Option<usize>,
    /// Stop the classifier after this many milliseconds.
    #[arg(long)]
    timeout_ms: Option<u64>,
}

impl Limits {
    fn search(&self) -> SearchLimits {
        SearchLimits {
            max_cliques: self.max_cliques,
            max_states: self.max_states,
            time: self.timeout_ms.map(Duration::from_millis),
        }
    }
}

enum Failure {
    Input(String),
    Refused(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Refused(_) => Failure::Refused(e.to_string()),
            Error::BudgetExceeded { .. } | Error::Inconclusive | Error::DepthExceeded { .. } => {
                Failure::Budget(e.to_string())
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

/// What a subcommand produced: plain lines for text mode plus the fields of
/// the JSON record.
#[derive(Default)]
struct Report {
    lines: Vec<String>,
    verdict: Option<&'static str>,
    count: Option<String>,
    certificate: Option<String>,
    /// Exit status for a successful run that still reports a limit.
    status: u8,
}

impl Report {
    fn count(c: impl ToString) -> Self {
        let c = c.to_string();
        Report {
            lines: vec![c.clone()],
            count: Some(c),
            ..Report::default()
        }
    }

    fn lines(lines: Vec<String>) -> Self {
        Report {
            lines,
            ..Report::default()
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: Error) -> Failure {
    match e {
        Error::Parse {
            line,
            column,
            message,
        } => Failure::Input(format!("{}:{line}:{column}: {message}", path.display())),
        other => other.into(),
    }
}

fn load_matrix(path: &Path) -> Result<PartitionMatrix, Failure> {
    text::parse_matrix(&read(path)?).map_err(|e| located(path, e))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    text::parse_graph(&read(path)?).map_err(|e| located(path, e))
}

fn load_family(path: Option<&Path>, parts: &PartSet) -> Result<Option<ListFamily>, Failure> {
    path.map(|p| text::parse_family(&read(p)?, parts).map_err(|e| located(p, e)))
        .transpose()
}

struct Loaded {
    m: PartitionMatrix,
    g: Graph,
    lists: ListFunction,
    fam: ListFamily,
}

fn load_instance(input: &Instance) -> Result<Loaded, Failure> {
    let m = load_matrix(&input.matrix)?;
    let g = load_graph(&input.graph)?;
    let lists = match &input.lists {
        Some(p) => text::parse_lists(&read(p)?, g.n(), m.parts()).map_err(|e| located(p, e))?,
        None => ListFunction::constant(g.n(), m.all()),
    };
    let fam = load_family(input.family.as_deref(), m.parts())?
        .unwrap_or_else(|| ListFamily::from_image(m.size(), &lists));
    Ok(Loaded { m, g, lists, fam })
}

fn format_certificate(m: &PartitionMatrix, c: &DerectCertificate) -> String {
    c.sequence
        .iter()
        .map(|&s| format!("{{{}}}", m.parts().format_subset(s)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn verdict_name(c: &Classification) -> &'static str {
    match c {
        Classification::Tractable => "TRACTABLE",
        Classification::Hard(_) => "HARD",
        Classification::Inconclusive => "INCONCLUSIVE",
    }
}

fn run(cli: &Cli) -> Outcome {
    let parallel = cli.jobs > 1;
    match &cli.command {
        Command::Count {
            input,
            cardinality,
            unsafe_count,
            limits,
        } => {
            let l = load_instance(input)?;
            let options = CountOptions {
                unsafe_count: *unsafe_count,
                limits: limits.search(),
                parallel,
            };
            let refuse = |e: Error| match e {
                Error::Refused(cert) => {
                    Failure::Refused(format!("certificate: {}", format_certificate(&l.m, &cert)))
                }
                other => other.into(),
            };
            let mut verdict = None;
            let count = match cardinality {
                Some(p) => {
                    if input.lists.is_some() || input.family.is_some() {
                        return Err(Failure::Input(
                            "--cardinality counts over full lists; drop --lists and --family"
                                .into(),
                        ));
                    }
                    let c = text::parse_cardinality(&read(p)?, l.m.parts())
                        .map_err(|e| located(p, e))?;
                    count_with_cardinality(&l.g, &l.m, &c, options).map_err(refuse)?
                }
                None => {
                    let counter = ListPartitionCounter::new(l.m.clone(), l.fam.clone(), options)
                        .map_err(refuse)?;
                    verdict = Some(verdict_name(counter.verdict()));
                    counter.count(&l.g, &l.lists)?
                }
            };
            let mut r = Report::count(count);
            r.verdict = verdict;
            Ok(r)
        }
        Command::Classify {
            matrix,
            family,
            limits,
        } => {
            let m = load_matrix(matrix)?;
            let fam =
                load_family(family.as_deref(), m.parts())?.unwrap_or(ListFamily::full(m.size()));
            let mut r = Report::default();
            let verdict = classify(&m, &fam, limits.search());
            r.verdict = Some(verdict_name(&verdict));
            match verdict {
                Classification::Tractable => {}
                Classification::Hard(cert) => r.certificate = Some(format_certificate(&m, &cert)),
                Classification::Inconclusive => r.status = 3,
            }
            r.lines.push(r.verdict.unwrap_or_default().to_string());
            Ok(r)
        }
        Command::Purify { input } => {
            let l = load_instance(input)?;
            let branches = purify(&l.g, &l.lists, &l.fam, &l.m)?;
            let blocks: Vec<String> = branches
                .iter()
                .map(|b| text::write_lists(b, l.m.parts()).trim_end().to_string())
                .collect();
            let mut r = Report::lines(vec![blocks.join("\n\n")]);
            r.count = Some(branches.len().to_string());
            Ok(r)
        }
        Command::Hompairs { graph } => {
            Ok(Report::count(count_homogeneous_pairs(&load_graph(graph)?)))
        }
        Command::ReduceIs { graph, k, out } => {
            let g = load_graph(graph)?;
            let gadget = reduce_independent_set(&g, *k)?;
            fs::create_dir_all(out)
                .map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            let write = |name: &str, body: String| {
                let p = out.join(name);
                fs::write(&p, body).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
                Ok::<_, Failure>(p.display().to_string())
            };
            let mp = write("matrix.m", text::write_matrix(&gadget.matrix))?;
            let fp = write(
                "family.f",
                text::write_family(&gadget.family, gadget.matrix.parts()),
            )?;
            Ok(Report::lines(vec![mp, fp]))
        }
        Command::Oracle { command } => run_oracle(command),
        Command::CspDump { input } => {
            let l = load_instance(input)?;
            let inst = partition_to_csp(&l.g, &l.lists, &l.m)?;
            Ok(Report::lines(vec![inst
                .dump(l.m.parts())
                .trim_end()
                .to_string()]))
        }
        Command::DecomposeBicobip { graph } => {
            let g = load_graph(graph)?;
            let mut parts: Vec<String> = bicobipartite_partitions(&g)
                .iter()
                .map(|p| p.to_bit_string())
                .collect();
            parts.sort();
            let n = parts.len();
            let mut r = Report::lines(parts);
            r.count = Some(n.to_string());
            Ok(r)
        }
        Command::DecomposeSubcubes { graph, left } => {
            let g = load_graph(graph)?;
            if let Some(&v) = left.iter().find(|&&v| v >= g.n()) {
                return Err(Failure::Input(format!(
                    "vertex {v} out of range (n = {})",
                    g.n()
                )));
            }
            let right: Vec<usize> = (0..g.n()).filter(|v| !left.contains(v)).collect();
            let pairs = subcube_decomposition(left, &right, g.edges())?;
            let lines: Vec<String> = pairs
                .iter()
                .map(|p| format!("{} {}", p.left, p.right))
                .collect();
            let n = lines.len();
            let mut r = Report::lines(lines);
            r.count = Some(n.to_string());
            Ok(r)
        }
        Command::Selftest { seed, trials } => {
            let summary = selftest::run(*seed, *trials)?;
            let mut r = Report::lines(vec![summary.to_string()]);
            r.count = Some(summary.compared.to_string());
            if summary.mismatches > 0 {
                return Err(Failure::Input(summary.to_string()));
            }
            r.verdict = Some("OK");
            Ok(r)
        }
    }
}

fn run_oracle(command: &OracleCommand) -> Outcome {
    match command {
        OracleCommand::Count {
            input,
            cardinality,
            budget,
        } => {
            let l = load_instance(input)?;
            let count = match cardinality {
                Some(p) => {
                    let c = text::parse_cardinality(&read(p)?, l.m.parts())
                        .map_err(|e| located(p, e))?;
                    oracle::brute_count_with_minimums(&l.g, &l.m, c.mins(), *budget)?
                }
                None => oracle::brute_count(&l.g, &l.lists, &l.m, *budget)?,
            };
            Ok(Report::count(count))
        }
        OracleCommand::Hompairs { graph, budget } => Ok(Report::count(
            oracle::brute_homogeneous_pairs(&load_graph(graph)?, *budget)?,
        )),
        OracleCommand::Derect {
            matrix,
            family,
            max_len,
            budget,
        } => {
            let m = load_matrix(matrix)?;
            let fam =
                load_family(family.as_deref(), m.parts())?.unwrap_or(ListFamily::full(m.size()));
            let mut r = Report::default();
            match oracle::brute_find_derect(&m, &fam, *max_len, *budget)? {
                Some(cert) => {
                    r.verdict = Some("HARD");
                    r.certificate = Some(format_certificate(&m, &cert));
                }
                None => r.verdict = Some("NONE"),
            }
            r.lines.push(r.verdict.unwrap_or_default().to_string());
            Ok(r)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 1 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
        {
            eprintln!("warning: {e}");
        }
    }
    let start = Instant::now();
    let outcome = run(&cli);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let (report, status, message) = match outcome {
        Ok(r) => {
            let s = r.status;
            (Some(r), s, None)
        }
        Err(Failure::Input(m)) => (None, 1, Some(m)),
        Err(Failure::Refused(m)) => (None, 2, Some(m)),
        Err(Failure::Budget(m)) => (None, 3, Some(m)),
    };
    if let Some(m) = &message {
        eprintln!("{m}");
    }
    if let Some(c) = report.as_ref().and_then(|r| r.certificate.as_ref()) {
        eprintln!("certificate: {c}");
    }
    match cli.format {
        Format::Text => {
            for line in report.iter().flat_map(|r| &r.lines) {
                println!("{line}");
            }
        }
        Format::Json => {
            let verdict = match (&report, status) {
                (Some(r), _) => r.verdict.map(str::to_string),
                (None, 2) => Some("HARD".to_string()),
                (None, 3) => Some("INCONCLUSIVE".to_string()),
                (None, _) => Some("ERROR".to_string()),
            };
            let certificate = report
                .as_ref()
                .and_then(|r| r.certificate.clone())
                .or_else(|| {
                    message
                        .as_ref()
                        .filter(|_| status == 2)
                        .map(|m| m.trim_start_matches("certificate: ").to_string())
                });
            let record = json!({
                "verdict": verdict,
                "count": report.as_ref().and_then(|r| r.count.clone()),
                "certificate": certificate,
                "elapsed_ms": elapsed_ms,
            });
            println!("{record}");
        }
    }
    ExitCode::from(status)
}
