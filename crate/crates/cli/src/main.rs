//! `permuton`: samplers, exponent tables and Monte-Carlo experiments.
//!
//! Exit codes: 0 success, 1 runtime or numerical failure, 2 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use permuton_core::experiments::{
    run_experiment_with_cancel, ExperimentConfig, ExperimentKind, ExperimentReport, RegressionOutcome,
};
use permuton_core::exponents::{exponent_table, table_to_csv};
use permuton_core::signed_trees::{
    clique_tree, cograph_edges, independent_tree, lis_tree, sample_tree, selection_rule_tree, to_permutation,
    DEFAULT_EDGE_CAP,
};
use permuton_core::subsequence::{lds_patience, lis_patience};
use permuton_core::{Error, Permutation, SignedBinaryTree};

const DIAGRAM_CAP: usize = 1 << 18;

static CANCEL: AtomicBool = AtomicBool::new(false);

#[derive(Parser, Debug)]
#[command(
    name = "permuton",
    version,
    about = "Brownian separable permutons: samplers, exponents, experiments"
)]
struct Cli {
    /// Master seed; every subcommand is deterministic given its flags.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output file. For experiments this may also be a directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads (results do not depend on this).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exponent table: lambda*, alpha*, beta* and optimizer diagnostics.
    Exponents(ExponentsArgs),
    /// Sample one permutation from the signed-tree model.
    Sample(SampleArgs),
    /// Longest increasing subsequence of a given or sampled permutation.
    Lis(LisArgs),
    /// Subsequence kept by the selection rule on a signed tree.
    Selection(TreeArgs),
    /// Cograph of a signed tree: edges, largest clique and independent set.
    Cograph(CographArgs),
    /// Run a Monte-Carlo experiment and write its report.
    Experiment(ExperimentArgs),
    /// Survival frequencies of a tagged fragment.
    Survival(SurvivalArgs),
    /// Pattern frequencies of both samplers against the exact law.
    Crossval(CrossvalArgs),
    /// Scatter data of a sampled permutation with LIS and selection marks.
    Diagram(SampleArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct PSource {
    /// Comma-separated values of p in (0, 1).
    #[arg(long, value_delimiter = ',', value_parser = open_probability)]
    p: Vec<f64>,

    /// Use p = i / (k + 1) for i = 1..=k.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=10_000))]
    grid: Option<u32>,
}

#[derive(Args, Debug)]
struct ExponentsArgs {
    #[command(flatten)]
    source: PSource,
}

#[derive(Args, Debug)]
struct SampleArgs {
    /// Probability of a `+` node.
    #[arg(long, value_parser = probability)]
    p: f64,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,

    /// Also print the signed tree.
    #[arg(long)]
    tree: bool,
}

#[derive(Args, Debug)]
struct LisArgs {
    /// Permutation as space- or comma-separated values (one-line notation).
    #[arg(long, conflicts_with_all = ["p", "n"])]
    perm: Option<String>,

    #[arg(long, value_parser = probability, requires = "n")]
    p: Option<f64>,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), requires = "p")]
    n: Option<u64>,
}

#[derive(Args, Debug)]
struct TreeArgs {
    /// Signed tree in text form, e.g. `((1,2)-,3)+`.
    #[arg(long = "tree", conflicts_with_all = ["p", "n"])]
    text: Option<String>,

    #[arg(long, value_parser = probability, requires = "n")]
    p: Option<f64>,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), requires = "p")]
    n: Option<u64>,
}

#[derive(Args, Debug)]
struct CographArgs {
    #[command(flatten)]
    tree: TreeArgs,

    /// Refuse trees with more leaves than this.
    #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: ExperimentKind,

    #[arg(long, value_parser = probability)]
    p: f64,

    /// Comma-separated leaf counts n (lis_scaling) or half-lengths N.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,

    #[arg(long)]
    reps: Option<usize>,

    /// Comma-separated eps values in (0, 1].
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct SurvivalArgs {
    #[arg(long, value_parser = probability)]
    p: f64,

    /// Excursion half-length N.
    #[arg(long, default_value_t = 1 << 16)]
    n: usize,

    #[arg(long, default_value_t = 10_000)]
    reps: usize,

    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,

    /// Joint survival of two tagged points.
    #[arg(long)]
    two_point: bool,
}

#[derive(Args, Debug)]
struct CrossvalArgs {
    #[arg(long, value_parser = probability)]
    p: f64,

    /// Excursion half-length N.
    #[arg(long, default_value_t = 1 << 16)]
    n: usize,

    #[arg(long, default_value_t = 100_000)]
    reps: usize,
}

fn probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("{p} is not in [0, 1]"))
    }
}

fn open_probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(format!("{p} is not in (0, 1)"))
    }
}

fn parse_kind(s: &str) -> Result<ExperimentKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::SizeCap { .. } | Error::Parse { .. } | Error::Contract(_) => {
                Failure::Usage(e.to_string())
            }
            Error::Numerical(_) | Error::Structure(_) => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(format!("i/o: {e}"))
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t as usize).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Exponents(a) => exponents(cli, a),
        Command::Sample(a) => sample(cli, a),
        Command::Lis(a) => lis(cli, a),
        Command::Selection(a) => selection(cli, a),
        Command::Cograph(a) => cograph(cli, a),
        Command::Experiment(a) => {
            let mut config = ExperimentConfig::desk_default(a.kind, a.p);
            if let Some(sizes) = &a.sizes {
                config.sizes = sizes.clone();
            }
            if let Some(reps) = a.reps {
                config.reps = reps;
            }
            if let Some(eps) = &a.eps {
                config.eps_grid = eps.clone();
            }
            experiment(cli, config)
        }
        Command::Survival(a) => {
            let kind = if a.two_point {
                ExperimentKind::TwoPoint
            } else {
                ExperimentKind::Survival
            };
            let mut config = ExperimentConfig::desk_default(kind, a.p);
            config.sizes = vec![a.n];
            config.reps = a.reps;
            if let Some(eps) = &a.eps {
                config.eps_grid = eps.clone();
            }
            experiment(cli, config)
        }
        Command::Crossval(a) => {
            let mut config = ExperimentConfig::desk_default(ExperimentKind::CrossValidate, a.p);
            config.sizes = vec![a.n];
            config.reps = a.reps;
            experiment(cli, config)
        }
        Command::Diagram(a) => diagram(cli, a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn size(n: u64) -> Result<usize, Failure> {
    usize::try_from(n).map_err(|_| Failure::Usage(format!("n = {n} does not fit in memory")))
}

fn exponents(cli: &Cli, a: &ExponentsArgs) -> CliResult {
    let ps: Vec<f64> = match a.source.grid {
        Some(k) => (1..=k).map(|i| f64::from(i) / f64::from(k + 1)).collect(),
        None => a.source.p.clone(),
    };
    let rows = exponent_table(&ps).map_err(|e| match e {
        Error::InvalidParameter { .. } => Failure::from(e),
        other => Failure::Runtime(other.to_string()),
    })?;
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => table_to_csv(&rows),
        Format::Json => json(&rows),
    };
    emit(cli.out.as_deref(), &text)
}

fn sampled_tree(seed: u64, p: f64, n: u64) -> Result<SignedBinaryTree, Failure> {
    Ok(sample_tree(size(n)?, p, &mut rng(seed))?)
}

fn sample(cli: &Cli, a: &SampleArgs) -> CliResult {
    let tree = sampled_tree(cli.seed, a.p, a.n)?;
    let perm = to_permutation(&tree);
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let values: Vec<String> = perm.values().iter().map(u32::to_string).collect();
            let mut s = values.join(",");
            s.push('\n');
            if a.tree {
                s.push_str(&tree.to_text());
                s.push('\n');
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                permutation: &'a Permutation,
                #[serde(skip_serializing_if = "Option::is_none")]
                tree: Option<String>,
            }
            json(&Out {
                permutation: &perm,
                tree: a.tree.then(|| tree.to_text()),
            })
        }
    };
    emit(cli.out.as_deref(), &text)
}

fn parse_perm(text: &str) -> Result<Permutation, Failure> {
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u32>()
                .map_err(|e| Failure::Usage(format!("bad value `{s}`: {e}")))
        })
        .collect::<Result<Vec<u32>, Failure>>()?;
    Permutation::new(values).map_err(|e| Failure::Usage(e.to_string()))
}

fn lis(cli: &Cli, a: &LisArgs) -> CliResult {
    let perm = match (&a.perm, a.p, a.n) {
        (Some(text), _, _) => parse_perm(text)?,
        (None, Some(p), Some(n)) => to_permutation(&sampled_tree(cli.seed, p, n)?),
        _ => return Err(Failure::Usage("give --perm or both --p and --n".into())),
    };
    let (length, witness) = lis_patience(&perm);
    let lds = lds_patience(&perm);
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Csv => format!("n,lis,lds\n{},{},{}\n", perm.len(), length, lds),
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                n: usize,
                lis: usize,
                lds: usize,
                /// 1-based positions.
                witness: Vec<usize>,
            }
            json(&Out {
                n: perm.len(),
                lis: length,
                lds,
                witness: witness.iter().map(|i| i + 1).collect(),
            })
        }
    };
    emit(cli.out.as_deref(), &text)
}

fn tree_from(cli: &Cli, a: &TreeArgs) -> Result<SignedBinaryTree, Failure> {
    match (&a.text, a.p, a.n) {
        (Some(text), _, _) => Ok(SignedBinaryTree::parse(text)?),
        (None, Some(p), Some(n)) => sampled_tree(cli.seed, p, n),
        _ => Err(Failure::Usage("give --tree or both --p and --n".into())),
    }
}

fn selection(cli: &Cli, a: &TreeArgs) -> CliResult {
    let tree = tree_from(cli, a)?;
    let kept = selection_rule_tree(&tree);
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Csv => format!("n,lis,selection\n{},{},{}\n", tree.n(), lis_tree(&tree), kept.len()),
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                n: usize,
                lis: usize,
                selection_length: usize,
                /// 1-based positions.
                selection: Vec<u32>,
            }
            json(&Out {
                n: tree.n(),
                lis: lis_tree(&tree),
                selection_length: kept.len(),
                selection: kept,
            })
        }
    };
    emit(cli.out.as_deref(), &text)
}

fn cograph(cli: &Cli, a: &CographArgs) -> CliResult {
    let tree = tree_from(cli, &a.tree)?;
    let edges = cograph_edges(&tree, a.cap)?;
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = String::from("u,v\n");
            for (u, v) in &edges {
                s.push_str(&format!("{u},{v}\n"));
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                n: usize,
                clique: usize,
                independent: usize,
                edges: Vec<(u32, u32)>,
            }
            json(&Out {
                n: tree.n(),
                clique: clique_tree(&tree),
                independent: independent_tree(&tree),
                edges,
            })
        }
    };
    emit(cli.out.as_deref(), &text)
}

fn report_path(cli: &Cli, config: &ExperimentConfig, format: Format) -> PathBuf {
    let ext = match format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let name = format!("{}.{ext}", config.file_stem());
    match &cli.out {
        Some(path) if path.is_dir() => path.join(name),
        Some(path) => path.clone(),
        None => PathBuf::from(name),
    }
}

fn summary(report: &ExperimentReport) -> String {
    let mut s = format!("kind: {}\np: {}\n", report.config.kind, report.config.p);
    match &report.regression {
        RegressionOutcome::Fitted(r) => {
            s.push_str(&format!("slope: {:.6}\nintercept: {:.6}\n", r.slope, r.intercept));
            if let Some(se) = r.stderr {
                s.push_str(&format!("stderr: {se:.6}\n"));
            }
        }
        RegressionOutcome::Undefined { reason } => s.push_str(&format!("slope: undefined ({reason})\n")),
    }
    match &report.reference {
        Some(r) => s.push_str(&format!(
            "reference: {:.6} (alpha* {:.6}, beta* {:.6})\n",
            r.expected_slope, r.alpha_star, r.beta_star
        )),
        None => s.push_str("reference: none for this p\n"),
    }
    for cmp in &report.patterns {
        s.push_str(&format!(
            "n={} chi-square p-values: tree/exact {:.4}, excursion/exact {:.4}, tree/excursion {:.4}\n",
            cmp.size, cmp.tree_vs_exact.p_value, cmp.excursion_vs_exact.p_value, cmp.tree_vs_excursion.p_value
        ));
    }
    s.push_str(&format!("wall-clock: {:.1}s\n", report.wall_clock.as_secs_f64()));
    if !report.complete {
        s.push_str("interrupted: partial report\n");
    }
    s
}

fn experiment(cli: &Cli, mut config: ExperimentConfig) -> CliResult {
    config.master_seed = cli.seed;
    config.threads = cli.threads.map(|t| t as usize);
    config.validate()?;
    ctrlc::set_handler(|| CANCEL.store(true, Ordering::SeqCst))
        .map_err(|e| Failure::Runtime(format!("signal handler: {e}")))?;
    let report = run_experiment_with_cancel(&config, &CANCEL)?;
    let format = cli.format.unwrap_or(Format::Json);
    let text = match format {
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
        Format::Csv => report.to_csv(),
    };
    let path = report_path(cli, &config, format);
    fs::write(&path, text)?;
    println!("{}report: {}", summary(&report), path.display());
    if report.complete {
        Ok(())
    } else {
        Err(Failure::Runtime("interrupted".into()))
    }
}

fn diagram(cli: &Cli, a: &SampleArgs) -> CliResult {
    let n = size(a.n)?;
    if n > DIAGRAM_CAP {
        return Err(Error::SizeCap {
            size: n,
            cap: DIAGRAM_CAP,
        }
        .into());
    }
    let tree = sampled_tree(cli.seed, a.p, a.n)?;
    let perm = to_permutation(&tree);
    let mut in_lis = vec![false; n];
    for i in lis_patience(&perm).1 {
        in_lis[i] = true;
    }
    let mut in_sel = vec![false; n];
    for r in selection_rule_tree(&tree) {
        in_sel[r as usize - 1] = true;
    }
    let scale = n as f64;
    let points = perm.values().iter().enumerate().map(|(i, &v)| {
        let x = (i + 1) as f64 / scale;
        let y = f64::from(v) / scale;
        (x, y, in_lis[i], in_sel[i])
    });
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("x,y,lis,selection\n");
            for (x, y, l, sel) in points {
                s.push_str(&format!("{x},{y},{},{}\n", u8::from(l), u8::from(sel)));
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Point {
                x: f64,
                y: f64,
                lis: bool,
                selection: bool,
            }
            let pts: Vec<Point> = points
                .map(|(x, y, lis, selection)| Point { x, y, lis, selection })
                .collect();
            json(&pts)
        }
    };
    emit(cli.out.as_deref(), &text)
}
