//! `pm`: command-line access to the polymat library.
//!
//! Exit codes: 0 success or a true answer, 1 a false answer to a predicate,
//! 2 bad input or usage, 3 a verification failure or counterexample.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polymat::catalog::generate_catalog;
use polymat::chains::{
    count_constrained_orderings, enumerate_admissible_orderings, enumerate_constrained_orderings,
    find_admissible_chain, ChainError,
};
use polymat::construct::{
    canonical_counterexample, decompose_2_separation, natural_matroid, two_sum, uniform,
    unique_ordering_default,
};
use polymat::format::{self, load, save};
use polymat::verify::{self, Counterexample, CounterexampleFile, Status, VerifyConfig};
use polymat::{ElementKind, PmError, Polymatroid};

#[derive(Parser)]
#[command(name = "pm", version, about = "Compute with small integer k-polymatroids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the polymatroid axioms; exit 1 when any fails.
    Validate { file: PathBuf },
    /// Size, bound, rank, element kinds and components.
    Info { file: PathBuf },
    /// One connected component per line.
    Components { file: PathBuf },
    /// Delete and contract the given elements.
    Minor {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        delete: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        contract: Vec<String>,
        /// Output file; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A removal chain from M down to its minor N keeping M connected.
    Chain { m: PathBuf, n: PathBuf },
    /// Admissible element orderings from M down to N.
    Orderings {
        m: PathBuf,
        n: PathBuf,
        /// Also fix deletion or contraction at each step.
        #[arg(long)]
        constrained: bool,
        #[arg(long)]
        count_only: bool,
    },
    /// The natural matroid of a 2-polymatroid; prints the copy map.
    Natural {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// 2-sum of two polymatroids along a shared basepoint.
    Twosum {
        m1: PathBuf,
        m2: PathBuf,
        #[arg(long)]
        basepoint: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Split along an exact 2-separation into two parts sharing a basepoint.
    Decompose {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        side: Vec<String>,
        /// Writes `<prefix>_1.json` and `<prefix>_2.json`.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run the verification suite; exit 3 on any failure.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Block size bound for the conjecture explorer.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Instances generated by the conjecture explorer.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        /// Configurations drawn per instance when sampling.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Directory for report and counterexample files.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append elapsed time to each line.
        #[arg(long)]
        timing: bool,
        /// Process instances on a single thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Re-run the checker recorded in a counterexample file.
    Replay { file: PathBuf },
    /// Write the bundled example instances.
    Examples {
        #[arg(long)]
        emit: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(e: impl Display) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

impl From<PmError> for Failure {
    fn from(e: PmError) -> Self {
        Failure::input(e)
    }
}

type CliResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::Validate { file } => validate(&file),
        Command::Info { file } => info(&load_file(&file)?),
        Command::Components { file } => {
            for block in load_file(&file)?.components() {
                println!("{}", join(&block));
            }
            Ok(0)
        }
        Command::Minor { file, delete, contract, output } => {
            let p = load_file(&file)?;
            let d = p.subset(&delete)?;
            let c = p.subset(&contract)?;
            emit(&p.minor(d, c)?, output.as_deref())
        }
        Command::Chain { m, n } => chain(&load_file(&m)?, &load_file(&n)?),
        Command::Orderings { m, n, constrained, count_only } => {
            orderings(&load_file(&m)?, &load_file(&n)?, constrained, count_only)
        }
        Command::Natural { file, output } => {
            let nat = natural_matroid(&load_file(&file)?)?;
            for (label, copies) in &nat.copies {
                println!("{label} -> {}", join(copies));
            }
            emit(&nat.matroid, output.as_deref())
        }
        Command::Twosum { m1, m2, basepoint, output } => {
            let sum = two_sum(&load_file(&m1)?, &load_file(&m2)?, &basepoint)?;
            emit(&sum, output.as_deref())
        }
        Command::Decompose { file, side, output } => {
            let p = load_file(&file)?;
            let d = decompose_2_separation(&p, p.subset(&side)?)?;
            let first = with_suffix(&output, "_1.json");
            let second = with_suffix(&output, "_2.json");
            save(&d.m1, &first)?;
            save(&d.m2, &second)?;
            println!("basepoint {}", d.basepoint);
            println!("{}", first.display());
            println!("{}", second.display());
            Ok(0)
        }
        Command::Verify { suite, max_n, seed, k, budget, samples, out, timing, sequential } => {
            let cfg = VerifyConfig {
                max_n,
                seed,
                samples,
                k,
                budget,
                parallel: !sequential,
            };
            run_verify(&suite, &cfg, out.as_deref(), timing)
        }
        Command::Replay { file } => replay(&file),
        Command::Examples { emit } => examples(&emit),
    }
}

fn load_file(path: &Path) -> Result<Polymatroid, Failure> {
    load(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn join<T: Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn emit(p: &Polymatroid, output: Option<&Path>) -> CliResult {
    match output {
        Some(path) => save(p, path)?,
        None => print!("{}", format::to_json(p)),
    }
    Ok(0)
}

fn validate(path: &Path) -> CliResult {
    let p = format::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let violations = p.validate();
    if violations.is_empty() {
        println!("valid");
        return Ok(0);
    }
    for v in &violations {
        println!("{v}");
    }
    Ok(1)
}

fn info(p: &Polymatroid) -> CliResult {
    println!("n {}", p.len());
    println!("k {}", p.k_bound());
    println!("rank {}", p.total_rank());
    for l in p.ground_set() {
        let kind: ElementKind = p.element_kind(l.as_str())?;
        println!("element {l} {kind}");
    }
    println!("connected {}", p.is_connected());
    if let Some(cert) = p.separation() {
        println!("separation {}", join(&cert.side));
    }
    for block in p.components() {
        println!("component {}", join(&block));
    }
    Ok(0)
}

fn chain_failure(e: ChainError) -> Failure {
    match e {
        ChainError::Counterexample { m, n } => {
            let cx = Counterexample {
                checker: "main_theorem".into(),
                instance: *m,
                minor: Some(*n),
                witness: "no single removal keeps connectivity and the minor".into(),
            };
            print!("{}", counterexample_json(&cx.to_file()));
            Failure { code: 3, message: "no connectivity-preserving removal exists".into() }
        }
        other => Failure::input(other),
    }
}

fn chain(m: &Polymatroid, n: &Polymatroid) -> CliResult {
    let chain = find_admissible_chain(m, n).map_err(chain_failure)?;
    for step in &chain.steps {
        println!("{step}");
    }
    Ok(0)
}

fn orderings(m: &Polymatroid, n: &Polymatroid, constrained: bool, count_only: bool) -> CliResult {
    if constrained {
        if count_only {
            println!("{}", count_constrained_orderings(m, n).map_err(chain_failure)?);
        } else {
            for seq in enumerate_constrained_orderings(m, n).map_err(chain_failure)? {
                let steps: Vec<String> = seq.iter().map(ToString::to_string).collect();
                println!("{}", steps.join(", "));
            }
        }
    } else {
        let orders = enumerate_admissible_orderings(m, n).map_err(chain_failure)?;
        if count_only {
            println!("{}", orders.len());
        } else {
            for order in orders {
                let names: Vec<&str> = order.iter().map(|e| e.as_str()).collect();
                println!("{}", names.join(" "));
            }
        }
    }
    Ok(0)
}

fn counterexample_json(file: &CounterexampleFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("serializable");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn run_verify(suite: &str, cfg: &VerifyConfig, out: Option<&Path>, timing: bool) -> CliResult {
    if suite != "all" && !verify::CHECKERS.contains(&suite) {
        return Err(Failure::input(format!("unknown checker {suite:?}")));
    }
    let catalog = generate_catalog(cfg.max_n, cfg.seed)?;
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    }
    let ids: Vec<&str> = if suite == "all" { verify::CHECKERS.to_vec() } else { vec![suite] };
    let mut failed = false;
    for id in ids {
        let report = verify::run_checker(id, &catalog, cfg)?;
        println!("{}", report.line(timing));
        failed |= report.status == Status::Fail;
        if let Some(dir) = out {
            let mut text = serde_json::to_string_pretty(&report.to_file()).expect("serializable");
            text.push('\n');
            write_file(&dir.join(format!("{id}.json")), &text)?;
            for (i, cx) in report.counterexamples.iter().enumerate() {
                let path = dir.join(format!("{id}_counterexample_{i}.json"));
                write_file(&path, &counterexample_json(&cx.to_file()))?;
            }
        }
    }
    Ok(if failed { 3 } else { 0 })
}

fn replay(path: &Path) -> CliResult {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let file: CounterexampleFile =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let cx = Counterexample::from_file(&file)?;
    let report = verify::replay(&cx, &VerifyConfig::default())?;
    println!("{}", report.line(false));
    for c in &report.counterexamples {
        println!("{}", c.witness);
    }
    Ok(if report.status == Status::Fail { 3 } else { 0 })
}

fn examples(dir: &Path) -> CliResult {
    fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    let m = canonical_counterexample();
    written.push(("counterexample.json".to_string(), m.clone()));
    let line_z = m.delete_labels(&["x", "y"])?;
    written.push(("line_z.json".to_string(), line_z));
    written.push(("unique_ordering_minor.json".to_string(), uniform(2, 3, &["a", "b", "c"])?));
    for len in 1..=3 {
        written.push((format!("unique_ordering_{len}.json"), unique_ordering_default(len)?));
    }
    for (name, p) in &written {
        let path = dir.join(name);
        save(p, &path)?;
        println!("{}", path.display());
    }
    Ok(0)
}
