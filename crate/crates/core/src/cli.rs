//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input error (parse, validation, unknown
//! logic), 2 I/O error, 3 search timeout under `--strict-timeout`, 4 model
//! fixture violating the frame or domain conditions, 64 usage error.

use crate::embedding::{embed_problem, prune_unused, DomainCondition, Logic, TranslationConfig};
use crate::fml::{collect_signature, Problem};
use crate::kripke::{
    correspondence_check, domain_violation, eval_fml, find_countermodel, frame_violation, parse_model, print_model,
    Assignment, SearchBounds, SearchResult,
};
use crate::qmf::{parse_problem, QmfError};
use crate::thf::{emit_problem, EmissionMode, DEFAULT_AXIOM_DIR, DEFAULT_BASENAME, DEFAULT_WRAP};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::Duration;
use wait_timeout::ChildExt;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;
pub const EXIT_MODEL: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

pub const AXIOM_DIR_ENV: &str = "FML2HOL_AXIOM_DIR";

#[derive(Parser, Debug)]
#[command(name = "fml2hol", version, about = "First-order modal logic to higher-order logic")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Translate a qmf problem into thf0.
    Translate(TranslateArgs),
    /// Search for a small Kripke countermodel to the conjecture.
    Check(CheckArgs),
    /// Evaluate a problem's formulas in a model fixture.
    Eval(EvalArgs),
    /// Run an external prover on a thf file and report its SZS status.
    RunProver(ProverArgs),
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// Target format `thf:<logic>:<domain>`, e.g. `thf:s5:vary`.
    #[arg(short = 'f', long = "format", conflicts_with_all = ["logic", "domain"])]
    format: Option<String>,
    /// k, k4, d, d4, t, s4 or s5.
    #[arg(long, requires = "domain")]
    logic: Option<String>,
    /// const, vary or cumul.
    #[arg(long, requires = "logic")]
    domain: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Inline,
    Include,
}

#[derive(Args, Debug)]
struct TranslateArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, value_enum, default_value = "inline")]
    mode: Mode,
    /// Directory of the axiom files in include mode [env: FML2HOL_AXIOM_DIR].
    #[arg(long)]
    axiom_dir: Option<String>,
    /// Stem of the axiom file names in include mode.
    #[arg(long, default_value = DEFAULT_BASENAME)]
    basename: String,
    /// Domain axiom file name; `{tag}` is replaced by the domain tag.
    #[arg(long)]
    domain_file: Option<String>,
    /// Logic axiom file name; `{tag}` is replaced by the logic tag.
    #[arg(long)]
    logic_file: Option<String>,
    /// Output path, `-` for stdout. Defaults to `<input stem>.thf`.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Drop definitions the problem does not use.
    #[arg(long)]
    prune: bool,
    /// Line width for wrapping, 0 to disable.
    #[arg(long, default_value_t = DEFAULT_WRAP)]
    wrap: usize,
    input: PathBuf,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, default_value_t = 3)]
    max_worlds: usize,
    #[arg(long, default_value_t = 3)]
    max_individuals: usize,
    /// Time budget in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Exit with status 3 when the time budget runs out.
    #[arg(long)]
    strict_timeout: bool,
    input: PathBuf,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    config: ConfigArgs,
    input: PathBuf,
    model: PathBuf,
}

#[derive(Args, Debug)]
struct ProverArgs {
    /// Command template; `{file}` is replaced by the problem path.
    #[arg(long)]
    prover: String,
    /// Time budget in seconds.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    #[arg(long)]
    strict_timeout: bool,
    input: PathBuf,
}

/// Result reported by an external prover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SzsStatus {
    Theorem,
    CounterSatisfiable,
    Satisfiable,
    Unsatisfiable,
    Unknown,
    Timeout,
    Error(String),
}

impl SzsStatus {
    /// Status named on the first `SZS status` line of `output`.
    pub fn parse_output(output: &str) -> SzsStatus {
        let Some(line) = output.lines().find(|l| l.contains("SZS status")) else {
            return SzsStatus::Error(String::new());
        };
        let rest = &line[line.find("SZS status").unwrap() + "SZS status".len()..];
        match rest.split_whitespace().next().unwrap_or("") {
            "Theorem" => SzsStatus::Theorem,
            "CounterSatisfiable" => SzsStatus::CounterSatisfiable,
            "Satisfiable" => SzsStatus::Satisfiable,
            "Unsatisfiable" => SzsStatus::Unsatisfiable,
            "Unknown" | "GaveUp" => SzsStatus::Unknown,
            "Timeout" | "TimeOut" => SzsStatus::Timeout,
            _ => SzsStatus::Error(line.trim().to_string()),
        }
    }
}

impl fmt::Display for SzsStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SzsStatus::Theorem => "Theorem",
            SzsStatus::CounterSatisfiable => "CounterSatisfiable",
            SzsStatus::Satisfiable => "Satisfiable",
            SzsStatus::Unsatisfiable => "Unsatisfiable",
            SzsStatus::Unknown => "Unknown",
            SzsStatus::Timeout => "Timeout",
            SzsStatus::Error(_) => "Error",
        };
        f.write_str(s)
    }
}

/// Split a command template into argv, substituting `{file}`.
pub fn prover_argv(template: &str, file: &Path) -> Result<Vec<String>, String> {
    if !template.contains("{file}") {
        return Err("prover command must contain a `{file}` placeholder".into());
    }
    let words = shell_words::split(template).map_err(|e| format!("cannot parse prover command: {e}"))?;
    if words.is_empty() {
        return Err("empty prover command".into());
    }
    let file = file.to_string_lossy();
    Ok(words.into_iter().map(|w| w.replace("{file}", &file)).collect())
}

/// Run the prover and parse its SZS status from stdout, then stderr.
/// Spawn failures and missing status lines give [`SzsStatus::Error`].
pub fn run_prover(template: &str, file: &Path, timeout: Duration) -> SzsStatus {
    let argv = match prover_argv(template, file) {
        Ok(a) => a,
        Err(e) => return SzsStatus::Error(e),
    };
    let child = Command::new(&argv[0])
        .args(&argv[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn();
    let mut child = match child {
        Ok(c) => c,
        Err(e) => return SzsStatus::Error(format!("cannot start `{}`: {e}", argv[0])),
    };
    let reader = |pipe: Option<Box<dyn Read + Send>>| {
        std::thread::spawn(move || {
            let mut buf = String::new();
            if let Some(mut p) = pipe {
                let _ = p.read_to_string(&mut buf);
            }
            buf
        })
    };
    let out = reader(child.stdout.take().map(|p| Box::new(p) as Box<dyn Read + Send>));
    let err = reader(child.stderr.take().map(|p| Box::new(p) as Box<dyn Read + Send>));
    match child.wait_timeout(timeout) {
        Ok(Some(_)) => {}
        Ok(None) => {
            let _ = child.kill();
            let _ = child.wait();
            return SzsStatus::Timeout;
        }
        Err(e) => return SzsStatus::Error(format!("waiting for prover: {e}")),
    }
    let stdout = out.join().unwrap_or_default();
    match SzsStatus::parse_output(&stdout) {
        SzsStatus::Error(raw) if raw.is_empty() => SzsStatus::parse_output(&err.join().unwrap_or_default()),
        status => status,
    }
}

struct Failure(i32, String);

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INPUT, msg.into())
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure(EXIT_IO, format!("{}: {e}", path.display()))
}

fn write_out(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure(EXIT_IO, format!("writing output: {e}")))
}

fn resolve_config(args: &ConfigArgs) -> Result<TranslationConfig, Failure> {
    match (&args.format, &args.logic, &args.domain) {
        (Some(f), _, _) => TranslationConfig::from_format(f).map_err(|e| input_error(e.to_string())),
        (None, Some(l), Some(d)) => {
            let logic: Logic = l
                .parse()
                .map_err(|e: crate::embedding::ConfigError| input_error(e.to_string()))?;
            let domain: DomainCondition = d
                .parse()
                .map_err(|e: crate::embedding::ConfigError| input_error(e.to_string()))?;
            Ok(TranslationConfig::new(logic, domain))
        }
        _ => Err(usage(
            "a target is required: `-f thf:<logic>:<domain>` or `--logic L --domain D`",
        )),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn load_problem(path: &Path) -> Result<Problem, Failure> {
    let text = read_input(path)?;
    parse_problem(&text).map_err(|e| match e {
        QmfError::Parse(p) => input_error(format!("{}:{p}", path.display())),
        QmfError::Invalid(v) => input_error(format!("{}: {v}", path.display())),
    })
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "problem".into())
}

fn translate(args: TranslateArgs, out: &mut dyn Write) -> Outcome {
    let config = resolve_config(&args.config)?;
    let problem = load_problem(&args.input)?;
    let mut hol =
        embed_problem(&problem, &config).map_err(|e| input_error(format!("{}: {e}", args.input.display())))?;
    if args.prune {
        hol = prune_unused(&hol);
    }
    let mode = match args.mode {
        Mode::Inline => EmissionMode::Inline,
        Mode::Include => {
            let dir = args
                .axiom_dir
                .or_else(|| std::env::var(AXIOM_DIR_ENV).ok())
                .unwrap_or_else(|| DEFAULT_AXIOM_DIR.into());
            match EmissionMode::include(dir, &args.basename) {
                EmissionMode::Include {
                    axiom_dir,
                    domain_file,
                    logic_file,
                } => EmissionMode::Include {
                    axiom_dir,
                    domain_file: args.domain_file.unwrap_or(domain_file),
                    logic_file: args.logic_file.unwrap_or(logic_file),
                },
                inline => inline,
            }
        }
    };
    let width = if args.wrap == 0 { usize::MAX } else { args.wrap };
    let emitted = emit_problem(&hol, &config, &mode, width);
    let output = args
        .output
        .unwrap_or_else(|| PathBuf::from(format!("{}.thf", stem(&args.input))));
    let base = if output.as_os_str() == "-" {
        write_out(out, &emitted.problem_text)?;
        PathBuf::new()
    } else {
        std::fs::write(&output, &emitted.problem_text).map_err(|e| io_error(&output, e))?;
        output.parent().map(Path::to_path_buf).unwrap_or_default()
    };
    for (rel, contents) in &emitted.axiom_files {
        let path = base.join(rel);
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        }
        std::fs::write(&path, contents).map_err(|e| io_error(&path, e))?;
    }
    Ok(())
}

fn check(args: CheckArgs, out: &mut dyn Write) -> Outcome {
    let config = resolve_config(&args.config)?;
    if args.max_worlds == 0 || args.max_individuals == 0 {
        return Err(usage("search bounds must be at least 1"));
    }
    let problem = load_problem(&args.input)?;
    if problem.conjecture().is_none() {
        return Err(input_error(format!("{}: no conjecture", args.input.display())));
    }
    let mut bounds = SearchBounds::new(args.max_worlds, args.max_individuals);
    if let Some(secs) = args.timeout {
        let budget = Duration::try_from_secs_f64(secs).map_err(|_| usage(format!("invalid timeout `{secs}`")))?;
        bounds = bounds.with_time_budget(budget);
    }
    let name = stem(&args.input);
    let result = find_countermodel(&problem, &config, &bounds).map_err(|e| input_error(e.to_string()))?;
    match result {
        SearchResult::Countermodel { model, world } => {
            let text = format!(
                "% countermodel for {config}, conjecture false at {}\n{}% SZS status CounterSatisfiable for {name}\n",
                model.worlds[world],
                print_model(&model)
            );
            write_out(out, &text)
        }
        SearchResult::NoCountermodelWithinBounds => write_out(
            out,
            &format!(
                "no countermodel within bounds (worlds ≤ {}, individuals ≤ {}); this is not a proof\n% SZS status Unknown for {name}\n",
                args.max_worlds, args.max_individuals
            ),
        ),
        SearchResult::Timeout => {
            write_out(out, &format!("search timed out\n% SZS status Timeout for {name}\n"))?;
            if args.strict_timeout {
                Err(Failure(EXIT_TIMEOUT, "time budget exhausted".into()))
            } else {
                Ok(())
            }
        }
    }
}

fn eval(args: EvalArgs, out: &mut dyn Write) -> Outcome {
    let config = resolve_config(&args.config)?;
    let problem = load_problem(&args.input)?;
    let signature = collect_signature(&problem).map_err(|e| input_error(e.to_string()))?;
    let fixture = read_input(&args.model)?;
    let model =
        parse_model(&fixture, Some(&signature)).map_err(|e| input_error(format!("{}:{e}", args.model.display())))?;
    model
        .check_shape()
        .map_err(|e| input_error(format!("{}: {e}", args.model.display())))?;
    if let Some(p) = frame_violation(&model, config.logic) {
        return Err(Failure(
            EXIT_MODEL,
            format!(
                "frame condition violated: relation is not {} (required by {})",
                p.describe(),
                config.logic.tag()
            ),
        ));
    }
    if let Some(v) = domain_violation(&model, config.domain) {
        return Err(Failure(EXIT_MODEL, v.to_string()));
    }
    let none = Assignment::new();
    let mut text = String::new();
    let mut all_agree = true;
    for unit in &problem.units {
        for w in 0..model.world_count() {
            let value = eval_fml(&model, w, &unit.formula, &none).map_err(|e| input_error(e.to_string()))?;
            text.push_str(&format!(
                "{} ({}): {value} at {}\n",
                unit.name,
                unit.role.as_str(),
                model.worlds[w]
            ));
        }
        let agrees = correspondence_check(&model, &unit.formula, &config).map_err(|e| input_error(e.to_string()))?;
        all_agree &= agrees;
    }
    text.push_str(if all_agree {
        "correspondence OK\n"
    } else {
        "correspondence FAILED\n"
    });
    write_out(out, &text)?;
    if all_agree {
        Ok(())
    } else {
        Err(Failure(EXIT_INPUT, "embedding and direct semantics disagree".into()))
    }
}

fn prover(args: ProverArgs, out: &mut dyn Write) -> Outcome {
    prover_argv(&args.prover, &args.input).map_err(usage)?;
    if !args.input.is_file() {
        return Err(Failure(EXIT_IO, format!("{}: no such file", args.input.display())));
    }
    let budget =
        Duration::try_from_secs_f64(args.timeout).map_err(|_| usage(format!("invalid timeout `{}`", args.timeout)))?;
    let status = run_prover(&args.prover, &args.input, budget);
    write_out(out, &format!("% SZS status {status} for {}\n", stem(&args.input)))?;
    match status {
        SzsStatus::Error(raw) if !raw.is_empty() => Err(Failure(EXIT_OK, raw)),
        SzsStatus::Timeout if args.strict_timeout => Err(Failure(EXIT_TIMEOUT, "prover timed out".into())),
        _ => Ok(()),
    }
}

/// Run the command line `args` (program name first) and return the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let outcome = match cli.command {
        Cmd::Translate(a) => translate(a, out),
        Cmd::Check(a) => check(a, out),
        Cmd::Eval(a) => eval(a, out),
        Cmd::RunProver(a) => prover(a, out),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "fml2hol: {msg}");
            code
        }
    }
}
