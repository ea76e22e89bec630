//! `qspb`: verify, evaluate and explore U_q(sl_{n+1}) and its coideal
//! subalgebras from the command line.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qsp_braid::braidaction::MapSet;
use qsp_braid::parser::{parse, ParseError, Scope};
use qsp_braid::qsp::Params;
use qsp_braid::rootdata::SatakeDatum;
use qsp_braid::suites::{resolve, run_suites, CheckReport, Oracles, RunConfig, Status, Suite};
use qsp_braid::uqcore::Pbw;

#[derive(Parser)]
#[command(name = "qspb", version, about = "Exact verification harness for quantum symmetric pairs of type AIII/AIV")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and report one JSON line per check.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Oracle: pbw, elim, rep or all.
        #[arg(long, default_value = "pbw")]
        oracle: String,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Abort normal-form computations whose degree exceeds this bound.
        #[arg(long)]
        max_degree: Option<usize>,
        /// Write the JSON lines to this file instead of stdout.
        #[arg(long)]
        json: Option<String>,
        /// Print a per-suite summary table to stderr.
        #[arg(long)]
        summary: bool,
    },
    /// Evaluate an expression and print its normal form.
    Eval {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Parameter family used to resolve coideal generators.
        #[arg(long, value_enum, default_value_t = FamilyArg::Generic)]
        family: FamilyArg,
        expr: String,
    },
    /// Read expressions from stdin and print their normal forms.
    Repl {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, value_enum, default_value_t = FamilyArg::Generic)]
        family: FamilyArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Generic,
    Symmetric,
}

impl FamilyArg {
    fn params(self, d: SatakeDatum) -> Params {
        match self {
            FamilyArg::Generic => Params::generic(d),
            FamilyArg::Symmetric => Params::symmetric(d),
        }
    }
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("qspb: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Verify { n, r, suite, oracle, jobs, max_degree, json, summary } => {
            verify(n, r, &suite, &oracle, jobs, max_degree, json.as_deref(), summary)
        }
        Command::Eval { n, r, family, expr } => {
            let d = match SatakeDatum::new(n, r) {
                Ok(d) => d,
                Err(e) => return usage(e),
            };
            let maps = MapSet::new(family.params(d));
            match evaluate(&maps, &expr) {
                Ok(s) => {
                    println!("{s}");
                    ExitCode::SUCCESS
                }
                Err(EvalFailure::Parse(e)) => {
                    eprintln!("{}", caret(&expr, &e));
                    ExitCode::from(EXIT_USAGE)
                }
                Err(EvalFailure::Eval(e)) => {
                    eprintln!("qspb: {e}");
                    ExitCode::from(EXIT_FAIL)
                }
            }
        }
        Command::Repl { n, r, family } => repl(n, r, family),
    }
}

#[allow(clippy::too_many_arguments)]
fn verify(n: usize, r: usize, suite: &str, oracle: &str, jobs: usize, max_degree: Option<usize>, json: Option<&str>, summary: bool) -> ExitCode {
    let d = match SatakeDatum::new(n, r) {
        Ok(d) => d,
        Err(e) => return usage(e),
    };
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        match Suite::from_name(suite) {
            Some(s) => vec![s],
            None => return usage(format!("unknown suite `{suite}`")),
        }
    };
    let Some(oracles) = Oracles::from_name(oracle) else {
        return usage(format!("unknown oracle `{oracle}` (expected pbw, elim, rep or all)"));
    };
    let cfg = RunConfig { oracles, max_degree, jobs };
    let reports = run_suites(&d, &suites, &cfg);
    let sink: Box<dyn Write> = match json {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(f),
            Err(e) => return usage(format!("cannot write {path}: {e}")),
        },
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    for rep in &reports {
        let line = serde_json::to_string(rep).expect("reports serialize");
        if writeln!(out, "{line}").is_err() {
            return usage("failed to write the report");
        }
    }
    if out.flush().is_err() {
        return usage("failed to write the report");
    }
    if summary {
        eprint!("{}", summary_table(&d, &reports));
    }
    if reports.iter().any(|r| r.status == Status::Fail) {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}

fn summary_table(d: &SatakeDatum, reports: &[CheckReport]) -> String {
    #[derive(Default)]
    struct Row {
        pass: usize,
        fail: usize,
        skipped: usize,
        resource: usize,
        ms: u64,
    }
    let mut rows: BTreeMap<&str, Row> = BTreeMap::new();
    for rep in reports {
        let row = rows.entry(rep.suite).or_default();
        row.ms += rep.elapsed_ms;
        match rep.status {
            Status::Pass => row.pass += 1,
            Status::Fail => row.fail += 1,
            Status::Skipped => row.skipped += 1,
            Status::ResourceSkip => row.resource += 1,
        }
    }
    let mut s = format!("(n, r) = ({}, {})\n", d.n, d.r);
    s.push_str(&format!("{:<14} {:>6} {:>6} {:>8} {:>10} {:>10}\n", "suite", "pass", "fail", "skipped", "res-skip", "ms"));
    for (name, row) in &rows {
        s.push_str(&format!("{:<14} {:>6} {:>6} {:>8} {:>10} {:>10}\n", name, row.pass, row.fail, row.skipped, row.resource, row.ms));
    }
    for rep in reports.iter().filter(|r| r.status == Status::Fail) {
        s.push_str(&format!("FAIL {}: {}\n", rep.check_id, rep.witness.as_deref().unwrap_or("")));
    }
    s
}

enum EvalFailure {
    Parse(ParseError),
    Eval(String),
}

fn evaluate(maps: &MapSet, src: &str) -> Result<String, EvalFailure> {
    let e = parse(src, &Scope::with_maps(maps)).map_err(EvalFailure::Parse)?;
    let p = &maps.params;
    let nf = p.evaluate(&Pbw { n: p.n() }, &resolve(p, &e)).map_err(|e| EvalFailure::Eval(e.to_string()))?;
    Ok(nf.render())
}

/// The input with a caret under the error position, then the message.
fn caret(src: &str, e: &ParseError) -> String {
    let col = src[..e.pos.min(src.len())].chars().count();
    format!("  {src}\n  {}^\nerror: {e}", " ".repeat(col))
}

const REPL_HELP: &str = "\
expressions are evaluated to PBW normal form; commands:
  :datum N R      switch to the Satake datum (N, R)
  :family NAME    generic | symmetric
  :render EXPR    print the parsed tree instead of its normal form
  :help, :quit";

fn repl(n: usize, r: usize, family: FamilyArg) -> ExitCode {
    let mut d = match SatakeDatum::new(n, r) {
        Ok(d) => d,
        Err(e) => return usage(e),
    };
    let mut family = family;
    let mut maps = MapSet::new(family.params(d));
    let stdin = io::stdin();
    let mut stdout = io::stdout();
    loop {
        let _ = write!(stdout, "qspb({},{})> ", d.n, d.r);
        let _ = stdout.flush();
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(0) | Err(_) => break,
            Ok(_) => {}
        }
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some(":quit") | Some(":q") => break,
            Some(":help") => println!("{REPL_HELP}"),
            Some(":datum") => {
                let nums: Vec<Option<usize>> = words.map(|w| w.parse().ok()).collect();
                match nums.as_slice() {
                    [Some(n), Some(r)] => match SatakeDatum::new(*n, *r) {
                        Ok(nd) => {
                            d = nd;
                            maps = MapSet::new(family.params(d));
                        }
                        Err(e) => println!("error: {e}"),
                    },
                    _ => println!("usage: :datum N R"),
                }
            }
            Some(":family") => match words.next() {
                Some("generic") => {
                    family = FamilyArg::Generic;
                    maps = MapSet::new(family.params(d));
                }
                Some("symmetric") => {
                    family = FamilyArg::Symmetric;
                    maps = MapSet::new(family.params(d));
                }
                _ => println!("usage: :family generic|symmetric"),
            },
            Some(":render") => {
                let src = line[":render".len()..].trim();
                match parse(src, &Scope::with_maps(&maps)) {
                    Ok(e) => println!("{}", e.render()),
                    Err(e) => println!("{}", caret(src, &e)),
                }
            }
            Some(cmd) if cmd.starts_with(':') => println!("unknown command {cmd}; try :help"),
            _ => match evaluate(&maps, line) {
                Ok(s) => println!("{s}"),
                Err(EvalFailure::Parse(e)) => println!("{}", caret(line, &e)),
                Err(EvalFailure::Eval(e)) => println!("error: {e}"),
            },
        }
    }
    ExitCode::SUCCESS
}
