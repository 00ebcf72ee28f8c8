//! Command-line interface.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::exec::{equivalent, run_one, Budget, Executable, Explorer, RunOutcome, Verdict};
use crate::graph::HostGraph;
use crate::syntax::{parse_host_graph, parse_program};

pub const EXIT_GRAPH: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gp2", version, about = "Run and analyse GP 2 graph programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Execute a program on a host graph.
    Run {
        program: PathBuf,
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Run)]
        mode: Mode,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Print every possible result of a program on a host graph.
    Semantics {
        program: PathBuf,
        graph: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Check a program for static errors.
    Check { program: PathBuf },
    /// Compare the main commands of two programs on a set of host graphs.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(required = true)]
        graphs: Vec<PathBuf>,
        #[command(flatten)]
        opts: RunOpts,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// A single execution.
    Run,
    /// All executions.
    All,
}

#[derive(Debug, Args)]
pub struct RunOpts {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: usize,
    #[arg(long, default_value_t = 100_000)]
    pub max_configs: usize,
    /// Print each transition to stderr.
    #[arg(long)]
    pub trace: bool,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl RunOpts {
    fn budget(&self) -> Budget {
        Budget {
            max_steps: self.max_steps,
            max_configs: self.max_configs,
            seed: self.seed,
        }
    }
}

/// What an invocation printed and how it exits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Report {
    fn invalid(message: impl AsRef<str>) -> Self {
        Report {
            stdout: String::new(),
            stderr: format!("{}\n", message.as_ref()),
            code: EXIT_INVALID,
        }
    }
}

fn load_program(path: &Path) -> Result<Executable, Report> {
    let src = fs::read_to_string(path)
        .map_err(|e| Report::invalid(format!("{}: {e}", path.display())))?;
    let program =
        parse_program(&src).map_err(|e| Report::invalid(format!("{}:{e}", path.display())))?;
    Executable::from_program(&program).map_err(|vs| {
        let mut msg = String::new();
        for v in vs {
            let _ = writeln!(msg, "{}:{v}", path.display());
        }
        Report::invalid(msg.trim_end())
    })
}

fn load_graph(path: &Path) -> Result<HostGraph, Report> {
    let src = fs::read_to_string(path)
        .map_err(|e| Report::invalid(format!("{}: {e}", path.display())))?;
    parse_host_graph(&src).map_err(|e| Report::invalid(format!("{}:{e}", path.display())))
}

fn warn(stderr: &mut String, warnings: &[String]) {
    for w in warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
}

/// Sends the result text to `--output` if given.
fn emit(mut report: Report, text: String, output: &Option<PathBuf>) -> Report {
    match output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                let _ = writeln!(report.stderr, "{}: {e}", path.display());
                report.code = EXIT_INVALID;
            }
        }
        None => report.stdout = text,
    }
    report
}

pub fn cmd_run(program: &Path, graph: &Path, opts: &RunOpts) -> Report {
    let (exe, host) = match load_program(program).and_then(|p| Ok((p, load_graph(graph)?))) {
        Ok(v) => v,
        Err(r) => return r,
    };
    let r = run_one(&exe, &host, opts.budget(), opts.trace);
    let mut report = Report::default();
    for line in r.trace.iter().flatten() {
        let _ = writeln!(report.stderr, "{line}");
    }
    warn(&mut report.stderr, &r.warnings);
    let _ = writeln!(report.stderr, "steps: {}", r.steps);
    let text = match r.outcome {
        RunOutcome::Graph(h) => format!("{h}\n"),
        RunOutcome::Fail => {
            report.code = EXIT_FAIL;
            "fail\n".to_owned()
        }
        RunOutcome::BudgetExceeded => {
            report.code = EXIT_BUDGET;
            "bound exceeded\n".to_owned()
        }
    };
    emit(report, text, &opts.output)
}

pub fn cmd_semantics(program: &Path, graph: &Path, opts: &RunOpts) -> Report {
    let (exe, host) = match load_program(program).and_then(|p| Ok((p, load_graph(graph)?))) {
        Ok(v) => v,
        Err(r) => return r,
    };
    let mut explorer = Explorer::new(&exe, opts.budget());
    let result = explorer.semantics(&exe.main, &host);
    let mut report = Report::default();
    warn(&mut report.stderr, &explorer.warnings);
    if !result.complete {
        report
            .stderr
            .push_str("warning: budget exhausted, results may be missing\n");
    }
    emit(report, result.to_string(), &opts.output)
}

pub fn cmd_check(program: &Path) -> Report {
    match load_program(program) {
        Ok(_) => Report::default(),
        Err(r) => r,
    }
}

pub fn cmd_equiv(left: &Path, right: &Path, graphs: &[PathBuf], opts: &RunOpts) -> Report {
    let loaded = load_program(left).and_then(|p| {
        let q = load_program(right)?;
        let hosts = graphs
            .iter()
            .map(|g| load_graph(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((p, q, hosts))
    });
    let (p, q, hosts) = match loaded {
        Ok(v) => v,
        Err(r) => return r,
    };
    let mut report = Report::default();
    let text = match equivalent(&p, &q, &hosts, opts.budget()) {
        Verdict::Equal => "equal\n".to_owned(),
        Verdict::Counterexample { host, left, right } => {
            report.code = EXIT_FAIL;
            format!(
                "counterexample: {}\nleft:\n{left}right:\n{right}",
                graphs[host].display()
            )
        }
        Verdict::Inconclusive { host } => {
            report.code = EXIT_BUDGET;
            format!("inconclusive: {}\n", graphs[host].display())
        }
    };
    emit(report, text, &opts.output)
}

pub fn execute(cli: &Cli) -> Report {
    match &cli.command {
        Cmd::Run {
            program,
            graph,
            mode: Mode::Run,
            opts,
        } => cmd_run(program, graph, opts),
        Cmd::Run {
            program,
            graph,
            mode: Mode::All,
            opts,
        }
        | Cmd::Semantics {
            program,
            graph,
            opts,
        } => cmd_semantics(program, graph, opts),
        Cmd::Check { program } => cmd_check(program),
        Cmd::Equiv {
            left,
            right,
            graphs,
            opts,
        } => cmd_equiv(left, right, graphs, opts),
    }
}
