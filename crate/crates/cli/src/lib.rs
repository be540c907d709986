//! Command-line front end for the `fairpool` library.
//!
//! Exit codes: 0 pass, 1 an axiom or table or fixture check failed, 2 usage,
//! 3 I/O, 4 invalid input data.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fairpool::axioms::{check_axioms, AxiomId, AxiomVerdict, CheckBudget, CheckError};
use fairpool::harness::{
    render_tap, reproduce_table1, reproduce_table2, run_fixture_examples, simulate_pool, SimConfig, SimError,
};
use fairpool::history::{History, HistoryError, RewardConfig};
use fairpool::rational::{self, Rational};
use fairpool::schemes::{PayoutReport, Scheme, SchemeError};
use serde::Serialize;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_INVALID: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "fairpool", version, about = "Mining-pool reward sharing schemes and their fairness axioms")]
struct Cli {
    #[command(subcommand)]
    command: RawCommand,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Largest number of shares in a generated history.
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    #[arg(long, default_value_t = 3)]
    max_rounds: usize,
    /// Random histories tried after the exhaustive ones.
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, env = "FAIRPOOL_SEED", default_value_t = 0)]
    seed: u64,
    /// Comparison tolerance for floating-point schemes, relative to R.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
}

#[derive(Debug, Args)]
struct RewardArgs {
    /// Block reward B, as an integer or n/d.
    #[arg(long, default_value = "1")]
    block_reward: String,
    /// Pool fee f, 0 <= f <= B.
    #[arg(long, default_value = "0")]
    fee: String,
}

#[derive(Debug, Subcommand)]
enum RawCommand {
    /// Awards of every share of a history file.
    Payout {
        /// Scheme spec, e.g. proportional, pplns:n=3, absfair:eps=@eps.json.
        #[arg(long)]
        scheme: String,
        /// History JSON file.
        #[arg(long)]
        history: PathBuf,
        #[arg(long)]
        json: bool,
        /// Show amounts as decimals with 12 significant digits.
        #[arg(long)]
        decimal: bool,
    },
    /// Search for counterexamples to one or all axioms.
    Check {
        #[arg(long)]
        scheme: String,
        /// One axiom, e.g. budget_limit; all seven when omitted.
        #[arg(long)]
        axiom: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        reward: RewardArgs,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce a verdict table and compare it with the expected grid.
    Tables {
        /// 1: independence schemes, 2: pool schemes.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Simulate a pool and report per-miner income statistics.
    Simulate {
        #[arg(long)]
        scheme: String,
        /// Comma-separated miner hashrate weights.
        #[arg(long, value_delimiter = ',', default_value = "1,1")]
        weights: Vec<String>,
        /// Probability that a share is a full solution.
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        rounds: usize,
        #[arg(long, env = "FAIRPOOL_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = fairpool::harness::simulate::DEFAULT_MAX_ROUND_LEN)]
        max_round_len: usize,
        #[command(flatten)]
        reward: RewardArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run the worked examples against their published values.
    Fixtures {
        #[arg(long)]
        json: bool,
    },
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Payout { scheme: Scheme, history: PathBuf, json: bool, decimal: bool },
    Check { scheme: Scheme, axioms: Vec<AxiomId>, budget: CheckBudget, json: bool },
    Tables { which: u8, budget: CheckBudget, json: bool },
    Simulate { config: SimConfig, json: bool },
    Fixtures { json: bool },
}

#[derive(Debug)]
pub enum CliError {
    /// Parse failure, or help/version output; clap knows the exit code.
    Clap(clap::Error),
    Usage(String),
    Io(String),
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Clap(e) => e.exit_code() as u8,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Invalid(_) => EXIT_INVALID,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Clap(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
        }
    }
}

fn scheme_error(flag: &str, e: SchemeError) -> CliError {
    match e {
        SchemeError::Io { path, reason } => CliError::Io(format!("{path}: {reason}")),
        other => CliError::Usage(format!("invalid value for {flag}: {other}")),
    }
}

fn parse_scheme(text: &str) -> Result<Scheme, CliError> {
    Scheme::parse_spec(text).map_err(|e| scheme_error("--scheme", e))
}

fn parse_rational(flag: &str, text: &str) -> Result<Rational, CliError> {
    rational::parse(text).map_err(|e| CliError::Usage(format!("invalid value for {flag}: {e}")))
}

fn parse_reward(args: &RewardArgs) -> Result<RewardConfig, CliError> {
    let b = parse_rational("--block-reward", &args.block_reward)?;
    let f = parse_rational("--fee", &args.fee)?;
    RewardConfig::new(b, f).map_err(|e| CliError::Usage(format!("invalid --block-reward/--fee: {e}")))
}

fn budget(search: &SearchArgs, reward: RewardConfig) -> Result<CheckBudget, CliError> {
    let budget = CheckBudget {
        n_max: search.n_max,
        max_rounds: search.max_rounds,
        random_trials: search.trials,
        seed: search.seed,
        tolerance: search.tolerance,
        reward,
    };
    budget.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(budget)
}

/// Parses `argv` (program name first) into a validated command.
pub fn parse_args<I, T>(argv: I) -> Result<Command, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(CliError::Clap)?;
    Ok(match cli.command {
        RawCommand::Payout { scheme, history, json, decimal } => Command::Payout {
            scheme: parse_scheme(&scheme)?,
            history,
            json,
            decimal,
        },
        RawCommand::Check { scheme, axiom, search, reward, json } => {
            let axioms = match axiom {
                Some(name) => vec![name
                    .parse::<AxiomId>()
                    .map_err(|e| CliError::Usage(format!("invalid value for --axiom: {e}")))?],
                None => AxiomId::ALL.to_vec(),
            };
            Command::Check {
                scheme: parse_scheme(&scheme)?,
                axioms,
                budget: budget(&search, parse_reward(&reward)?)?,
                json,
            }
        }
        RawCommand::Tables { which, search, json } => Command::Tables {
            which,
            budget: budget(&search, RewardConfig::unit())?,
            json,
        },
        RawCommand::Simulate { scheme, weights, p, rounds, seed, max_round_len, reward, json } => {
            let weights = weights
                .iter()
                .map(|w| parse_rational("--weights", w.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            let config = SimConfig {
                weights,
                p,
                rounds,
                seed,
                scheme: parse_scheme(&scheme)?,
                reward: parse_reward(&reward)?,
                max_round_len,
            };
            config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            Command::Simulate { config, json }
        }
        RawCommand::Fixtures { json } => Command::Fixtures { json },
    })
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn check_error(e: CheckError) -> CliError {
    match e {
        CheckError::Scheme(SchemeError::History(h)) => CliError::Invalid(h.to_string()),
        other => CliError::Invalid(other.to_string()),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out).map_err(io_err)
}

pub fn load_history(path: &PathBuf) -> Result<History, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn render_payout(report: &PayoutReport, decimal: bool) -> String {
    let mut lines = vec![format!("scheme: {}", report.scheme)];
    let id_width = report.entries.iter().map(|e| e.id.as_str().len()).max().unwrap_or(2).max(5);
    lines.push(format!("{:id_width$} {:>5} {:>5}  award", "share", "round", "rank"));
    for e in &report.entries {
        let pending = if e.pending { "  (pending)" } else { "" };
        lines.push(format!(
            "{:id_width$} {:>5} {:>5}  {}{pending}",
            e.id.as_str(),
            e.round,
            e.rank,
            e.award.display(decimal)
        ));
    }
    for r in &report.rounds {
        let pending = if r.pending { "  (includes pending)" } else { "" };
        lines.push(format!("round {} ({} shares): {}{pending}", r.round, r.length, r.sum.display(decimal)));
    }
    lines.push(format!("total: {}", report.total.display(decimal)));
    lines.join("\n") + "\n"
}

fn render_verdict(v: &AxiomVerdict) -> String {
    let mut out = match v.counterexample() {
        None => format!(
            "{}: no counterexample in {} histories\n",
            v.axiom, v.instances
        ),
        Some(cx) => {
            let mut s = format!("{}: FAIL after {} histories\n", v.axiom, v.instances);
            s += &format!("  history rounds: {:?}\n", cx.history.round_lengths());
            s += &format!("  construction: {}\n", serde_json::to_string(&cx.construction).unwrap_or_default());
            if !cx.shares.is_empty() {
                let ids: Vec<_> = cx.shares.iter().map(|s| s.as_str()).collect();
                s += &format!("  shares: {}\n", ids.join(", "));
            }
            if !cx.rounds.is_empty() {
                s += &format!("  rounds: {:?}\n", cx.rounds);
            }
            let relation = serde_json::to_value(cx.relation).ok().and_then(|v| v.as_str().map(String::from));
            s += &format!("  required {}: lhs = {}, rhs = {}\n", relation.unwrap_or_default(), cx.lhs, cx.rhs);
            s
        }
    };
    if v.pending_values > 0 {
        out += &format!("  ({} pending awards compared at their accrued value)\n", v.pending_values);
    }
    out
}

/// Runs a command, writing its report to `out`; returns the exit code.
pub fn run(cmd: &Command, out: &mut dyn Write) -> Result<u8, CliError> {
    match cmd {
        Command::Payout { scheme, history, json, decimal } => {
            let h = load_history(history)?;
            let report = scheme.payout_report(&h).map_err(|e| match e {
                SchemeError::History(h) => CliError::Invalid(h.to_string()),
                other => CliError::Invalid(other.to_string()),
            })?;
            if *json {
                write_json(out, &report)?;
            } else {
                out.write_all(render_payout(&report, *decimal).as_bytes()).map_err(io_err)?;
            }
            Ok(EXIT_PASS)
        }
        Command::Check { scheme, axioms, budget, json } => {
            let verdicts = check_axioms(axioms, scheme, budget).map_err(check_error)?;
            let verdicts: Vec<&AxiomVerdict> = verdicts.values().collect();
            if *json {
                if let [single] = verdicts.as_slice() {
                    write_json(out, single)?;
                } else {
                    write_json(out, &verdicts)?;
                }
            } else {
                writeln!(out, "scheme: {scheme}").map_err(io_err)?;
                for v in &verdicts {
                    out.write_all(render_verdict(v).as_bytes()).map_err(io_err)?;
                }
            }
            Ok(if verdicts.iter().any(|v| v.is_fail()) { EXIT_FAIL } else { EXIT_PASS })
        }
        Command::Tables { which, budget, json } => {
            let report = match which {
                1 => reproduce_table1(budget),
                _ => reproduce_table2(budget),
            }
            .map_err(check_error)?;
            if *json {
                write_json(out, &report)?;
            } else {
                out.write_all(report.render_text().as_bytes()).map_err(io_err)?;
            }
            Ok(if report.matches() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Simulate { config, json } => {
            let report = simulate_pool(config).map_err(|e| match e {
                SimError::Config(m) => CliError::Usage(m),
                SimError::Scheme(s) => CliError::Invalid(s.to_string()),
            })?;
            if *json {
                write_json(out, &report)?;
            } else {
                let mut text = format!(
                    "scheme: {}\nrounds: {}, shares: {}\nround total: mean {:.6}, variance {:.6}\n",
                    report.scheme, report.rounds, report.shares, report.round_total_mean, report.round_total_variance
                );
                text += "miner   weight   shares         mean     variance    std.err\n";
                for m in &report.miners {
                    text += &format!(
                        "{:>5} {:>8} {:>8} {:>12.6} {:>12.6} {:>10.6}\n",
                        m.miner, m.weight.to_string(), m.shares, m.mean, m.variance, m.std_error
                    );
                }
                out.write_all(text.as_bytes()).map_err(io_err)?;
            }
            Ok(EXIT_PASS)
        }
        Command::Fixtures { json } => {
            let results = run_fixture_examples().map_err(|e| CliError::Invalid(e.to_string()))?;
            if *json {
                write_json(out, &results)?;
            } else {
                out.write_all(render_tap(&results).as_bytes()).map_err(io_err)?;
            }
            Ok(if results.iter().all(|r| r.passed) { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

/// Parse, run and report errors; the whole of `main`.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = parse_args(argv).and_then(|cmd| run(&cmd, out));
    match result {
        Ok(code) => code,
        Err(CliError::Clap(e)) => {
            // help and version go to stdout
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            e.exit_code() as u8
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

impl From<HistoryError> for CliError {
    fn from(e: HistoryError) -> Self {
        CliError::Invalid(e.to_string())
    }
}
