//! `chaitin`: a command line for constructing, running and analyzing
//! self-delimiting machines. All commands are deterministic: identical
//! invocations produce byte-identical output.

mod machine_file;

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use chaitin_core::bits::{check_prefix_free, BitString};
use chaitin_core::complexity::{
    deficiency_check, h_upper, print_program, ComplexityWitness, Verdict,
};
use chaitin_core::dyadic::kraft_sum;
use chaitin_core::enumeration::{
    decode_machine, encode_machine, run_universal, u_encode, DecodedMachine, MachineIndex,
};
use chaitin_core::explore::explore_domain;
use chaitin_core::forge::ForgeBuilder;
use chaitin_core::machine::{run_machine, RunResult};
use chaitin_core::omega::{
    certified_bits, default_schedule, halting_from_omega, omega_bounds, OracleOutcome,
};
use chaitin_core::BigUint;

use machine_file::{
    parse_bits, parse_codebook_entries, parse_dyadic, parse_machine, parse_pr_term, render_bits,
    render_pr_term, render_table, AnyMachine,
};

#[derive(Parser)]
#[command(
    name = "chaitin",
    version,
    about = "Prefix-free machines, halting-probability intervals, and Kraft-Chaitin forging"
)]
struct Cli {
    /// Output format for results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-oriented key=value lines.
    Text,
    /// One space-separated record per line.
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Run a machine on an input string under a step budget.
    Run {
        machine: PathBuf,
        /// Input bits (`-` for the empty string).
        input: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Explore a machine's domain tree and print what was found.
    Domain {
        machine: PathBuf,
        #[arg(long)]
        depth: Option<u64>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Exact interval enclosing the machine's halting probability.
    Omega {
        machine: PathBuf,
        #[arg(long)]
        depth: Option<u64>,
        #[arg(long)]
        budget: Option<u64>,
        /// Print only the certified leading digits.
        #[arg(long)]
        bits: bool,
    },
    /// Recover halting answers from a true prefix of the machine's
    /// halting-probability digits.
    Oracle {
        machine: PathBuf,
        #[arg(long = "omega-prefix")]
        omega_prefix: String,
        /// Maximum number of enumeration rounds before giving up; round k
        /// explores to depth k with budget 2^k.
        #[arg(long = "wall-budget", default_value_t = 16)]
        wall_budget: u64,
    },
    /// Shortest known universal program producing the given string.
    Complexity {
        /// Target bits (`-` for the empty string).
        target: String,
        #[arg(long = "max-len")]
        max_len: Option<u64>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Search for refutations of "complexity of the n-digit prefix >= n - c".
    Deficiency {
        /// Digits, or a path to a file of digits.
        #[arg(long)]
        alpha: String,
        #[arg(short)]
        c: u64,
        #[arg(short)]
        n: u64,
        #[arg(long = "max-len")]
        max_len: Option<u64>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Build a machine whose halting probability is exactly the last target.
    Forge {
        /// Strictly increasing dyadic targets, comma separated.
        #[arg(long, value_delimiter = ',')]
        targets: Vec<String>,
        /// Read one target per line from standard input instead.
        #[arg(long)]
        stream: bool,
        /// Splice a universal branch in (halting probability becomes
        /// half the forged mass plus a quarter of the universal one).
        #[arg(long)]
        universal: bool,
    },
    /// Wrap the universal machine in a primitive recursive range gate.
    Gate {
        /// An s-expression term, or a path to a file holding one.
        #[arg(long)]
        term: String,
    },
    /// Canonical index of a transition-table machine.
    Encode { machine: PathBuf },
    /// Machine file of the given index.
    Decode { index: String },
    /// Universal program for machine `index` on the given input bits.
    Uencode { index: String, input: String },
    /// Run the universal machine on a program.
    Urun {
        input: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Check a codebook file for prefix-freeness and print its Kraft sum.
    KraftCheck { machine: PathBuf },
}

enum CliError {
    Contract(String),
    Inconclusive(String),
}

type CliResult = Result<(), CliError>;

fn contract<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Contract(e.to_string()))
}

/// Write one result line; a consumer that closed the pipe ends the command
/// quietly instead of failing it.
macro_rules! outln {
    ($dst:expr, $($arg:tt)*) => {
        match writeln!($dst, $($arg)*) {
            Ok(()) => {}
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => return Ok(()),
            Err(e) => return Err(CliError::Contract(e.to_string())),
        }
    };
}

/// Defaults, overridable per invocation and through the environment
/// (CHAITIN_DEPTH, CHAITIN_BUDGET).
struct Config {
    depth: u64,
    budget: u64,
}

impl Config {
    fn load() -> Config {
        let env_u64 = |key: &str| {
            std::env::var(key)
                .ok()
                .and_then(|v| v.parse::<u64>().ok())
        };
        Config {
            depth: env_u64("CHAITIN_DEPTH").unwrap_or(10),
            budget: env_u64("CHAITIN_BUDGET").unwrap_or(1000),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Contract(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_machine(path: &Path) -> Result<AnyMachine, CliError> {
    let text = contract(fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display())))?;
    contract(parse_machine(&text))
}

fn dispatch(cli: Cli) -> CliResult {
    let cfg = Config::load();
    let fmt = cli.format;
    let stdout = io::stdout();
    let mut out = stdout.lock();

    match cli.command {
        Command::Run {
            machine,
            input,
            budget,
        } => {
            let m = load_machine(&machine)?;
            let x = contract(parse_bits(&input))?;
            let r = run_machine(&m, &x, budget.unwrap_or(cfg.budget));
            print_run_result(&mut out, fmt, &r)
        }
        Command::Domain {
            machine,
            depth,
            budget,
        } => {
            let m = load_machine(&machine)?;
            let report = explore_domain(
                &m,
                depth.unwrap_or(cfg.depth),
                budget.unwrap_or(cfg.budget),
            );
            for (p, info) in &report.halting {
                match fmt {
                    Format::Text => outln!(
                        out,
                        "halt {} -> {} steps={}",
                        render_bits(p),
                        render_bits(&info.output),
                        info.steps
                    ),
                    Format::Records => outln!(
                        out,
                        "halt {} {} {}",
                        render_bits(p),
                        render_bits(&info.output),
                        info.steps
                    ),
                }
            }
            for p in &report.frontier {
                outln!(out, "open {}", render_bits(p));
            }
            let lower = report.kraft_lower();
            let upper = lower.add(&report.frontier_mass());
            match fmt {
                Format::Text => outln!(out, "lower={lower} upper={upper}"),
                Format::Records => outln!(out, "bounds {lower} {upper}"),
            }
            Ok(())
        }
        Command::Omega {
            machine,
            depth,
            budget,
            bits,
        } => {
            let m = load_machine(&machine)?;
            let iv = omega_bounds(
                &m,
                depth.unwrap_or(cfg.depth),
                budget.unwrap_or(cfg.budget),
            );
            let cert = certified_bits(&iv);
            if bits {
                outln!(out, "{}", render_bits(&cert));
            } else {
                match fmt {
                    Format::Text => outln!(
                        out,
                        "lower={} upper={} bits={}",
                        iv.lower,
                        iv.upper,
                        render_bits(&cert)
                    ),
                    Format::Records => outln!(
                        out,
                        "omega {} {} {}",
                        iv.lower,
                        iv.upper,
                        render_bits(&cert)
                    ),
                }
            }
            Ok(())
        }
        Command::Oracle {
            machine,
            omega_prefix,
            wall_budget,
        } => {
            let m = load_machine(&machine)?;
            let prefix = contract(parse_bits(&omega_prefix))?;
            if prefix.len() > 24 {
                return Err(CliError::Contract(format!(
                    "a {}-digit prefix would answer 2^{} questions; refusing beyond 24",
                    prefix.len(),
                    prefix.len() + 1
                )));
            }
            let schedule = default_schedule().take(wall_budget as usize);
            match halting_from_omega(&m, &prefix, schedule) {
                OracleOutcome::Resolved(table) => {
                    for (x, halts) in table.entries() {
                        outln!(
                            out,
                            "{} {}",
                            render_bits(x),
                            if halts { "halts" } else { "diverges" }
                        );
                    }
                    Ok(())
                }
                OracleOutcome::Inconclusive {
                    rounds_run,
                    last_lower,
                } => Err(CliError::Inconclusive(format!(
                    "found mass {last_lower} after {rounds_run} rounds, below the prefix threshold"
                ))),
            }
        }
        Command::Complexity {
            target,
            max_len,
            budget,
        } => {
            let x = contract(parse_bits(&target))?;
            let max_len = max_len.unwrap_or(print_program(&x).len() as u64);
            let w = contract(h_upper(&x, max_len, budget.unwrap_or(cfg.budget)))?;
            print_witness(&mut out, fmt, &w)
        }
        Command::Deficiency {
            alpha,
            c,
            n,
            max_len,
            budget,
        } => {
            let alpha = contract(load_bits_or_file(&alpha))?;
            if (alpha.len() as u64) < n {
                return Err(CliError::Contract(format!(
                    "alpha has {} digits but n={n} were requested",
                    alpha.len()
                )));
            }
            let max_len =
                max_len.unwrap_or(print_program(&alpha.prefix(n as usize)).len() as u64);
            let reports = deficiency_check(&alpha, c, n, max_len, budget.unwrap_or(cfg.budget));
            for r in reports {
                match (&r.verdict, fmt) {
                    (Verdict::Refuted(w), Format::Text) => outln!(
                        out,
                        "n={} refuted program={} length={}",
                        r.n,
                        render_bits(&w.program),
                        w.program_length
                    ),
                    (Verdict::Refuted(w), Format::Records) => outln!(
                        out,
                        "deficiency {} refuted {} {}",
                        r.n,
                        render_bits(&w.program),
                        w.program_length
                    ),
                    (Verdict::UnrefutedAtBudget, Format::Text) => {
                        outln!(out, "n={} unrefuted-at-budget", r.n)
                    }
                    (Verdict::UnrefutedAtBudget, Format::Records) => {
                        outln!(out, "deficiency {} unrefuted-at-budget", r.n)
                    }
                }
            }
            Ok(())
        }
        Command::Forge {
            targets,
            stream,
            universal,
        } => {
            if universal {
                outln!(out, "spliced");
            }
            let mut builder = ForgeBuilder::new();
            let mut printed = 0usize;
            let mut push_and_print = |builder: &mut ForgeBuilder,
                                      out: &mut dyn Write,
                                      raw: &str|
             -> CliResult {
                let target = contract(parse_dyadic(raw))?;
                contract(builder.push(&target))?;
                for (word, output) in &builder.codewords()[printed..] {
                    outln!(out, "{} -> {}", render_bits(word), render_bits(output));
                }
                printed = builder.codewords().len();
                Ok(())
            };
            if stream {
                let stdin = io::stdin();
                for line in stdin.lock().lines() {
                    let line = contract(line)?;
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    push_and_print(&mut builder, &mut out, line)?;
                }
            } else {
                if targets.is_empty() {
                    return Err(CliError::Contract(
                        "need --targets or --stream".to_string(),
                    ));
                }
                for t in &targets {
                    push_and_print(&mut builder, &mut out, t)?;
                }
            }
            Ok(())
        }
        Command::Gate { term } => {
            let src = if term.trim_start().starts_with('(') {
                term
            } else {
                contract(fs::read_to_string(&term).map_err(|e| format!("{term}: {e}")))?
            };
            let t = contract(parse_pr_term(&src))?;
            let g = contract(chaitin_core::gate::build_gated(t))?;
            outln!(out, "gate {}", render_pr_term(g.gate()));
            Ok(())
        }
        Command::Encode { machine } => {
            let m = load_machine(&machine)?;
            let table = match m {
                AnyMachine::Table(t) => t,
                _ => {
                    return Err(CliError::Contract(
                        "only transition-table machines have enumeration indices".to_string(),
                    ))
                }
            };
            outln!(out, "{}", encode_machine(&table));
            Ok(())
        }
        Command::Decode { index } => {
            let i: BigUint = contract(
                index
                    .parse::<BigUint>()
                    .map_err(|_| format!("bad index {index:?}")),
            )?;
            match decode_machine(&MachineIndex(i)) {
                DecodedMachine::Print(_) => outln!(out, "print"),
                DecodedMachine::Diverge(_) => outln!(out, "diverge"),
                DecodedMachine::Table(t) => {
                    for line in render_table(&t).lines() {
                        outln!(out, "{line}");
                    }
                }
            }
            Ok(())
        }
        Command::Uencode { index, input } => {
            let i: BigUint = contract(
                index
                    .parse::<BigUint>()
                    .map_err(|_| format!("bad index {index:?}")),
            )?;
            if i.bits() > 24 {
                return Err(CliError::Contract(format!(
                    "index {i} is too large to materialize a unary header"
                )));
            }
            let x = contract(parse_bits(&input))?;
            outln!(out, "{}", render_bits(&u_encode(&MachineIndex(i), &x)));
            Ok(())
        }
        Command::Urun { input, budget } => {
            let p = contract(parse_bits(&input))?;
            let r = run_universal(&p, budget.unwrap_or(cfg.budget));
            print_run_result(&mut out, fmt, &r)
        }
        Command::KraftCheck { machine } => {
            let text = contract(
                fs::read_to_string(&machine).map_err(|e| format!("{}: {e}", machine.display())),
            )?;
            let entries = contract(parse_codebook_entries(&text))?;
            let words: Vec<&BitString> = entries.iter().map(|(w, _)| w).collect();
            if !check_prefix_free(words.iter().copied()) {
                return Err(CliError::Contract("not prefix-free".to_string()));
            }
            let sum = kraft_sum(words.iter().copied());
            match fmt {
                Format::Text => outln!(out, "prefix-free sum={sum}"),
                Format::Records => outln!(out, "kraft ok {sum}"),
            }
            Ok(())
        }
    }
}

fn load_bits_or_file(value: &str) -> Result<BitString, String> {
    if value == "-" || value.chars().all(|c| c == '0' || c == '1') && !value.is_empty() {
        return parse_bits(value);
    }
    let text = fs::read_to_string(value).map_err(|e| format!("{value}: {e}"))?;
    parse_bits(text.trim())
}

fn print_run_result(out: &mut impl Write, fmt: Format, r: &RunResult) -> CliResult {
    match (r, fmt) {
        (RunResult::Halted { output, consumed }, Format::Text) => {
            outln!(out, "halted output={} consumed={consumed}", render_bits(output))
        }
        (RunResult::Halted { output, consumed }, Format::Records) => {
            outln!(out, "halted {} {consumed}", render_bits(output))
        }
        (RunResult::OutOfBudget { consumed }, Format::Text) => {
            outln!(out, "out-of-budget consumed={consumed}")
        }
        (RunResult::OutOfBudget { consumed }, Format::Records) => {
            outln!(out, "out-of-budget {consumed}")
        }
        (RunResult::InputExhausted { consumed }, Format::Text) => {
            outln!(out, "input-exhausted consumed={consumed}")
        }
        (RunResult::InputExhausted { consumed }, Format::Records) => {
            outln!(out, "input-exhausted {consumed}")
        }
    }
    Ok(())
}

fn print_witness(out: &mut impl Write, fmt: Format, w: &ComplexityWitness) -> CliResult {
    match fmt {
        Format::Text => outln!(
            out,
            "program={} length={} exhaustive-to={} budget={}",
            render_bits(&w.program),
            w.program_length,
            w.search_exhaustive_up_to,
            w.budget
        ),
        Format::Records => outln!(
            out,
            "witness {} {} {} {}",
            render_bits(&w.program),
            w.program_length,
            w.search_exhaustive_up_to,
            w.budget
        ),
    }
    Ok(())
}
