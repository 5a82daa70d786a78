use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use kahyp::automata::{to_dot, NfaJson};
use kahyp::closure::{RoundReport, DEFAULT_MAX_STATES};
use kahyp::oracle::stabilized_closure;
use kahyp::syntax::{parse_expr_in, parse_hypotheses, parse_hypotheses_in};
use kahyp::{
    parse_expr, reduce_seq_observed, thompson, Alphabet, ClosureConfig, Expr, Hypothesis, Nfa, ReductionOutcome,
    Variant, Verdict,
};

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_UNDEFINED: u8 = 2;
const EXIT_INEQUIVALENT: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "kahyp",
    version,
    about = "Regular-expression equivalence under hypotheses e <= w"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Close an expression under the hypotheses and print the result.
    Reduce {
        expr: String,
        #[command(flatten)]
        common: Common,
        /// Write one DOT file per round into this directory.
        #[arg(long, value_name = "DIR")]
        frames: Option<PathBuf>,
    },
    /// Decide whether two expressions are equal modulo the hypotheses.
    Equiv {
        left: String,
        right: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the words of the hypothesis closure up to a length.
    ClosureSample {
        expr: String,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        len: usize,
        #[arg(long, default_value_t = 4)]
        slack: usize,
    },
    /// Export the Thompson automaton, or its closure, as DOT or JSON.
    Dot {
        expr: String,
        #[command(flatten)]
        common: Common,
        /// Export the closed automaton instead of the Thompson automaton.
        #[arg(long)]
        closed: bool,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    T0,
    Th,
}

#[derive(Args, Debug)]
struct Common {
    /// Hypothesis `e <= w` or `u == w`; repeatable, applied in order.
    #[arg(short = 'H', long = "hyp", value_name = "HYP")]
    hyps: Vec<String>,
    /// File with one hypothesis per line; `#` starts a comment.
    #[arg(long, value_name = "PATH")]
    hyp_file: Option<PathBuf>,
    /// Comma-separated alphabet; inferred from the inputs when absent.
    #[arg(long)]
    alphabet: Option<String>,
    #[arg(long, value_enum, default_value = "th")]
    variant: VariantArg,
    #[arg(long, default_value_t = kahyp::closure::DEFAULT_MAX_ROUNDS, value_parser = clap::value_parser!(u32).range(1..))]
    max_rounds: u32,
    /// Defaults to $KAHYP_MAX_STATES, then 10000.
    #[arg(long)]
    max_states: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Include the per-round patch log.
    #[arg(long)]
    trace: bool,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

impl Common {
    fn alphabet(&self) -> Result<Option<Alphabet>, Failure> {
        match &self.alphabet {
            Some(a) => Ok(Some(
                Alphabet::parse(a).map_err(|e| Failure(format!("--alphabet: {e}")))?,
            )),
            None => Ok(None),
        }
    }

    fn expr(&self, text: &str) -> Result<Expr, Failure> {
        let parsed = match self.alphabet()? {
            Some(a) => parse_expr_in(text, &a),
            None => parse_expr(text),
        };
        parsed.map_err(|e| Failure(format!("in {text:?}: {e}")))
    }

    fn hypotheses(&self) -> Result<Vec<Hypothesis>, Failure> {
        let alphabet = self.alphabet()?;
        let parse = |line: &str| match &alphabet {
            Some(a) => parse_hypotheses_in(line, a),
            None => parse_hypotheses(line),
        };
        let mut out = Vec::new();
        for h in &self.hyps {
            out.extend(parse(h).map_err(|e| Failure(format!("in hypothesis {h:?}: {e}")))?);
        }
        if let Some(path) = &self.hyp_file {
            let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            for (n, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("");
                if line.trim().is_empty() {
                    continue;
                }
                out.extend(parse(line).map_err(|e| Failure(format!("{}:{}: {e}", path.display(), n + 1)))?);
            }
        }
        Ok(out)
    }

    fn config(&self) -> Result<ClosureConfig, Failure> {
        let max_states = match self.max_states {
            Some(n) => n,
            None => match std::env::var("KAHYP_MAX_STATES") {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Failure(format!("KAHYP_MAX_STATES: not a number: {v:?}")))?,
                Err(_) => DEFAULT_MAX_STATES,
            },
        };
        if max_states == 0 {
            return Err(Failure("max states must be positive".into()));
        }
        let variant = match self.variant {
            VariantArg::T0 => Variant::T0,
            VariantArg::Th => Variant::TH,
        };
        Ok(ClosureConfig::with_variant(variant)
            .max_rounds(self.max_rounds)
            .max_states(max_states))
    }
}

#[derive(Serialize)]
struct PatchJson {
    site: u32,
    copy_size: usize,
    return_targets: Vec<u32>,
}

#[derive(Serialize)]
struct RoundJson {
    hypothesis: usize,
    round: u32,
    states: usize,
    patches: Vec<PatchJson>,
}

fn round_json(i: usize, r: &RoundReport<'_>) -> RoundJson {
    RoundJson {
        hypothesis: i,
        round: r.round,
        states: r.automaton.state_count(),
        patches: r
            .patches
            .iter()
            .map(|p| PatchJson {
                site: p.site.0,
                copy_size: p.copy_states.len(),
                return_targets: p.return_targets.iter().map(|s| s.0).collect(),
            })
            .collect(),
    }
}

fn print_json(v: &impl Serialize) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn reduce(
    g: &Expr,
    hs: &[Hypothesis],
    cfg: &ClosureConfig,
    frames: Option<&PathBuf>,
) -> Result<(ReductionOutcome, Vec<RoundJson>), Failure> {
    if let Some(dir) = frames {
        fs::create_dir_all(dir).map_err(|e| Failure(format!("{}: {e}", dir.display())))?;
        fs::write(dir.join("round-00.dot"), to_dot(&thompson(g)))?;
    }
    let mut trace = Vec::new();
    let mut io_error = None;
    let mut frame = 0;
    let outcome = reduce_seq_observed(g, hs, cfg, |i, r| {
        trace.push(round_json(i, r));
        if let Some(dir) = frames {
            frame += 1;
            let path = dir.join(format!("round-{frame:02}.dot"));
            if let Err(e) = fs::write(&path, to_dot(r.automaton)) {
                io_error.get_or_insert(format!("{}: {e}", path.display()));
            }
        }
    })?;
    if let Some(e) = io_error {
        return Err(Failure(e));
    }
    Ok((outcome, trace))
}

fn cmd_reduce(expr: &str, common: &Common, frames: Option<&PathBuf>) -> Result<u8, Failure> {
    let g = common.expr(expr)?;
    let hs = common.hypotheses()?;
    let cfg = common.config()?;
    let (outcome, trace) = reduce(&g, &hs, &cfg, frames)?;
    let code = if outcome.is_reduced() { EXIT_OK } else { EXIT_UNDEFINED };
    match common.format {
        Format::Json => {
            let mut v = match &outcome {
                ReductionOutcome::Reduced {
                    expr,
                    automaton,
                    rounds,
                    certified,
                    ..
                } => json!({
                    "result": "reduced",
                    "expr": expr.to_string(),
                    "rounds": rounds,
                    "states": automaton.state_count(),
                    "certified": certified,
                }),
                ReductionOutcome::Undefined {
                    reason,
                    partial,
                    rounds,
                    failing_index,
                } => json!({
                    "result": "undefined",
                    "reason": reason,
                    "rounds": rounds,
                    "states": partial.state_count(),
                    "failing_index": failing_index,
                }),
            };
            if common.trace {
                v["trace"] = serde_json::to_value(&trace)?;
            }
            print_json(&v)?;
        }
        Format::Text => {
            if common.trace {
                for r in &trace {
                    eprintln!(
                        "hypothesis {} round {}: {} patch(es), {} states",
                        r.hypothesis,
                        r.round,
                        r.patches.len(),
                        r.states
                    );
                    for p in &r.patches {
                        eprintln!(
                            "  site {} copy {} states, returns to {:?}",
                            p.site, p.copy_size, p.return_targets
                        );
                    }
                }
            }
            match &outcome {
                ReductionOutcome::Reduced { expr, .. } => println!("{expr}"),
                ReductionOutcome::Undefined {
                    reason,
                    rounds,
                    partial,
                    failing_index,
                } => {
                    let which = failing_index.map(|i| format!(", hypothesis #{i}")).unwrap_or_default();
                    println!(
                        "UNDEFINED ({reason} exhausted after {rounds} rounds, {} states{which})",
                        partial.state_count()
                    );
                }
            }
        }
    }
    Ok(code)
}

fn cmd_equiv(left: &str, right: &str, common: &Common) -> Result<u8, Failure> {
    let g = common.expr(left)?;
    let f = common.expr(right)?;
    let hs = common.hypotheses()?;
    let cfg = common.config()?;
    let d = kahyp::ka_h_equiv(&g, &f, &hs, &cfg)?;
    match common.format {
        Format::Json => print_json(&d)?,
        Format::Text => match &d.verdict {
            Verdict::Equivalent => println!("EQUIVALENT"),
            Verdict::Inequivalent { witness, side } => println!("INEQUIVALENT witness={witness} side={side}"),
            Verdict::Unknown { reason, details } => println!("UNKNOWN ({reason}: {details})"),
        },
    }
    Ok(match d.verdict {
        Verdict::Equivalent => EXIT_OK,
        Verdict::Inequivalent { .. } => EXIT_INEQUIVALENT,
        Verdict::Unknown { .. } => EXIT_UNDEFINED,
    })
}

fn cmd_closure_sample(expr: &str, common: &Common, len: usize, slack: usize) -> Result<u8, Failure> {
    let g = common.expr(expr)?;
    let hs = common.hypotheses()?;
    let sample = stabilized_closure(&g, &hs, len, slack);
    let words: Vec<String> = sample.fragment.iter().map(|w| w.to_string()).collect();
    match common.format {
        Format::Json => print_json(&json!({
            "words": words,
            "len": len,
            "slack": sample.slack,
            "stabilized": sample.stabilized,
        }))?,
        Format::Text => {
            println!("{}", words.join(" "));
            if sample.stabilized {
                println!("# stabilized at slack {}", sample.slack);
            } else {
                println!("# not stabilized (last slack {})", sample.slack);
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_dot(expr: &str, common: &Common, closed: bool, output: Option<&PathBuf>) -> Result<u8, Failure> {
    let g = common.expr(expr)?;
    let (m, code): (Nfa, u8) = if closed {
        let hs = common.hypotheses()?;
        let (outcome, _) = reduce(&g, &hs, &common.config()?, None)?;
        if !outcome.is_reduced() {
            eprintln!("warning: closure did not finish; exporting the partial automaton");
        }
        let code = if outcome.is_reduced() { EXIT_OK } else { EXIT_UNDEFINED };
        (outcome.automaton().clone(), code)
    } else {
        (thompson(&g), EXIT_OK)
    };
    let text = match common.format {
        Format::Text => to_dot(&m),
        Format::Json => serde_json::to_string_pretty(&NfaJson::from(&m))? + "\n",
    };
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Reduce { expr, common, frames } => cmd_reduce(expr, common, frames.as_ref()),
        Command::Equiv { left, right, common } => cmd_equiv(left, right, common),
        Command::ClosureSample {
            expr,
            common,
            len,
            slack,
        } => cmd_closure_sample(expr, common, *len, *slack),
        Command::Dot {
            expr,
            common,
            closed,
            output,
        } => cmd_dot(expr, common, *closed, output.as_ref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
