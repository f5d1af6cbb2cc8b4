//! Command-line front end. `run` returns the process exit status: 0 on
//! success, 1 when a base is refused (not Horn-NC, oracle budget exceeded),
//! 2 on unreadable or malformed input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::calculus::{Outcome, SaturateOptions};
use crate::formula::{format_rational, parse_base_lines, parse_formula, simplify_constants, Base, WeightedFormula};
use crate::hornnc::{classify_item, ItemVerdict};
use crate::semantics::{
    cl_transform_with_budget, inc_oracle_with_budget, is_horn_clausal, necessity_oracle, SemanticsError,
    DEFAULT_ATOM_BUDGET, DEFAULT_CLAUSE_BUDGET,
};
use crate::solver::{augmented, find_inc_report, FindReport, SolverError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUSED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser)]
#[command(name = "possnc", version, about = "Inconsistency degrees of possibilistic Horn-NC bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct Common {
    /// Base file: one `FORMULA : WEIGHT` per line
    file: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct Accel {
    /// Enable local unit resolution inside formulas
    #[arg(long)]
    lur: bool,
    /// Resolve all occurrences of a unit in a formula at once
    #[arg(long)]
    hur: bool,
}

impl Accel {
    fn options(&self) -> SaturateOptions {
        SaturateOptions { lur: self.lur, hur: self.hur }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Report whether every item is Horn-NC
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Inconsistency degree by the resolution calculus
    Inc {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        accel: Accel,
        /// Print the derivation of every round
        #[arg(long)]
        trace: bool,
    },
    /// Degree to which the base entails a query formula
    Entail {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        accel: Accel,
        #[arg(long)]
        query: String,
        /// Fall back to truth tables when the query makes the base non-Horn-NC
        #[arg(long)]
        oracle: bool,
    },
    /// Inconsistency degree by truth-table enumeration
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Maximum number of propositions
        #[arg(long, default_value_t = DEFAULT_ATOM_BUDGET)]
        budget: usize,
    },
    /// Clausal form of every item with its Horn verdict
    Clausal {
        #[command(flatten)]
        common: Common,
        /// Maximum number of clauses per item
        #[arg(long, default_value_t = DEFAULT_CLAUSE_BUDGET)]
        budget: usize,
    },
}

struct Loaded {
    lines: Vec<usize>,
    base: Base,
}

fn load(path: &PathBuf, err: &mut dyn Write) -> Result<Loaded, i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            return Err(EXIT_INPUT);
        }
    };
    match parse_base_lines(&text) {
        Ok(items) => {
            let (lines, items): (Vec<usize>, Vec<WeightedFormula>) = items.into_iter().unzip();
            Ok(Loaded { lines, base: Base::new(items) })
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            Err(EXIT_INPUT)
        }
    }
}

fn verdict_name(v: ItemVerdict) -> &'static str {
    match v {
        ItemVerdict::HornNc => "horn-nc",
        ItemVerdict::NotHornNc => "not horn-nc",
        ItemVerdict::Vacuous => "vacuous (true)",
        ItemVerdict::Contradiction => "contradiction (false)",
    }
}

fn emit_json(out: &mut dyn Write, v: &Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json"));
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match cli.command {
        Command::Check { common } => check(&common, out, err),
        Command::Inc { common, accel, trace } => inc(&common, accel.options(), trace, out, err),
        Command::Entail { common, accel, query, oracle } => entail(&common, accel.options(), &query, oracle, out, err),
        Command::Oracle { common, budget } => oracle(&common, budget, out, err),
        Command::Clausal { common, budget } => clausal(&common, budget, out, err),
    }
}

fn check(common: &Common, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let loaded = match load(&common.file, err) {
        Ok(l) => l,
        Err(code) => return code,
    };
    let verdicts: Vec<ItemVerdict> = loaded.base.items.iter().map(|i| classify_item(&i.formula)).collect();
    let all = verdicts.iter().all(|v| v.accepted());
    match common.format {
        Format::Text => {
            for ((line, item), v) in loaded.lines.iter().zip(&loaded.base.items).zip(&verdicts) {
                let _ = writeln!(out, "line {line}: {}  {item}", verdict_name(*v));
            }
            let _ = writeln!(out, "{}", if all { "base is Horn-NC" } else { "base is not Horn-NC" });
        }
        Format::Structured => {
            let items: Vec<Value> = loaded
                .lines
                .iter()
                .zip(&loaded.base.items)
                .zip(&verdicts)
                .map(|((line, item), v)| {
                    json!({
                        "line": line,
                        "formula": item.formula.to_string(),
                        "weight": item.weight.to_string(),
                        "verdict": verdict_name(*v),
                    })
                })
                .collect();
            emit_json(out, &json!({ "items": items, "horn_nc": all }));
        }
    }
    if all {
        EXIT_OK
    } else {
        EXIT_REFUSED
    }
}

fn refuse(e: &SolverError, lines: &[usize], err: &mut dyn Write) -> i32 {
    let SolverError::NotHornNc { index, formula } = e;
    match lines.get(*index) {
        Some(line) => {
            let _ = writeln!(err, "error: line {line}: not Horn-NC: {formula}");
        }
        None => {
            let _ = writeln!(err, "error: negated query is not Horn-NC: {formula}");
        }
    }
    EXIT_REFUSED
}

fn report_json(rep: &FindReport) -> Value {
    let rounds: Vec<Value> = rep
        .rounds
        .iter()
        .map(|r| {
            let d = &r.saturation.derivation;
            let outcome = match d.outcome {
                Outcome::EmptyClauseFound(w) => json!({ "empty_clause": w.to_string() }),
                Outcome::Fixpoint => json!("fixpoint"),
            };
            json!({
                "above": r.above.map(|w| w.to_string()),
                "base": r.base.items.iter().map(|i| i.to_string()).collect::<Vec<_>>(),
                "steps": serde_json::to_value(d.views()).expect("json"),
                "outcome": outcome,
            })
        })
        .collect();
    json!({
        "inc": format_rational(rep.inc),
        "rounds": rounds,
        "inferences": rep.inferences,
        "recursions": rep.recursions,
    })
}

fn render_trace(rep: &FindReport) -> String {
    let mut s = String::new();
    for (i, r) in rep.rounds.iter().enumerate() {
        match r.above {
            None => s.push_str(&format!("round {}: all items\n", i + 1)),
            Some(w) => s.push_str(&format!("round {}: items above {w}\n", i + 1)),
        }
        for (j, item) in r.base.items.iter().enumerate() {
            s.push_str(&format!("  #{j} {item}\n"));
        }
        s.push_str(&r.saturation.derivation.render());
    }
    s
}

fn inc(common: &Common, opts: SaturateOptions, trace: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let loaded = match load(&common.file, err) {
        Ok(l) => l,
        Err(code) => return code,
    };
    let rep = match find_inc_report(&loaded.base, opts) {
        Ok(r) => r,
        Err(e) => return refuse(&e, &loaded.lines, err),
    };
    match common.format {
        Format::Text => {
            if trace {
                let _ = write!(out, "{}", render_trace(&rep));
            }
            let _ = writeln!(out, "Inc = {}", format_rational(rep.inc));
        }
        Format::Structured => emit_json(out, &report_json(&rep)),
    }
    EXIT_OK
}

fn entail(
    common: &Common,
    opts: SaturateOptions,
    query: &str,
    use_oracle: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let loaded = match load(&common.file, err) {
        Ok(l) => l,
        Err(code) => return code,
    };
    let query = match parse_formula(query) {
        Ok(q) => q,
        Err(e) => {
            let _ = writeln!(err, "error: query: {e}");
            return EXIT_INPUT;
        }
    };
    let (value, method) = match find_inc_report(&augmented(&loaded.base, &query), opts) {
        Ok(rep) => (rep.inc, "calculus"),
        Err(e) if !use_oracle => return refuse(&e, &loaded.lines, err),
        Err(_) => match necessity_oracle(&loaded.base, &simplify_constants(&query)) {
            Ok(v) => (v, "oracle"),
            Err(e) => return oracle_error(&e, err),
        },
    };
    match common.format {
        Format::Text => {
            let _ = writeln!(out, "Necessity = {}", format_rational(value));
        }
        Format::Structured => emit_json(
            out,
            &json!({ "query": query.to_string(), "necessity": format_rational(value), "method": method }),
        ),
    }
    EXIT_OK
}

fn oracle_error(e: &SemanticsError, err: &mut dyn Write) -> i32 {
    let _ = writeln!(err, "error: {e}");
    EXIT_REFUSED
}

fn oracle(common: &Common, budget: usize, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let loaded = match load(&common.file, err) {
        Ok(l) => l,
        Err(code) => return code,
    };
    match inc_oracle_with_budget(&loaded.base, budget) {
        Ok(v) => {
            match common.format {
                Format::Text => {
                    let _ = writeln!(out, "Inc = {}", format_rational(v));
                }
                Format::Structured => emit_json(out, &json!({ "inc": format_rational(v) })),
            }
            EXIT_OK
        }
        Err(e) => oracle_error(&e, err),
    }
}

fn clausal(common: &Common, budget: usize, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let loaded = match load(&common.file, err) {
        Ok(l) => l,
        Err(code) => return code,
    };
    let mut rows = Vec::new();
    for (line, item) in loaded.lines.iter().zip(&loaded.base.items) {
        let f = simplify_constants(&item.formula);
        match cl_transform_with_budget(&f, budget) {
            Ok(cl) => rows.push((*line, item, cl.to_string(), is_horn_clausal(&cl))),
            Err(SemanticsError::ClauseBudget(b)) => {
                let _ = writeln!(err, "error: line {line}: clausal form exceeds {b} clauses");
                return EXIT_REFUSED;
            }
            Err(e) => return oracle_error(&e, err),
        }
    }
    match common.format {
        Format::Text => {
            for (line, item, text, horn) in &rows {
                let verdict = if *horn { "horn" } else { "not horn" };
                let _ = writeln!(out, "line {line}: {verdict}  {text} : {}", item.weight);
            }
        }
        Format::Structured => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(line, item, text, horn)| {
                    json!({ "line": line, "clausal": text, "weight": item.weight.to_string(), "horn": horn })
                })
                .collect();
            emit_json(out, &json!({ "items": items }));
        }
    }
    EXIT_OK
}
