//! Command-line front end: construct, verify, search, sweep, dump-blocks.

mod sweep;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use heffter::dispatch::{
    construct_heffter_with_budget, construct_mr_with_budget, construct_sma_with_budget, heffter_case, HeffterCase,
};
use heffter::io::{parse_grid, render, to_json, Format};
use heffter::nice_pairs::nice_pair_with_budget;
use heffter::oracle::{search_heffter, search_sma, SearchBudget, SearchOutcome};
use heffter::s0k0::build_plan;
use heffter::verify::{verify_integer_heffter, verify_mr, verify_sma, Certificate};
use heffter::{Error, Grid, HeffterParams};

/// Environment variable holding the default search budget, `NODES[,SECONDS]`.
pub(crate) const BUDGET_ENV: &str = "HEFFTER_ORACLE_BUDGET";

/// Process exit codes.
pub(crate) mod exit {
    pub(crate) const OK: u8 = 0;
    pub(crate) const FAILURE: u8 = 1;
    pub(crate) const VERIFY_FAILED: u8 = 2;
    pub(crate) const UNSUPPORTED: u8 = 3;
    pub(crate) const EXHAUSTED: u8 = 4;
    pub(crate) const USAGE: u8 = 64;
}

#[derive(Parser)]
#[command(name = "heffter", version, about = "Construct and verify Heffter arrays, signed magic arrays and magic rectangles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an array and check it before writing it out.
    Construct(ConstructArgs),
    /// Check an array read from a JSON or CSV file.
    Verify(VerifyArgs),
    /// Look for an array by bounded backtracking.
    Search(ConstructArgs),
    /// Construct and verify every valid tuple in a range.
    Sweep(SweepArgs),
    /// Print the building blocks a construction uses.
    DumpBlocks(ConstructArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Object {
    Heffter,
    Sma,
    Mr,
}

impl Object {
    fn name(self) -> &'static str {
        match self {
            Object::Heffter => "heffter",
            Object::Sma => "sma",
            Object::Mr => "mr",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Pretty,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Pretty => Format::Pretty,
        }
    }
}

#[derive(Args)]
struct Shape {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    k: usize,
    /// Multiplicity (Heffter arrays only).
    #[arg(long)]
    lambda: Option<usize>,
    /// Subgroup order (Heffter arrays only).
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Args)]
struct ConstructArgs {
    object: Object,
    #[command(flatten)]
    shape: Shape,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Search budget `NODES[,SECONDS]`; overrides the environment.
    #[arg(long)]
    budget: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    object: Object,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    lambda: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    /// Expected row count; checked against the file.
    #[arg(long)]
    m: Option<usize>,
    /// Expected column count; checked against the file.
    #[arg(long)]
    n: Option<usize>,
    /// Print the full certificate as JSON.
    #[arg(long)]
    json: bool,
    /// Input file, `-` for standard input.
    file: PathBuf,
}

#[derive(Args)]
pub(crate) struct SweepArgs {
    pub(crate) object: Object,
    #[arg(long, default_value_t = 4)]
    pub(crate) min_m: usize,
    #[arg(long, default_value_t = 12)]
    pub(crate) max_m: usize,
    #[arg(long, default_value_t = 4)]
    pub(crate) min_n: usize,
    #[arg(long, default_value_t = 12)]
    pub(crate) max_n: usize,
    #[arg(long, value_enum, default_value = "pretty")]
    format: FormatArg,
    #[arg(long)]
    pub(crate) budget: Option<String>,
}

/// A failure carrying its exit code.
struct Exit {
    code: u8,
    error: anyhow::Error,
}

impl Exit {
    fn new(code: u8, error: anyhow::Error) -> Self {
        Exit { code, error }
    }
}

impl From<anyhow::Error> for Exit {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(e) => code_for(e),
            None => exit::FAILURE,
        };
        Exit { code, error }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        Exit::new(code_for(&e), e.into())
    }
}

fn code_for(e: &Error) -> u8 {
    match e {
        Error::Unsupported(_) => exit::UNSUPPORTED,
        Error::Exhausted(_) => exit::EXHAUSTED,
        Error::InvalidParams(_) | Error::Parse(_) => exit::USAGE,
        _ => exit::VERIFY_FAILED,
    }
}

type CliResult = std::result::Result<(), Exit>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    let outcome = match cli.command {
        Command::Construct(a) => construct(&a),
        Command::Verify(a) => verify(&a),
        Command::Search(a) => search(&a),
        Command::Sweep(a) => sweep::run(&a, a.format.into()),
        Command::DumpBlocks(a) => dump_blocks(&a),
    };
    match outcome {
        Ok(()) => ExitCode::from(exit::OK),
        Err(Exit { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}

/// Budget from the flag, else the environment, else the default.
pub(crate) fn budget_from(flag: Option<&str>) -> std::result::Result<SearchBudget, Exit> {
    let text = match flag {
        Some(t) => Some(t.to_string()),
        None => std::env::var(BUDGET_ENV).ok(),
    };
    match text {
        Some(t) => SearchBudget::parse(&t)
            .map_err(|e| Exit::new(exit::USAGE, anyhow!(e).context("invalid search budget"))),
        None => Ok(SearchBudget::default()),
    }
}

fn heffter_params(shape: &Shape) -> std::result::Result<HeffterParams, Exit> {
    let (Some(lambda), Some(t)) = (shape.lambda, shape.t) else {
        return Err(Exit::new(exit::USAGE, anyhow!("heffter arrays need --lambda and --t")));
    };
    Ok(HeffterParams::new(shape.m, shape.n, shape.s, shape.k, lambda, t)?)
}

fn usage(msg: String) -> Exit {
    Exit::new(exit::USAGE, anyhow!(msg))
}

fn write_out(text: &str, path: Option<&PathBuf>) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).context("writing output")?;
        }
    }
    Ok(())
}

fn check(cert: &Certificate, what: &str) -> CliResult {
    if cert.ok {
        return Ok(());
    }
    let first = cert.violations.first().map_or(String::new(), |v| format!(": {}", v.detail));
    Err(Exit::new(
        exit::VERIFY_FAILED,
        anyhow!("{what} failed verification ({} violations){first}", cert.total),
    ))
}

/// Runs the verifier matching `object` on `g`.
pub(crate) fn certify(object: Object, g: &Grid, s: usize, k: usize, p: Option<&HeffterParams>) -> Certificate {
    match (object, p) {
        (Object::Heffter, Some(p)) => verify_integer_heffter(g, p),
        (Object::Sma, _) => verify_sma(g, s, k),
        (Object::Mr, _) => verify_mr(g, s, k),
        (Object::Heffter, None) => unreachable!("heffter verification needs parameters"),
    }
}

fn construct(a: &ConstructArgs) -> CliResult {
    let budget = budget_from(a.budget.as_deref())?;
    let sh = &a.shape;
    let (grid, params) = match a.object {
        Object::Heffter => {
            let p = heffter_params(sh)?;
            (construct_heffter_with_budget(&p, &budget)?, Some(p))
        }
        Object::Sma => (construct_sma_with_budget(sh.m, sh.n, sh.s, sh.k, &budget)?, None),
        Object::Mr => (construct_mr_with_budget(sh.m, sh.n, sh.s, sh.k, &budget)?, None),
    };
    write_out(&render(&grid, a.format.into()), a.output.as_ref())?;
    check(&certify(a.object, &grid, sh.s, sh.k, params.as_ref()), a.object.name())
}

fn verify(a: &VerifyArgs) -> CliResult {
    let text = if a.file.as_os_str() == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).context("reading standard input")?;
        buf
    } else {
        fs::read_to_string(&a.file).with_context(|| format!("reading {}", a.file.display()))?
    };
    let g = parse_grid(&text)?;
    for (want, got, name) in [(a.m, g.rows(), "rows"), (a.n, g.cols(), "columns")] {
        if let Some(want) = want.filter(|&w| w != got) {
            return Err(Exit::new(exit::VERIFY_FAILED, anyhow!("array has {got} {name}, expected {want}")));
        }
    }
    let params = match a.object {
        Object::Heffter => {
            let shape = Shape {
                m: g.rows(),
                n: g.cols(),
                s: a.s,
                k: a.k,
                lambda: a.lambda,
                t: a.t,
            };
            Some(heffter_params(&shape)?)
        }
        _ => None,
    };
    let cert = certify(a.object, &g, a.s, a.k, params.as_ref());
    let report = if a.json {
        serde_json::to_string_pretty(&cert).context("serializing certificate")? + "\n"
    } else if cert.ok {
        "ok\n".to_string()
    } else {
        let mut lines = format!("FAILED ({} violations)\n", cert.total);
        for v in &cert.violations {
            lines += &format!("  {}: {}\n", v.clause, v.detail);
        }
        lines
    };
    write_out(&report, None)?;
    check(&cert, a.object.name())
}

fn search(a: &ConstructArgs) -> CliResult {
    let budget = budget_from(a.budget.as_deref())?;
    let sh = &a.shape;
    let (outcome, params) = match a.object {
        Object::Heffter => {
            let p = heffter_params(sh)?;
            (search_heffter(&p, &budget), Some(p))
        }
        Object::Sma => (search_sma(sh.m, sh.n, sh.s, sh.k, &budget), None),
        Object::Mr => return Err(usage("search supports heffter and sma only".into())),
    };
    match outcome {
        SearchOutcome::Found(g) => {
            write_out(&render(&g, a.format.into()), a.output.as_ref())?;
            check(&certify(a.object, &g, sh.s, sh.k, params.as_ref()), a.object.name())
        }
        SearchOutcome::NotFound => Err(Exit::new(
            exit::UNSUPPORTED,
            anyhow!("the search space is exhausted: no such array exists"),
        )),
        SearchOutcome::Exhausted => Err(Error::Exhausted("search stopped before finishing".into()).into()),
    }
}

fn dump_blocks(a: &ConstructArgs) -> CliResult {
    let budget = budget_from(a.budget.as_deref())?;
    let sh = &a.shape;
    let p = match a.object {
        Object::Heffter => heffter_params(sh)?,
        Object::Sma => HeffterParams::new(sh.m, sh.n, sh.s, sh.k, 2, 1)?,
        Object::Mr => return Err(usage("dump-blocks supports heffter and sma only".into())),
    };
    let case = heffter_case(&p)?;
    // The transposed and tall cases are built from the swapped tuple.
    let source = match case {
        HeffterCase::ColumnsTwo => p.transposed(),
        HeffterCase::BothTwoEven if p.m < p.n => p.transposed(),
        _ => p,
    };
    let format: Format = a.format.into();
    let text = if case == HeffterCase::BothZero {
        let plan = build_plan(&p)?;
        match format {
            Format::Json => {
                let doc = serde_json::json!({
                    "params": p,
                    "recipe": format!("{:?}", plan.recipe),
                    "template": serde_json::from_str::<serde_json::Value>(&to_json(&plan.template.grid)).context("block json")?,
                    "offsets": plan.plan.offsets,
                });
                serde_json::to_string_pretty(&doc).context("serializing blocks")? + "\n"
            }
            _ => format!(
                "{p}: {:?}\ntemplate:\n{}offsets: {:?}\n",
                plan.recipe,
                render(&plan.template.grid, Format::Pretty),
                plan.plan.offsets
            ),
        }
    } else {
        let (pair, f) = nice_pair_with_budget(&source, &budget)?;
        match format {
            Format::Json => {
                let seq = |s: &[heffter::blocks::Block]| -> anyhow::Result<Vec<serde_json::Value>> {
                    s.iter()
                        .map(|b| serde_json::from_str(&to_json(&b.grid)).context("block json"))
                        .collect()
                };
                let doc = serde_json::json!({
                    "params": source,
                    "lambda1": f.lambda1,
                    "lambda2": f.lambda2,
                    "first": seq(&pair.first)?,
                    "second": seq(&pair.second)?,
                });
                serde_json::to_string_pretty(&doc).context("serializing blocks")? + "\n"
            }
            _ => {
                let mut out = format!("{source}: lambda1={} lambda2={}\n", f.lambda1, f.lambda2);
                for (name, seq) in [("first", &pair.first), ("second", &pair.second)] {
                    for (i, b) in seq.iter().enumerate() {
                        out += &format!("{name} {}:\n{}", i + 1, render(&b.grid, format));
                    }
                }
                out
            }
        }
    };
    write_out(&text, a.output.as_ref())
}
