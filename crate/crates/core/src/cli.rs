//! Command-line front end. Every subcommand produces one JSON report
//! (`construct` and `enumerate` can emit plain graph6 instead).
//!
//! Exit codes: 0 when every assertion passes, 1 on an assertion failure,
//! 2 on a usage or input error.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::blowup::check_g_leading;
use crate::constructions::{grotzsch, FamilyParams};
use crate::enumerate::{brute_force_all, ingest_graph6, EnumFilter, TriangleFreeEnumerator};
use crate::exact::{parse_rational, q, qf, Q};
use crate::graph::{canonical_form, graph6_decode, graph6_encode, Graph};
use crate::spectral::{compare_rho_graphs, rho_graph, DEFAULT_MAX_ITERATIONS};
use crate::verify::{self, PerturbationBound, PerturbationSpec, Prediction, Verdict};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Verify(#[from] verify::VerifyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }
}

macro_rules! from_as_usage {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                Self::Usage(e.to_string())
            }
        }
    )*};
}
from_as_usage!(
    crate::constructions::ConstructionError,
    crate::enumerate::EnumerateError,
    crate::spectral::SpectralError,
    crate::blowup::BlowupError,
    crate::graph::Graph6Error
);

// ---------------------------------------------------------------------------
// Arguments
// ---------------------------------------------------------------------------

#[derive(Debug, Parser)]
#[command(
    name = "spectral-extremal",
    version,
    about = "Certified spectral extremal graph checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Seed for property runs.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Interval width target, as a decimal or fraction.
    #[arg(long, default_value = "1e-9", global = true)]
    pub tol: String,
    /// Refinement iterations allowed per certified comparison.
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS, global = true)]
    pub budget: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Omit timing so reports are byte-identical across runs.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Worker threads (defaults to all cores). Never affects output.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a named graph family member.
    Construct(ConstructArgs),
    /// Enumerate triangle-free graphs up to isomorphism.
    Enumerate(EnumerateArgs),
    /// Certified spectral radius of graph6 input.
    CertifyRho(CertifyArgs),
    /// Certified ordering of two spectral radii.
    Compare(CompareArgs),
    /// Exhaustive edge or spectral maximisers.
    Extremal(ExtremalArgs),
    /// Check one quantitative claim.
    Check(CheckArgs),
    /// Run the full acceptance suite.
    VerifyAll(VerifyAllArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Grotzsch,
    F1,
    F1n,
    F2,
    F3,
    Turan,
    Bipartite,
    Sk,
    KabK3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Graph6,
    Json,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub s: Option<u64>,
    #[arg(long)]
    pub t: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    /// Three class sizes for `f1n`, e.g. `2,1,1`.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub split: Option<Vec<u64>>,
    #[arg(long)]
    pub swapped: bool,
    #[arg(long, value_enum, default_value = "graph6")]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct FilterArgs {
    /// Accepted for clarity; enumeration is always triangle-free.
    #[arg(long)]
    pub triangle_free: bool,
    #[arg(long, default_value_t = 0)]
    pub min_chromatic: usize,
    #[arg(long)]
    pub connected: bool,
    #[arg(long)]
    pub non_bipartite: bool,
}

impl FilterArgs {
    fn filter(&self) -> EnumFilter {
        let mut f = EnumFilter::triangle_free().with_min_chromatic(self.min_chromatic);
        if self.connected {
            f = f.connected();
        }
        if self.non_bipartite {
            f = f.non_bipartite();
        }
        f
    }
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[arg(long, value_enum, default_value = "graph6")]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// A graph6 string.
    #[arg(long, conflicts_with = "input")]
    pub graph6: Option<String>,
    /// File of graph6 lines, or `-` for standard input.
    #[arg(long)]
    pub input: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ObjectiveArg {
    Edges,
    Rho,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "edges")]
    pub objective: ObjectiveArg,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    BalancedBlowup,
    Interval,
    GLeading,
    Nosal,
    VertexDeletion,
    Perturbation,
    SpectralTuran,
    EdgeIdentity,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub claim: Claim,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub graph6: Option<String>,
    #[arg(long)]
    pub u: Option<usize>,
    /// Rational `x` for `g-leading`.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<i64>,
    /// Part sizes for `perturbation`, non-increasing, e.g. `50,50`.
    #[arg(long, value_delimiter = ',')]
    pub parts: Option<Vec<usize>>,
    /// Added class pairs, e.g. `0-1,2-3`.
    #[arg(long, value_delimiter = ',')]
    pub added: Vec<String>,
    /// Deleted cross pairs, e.g. `0-50`.
    #[arg(long, value_delimiter = ',')]
    pub deleted: Vec<String>,
    #[arg(long)]
    pub k: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyAllArgs {
    #[command(flatten)]
    pub common: Common,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Self::Construct(a) => &a.common,
            Self::Enumerate(a) => &a.common,
            Self::CertifyRho(a) => &a.common,
            Self::Compare(a) => &a.common,
            Self::Extremal(a) => &a.common,
            Self::Check(a) => &a.common,
            Self::VerifyAll(a) => &a.common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Self::Construct(_) => "construct",
            Self::Enumerate(_) => "enumerate",
            Self::CertifyRho(_) => "certify-rho",
            Self::Compare(_) => "compare",
            Self::Extremal(_) => "extremal",
            Self::Check(_) => "check",
            Self::VerifyAll(_) => "verify-all",
        }
    }
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

fn assertion(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Assertion {
    Assertion {
        name: name.into(),
        status: if pass { Status::Pass } else { Status::Fail },
        detail: detail.into(),
    }
}

fn recorded(name: impl Into<String>, detail: impl Into<String>) -> Assertion {
    Assertion {
        name: name.into(),
        status: Status::NotApplicable,
        detail: detail.into(),
    }
}

#[derive(Debug, Serialize)]
struct Determinism {
    seed: u64,
    tol: String,
    budget: usize,
}

#[derive(Debug, Serialize)]
struct Report {
    tool_version: &'static str,
    command: &'static str,
    params: Value,
    result: Value,
    assertions: Vec<Assertion>,
    determinism: Determinism,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Value>,
}

enum Output {
    Report {
        params: Value,
        result: Value,
        assertions: Vec<Assertion>,
    },
    /// Plain lines (graph6 streams).
    Lines(Vec<String>),
}

fn report(params: Value, result: Value, assertions: Vec<Assertion>) -> Output {
    Output::Report {
        params,
        result,
        assertions,
    }
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    2
                }
            };
        }
    };
    let common = cli.command.common().clone();
    // read standard input up front so the work can move onto the pool
    let mut input = Vec::new();
    if matches!(&cli.command, Command::CertifyRho(a) if a.input.as_deref() == Some("-")) {
        if let Err(e) = stdin.read_to_end(&mut input) {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    }
    let stdin: &[u8] = &input;
    let outcome = match common.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
        {
            Ok(pool) => pool.install(|| execute(&cli.command, &common, stdin)),
            Err(e) => Err(CliError::usage(e.to_string())),
        },
        None => execute(&cli.command, &common, stdin),
    };
    match outcome {
        Ok((output, elapsed)) => emit(&cli.command, &common, output, elapsed, stdout, stderr),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn emit(
    command: &Command,
    common: &Common,
    output: Output,
    elapsed_ms: u128,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let (text, failed) = match output {
        Output::Lines(lines) => {
            let mut text = lines.join("\n");
            if !lines.is_empty() {
                text.push('\n');
            }
            (text, false)
        }
        Output::Report {
            params,
            result,
            assertions,
        } => {
            let failed = assertions.iter().any(|a| a.status == Status::Fail);
            let r = Report {
                tool_version: TOOL_VERSION,
                command: command.name(),
                params,
                result,
                assertions,
                determinism: Determinism {
                    seed: common.seed,
                    tol: common.tol.clone(),
                    budget: common.budget,
                },
                timing: (!common.deterministic).then(|| json!({ "elapsed_ms": elapsed_ms })),
            };
            let mut text = serde_json::to_string_pretty(&r).expect("report serialises");
            text.push('\n');
            (text, failed)
        }
    };
    let written = match &common.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    i32::from(failed)
}

fn execute(command: &Command, common: &Common, stdin: &[u8]) -> Result<(Output, u128), CliError> {
    let start = Instant::now();
    let tol = parse_rational(&common.tol)
        .filter(|t| *t > Q::from_integer(0.into()))
        .ok_or_else(|| {
            CliError::usage(format!("--tol: not a positive rational: {}", common.tol))
        })?;
    let out = match command {
        Command::Construct(a) => construct(a)?,
        Command::Enumerate(a) => enumerate(a)?,
        Command::CertifyRho(a) => certify(a, &tol, stdin)?,
        Command::Compare(a) => compare(a, common.budget)?,
        Command::Extremal(a) => extremal(a, &tol, common.budget)?,
        Command::Check(a) => check(a, &tol, common)?,
        Command::VerifyAll(_) => verify_all(&tol, common)?,
    };
    Ok((out, start.elapsed().as_millis()))
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::usage(format!("missing --{flag}")))
}

fn family_params(a: &ConstructArgs) -> Result<FamilyParams, CliError> {
    Ok(match a.family {
        Family::Grotzsch => FamilyParams::Grotzsch,
        Family::F1 => FamilyParams::F1St {
            s: need(a.s, "s")?,
            t: need(a.t, "t")?,
        },
        Family::F2 => FamilyParams::F2St {
            s: need(a.s, "s")?,
            t: need(a.t, "t")?,
        },
        Family::F3 => FamilyParams::F3St {
            s: need(a.s, "s")?,
            t: need(a.t, "t")?,
        },
        Family::F1n => {
            let split = a
                .split
                .as_deref()
                .ok_or_else(|| CliError::usage("missing --split"))?;
            FamilyParams::F1N {
                n: need(a.n, "n")?,
                split: [split[0], split[1], split[2]],
                swapped: a.swapped,
            }
        }
        Family::Turan => FamilyParams::Turan {
            n: need(a.n, "n")? as usize,
            r: need(a.r, "r")?,
        },
        Family::Bipartite => FamilyParams::CompleteBipartite {
            a: need(a.a, "a")?,
            b: need(a.b, "b")?,
        },
        Family::Sk => FamilyParams::SkAb {
            a: need(a.a, "a")?,
            b: need(a.b, "b")?,
        },
        Family::KabK3 => FamilyParams::KabCircK3 {
            a: need(a.a, "a")?,
            b: need(a.b, "b")?,
        },
    })
}

fn construct(a: &ConstructArgs) -> Result<Output, CliError> {
    let params = family_params(a)?;
    let g = params.build()?;
    let g6 = graph6_encode(&g);
    Ok(match a.format {
        Format::Graph6 => Output::Lines(vec![g6]),
        Format::Json => report(
            serde_json::to_value(params).expect("plain data"),
            json!({ "graph6": g6, "order": g.order(), "size": g.size() }),
            Vec::new(),
        ),
    })
}

fn enumerate(a: &EnumerateArgs) -> Result<Output, CliError> {
    let filter = a.filter.filter();
    let e = TriangleFreeEnumerator::new(a.n, filter)?;
    let lines: Vec<String> = e
        .par_fold(Vec::new, |acc: &mut Vec<String>, g| {
            acc.push(graph6_encode(&g))
        })
        .into_iter()
        .flatten()
        .collect();
    if a.format == Format::Graph6 {
        return Ok(Output::Lines(lines));
    }
    let mut hasher = Sha256::new();
    for l in &lines {
        hasher.update(l.as_bytes());
        hasher.update(b"\n");
    }
    Ok(report(
        json!({ "n": a.n, "filter": filter }),
        json!({
            "count": lines.len(),
            "stream_sha256": hex::encode(hasher.finalize()),
            "empty_by_theory": filter.empty_by_theory(a.n),
        }),
        Vec::new(),
    ))
}

fn decode(text: &str) -> Result<Graph, CliError> {
    graph6_decode(text.trim()).map_err(|e| CliError::usage(format!("{text:?}: {e}")))
}

fn certify(a: &CertifyArgs, tol: &Q, mut stdin: &[u8]) -> Result<Output, CliError> {
    let graphs: Vec<Graph> = match (&a.graph6, a.input.as_deref()) {
        (Some(g), None) => vec![decode(g)?],
        (None, Some("-")) => collect_graph6(&mut stdin)?,
        (None, Some(path)) => {
            let file = std::fs::File::open(path)?;
            collect_graph6(&mut std::io::BufReader::new(file))?
        }
        _ => return Err(CliError::usage("give --graph6 or --input")),
    };
    let rows: Vec<Value> = graphs
        .iter()
        .map(|g| {
            json!({
                "graph6": graph6_encode(g),
                "order": g.order(),
                "size": g.size(),
                "rho": rho_graph(g, tol),
            })
        })
        .collect();
    Ok(report(
        json!({ "input": a.input, "graph6": a.graph6 }),
        json!({ "graphs": rows }),
        Vec::new(),
    ))
}

fn collect_graph6(r: &mut dyn BufRead) -> Result<Vec<Graph>, CliError> {
    ingest_graph6(r)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::usage(e.to_string()))
}

fn compare(a: &CompareArgs, budget: usize) -> Result<Output, CliError> {
    let (ga, gb) = (decode(&a.a)?, decode(&a.b)?);
    let o = compare_rho_graphs(&ga, &gb, budget)?;
    let ordering = match o.ordering {
        std::cmp::Ordering::Less => "LESS",
        std::cmp::Ordering::Equal => "EQUAL",
        std::cmp::Ordering::Greater => "GREATER",
    };
    Ok(report(
        json!({ "a": a.a, "b": a.b }),
        json!({ "ordering": ordering, "a": o.a, "b": o.b, "exact": o.exact }),
        Vec::new(),
    ))
}

fn extremal_assertion(r: &verify::ExtremalReport, anchor: &str) -> Assertion {
    let flag = serde_json::to_value(r.matches_paper_prediction).expect("enum");
    let detail = format!(
        "prediction {}: {}",
        flag.as_str().unwrap_or(""),
        r.prediction_detail
    );
    if r.prediction_in_range && r.matches_paper_prediction != Prediction::NotApplicable {
        let ok = r.matches_paper_prediction == Prediction::Yes
            && r.winners_revalidated
            && r.ties_under_budget.is_empty();
        assertion(anchor, ok, detail)
    } else {
        recorded(anchor, detail)
    }
}

fn extremal_anchor(n: usize, objective: ObjectiveArg, f: &EnumFilter) -> String {
    match objective {
        ObjectiveArg::Edges if f.min_chromatic >= 4 => format!("theorem-1.1-n{n}"),
        ObjectiveArg::Edges => format!("mantel-n{n}"),
        ObjectiveArg::Rho if f.min_chromatic >= 4 => format!("main-theorem-n{n}"),
        ObjectiveArg::Rho if f.non_bipartite_only => format!("theorem-i-n{n}"),
        ObjectiveArg::Rho => format!("spectral-turan-n{n}"),
    }
}

fn extremal(a: &ExtremalArgs, tol: &Q, budget: usize) -> Result<Output, CliError> {
    let filter = a.filter.filter();
    let r = match a.objective {
        ObjectiveArg::Edges => verify::extremal_edges(a.n, filter)?,
        ObjectiveArg::Rho => verify::extremal_spectral(a.n, filter, tol, budget)?,
    };
    let anchor = extremal_anchor(a.n, a.objective, &filter);
    let assertions = vec![extremal_assertion(&r, &anchor)];
    Ok(report(
        json!({ "n": a.n, "objective": r.objective, "filter": filter }),
        serde_json::to_value(&r).expect("plain data"),
        assertions,
    ))
}

fn parse_pairs(items: &[String]) -> Result<Vec<(usize, usize)>, CliError> {
    items
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (u, v) = s
                .split_once('-')
                .ok_or_else(|| CliError::usage(format!("pair {s:?}: expected u-v")))?;
            let p = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::usage(format!("pair {s:?}: bad vertex")))
            };
            Ok((p(u)?, p(v)?))
        })
        .collect()
}

fn check(a: &CheckArgs, tol: &Q, common: &Common) -> Result<Output, CliError> {
    let budget = common.budget;
    let graph = || -> Result<Graph, CliError> {
        decode(
            a.graph6
                .as_deref()
                .ok_or_else(|| CliError::usage("missing --graph6"))?,
        )
    };
    let params = json!({ "claim": a.claim, "n": a.n, "graph6": a.graph6, "u": a.u,
        "x": a.x, "t": a.t, "parts": a.parts, "added": a.added, "deleted": a.deleted, "k": a.k });
    let (result, assertions) = match a.claim {
        Claim::BalancedBlowup => {
            let n = need(a.n, "n")?;
            let r = verify::check_balanced_blowup(n, budget)?;
            let a = blowup_assertion(&r);
            (serde_json::to_value(&r).expect("plain data"), vec![a])
        }
        Claim::Interval => {
            let n = need(a.n, "n")?;
            let r = verify::check_interval_claim(n, tol)?;
            let a = assertion(
                format!("claim-3.12a-n{n}"),
                r.holds,
                format!(
                    "rho in [{}, {}] within [{}, {}]",
                    r.rho.to_decimal_pair(15).0,
                    r.rho.to_decimal_pair(15).1,
                    r.lower,
                    r.upper
                ),
            );
            (serde_json::to_value(&r).expect("plain data"), vec![a])
        }
        Claim::GLeading => {
            let x =
                a.x.as_deref()
                    .ok_or_else(|| CliError::usage("missing --x"))?;
            let x = parse_rational(x).ok_or_else(|| CliError::usage("--x: not a rational"))?;
            let t = need(a.t, "t")?;
            let (value, a) = g_leading_entry(&x, t)?;
            (value, vec![a])
        }
        Claim::Nosal => {
            let g = graph()?;
            let ok = verify::check_nosal(&g, tol)?;
            let a = assertion("nosal", ok, format!("rho <= sqrt({}) + 1e-9", g.size()));
            (
                json!({ "rho": rho_graph(&g, tol), "size": g.size() }),
                vec![a],
            )
        }
        Claim::VertexDeletion => {
            let g = graph()?;
            let u = need(a.u, "u")?;
            let ok = verify::check_vertex_deletion(&g, u, tol)?;
            let a = assertion(
                "lemma-2.4",
                ok,
                format!("deleting vertex {u} of degree {}", g.degree(u)),
            );
            (json!({ "u": u }), vec![a])
        }
        Claim::Perturbation => {
            let spec = PerturbationSpec {
                part_sizes: a
                    .parts
                    .clone()
                    .ok_or_else(|| CliError::usage("missing --parts"))?,
                added: parse_pairs(&a.added)?,
                deleted: parse_pairs(&a.deleted)?,
                k: a.k,
            };
            let strict = verify::check_perturbation_bound(&spec, tol)?;
            let near =
                verify::evaluate_perturbation_inequality(&spec, PerturbationBound::Near, tol)?;
            let unbalanced = verify::evaluate_perturbation_inequality(
                &spec,
                PerturbationBound::Unbalanced,
                tol,
            )?;
            let status = match strict {
                Verdict::Pass => Status::Pass,
                Verdict::Fail => Status::Fail,
                Verdict::NotApplicable => Status::NotApplicable,
            };
            let a = Assertion {
                name: "lemma-2.3".into(),
                status,
                detail: format!(
                    "gated verdict {strict:?}; ungated near-balanced {:?}, unbalanced {:?}",
                    near.verdict, unbalanced.verdict
                ),
            };
            (
                json!({ "verdict": strict, "near_balanced": near, "unbalanced": unbalanced }),
                vec![a],
            )
        }
        Claim::SpectralTuran => {
            let n = need(a.n, "n")? as usize;
            let ok = verify::verify_spectral_turan(n, tol, budget)?;
            (
                json!({ "holds": ok }),
                vec![assertion(
                    format!("spectral-turan-n{n}"),
                    ok,
                    "unique maximiser is T(n,2)",
                )],
            )
        }
        Claim::EdgeIdentity => {
            let n = need(a.n, "n")?;
            let (built, formula) = verify::balanced_edge_identity(n)?;
            (
                json!({ "constructed": built, "formula": formula }),
                vec![assertion(
                    format!("edge-identity-n{n}"),
                    built == formula,
                    format!("{built} vs {formula}"),
                )],
            )
        }
    };
    Ok(report(params, result, assertions))
}

fn blowup_assertion(r: &verify::BalancedBlowupReport) -> Assertion {
    assertion(
        "lemma-4.2",
        r.holds,
        format!(
            "n={}, s*={}: {} comparisons certified, {} LESS and {} EQUAL where the rounding \
             rebuilds the maximiser",
            r.n,
            r.s_star,
            r.comparisons.len(),
            r.strict,
            r.same_graph
        ),
    )
}

fn g_leading_entry(x: &Q, t: i64) -> Result<(Value, Assertion), CliError> {
    let c = check_g_leading(x, t)?;
    let d = |v: &Q| v.to_string();
    let a = assertion(
        format!("g-leading-x{x}-t{t}"),
        c.holds() && c.c11 == q(0),
        format!(
            "n^10: {} (expected {}), n^9: {} (expected {})",
            d(&c.c10),
            d(&c.expected_c10),
            d(&c.c9),
            d(&c.expected_c9)
        ),
    );
    let value = json!({
        "x": d(x), "t": t, "degree": c.degree,
        "c11": d(&c.c11), "c10": d(&c.c10), "c9": d(&c.c9),
    });
    Ok((value, a))
}

// ---------------------------------------------------------------------------
// Full suite
// ---------------------------------------------------------------------------

/// Orders checked by the balanced blow-up comparisons.
pub fn blowup_orders() -> Vec<u64> {
    (60..=80).chain([1001, 10_000, 1_000_001]).collect()
}

fn verify_all(tol: &Q, common: &Common) -> Result<Output, CliError> {
    let budget = common.budget;
    let mut asserts = Vec::new();
    let mut result = serde_json::Map::new();

    // enumeration against the all-graphs oracle
    log::info!(
        "verify-all: {}",
        "enumeration against the all-graphs oracle"
    );
    let mut counts = Vec::new();
    for n in 1..=7 {
        let oracle: Vec<Graph> = brute_force_all(n)?
            .into_iter()
            .filter(Graph::is_triangle_free)
            .collect();
        let mut ours: Vec<Graph> =
            crate::enumerate::enumerate_triangle_free(n, EnumFilter::default())?
                .map(|g| canonical_form(&g).expect("small"))
                .collect();
        ours.sort();
        let distinct = ours.windows(2).all(|w| w[0] != w[1]);
        let ok = distinct && ours == oracle;
        asserts.push(assertion(
            format!("enumeration-oracle-n{n}"),
            ok,
            format!("{} classes, oracle {}", ours.len(), oracle.len()),
        ));
        counts.push(json!({ "n": n, "classes": ours.len() }));
    }
    result.insert("enumeration_counts".into(), Value::Array(counts));

    // Grötzsch minimality
    log::info!("verify-all: {}", "Grötzsch minimality");
    let four = EnumFilter::triangle_free().with_min_chromatic(4);
    let at10 = TriangleFreeEnumerator::new(10, four)?.into_iter().count();
    asserts.push(assertion(
        "grotzsch-minimality-n10",
        at10 == 0,
        format!("{at10} triangle-free 4-chromatic classes"),
    ));
    let at11: Vec<String> = TriangleFreeEnumerator::new(11, four)?
        .into_iter()
        .map(|g| graph6_encode(&canonical_form(&g).expect("small")))
        .collect();
    let gz = graph6_encode(&canonical_form(&grotzsch()).expect("small"));
    asserts.push(assertion(
        "grotzsch-minimality-n11",
        at11.contains(&gz),
        format!(
            "{} classes, Grötzsch among them: {}",
            at11.len(),
            at11.contains(&gz)
        ),
    ));
    result.insert("four_chromatic_n11".into(), json!(at11));

    // spectral maximisers among non-bipartite triangle-free graphs
    log::info!(
        "verify-all: {}",
        "spectral maximisers among non-bipartite triangle-free graphs"
    );
    let mut reports = Vec::new();
    for n in 5..=10 {
        let f = EnumFilter::triangle_free().non_bipartite();
        let r = verify::extremal_spectral(n, f, tol, budget)?;
        asserts.push(extremal_assertion(&r, &format!("theorem-i-n{n}")));
        reports.push(r);
    }
    result.insert(
        "non_bipartite_rho".into(),
        serde_json::to_value(&reports).expect("data"),
    );

    // Mantel and spectral Turán
    log::info!("verify-all: {}", "Mantel and spectral Turán");
    let mut mantel = Vec::new();
    for n in 3..=13 {
        let r = verify::extremal_edges(n, EnumFilter::default())?;
        asserts.push(extremal_assertion(&r, &format!("mantel-n{n}")));
        mantel.push(json!({ "n": n, "value": r.value, "winners": r.winners, "classes": r.classes_examined }));
    }
    result.insert("mantel".into(), Value::Array(mantel));
    for n in 2..=7 {
        let ok = verify::verify_spectral_turan(n, tol, budget)?;
        asserts.push(assertion(
            format!("spectral-turan-n{n}"),
            ok,
            "unique maximiser is T(n,2)",
        ));
    }

    // balanced blow-up comparisons
    log::info!("verify-all: {}", "balanced blow-up comparisons");
    let mut blowups = Vec::new();
    for n in blowup_orders() {
        let r = verify::check_balanced_blowup(n, budget)?;
        let mut a = blowup_assertion(&r);
        a.name = format!("lemma-4.2-n{n}");
        asserts.push(a);
        blowups.push(json!({ "n": n, "s_star": r.s_star, "strict": r.strict,
            "same_graph": r.same_graph, "holds": r.holds }));
    }
    result.insert("balanced_blowup".into(), Value::Array(blowups));

    // g(x, t) coefficients
    log::info!("verify-all: {}", "g(x, t) coefficients");
    let mut coeffs = Vec::new();
    for x in [-2, -1, 0] {
        for t in [-1, 0, 1, 2] {
            let (v, a) = g_leading_entry(&q(x), t)?;
            asserts.push(a);
            coeffs.push(v);
        }
    }
    let (case2, case2_ok) = case_two_coefficient()?;
    asserts.push(assertion("case-2-n9", case2_ok, case2.clone()));
    result.insert("g_coefficients".into(), Value::Array(coeffs));

    // spectral-radius window
    log::info!("verify-all: {}", "spectral-radius window");
    let mut windows = Vec::new();
    for n in [100, 1001, 100_000] {
        let r = verify::check_interval_claim(n, tol)?;
        let (lo, hi) = r.rho.to_decimal_pair(15);
        asserts.push(assertion(
            format!("claim-3.12a-n{n}"),
            r.holds,
            format!("rho in [{lo}, {hi}] within [{}, {}]", r.lower, r.upper),
        ));
        windows.push(serde_json::to_value(&r).expect("data"));
    }
    result.insert("interval_claim".into(), Value::Array(windows));

    // property suites
    log::info!("verify-all: {}", "property suites");
    property_suites(tol, common.seed, &mut asserts, &mut result)?;

    // out-of-range statements: recorded, not asserted
    log::info!(
        "verify-all: {}",
        "out-of-range statements: recorded, not asserted"
    );
    let mut recorded_reports = Vec::new();
    for n in [11, 12] {
        let r = verify::extremal_edges(n, four)?;
        asserts.push(extremal_assertion(&r, &format!("theorem-1.1-n{n}")));
        recorded_reports.push(r);
        let r = verify::extremal_spectral(n, four, tol, budget)?;
        asserts.push(extremal_assertion(&r, &format!("main-theorem-n{n}")));
        recorded_reports.push(r);
    }
    result.insert(
        "four_chromatic_extremal".into(),
        serde_json::to_value(&recorded_reports).expect("data"),
    );
    let bad: Vec<u64> = (11..=500)
        .filter(|&n| {
            verify::balanced_edge_identity(n)
                .map(|(b, f)| b != f)
                .unwrap_or(true)
        })
        .collect();
    asserts.push(assertion(
        "edge-identity",
        bad.is_empty(),
        format!("e(F1 balanced) = floor((n-3)^2/4)+5 for 11 <= n <= 500; mismatches {bad:?}"),
    ));

    let passed = asserts.iter().filter(|a| a.status == Status::Pass).count();
    let failed = asserts.iter().filter(|a| a.status == Status::Fail).count();
    result.insert("passed".into(), json!(passed));
    result.insert("failed".into(), json!(failed));
    Ok(report(
        json!({ "suite": "acceptance" }),
        Value::Object(result),
        asserts,
    ))
}

/// The `n⁹` coefficient of `g(x, 1)` is `(40+108x+76x²)/2048` for every
/// `x` tried, with constant part `40/2048`.
fn case_two_coefficient() -> Result<(String, bool), CliError> {
    let xs = [q(-2), q(-1), q(0), qf(1, 2), q(3), qf(-7, 3)];
    let mut ok = true;
    for x in &xs {
        let c = check_g_leading(x, 1)?;
        let expected = (q(40) + q(108) * x + q(76) * x * x) / q(2048);
        ok &= c.c9 == expected;
    }
    let at0 = check_g_leading(&q(0), 1)?.c9;
    ok &= at0 == qf(40, 2048);
    Ok((format!("n^9 coefficient of g(x,1) at x=0: {at0}; matches (40+108x+76x^2)/2048 at 6 values of x"), ok))
}

fn property_suites(
    tol: &Q,
    seed: u64,
    asserts: &mut Vec<Assertion>,
    result: &mut serde_json::Map<String, Value>,
) -> Result<(), CliError> {
    // Nosal and vertex deletion on every triangle-free class up to order 9
    let (mut graphs, mut nosal_bad, mut deletion_bad) = (0usize, 0usize, 0usize);
    for n in 1..=9 {
        let e = TriangleFreeEnumerator::new(n, EnumFilter::default())?;
        let parts = e.par_fold(
            || (0usize, 0usize, 0usize),
            |acc: &mut (usize, usize, usize), g| {
                acc.0 += 1;
                if !verify::check_nosal(&g, tol).unwrap_or(false) {
                    acc.1 += 1;
                }
                if !(0..g.order())
                    .all(|u| verify::check_vertex_deletion(&g, u, tol).unwrap_or(false))
                {
                    acc.2 += 1;
                }
            },
        );
        for p in parts {
            graphs += p.0;
            nosal_bad += p.1;
            deletion_bad += p.2;
        }
    }
    asserts.push(assertion(
        "nosal",
        nosal_bad == 0,
        format!("{graphs} triangle-free classes with 1 <= n <= 9, {nosal_bad} violations"),
    ));
    asserts.push(assertion(
        "lemma-2.4-triangle-free",
        deletion_bad == 0,
        format!("every vertex of {graphs} classes, {deletion_bad} violations"),
    ));

    log::info!("verify-all: seeded random graphs");
    let random = verify::seeded_graphs(seed, 1000, 10);
    let random_bad = random
        .iter()
        .filter(|(g, u)| !verify::check_vertex_deletion(g, *u, tol).unwrap_or(false))
        .count();
    asserts.push(assertion(
        "lemma-2.4",
        random_bad == 0,
        format!("1000 seeded random graphs (n <= 10, seed {seed}), {random_bad} violations"),
    ));

    log::info!("verify-all: seeded perturbations");
    let specs = verify::seeded_perturbations(seed, 100, 100);
    let (mut pass, mut fail, mut gated_na, mut worst) = (0, 0, 0, String::new());
    for spec in &specs {
        let ev = verify::evaluate_perturbation_inequality(spec, PerturbationBound::Near, tol)?;
        match ev.verdict {
            Verdict::Pass => pass += 1,
            _ => {
                fail += 1;
                if worst.is_empty() {
                    worst = format!("{spec:?}: {} > {}", ev.lhs_upper, ev.rhs);
                }
            }
        }
        if verify::check_perturbation_bound(spec, tol)? == Verdict::NotApplicable {
            gated_na += 1;
        }
    }
    asserts.push(assertion(
        "lemma-2.3",
        fail == 0,
        format!(
            "near-balanced estimate on 100 seeded K2(a,a) specs (2a <= 200, <= 3 edges): \
             {pass} PASS, {fail} FAIL{}; size gates (max alpha <= n/(20r)^3, n >= 400r) \
             hold for none at this scale, so the gated check reports {gated_na} NOT_APPLICABLE",
            if worst.is_empty() {
                String::new()
            } else {
                format!(", first failure {worst}")
            }
        ),
    ));
    result.insert(
        "properties".into(),
        json!({
            "triangle_free_classes": graphs,
            "nosal_violations": nosal_bad,
            "deletion_violations": deletion_bad,
            "random_graphs": random.len(),
            "random_deletion_violations": random_bad,
            "perturbation_pass": pass,
            "perturbation_fail": fail,
            "perturbation_gated_not_applicable": gated_na,
        }),
    );
    Ok(())
}
