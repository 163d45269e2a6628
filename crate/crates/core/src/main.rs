use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use gamma_complex::blowup::{BlowupComplex, EdgeLabel};
use gamma_complex::invariance::{is_u0_invariant, minimal_invariant_subgraphs, u0_invariant_subgraphs, Condition};
use gamma_complex::partition::{all_partitions, PartitionJson, WhiteheadPartition};
use gamma_complex::realization::{
    check_certificate, enumerate_complex_types, realize, CertificateJson, ProblemJson, RealizationCertificate,
    RealizationProblem, RealizeOutcome,
};
use gamma_complex::{Error, SimplicialGraph};

/// Whitehead partitions, blowup complexes and realization search for
/// right-angled Artin groups.
///
/// Exit codes: 0 success, 1 verification false, 2 input error, 3 budget
/// exhausted or nothing found within budget.
#[derive(Parser)]
#[command(name = "gammacx", version)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every partition of a graph (JSON or DOT).
    Partitions { graph: PathBuf },
    /// List the invariant subgraphs, or test one subset.
    InvariantSubgraphs {
        graph: PathBuf,
        /// Comma-separated vertex names to test instead of listing all.
        #[arg(long)]
        subset: Option<String>,
        /// Largest graph for which all subsets are tried.
        #[arg(long, default_value_t = 16)]
        max_vertices: usize,
    },
    /// Build the blowup of a compatible collection (a JSON list of
    /// partitions).
    Blowup { graph: PathBuf, collection: PathBuf },
    /// Enumerate combinatorial types of complexes.
    Types {
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_entries: usize,
        #[arg(long, default_value_t = 100_000)]
        automorphism_limit: usize,
    },
    /// Search for a certificate realizing a problem.
    Realize {
        problem: PathBuf,
        #[arg(long)]
        max_entries: Option<usize>,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        time_limit: Option<u64>,
    },
    /// Re-verify a certificate.
    Check { certificate: PathBuf },
}

enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(_) => Failure::Budget(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<SimplicialGraph, Failure> {
    Ok(SimplicialGraph::parse(&read(path)?)?)
}

fn render<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output is serializable");
    s.push('\n');
    s
}

fn names(g: &SimplicialGraph, d: gamma_complex::VertexSet) -> Value {
    json!(g.set_names(d))
}

fn cmd_partitions(graph: &Path) -> Result<(Value, u8), Failure> {
    let g = read_graph(graph)?;
    let ps: Vec<PartitionJson> = all_partitions(&g)?.iter().map(|p| p.to_json(&g)).collect();
    Ok((json!(ps), 0))
}

fn cmd_invariant(graph: &Path, subset: Option<&str>, max_vertices: usize) -> Result<(Value, u8), Failure> {
    let g = read_graph(graph)?;
    if let Some(s) = subset {
        let list: Vec<&str> = s.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let d = g.parse_set(&list)?;
        let r = is_u0_invariant(&g, d)?;
        let violations: Vec<Value> = r
            .violations
            .iter()
            .map(|v| {
                json!({
                    "condition": match v.condition { Condition::LinkContainment => "i", Condition::StarSeparation => "ii" },
                    "x": v.x.map(|x| g.name(x).to_string()),
                    "y": g.name(v.y),
                })
            })
            .collect();
        return Ok((json!({ "subgraph": names(&g, d), "invariant": r.invariant, "violations": violations }), 0));
    }
    let all = u0_invariant_subgraphs(&g, max_vertices)?;
    let minimal = if g.len() <= max_vertices { minimal_invariant_subgraphs(&g)? } else { Vec::new() };
    let out: Vec<Value> = all
        .iter()
        .map(|&d| json!({ "vertices": names(&g, d), "minimal": minimal.contains(&d) }))
        .collect();
    Ok((json!(out), 0))
}

fn edge_label(g: &SimplicialGraph, l: EdgeLabel) -> String {
    match l {
        EdgeLabel::Partition(i) => format!("P{i}"),
        EdgeLabel::Vertex(v) => g.name(v).to_string(),
    }
}

fn blowup_json(b: &BlowupComplex) -> Value {
    let g = b.graph();
    json!({
        "partitions": b.partitions().iter().map(|p| p.to_json(g)).collect::<Vec<_>>(),
        "complex": b.complex(),
        "edge_labels": b.edges().iter().map(|e| edge_label(g, e.label)).collect::<Vec<_>>(),
        "regions": b.regions(),
    })
}

fn cmd_blowup(graph: &Path, collection: &Path) -> Result<(Value, u8), Failure> {
    let g = read_graph(graph)?;
    let pj: Vec<PartitionJson> = read_json(collection)?;
    let pi = pj.iter().map(|p| WhiteheadPartition::from_json(&g, p)).collect::<Result<Vec<_>, _>>()?;
    let b = BlowupComplex::build(&g, &pi)?;
    Ok((blowup_json(&b), 0))
}

fn cmd_types(graph: &Path, max_entries: usize, limit: usize) -> Result<(Value, u8), Failure> {
    let g = read_graph(graph)?;
    let cat = enumerate_complex_types(&g, max_entries, limit)?;
    let types: Vec<Value> = cat
        .types
        .iter()
        .map(|t| {
            let mut v = blowup_json(&t.blowup);
            v["automorphism_order"] = json!(t.automorphism_order);
            v
        })
        .collect();
    Ok((json!({ "complete": cat.complete, "collections_examined": cat.collections_examined, "types": types }), 0))
}

fn cmd_realize(problem: &Path, max_entries: Option<usize>, radius: Option<usize>, time_limit: Option<u64>) -> Result<(Value, u8), Failure> {
    let mut pj: ProblemJson = read_json(problem)?;
    if let Some(m) = max_entries {
        pj.budget.max_entries = m;
    }
    if radius.is_some() {
        pj.budget.radius = radius;
    }
    if time_limit.is_some() {
        pj.budget.time_limit_secs = time_limit;
    }
    let p = RealizationProblem::from_json(&pj)?;
    match realize(&p)? {
        RealizeOutcome::Found(c) => Ok((serde_json::to_value(c.to_json()?).expect("serializable"), 0)),
        RealizeOutcome::NotFound { reason } => Ok((json!({ "status": "not-found-within-budget", "reason": reason }), 3)),
    }
}

fn cmd_check(certificate: &Path) -> Result<(Value, u8), Failure> {
    let cj: CertificateJson = read_json(certificate)?;
    let c = RealizationCertificate::from_json(&cj)?;
    let out = check_certificate(&c);
    let code = if out.valid { 0 } else { 1 };
    Ok((json!(out), code))
}

fn run(cli: &Cli) -> Result<(Value, u8), Failure> {
    match &cli.command {
        Command::Partitions { graph } => cmd_partitions(graph),
        Command::InvariantSubgraphs { graph, subset, max_vertices } => cmd_invariant(graph, subset.as_deref(), *max_vertices),
        Command::Blowup { graph, collection } => cmd_blowup(graph, collection),
        Command::Types { graph, max_entries, automorphism_limit } => cmd_types(graph, *max_entries, *automorphism_limit),
        Command::Realize { problem, max_entries, radius, time_limit } => cmd_realize(problem, *max_entries, *radius, *time_limit),
        Command::Check { certificate } => cmd_check(certificate),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((v, code)) => {
            let text = render(&v);
            match &cli.output {
                Some(p) => {
                    if let Err(e) = fs::write(p, text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(code)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
