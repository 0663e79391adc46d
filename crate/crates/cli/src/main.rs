use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use graph_lp::expand::{span_expand, Oracle};
use graph_lp::generate::{all_digraphs, digraphs_up_to_isomorphism, labeled_trees, trees_up_to_isomorphism};
use graph_lp::io::{parse_graph, parse_monomial, parse_vertex_set};
use graph_lp::lp::compute_y;
use graph_lp::nested::enumerate_clusters;
use graph_lp::verify::{scan_graphs, Budget};
use graph_lp::{Digraph, Error};

const SCHEMA: u32 = 1;
const MAX_CLUSTER_VERTICES: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "graph-lp", version, about = "Exact computations in graph LP algebras")]
struct Cli {
    /// Emit JSON records instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print Y_I for a vertex set I.
    ComputeY {
        graph: PathBuf,
        /// Comma-separated vertex labels; may be empty.
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        /// Print as numerator over a monomial denominator.
        #[arg(long)]
        fraction: bool,
    },
    /// Expand a monomial into cluster monomials.
    Expand {
        graph: PathBuf,
        /// Tokens such as `X:1,1` and `Y:{1,2},{3}`.
        #[arg(required = true, num_args = 1..)]
        monomial: Vec<String>,
        /// Compare the expansion with the monomial as Laurent polynomials.
        #[arg(long)]
        check: bool,
    },
    /// List clusters: a set U with a maximal nested collection on V minus U.
    Clusters {
        graph: PathBuf,
        /// Print only the number of clusters.
        #[arg(long)]
        count: bool,
    },
    /// Look for negative coefficients in cluster expansions.
    Scan(ScanArgs),
}

#[derive(Args, Debug)]
struct ScanArgs {
    graph: Option<PathBuf>,
    /// Every digraph with 1..=N vertices.
    #[arg(long, value_name = "N", conflicts_with_all = ["graph", "all_trees"])]
    all_graphs: Option<usize>,
    /// Every tree with 1..=N vertices.
    #[arg(long, value_name = "N", conflicts_with = "graph")]
    all_trees: Option<usize>,
    /// With --all-graphs or --all-trees, one graph per isomorphism class.
    #[arg(long)]
    classes: bool,
    #[arg(long, default_value_t = 2)]
    max_members: usize,
    #[arg(long, default_value_t = 3)]
    max_member_size: usize,
    #[arg(long, default_value_t = 2)]
    max_x: usize,
    /// Also compare every expansion with its Laurent form.
    #[arg(long)]
    check: bool,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Assertion(_) | Error::NonTermination(_) | Error::IntegerOverflow => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read_graph(path: &Path) -> Result<Digraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.write_all(b"\n"));
}

fn print_json(value: &impl Serialize) {
    emit(&serde_json::to_string_pretty(value).expect("records serialize"));
}

fn compute_y_cmd(json: bool, path: &Path, set: &str, fraction: bool) -> Outcome {
    let g = read_graph(path)?;
    let s = parse_vertex_set(&g, set)?;
    let y = compute_y(&g, s)?;
    if json {
        print_json(&json!({
            "schema": SCHEMA,
            "command": "compute-y",
            "set": s.iter().map(|v| g.label(v)).collect::<Vec<_>>(),
            "polynomial": y.render(g.labels()),
            "fraction": y.render_fraction(g.labels())?,
            "terms": y.term_count(),
        }));
    } else if fraction {
        emit(&y.render_fraction(g.labels())?);
    } else {
        emit(&y.render(g.labels()));
    }
    Ok(ExitCode::SUCCESS)
}

fn expand_cmd(json: bool, path: &Path, tokens: &[String], check: bool) -> Outcome {
    let g = read_graph(path)?;
    let m = parse_monomial(&g, &tokens.join(" "))?;
    let c = span_expand(&g, &m)?;
    let verdict = if check {
        let oracle = Oracle::new(g.clone());
        Some(c.to_laurent(&oracle)? == oracle.monomial(&m)?)
    } else {
        None
    };
    if json {
        print_json(&json!({
            "schema": SCHEMA,
            "command": "expand",
            "monomial": m.render(&g),
            "terms": c.records(&g),
            "oracle": verdict.map(|eq| if eq { "equal" } else { "unequal" }),
        }));
    } else {
        emit(&c.render(&g));
        if let Some(eq) = verdict {
            emit(if eq { "oracle: equal" } else { "oracle: unequal" });
        }
    }
    match verdict {
        Some(false) => Err(Failure::Internal(format!("expansion of {} disagrees with its Laurent form", m.render(&g)))),
        _ => Ok(ExitCode::SUCCESS),
    }
}

fn clusters_cmd(json: bool, path: &Path, count: bool) -> Outcome {
    let g = read_graph(path)?;
    if g.vertex_count() > MAX_CLUSTER_VERTICES {
        return Err(Failure::Usage(format!(
            "cluster listing supports at most {MAX_CLUSTER_VERTICES} vertices, graph has {}",
            g.vertex_count()
        )));
    }
    let clusters = enumerate_clusters(&g)?;
    if json {
        let listed: Vec<_> = clusters
            .iter()
            .map(|c| {
                let labels = |s: graph_lp::VertexSet| s.iter().map(|v| g.label(v)).collect::<Vec<_>>();
                json!({ "u": labels(c.x_vertices), "nested": c.nested.iter().map(|&s| labels(s)).collect::<Vec<_>>() })
            })
            .collect();
        let mut out = json!({ "schema": SCHEMA, "command": "clusters", "count": clusters.len() });
        if !count {
            out["clusters"] = listed.into();
        }
        print_json(&out);
    } else if count {
        emit(&clusters.len().to_string());
    } else {
        for c in &clusters {
            emit(&c.render(&g));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn scan_cmd(json: bool, args: &ScanArgs) -> Outcome {
    let budget = Budget {
        max_members: args.max_members,
        max_member_size: args.max_member_size,
        max_x: args.max_x,
        check_oracle: args.check,
    };
    if budget.is_empty() {
        return Err(Failure::Usage("empty budget: nothing to scan".into()));
    }
    let graphs: Vec<Digraph> = match (&args.graph, args.all_graphs, args.all_trees) {
        (Some(p), None, None) => vec![read_graph(p)?],
        (None, Some(n), None) => {
            let limit = if args.classes { 4 } else { 3 };
            if n > limit {
                return Err(Failure::Usage(format!("--all-graphs is limited to {limit} vertices here")));
            }
            (1..=n)
                .flat_map(|k| if args.classes { digraphs_up_to_isomorphism(k) } else { all_digraphs(k).collect() })
                .collect()
        }
        (None, None, Some(n)) => {
            let limit = if args.classes { 8 } else { 6 };
            if n > limit {
                return Err(Failure::Usage(format!("--all-trees is limited to {limit} vertices here")));
            }
            (1..=n)
                .flat_map(|k| if args.classes { trees_up_to_isomorphism(k) } else { labeled_trees(k) })
                .collect()
        }
        _ => return Err(Failure::Usage("give a graph file, --all-graphs N, or --all-trees N".into())),
    };
    if args.jobs == Some(0) {
        return Err(Failure::Usage("--jobs must be positive".into()));
    }
    let report = scan_graphs(&graphs, &budget, args.jobs)?;
    if json {
        print_json(&json!({
            "schema": SCHEMA,
            "command": "scan",
            "records": report.records,
            "summary": { "graphs": report.graphs, "checked": report.checked, "findings": report.findings },
        }));
    } else {
        emit(report.render().trim_end());
    }
    Ok(if report.findings == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::ComputeY { graph, set, fraction } => compute_y_cmd(cli.json, graph, set, *fraction),
        Command::Expand { graph, monomial, check } => expand_cmd(cli.json, graph, monomial, *check),
        Command::Clusters { graph, count } => clusters_cmd(cli.json, graph, *count),
        Command::Scan(args) => scan_cmd(cli.json, args),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
