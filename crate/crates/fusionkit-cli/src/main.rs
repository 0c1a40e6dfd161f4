use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use fusionkit::checks::{run_suite, CheckOptions, Suite, DEFAULT_BUDGET, DEFAULT_TOL};
use fusionkit::fusion::{build_fusion, Kind};
use fusionkit::graphs::{catalog, graph_by_name, GraphSpec};
use fusionkit::modact::{annular, induction_table_csv, induction_table_md};
use fusionkit::modular::{invariant_for, solve_splitting, verify_splitting, SplitError};
use fusionkit::qdims::vertex_qdims;
use fusionkit::tables::{build_table, render_exact, Format, TableId};

/// Fusion rings, module graphs, block dimensions and modular splitting for
/// sl(2) and sl(3). FUSIONKIT_DATA overrides the data directory.
#[derive(Parser)]
#[command(name = "fusionkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render one of the tables (table1 … table5).
    Table {
        table: TableId,
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        algebra: Option<Kind>,
        #[arg(long, default_value = "md")]
        format: Format,
        /// Exit nonzero on unavailable rows or reference mismatches.
        #[arg(long)]
        strict: bool,
    },
    /// Run a check suite: formulas, trig, discriminant, rigidity, splitting, all.
    Check {
        suite: Suite,
        #[arg(long)]
        level: Option<u32>,
        #[arg(long)]
        algebra: Option<Kind>,
        #[arg(long)]
        graph: Option<String>,
        /// Also fail when the selection matched nothing.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Print only failures and the summary.
        #[arg(long)]
        quiet: bool,
    },
    /// Solve the modular splitting equation for a graph's invariant.
    Split {
        graph: String,
        #[arg(long)]
        algebra: Option<Kind>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Write the toric family here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inspect catalog graphs.
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
}

#[derive(Subcommand)]
enum GraphAction {
    /// Vertices, adjacency, invariant and algebra object of a graph.
    Show {
        name: String,
        #[arg(long)]
        algebra: Option<Kind>,
        /// Exact quantum dimensions of the vertices.
        #[arg(long)]
        qdims: bool,
        /// Induction table ⟨λ_n, Γ_a⟩.
        #[arg(long)]
        induction: bool,
        #[arg(long, default_value = "md")]
        format: Format,
    },
    /// Catalog graph names up to a level.
    List {
        #[arg(long, default_value = "sl2")]
        algebra: Kind,
        #[arg(long, default_value_t = 10)]
        level: u32,
    },
}

/// Look a graph up in the given algebra, or sl(2) then sl(3).
fn find_graph(name: &str, algebra: Option<Kind>) -> Result<GraphSpec> {
    match algebra {
        Some(k) => graph_by_name(k, name).with_context(|| format!("no {k} graph {name}")),
        None => graph_by_name(Kind::Sl2, name)
            .or_else(|_| graph_by_name(Kind::Sl3, name))
            .with_context(|| format!("no graph {name} in either algebra")),
    }
}

fn cmd_table(table: TableId, graph: Option<String>, algebra: Option<Kind>, format: Format, strict: bool) -> Result<ExitCode> {
    if let Some(k) = algebra {
        if k != table.kind() {
            bail!("{table:?} is a {} table", table.kind());
        }
    }
    let t = build_table(table, graph.as_deref())?;
    print!("{}", t.render(format));
    let mismatches: Vec<_> = t.mismatches().collect();
    for (g, m) in &mismatches {
        eprintln!("mismatch {g}: {m}");
    }
    let bad = t.has_unavailable() || !mismatches.is_empty();
    Ok(if strict && bad { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn cmd_check(suite: Suite, opts: CheckOptions, strict: bool, quiet: bool) -> ExitCode {
    let items = run_suite(suite, &opts);
    let failed: Vec<_> = items.iter().filter(|i| !i.passed).collect();
    for i in &items {
        if !quiet || !i.passed {
            println!("{i}");
        }
    }
    println!("{} checks, {} passed, {} failed", items.len(), items.len() - failed.len(), failed.len());
    if let Some(first) = failed.first() {
        eprintln!("first counterexample: {first}");
        return ExitCode::FAILURE;
    }
    if strict && items.is_empty() {
        eprintln!("no checks matched the selection");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}

fn block_multiset(sizes: &[i64]) -> String {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for s in sizes {
        *counts.entry(*s).or_default() += 1;
    }
    let parts: Vec<String> = counts.iter().map(|(s, c)| format!("{s}×{c}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn cmd_split(graph: &str, algebra: Option<Kind>, budget: u64, out: Option<PathBuf>) -> Result<ExitCode> {
    let g = find_graph(graph, algebra)?;
    let sys = build_fusion(g.kind, g.level)?;
    let inv = invariant_for(&g)?;
    // Summary goes to stderr when the family itself is printed on stdout.
    let say = |s: String| if out.is_some() { println!("{s}") } else { eprintln!("{s}") };
    say(format!("{} {} (k = {}): Z = {}", g.kind, g.name, g.level, inv.presentation()));
    say(format!("r_O = Tr ZZᵗ = {}, blocks {}", inv.trace_zzt(), block_multiset(&inv.ocneanu_block_structure())));
    match solve_splitting(&sys, &inv, budget) {
        Ok(fam) => {
            let verified = verify_splitting(&sys, &inv, &fam);
            say(format!(
                "{} toric matrices, verify {}",
                fam.len(),
                match &verified {
                    Ok(()) => "✓".to_string(),
                    Err(e) => format!("✗ {e:?}"),
                }
            ));
            let json = fam.to_json();
            match &out {
                Some(p) => fs::write(p, json + "\n").with_context(|| format!("writing {}", p.display()))?,
                None => println!("{json}"),
            }
            Ok(if verified.is_ok() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Err(e @ SplitError::Exhausted { .. }) => {
            eprintln!("{e}");
            Ok(ExitCode::from(2))
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_graph_show(name: &str, algebra: Option<Kind>, qdims: bool, induction: bool, format: Format) -> Result<()> {
    let g = find_graph(name, algebra)?;
    let sys = build_fusion(g.kind, g.level)?;
    let fam = annular(&sys, &g)?;
    println!("{} {}: level {}, κ = {}, {} vertices, self-fusion {}", g.kind, g.name, g.level, g.kappa(), g.rank(), g.self_fusion);
    if let Some(p) = &g.provenance {
        println!("provenance: {p}");
    }
    println!("vertices: {}", g.vertices.join(" "));
    println!("adjacency:");
    for i in 0..g.rank() {
        let row: Vec<String> = (0..g.rank()).map(|j| g.adjacency[(i, j)].to_string()).collect();
        println!("  {}", row.join(" "));
    }
    if let Ok(inv) = invariant_for(&g) {
        println!("Z = {}", inv.presentation());
    }
    if qdims {
        println!("quantum dimensions:");
        for (v, mu) in g.vertices.iter().zip(vertex_qdims(&fam, &sys)) {
            println!("  {v}: {}", render_exact(&mu));
        }
    }
    if induction {
        match format {
            Format::Csv => print!("{}", induction_table_csv(&fam)),
            Format::Json => {
                let rows: Vec<serde_json::Value> = fam
                    .irreps
                    .iter()
                    .zip(&fam.f)
                    .map(|(w, m)| {
                        let counts: Vec<i64> = (0..fam.rank()).map(|b| m[(0, b)]).collect();
                        serde_json::json!({ "irrep": w.to_string(), "counts": counts })
                    })
                    .collect();
                println!("{}", serde_json::json!({ "vertices": g.vertices, "induction": rows }));
            }
            _ => print!("{}", induction_table_md(&fam)),
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Table { table, graph, algebra, format, strict } => cmd_table(table, graph, algebra, format, strict),
        Command::Check { suite, level, algebra, graph, strict, tol, budget, quiet } => {
            if tol.is_nan() || tol <= 0.0 {
                bail!("--tol must be positive");
            }
            let opts = CheckOptions { kind: algebra, level, graph, tol, budget };
            Ok(cmd_check(suite, opts, strict, quiet))
        }
        Command::Split { graph, algebra, budget, out } => cmd_split(&graph, algebra, budget, out),
        Command::Graph { action } => match action {
            GraphAction::Show { name, algebra, qdims, induction, format } => {
                cmd_graph_show(&name, algebra, qdims, induction, format).map(|_| ExitCode::SUCCESS)
            }
            GraphAction::List { algebra, level } => {
                let cat = catalog(algebra, level).map_err(|e| anyhow!(e))?;
                for g in cat {
                    println!("{}\t{}\t{}", g.name, g.level, g.rank());
                }
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
