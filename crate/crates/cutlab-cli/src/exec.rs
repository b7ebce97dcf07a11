//! Executes parsed invocations against the library.

use std::fs;
use std::io::Read;
use std::path::Path;

use cutlab::budget::WorkBudget;
use cutlab::cuts::{
    critical_edges_budgeted, enumerate_cuts_budgeted, max_cut_size_budgeted, naive,
};
use cutlab::equiv::equivalence_budgeted;
use cutlab::experiments::{run_experiment, ExperimentConfig};
use cutlab::extremal::{is_h_simonovits, max_h_free_subgraph, CopyHypergraph};
use cutlab::io::{parse_graph, to_edge_list, to_graph6};
use cutlab::patterns::Pattern;
use cutlab::{Error, Graph, Result, RngSeed};

use crate::cli::{
    Cli, Command, CoreArgs, CritArgs, CutsArgs, Engine, EqArgs, ExperimentArgs, GenArgs,
    GraphFormat, HconstArgs, HfreeArgs, JansonArgs, MaxcutArgs, Model, OutputFormat,
    SimonovitsArgs,
};

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(args) => gen(args),
        Command::Maxcut(args) => maxcut(args),
        Command::Cuts(args) => cuts(args),
        Command::Eq(args) => eq(args),
        Command::Core(args) => core(args),
        Command::Crit(args) => crit(args),
        Command::Hconst(args) => hconst(args),
        Command::Hfree(args) => hfree(args),
        Command::Simonovits(args) => simonovits(args),
        Command::Janson(args) => janson(args),
        Command::Experiment(args) => experiment(args),
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(path)?
    };
    parse_graph(&text)
}

fn budget_from(limit: Option<u64>) -> WorkBudget {
    match limit {
        Some(limit) => WorkBudget::new(limit),
        None => WorkBudget::default(),
    }
}

fn pattern_by_name(name: &str) -> Result<Pattern> {
    Pattern::by_name(name).ok_or_else(|| {
        Error::Parameter(format!(
            "unknown pattern {name:?}; try K3, K4, K5, C5 or C7"
        ))
    })?
}

/// Writes `text` to `path`, with `-` meaning standard output.
fn write_out(path: &Path, text: &str) -> Result<()> {
    if path.as_os_str() == "-" {
        print!("{text}");
        Ok(())
    } else {
        Ok(fs::write(path, text)?)
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let seed = RngSeed::with_stream(args.seed, args.stream);
    let g = match args.model {
        Model::Gnm => {
            if args.p.is_some() {
                return Err(Error::Parameter("the gnm model takes --m, not --p".into()));
            }
            let m = args
                .m
                .ok_or_else(|| Error::Parameter("the gnm model needs --m".into()))?;
            cutlab::sample_gnm(args.n, m, seed)?
        }
        Model::Gnp => {
            if args.m.is_some() {
                return Err(Error::Parameter("the gnp model takes --p, not --m".into()));
            }
            let p = args
                .p
                .ok_or_else(|| Error::Parameter("the gnp model needs --p".into()))?;
            cutlab::sample_gnp(args.n, p, seed)?
        }
    };
    match args.format {
        GraphFormat::G6 => println!("{}", to_graph6(&g)),
        GraphFormat::Edges => print!("{}", to_edge_list(&g)),
    }
    Ok(())
}

fn maxcut(args: MaxcutArgs) -> Result<()> {
    let g = load_graph(&args.input.graph)?;
    let size = match args.engine {
        Engine::Auto => max_cut_size_budgeted(&g, args.r, &mut budget_from(args.budget))?,
        Engine::Naive => naive::max_cut_size(&g, args.r)?,
    };
    match args.format {
        OutputFormat::Plain => println!("{size}"),
        OutputFormat::Json => println!(
            "{}",
            serde_json::json!({
                "n": g.n(),
                "m": g.m(),
                "r": args.r,
                "max_cut_size": size,
            })
        ),
    }
    Ok(())
}

fn cuts(args: CutsArgs) -> Result<()> {
    let g = load_graph(&args.input.graph)?;
    let family = enumerate_cuts_budgeted(&g, args.r, args.d, &mut budget_from(args.budget))?;
    match args.format {
        OutputFormat::Plain => print!("{}", family.to_jsonl()),
        OutputFormat::Json => println!(
            "{}",
            serde_json::json!({
                "r": family.r(),
                "d": family.d(),
                "max_size": family.max_size(),
                "count": family.len(),
                "cuts": family.cuts(),
            })
        ),
    }
    Ok(())
}

fn eq(args: EqArgs) -> Result<()> {
    let g = load_graph(&args.input.graph)?;
    let s = equivalence_budgeted(&g, args.r, args.d, &mut budget_from(args.budget))?;
    println!(
        "{}",
        serde_json::json!({
            "r": s.r,
            "d": s.d,
            "pair_count": s.pair_count(),
            "components": s.components,
            "core": s.core,
            "x_r": s.x_r,
        })
    );
    Ok(())
}

fn core(args: CoreArgs) -> Result<()> {
    let g = load_graph(&args.input.graph)?;
    let s = equivalence_budgeted(&g, args.r, args.d, &mut budget_from(args.budget))?;
    println!(
        "{}",
        serde_json::json!({
            "r": s.r,
            "d": s.d,
            "alpha": args.alpha,
            "core": s.core,
            "in_core_class": s.in_core_class(args.alpha)?,
            "x_r": s.x_r,
        })
    );
    Ok(())
}

fn crit(args: CritArgs) -> Result<()> {
    let g = load_graph(&args.input.graph)?;
    let edges = critical_edges_budgeted(&g, args.r, &mut budget_from(args.budget))?;
    match args.format {
        OutputFormat::Plain => {
            for (u, v) in edges.iter() {
                println!("{u} {v}");
            }
        }
        OutputFormat::Json => println!(
            "{}",
            serde_json::json!({
                "r": args.r,
                "count": edges.len(),
                "edges": edges,
            })
        ),
    }
    Ok(())
}

fn hconst(args: HconstArgs) -> Result<()> {
    let pattern = pattern_by_name(&args.pattern)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&pattern.report()).expect("report serializes infallibly")
    );
    Ok(())
}

fn hfree(args: HfreeArgs) -> Result<()> {
    let g = load_graph(&args.input.graph)?;
    let pattern = pattern_by_name(&args.pattern)?;
    let (max_edges, witnesses) = max_h_free_subgraph(&g, &pattern)?;
    let mut doc = serde_json::json!({
        "pattern": args.pattern,
        "max_edges": max_edges,
        "witness_count": witnesses.len(),
    });
    if args.witnesses {
        doc["witnesses"] = serde_json::json!(witnesses);
    }
    println!("{doc}");
    Ok(())
}

fn simonovits(args: SimonovitsArgs) -> Result<()> {
    let g = load_graph(&args.input.graph)?;
    let pattern = pattern_by_name(&args.pattern)?;
    let verdict = is_h_simonovits(&g, &pattern)?;
    match args.format {
        OutputFormat::Plain => println!("{verdict}"),
        OutputFormat::Json => println!(
            "{}",
            serde_json::json!({"pattern": args.pattern, "h_simonovits": verdict})
        ),
    }
    Ok(())
}

fn janson(args: JansonArgs) -> Result<()> {
    let pattern = pattern_by_name(&args.pattern)?;
    let hypergraph = match &args.edge {
        None => CopyHypergraph::copies(args.n, &pattern)?,
        Some(text) => CopyHypergraph::partial(args.n, &pattern, parse_edge(text)?)?,
    };
    println!(
        "{}",
        serde_json::json!({
            "pattern": args.pattern,
            "n": args.n,
            "p": args.p,
            "members": hypergraph.len(),
            "mu": hypergraph.janson_mu(args.p)?,
            "delta": hypergraph.janson_delta(args.p)?,
        })
    );
    Ok(())
}

fn parse_edge(text: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() == 2 {
        if let (Ok(u), Ok(v)) = (parts[0].trim().parse(), parts[1].trim().parse()) {
            return Ok((u, v));
        }
    }
    Err(Error::Format(format!(
        "expected an edge as u,v with two vertex numbers, got {text:?}"
    )))
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::from_file(&args.config)?;
    for item in &args.overrides {
        let Some((key, value)) = item.split_once('=') else {
            return Err(Error::Format(format!(
                "override {item:?} is not of the form key=value"
            )));
        };
        cfg.apply_kv(key.trim(), value.trim())?;
    }
    if args.jsonl.is_some() {
        cfg.keep_trials = true;
    }
    let summary = match args.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Parameter(format!("cannot build a {threads}-thread pool: {e}")))?
            .install(|| run_experiment(&cfg)),
        None => run_experiment(&cfg),
    }?;
    write_out(&args.csv, &summary.to_csv())?;
    if let Some(path) = &args.json {
        write_out(path, &format!("{}\n", summary.to_json()))?;
    }
    if let Some(path) = &args.jsonl {
        let jsonl = summary
            .records_jsonl()
            .expect("records were retained for the jsonl output");
        write_out(path, &jsonl)?;
    }
    Ok(())
}
