mod compose;
mod run;
mod search;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use gadget_core::coloring::{arrows_with, parse_orders, CliqueTuple, ColorSet, SearchOptions, Strategy};
use gadget_core::digraph::{analyze, aux_digraph, aux_digraph_by_enumeration};
use gadget_core::gadget::{verify, GadgetSpec, Polarity, Verdict};
use gadget_core::graph::EdgeRef;
use gadget_core::packing::{packing_bounds, packing_parameter};

use run::{Ctx, Outcome};

/// Arrowing, gadget verification and constructions for Ramsey problems on
/// tuples of cliques.
#[derive(Parser)]
#[command(name = "gadgets", version)]
struct Cli {
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Accept tuples in any order and sort them largest first.
    #[arg(long, global = true)]
    normalize: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a graph arrows a clique tuple.
    Arrows(ArrowsArgs),
    /// Check a graph against a determiner or sender specification.
    Verify(VerifyArgs),
    /// Build the color-transition digraph of two edges.
    Digraph(DigraphArgs),
    /// Run a graph construction.
    #[command(subcommand)]
    Compose(compose::ComposeCommand),
    /// Compute the packing parameter of a tuple of clique orders.
    Packing(PackingArgs),
    /// Exhaustive searches.
    #[command(subcommand)]
    Search(search::SearchCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Plain,
    Lookahead,
}

#[derive(Args)]
struct ArrowsArgs {
    /// Clique orders, largest first, e.g. 4,3.
    #[arg(long)]
    tuple: String,
    #[arg(long, value_enum, default_value = "auto")]
    strategy: StrategyArg,
    /// Give up after this many search nodes.
    #[arg(long)]
    budget: Option<u64>,
    /// Graph file (graph6 or edge list).
    graph: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
pub(crate) enum KindArg {
    Determiner,
    PositiveSender,
    NegativeSender,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    tuple: String,
    #[arg(long, value_enum)]
    kind: KindArg,
    /// The color set, e.g. 1,2.
    #[arg(long)]
    x: String,
    /// Signal edge, e.g. 0-1.
    #[arg(long)]
    e: EdgeRef,
    /// Second signal edge (senders only).
    #[arg(long)]
    f: Option<EdgeRef>,
    graph: PathBuf,
}

#[derive(Args)]
struct DigraphArgs {
    #[arg(long)]
    tuple: String,
    #[arg(long)]
    e: EdgeRef,
    #[arg(long)]
    f: EdgeRef,
    /// Sweep all free colorings instead of one query per arc.
    #[arg(long)]
    by_enumeration: bool,
    graph: PathBuf,
}

#[derive(Args)]
struct PackingArgs {
    /// Clique orders of the pattern graphs, largest first, e.g. 3,2.
    #[arg(long)]
    tuple: String,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    /// Search-node cap per vertex count.
    #[arg(long)]
    budget: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: cannot set worker count: {e}");
            return ExitCode::from(2);
        }
    }
    let mut ctx = Ctx::new(cli.normalize);
    let start = Instant::now();
    let (name, outcome) = match dispatch(&mut ctx, cli.command) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let doc = ctx.document(name, start.elapsed(), outcome.result);
    let text = serde_json::to_string_pretty(&doc).expect("documents serialize");
    // A closed pipe downstream is not an error of ours.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(if outcome.definitive { 0 } else { 1 })
}

fn dispatch(ctx: &mut Ctx, command: Command) -> Result<(String, Outcome)> {
    Ok(match command {
        Command::Arrows(a) => ("arrows".into(), cmd_arrows(ctx, a)?),
        Command::Verify(a) => ("verify".into(), cmd_verify(ctx, a)?),
        Command::Digraph(a) => ("digraph".into(), cmd_digraph(ctx, a)?),
        Command::Compose(c) => (format!("compose {}", c.name()), compose::run(ctx, c)?),
        Command::Packing(a) => ("packing".into(), cmd_packing(ctx, a)?),
        Command::Search(c) => (format!("search {}", c.name()), search::run(ctx, c)?),
    })
}

pub(crate) fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

fn cmd_arrows(ctx: &mut Ctx, a: ArrowsArgs) -> Result<Outcome> {
    let t = ctx.tuple(&a.tuple)?;
    let g = ctx.graph(&a.graph)?;
    let opts = SearchOptions {
        strategy: match a.strategy {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Plain => Strategy::Plain,
            StrategyArg::Lookahead => Strategy::Lookahead,
        },
        node_budget: a.budget,
        ..SearchOptions::default()
    };
    let v = arrows_with(&g, &t, &opts)?;
    let witness = v.witness.as_ref().map(|c| {
        g.edges()
            .iter()
            .zip(c.colors())
            .map(|(&(u, w), &col)| json!([u, w, col]))
            .collect::<Vec<_>>()
    });
    Ok(Outcome::definitive(json!({
        "tuple": ctx.tuple_doc(&t),
        "n": g.n(),
        "edges": g.edge_count(),
        "arrows": v.arrows,
        "witness": witness,
    })))
}

pub(crate) fn spec_of(kind: KindArg, x: ColorSet, e: EdgeRef, f: Option<EdgeRef>) -> Result<GadgetSpec> {
    Ok(match kind {
        KindArg::Determiner => {
            if f.is_some() {
                bail!("a determiner has a single signal edge; drop --f");
            }
            GadgetSpec::determiner(x, e)
        }
        KindArg::PositiveSender | KindArg::NegativeSender => {
            let f = f.context("senders need --f")?;
            let polarity = if matches!(kind, KindArg::PositiveSender) {
                Polarity::Positive
            } else {
                Polarity::Negative
            };
            GadgetSpec::sender(x, e, f, polarity)
        }
    })
}

fn cmd_verify(ctx: &mut Ctx, a: VerifyArgs) -> Result<Outcome> {
    let t = ctx.tuple(&a.tuple)?;
    let g = ctx.graph(&a.graph)?;
    let spec = spec_of(a.kind, ColorSet::parse(t.q(), &a.x)?, a.e, a.f)?;
    let verdict = verify(&g, &t, &spec)?;
    let certified = matches!(verdict, Verdict::Certified(_));
    let doc = json!({ "tuple": ctx.tuple_doc(&t), "verdict": to_value(&verdict) });
    Ok(if certified { Outcome::definitive(doc) } else { Outcome::negative(doc) })
}

fn cmd_digraph(ctx: &mut Ctx, a: DigraphArgs) -> Result<Outcome> {
    let t = ctx.tuple(&a.tuple)?;
    let g = ctx.graph(&a.graph)?;
    let d = if a.by_enumeration {
        aux_digraph_by_enumeration(&g, &t, a.e, a.f)?
    } else {
        aux_digraph(&g, &t, a.e, a.f)?
    };
    Ok(Outcome::definitive(json!({
        "tuple": ctx.tuple_doc(&t),
        "arcs": d.arcs().iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
        "report": to_value(&analyze(&d)),
    })))
}

fn cmd_packing(ctx: &mut Ctx, a: PackingArgs) -> Result<Outcome> {
    let orders = ctx.orders(&a.tuple)?;
    let r = packing_parameter(&orders, a.n_max, a.budget)?;
    let bounds = if orders.len() >= 2 { Some(packing_bounds(&orders)?) } else { None };
    let found = r.value.is_some();
    let witness = r.witness.as_ref().map(|p| p.to_text());
    let doc = json!({
        "orders": orders,
        "order_map": ctx.order_map(),
        "packing": to_value(&r),
        "witness_text": witness,
        "bounds": bounds.map(|b| to_value(&b)),
    });
    Ok(if found { Outcome::definitive(doc) } else { Outcome::negative(doc) })
}

/// Tuple orders for packing, where order 2 is allowed.
pub(crate) fn checked_orders(raw: &[usize]) -> Result<()> {
    if raw.is_empty() {
        bail!("empty tuple");
    }
    if let Some(&x) = raw.iter().find(|&&x| x < 2) {
        bail!("clique order {x} is below 2");
    }
    if raw.windows(2).any(|w| w[0] < w[1]) {
        bail!(
            "orders must be nonincreasing, got {}; pass --normalize to sort them",
            raw.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        );
    }
    Ok(())
}

pub(crate) fn parse_tuple_strict(s: &str) -> Result<CliqueTuple> {
    let raw = parse_orders(s)?;
    if raw.windows(2).any(|w| w[0] < w[1]) {
        bail!("tuple {s} is not nonincreasing; write it largest first or pass --normalize");
    }
    Ok(CliqueTuple::new(raw)?)
}
