use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use serde_json::{json, Value};

use gadget_core::coloring::{Color, ColorSet};
use gadget_core::constructions::{forbidden_patterns, SignalPair};
use gadget_core::gadget::Polarity;
use gadget_core::graph::{parse_graph6, write_graph6, EdgeRef, Graph};
use gadget_core::hyper::{check_separating, hypergraph_girth, toy_hypergraph_search, OrientedHypergraph, PatternSet};
use gadget_core::packing::{turan_search, HypergraphFamily};
use gadget_core::search::{claw_threshold, gadget_search, minimal_ramsey_enumeration, nonisomorphic_graphs, SearchShape};

use crate::run::{Ctx, Outcome};
use crate::{to_value, KindArg};

#[derive(Subcommand)]
pub enum SearchCommand {
    /// Look for determiners or senders among small graphs.
    Gadgets {
        #[arg(long)]
        tuple: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        x: String,
        /// Try every graph on at most this many vertices.
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        /// Read candidates from a file, one graph6 string per line.
        #[arg(long)]
        graphs: Option<PathBuf>,
        /// Cap on the number of verifications.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Enumerate Ramsey-minimal graphs up to isomorphism.
    Minimal {
        #[arg(long)]
        tuple: String,
        #[arg(long)]
        n_max: usize,
    },
    /// Compute the colorings of the edges at x that extend to no free coloring.
    Patterns {
        #[arg(long)]
        tuple: String,
        #[arg(long)]
        x: usize,
        /// Neighbors of x in order; defaults to all neighbors ascending.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        #[arg(long, default_value_t = 8)]
        cap: usize,
        graph: PathBuf,
    },
    /// Find a small hypergraph separating the distinguished vertices 0 and 1.
    Hypergraph {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        ell: usize,
        /// Forbidden patterns such as 1,2; `mono` adds every monochromatic one.
        #[arg(long, num_args = 1.., required = true)]
        phi: Vec<String>,
        #[arg(long, default_value_t = 4)]
        girth: usize,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        max_arcs: usize,
    },
    /// Girth of a hypergraph file, and the separation checks when --phi is given.
    Girth {
        #[arg(long, default_value_t = 8)]
        cap: usize,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, num_args = 1..)]
        phi: Vec<String>,
        #[arg(long, default_value_t = 4)]
        girth: usize,
        hyper: PathBuf,
    },
    /// Which spoke counts let the claw color xy with a given color.
    Claw {
        #[arg(long)]
        tuple: String,
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long)]
        e: EdgeRef,
        #[arg(long)]
        f: EdgeRef,
        #[arg(long)]
        color: Color,
        #[arg(long)]
        h: Option<usize>,
    },
    /// Turán blowup of a hypergraph family into a packing pattern.
    Blowup {
        #[arg(long)]
        orders: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        retries: u64,
        /// One hypergraph file per color.
        #[arg(required = true)]
        family: Vec<PathBuf>,
    },
}

impl SearchCommand {
    pub fn name(&self) -> &'static str {
        match self {
            SearchCommand::Gadgets { .. } => "gadgets",
            SearchCommand::Minimal { .. } => "minimal",
            SearchCommand::Patterns { .. } => "patterns",
            SearchCommand::Hypergraph { .. } => "hypergraph",
            SearchCommand::Girth { .. } => "girth",
            SearchCommand::Claw { .. } => "claw",
            SearchCommand::Blowup { .. } => "blowup",
        }
    }
}

fn pattern_set(q: usize, ell: usize, specs: &[String]) -> Result<PatternSet> {
    let mut phi = PatternSet::empty(q, ell);
    for s in specs {
        if s == "mono" {
            for p in PatternSet::monochromatic(q, ell).iter() {
                phi.insert(p.clone())?;
            }
            continue;
        }
        let p = s
            .split(',')
            .map(|c| c.trim().parse::<Color>().with_context(|| format!("bad pattern {s}")))
            .collect::<Result<Vec<_>>>()?;
        phi.insert(p)?;
    }
    Ok(phi)
}

fn hyper_in(ctx: &mut Ctx, path: &PathBuf) -> Result<OrientedHypergraph> {
    let text = ctx.read(path)?;
    OrientedHypergraph::parse(&text).with_context(|| format!("in {}", path.display()))
}

fn graph_list(ctx: &mut Ctx, path: &PathBuf) -> Result<Vec<Graph>> {
    let text = ctx.read(path)?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_graph6(l).with_context(|| format!("bad graph6 line {l}")))
        .collect()
}

fn found(doc: Value, ok: bool) -> Outcome {
    if ok {
        Outcome::definitive(doc)
    } else {
        Outcome::negative(doc)
    }
}

pub fn run(ctx: &mut Ctx, cmd: SearchCommand) -> Result<Outcome> {
    Ok(match cmd {
        SearchCommand::Gadgets { tuple, kind, x, n_max, graphs, budget } => {
            let t = ctx.tuple(&tuple)?;
            let x = ColorSet::parse(t.q(), &x)?;
            let shape = match kind {
                KindArg::Determiner => SearchShape::Determiner { x },
                KindArg::PositiveSender => SearchShape::Sender { x, polarity: Polarity::Positive },
                KindArg::NegativeSender => SearchShape::Sender { x, polarity: Polarity::Negative },
            };
            let source = match graphs {
                Some(p) => graph_list(ctx, &p)?,
                None => {
                    let mut all = Vec::new();
                    for n in 1..=n_max {
                        all.extend(nonisomorphic_graphs(n)?);
                    }
                    all
                }
            };
            let r = gadget_search(&t, shape, source, budget)?;
            let ok = !r.certificates.is_empty();
            let graph6: Vec<String> = r.certificates.iter().map(|c| write_graph6(&c.graph)).collect();
            found(json!({ "tuple": ctx.tuple_doc(&t), "graph6": graph6, "report": to_value(&r) }), ok)
        }
        SearchCommand::Minimal { tuple, n_max } => {
            let t = ctx.tuple(&tuple)?;
            let r = minimal_ramsey_enumeration(&t, n_max)?;
            let graph6: Vec<String> = r.graphs.iter().map(write_graph6).collect();
            let ok = !r.graphs.is_empty();
            found(
                json!({
                    "tuple": ctx.tuple_doc(&t),
                    "ramsey_number": r.ramsey_number,
                    "edge_floor": r.edge_floor,
                    "candidates": r.candidates,
                    "graph6": graph6,
                }),
                ok,
            )
        }
        SearchCommand::Patterns { tuple, x, order, cap, graph } => {
            let t = ctx.tuple(&tuple)?;
            let g = ctx.graph(&graph)?;
            if x >= g.n() {
                bail!("vertex {x} outside a graph on {} vertices", g.n());
            }
            let order = order.unwrap_or_else(|| g.neighbors(x).collect());
            let phi = forbidden_patterns(&g, &t, x, &order, cap)?;
            Outcome::definitive(json!({
                "tuple": ctx.tuple_doc(&t),
                "x": x,
                "order": order,
                "count": phi.len(),
                "patterns": phi.iter().collect::<Vec<_>>(),
            }))
        }
        SearchCommand::Hypergraph { q, ell, phi, girth, max_n, max_arcs } => {
            let phi = pattern_set(q, ell, &phi)?;
            let h = toy_hypergraph_search(&phi, q, ell, girth, max_n, max_arcs)?;
            let ok = h.is_some();
            found(
                json!({
                    "q": q,
                    "ell": ell,
                    "girth": girth,
                    "hypergraph": h.as_ref().map(|h| h.to_text()),
                }),
                ok,
            )
        }
        SearchCommand::Girth { cap, q, phi, girth, hyper } => {
            let h = hyper_in(ctx, &hyper)?;
            let g = hypergraph_girth(&h, cap)?;
            let separation = if phi.is_empty() {
                None
            } else {
                let q = q.context("--phi needs --q")?;
                Some(check_separating(&h, &pattern_set(q, h.ell(), &phi)?, q, girth)?)
            };
            let ok = separation.as_ref().is_none_or(|s| s.holds());
            found(
                json!({
                    "girth": to_value(&g),
                    "separation": separation.map(|s| to_value(&s)),
                }),
                ok,
            )
        }
        SearchCommand::Claw { tuple, gadget, e, f, color, h } => {
            let t = ctx.tuple(&tuple)?;
            let s = SignalPair::new(ctx.graph(&gadget)?, e, f)?;
            let scan = claw_threshold(&t, &s, color, h)?;
            Outcome::definitive(json!({ "tuple": ctx.tuple_doc(&t), "scan": to_value(&scan) }))
        }
        SearchCommand::Blowup { orders, seed, retries, family } => {
            let orders = ctx.orders(&orders)?;
            let members = family.iter().map(|p| hyper_in(ctx, p)).collect::<Result<Vec<_>>>()?;
            let fam = HypergraphFamily::new(members)?;
            ctx.seed = Some(seed);
            let r = turan_search(&fam, &orders, seed, retries)?;
            let ok = r.is_some();
            found(
                json!({
                    "orders": orders,
                    "order_map": ctx.order_map(),
                    "outcome": r.as_ref().map(to_value),
                    "pattern_text": r.as_ref().map(|b| b.pattern.to_text()),
                }),
                ok,
            )
        }
    })
}
