use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gadget_core::constructions::{self as c, ComposedGadget, Construction, PathGadget, SignalPair, TeeMode};
use gadget_core::graph::{write_graph6, EdgeRef};
use gadget_core::hyper::OrientedHypergraph;

use crate::run::{Ctx, Outcome};
use crate::to_value;

#[derive(Args)]
pub struct Sender {
    /// Gadget graph file.
    #[arg(long)]
    gadget: PathBuf,
    #[arg(long)]
    e: EdgeRef,
    #[arg(long)]
    f: EdgeRef,
}

#[derive(Args)]
pub struct Common {
    /// Also write the graph6 result here.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Case1,
    Case2,
}

#[derive(Subcommand)]
pub enum ComposeCommand {
    /// Merge a gadget's signal edge onto a host edge.
    Attach {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        target: EdgeRef,
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long)]
        signal: EdgeRef,
        #[command(flatten)]
        common: Common,
    },
    /// Join two host edges by a sender.
    Join {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        a: EdgeRef,
        #[arg(long)]
        b: EdgeRef,
        #[command(flatten)]
        sender: Sender,
        #[command(flatten)]
        common: Common,
    },
    /// Identify two open paths abc.
    Glue {
        #[arg(long)]
        g1: PathBuf,
        /// Vertices a,b,c of the first graph.
        #[arg(long, value_delimiter = ',', num_args = 3)]
        path1: Vec<usize>,
        #[arg(long)]
        g2: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 3)]
        path2: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Two copies of a sender on a path, in opposite directions.
    SymmetricDouble {
        #[command(flatten)]
        sender: Sender,
        #[command(flatten)]
        common: Common,
    },
    /// The claw graph on K_h with d joined spokes.
    Claw {
        #[command(flatten)]
        sender: Sender,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Path abcd with s on (ab, bc) and sc on (bc, cd).
    ChainT(Chain),
    /// Path pabcd with sc, s, sc.
    ChainTprime(Chain),
    /// Attach a gadget to every host edge, optionally skipping one.
    StarAttachAll {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long)]
        signal: EdgeRef,
        #[arg(long)]
        except: Option<EdgeRef>,
        #[command(flatten)]
        common: Common,
    },
    /// Matching of q+1 edges joined pairwise by a sender.
    PositiveFromNegative {
        #[command(flatten)]
        sender: Sender,
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        common: Common,
    },
    /// K_t with a disjoint edge joined to each clique edge.
    DeterminerFromPositive {
        #[command(flatten)]
        sender: Sender,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Host plus uv, spokes vx and two sender layers.
    TwoLevelStar {
        #[arg(long)]
        host: PathBuf,
        #[command(flatten)]
        sender: Sender,
        #[command(flatten)]
        common: Common,
    },
    /// Host plus uv with a path gadget on every host edge.
    TeeStar {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long)]
        pa: Option<EdgeRef>,
        #[arg(long)]
        ab: EdgeRef,
        #[arg(long)]
        bc: EdgeRef,
        #[arg(long)]
        cd: EdgeRef,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[command(flatten)]
        common: Common,
    },
    /// One copy of a graph per hypergraph arc, sharing the center.
    Core {
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long)]
        x: usize,
        /// The neighbors of x in arc order.
        #[arg(long, value_delimiter = ',')]
        order: Vec<usize>,
        #[arg(long)]
        hyper: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Rebuild from a provenance record or a previous compose document.
    Replay {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
pub struct Chain {
    #[arg(long)]
    s: PathBuf,
    #[arg(long)]
    s_e: EdgeRef,
    #[arg(long)]
    s_f: EdgeRef,
    #[arg(long)]
    sc: PathBuf,
    #[arg(long)]
    sc_e: EdgeRef,
    #[arg(long)]
    sc_f: EdgeRef,
    #[command(flatten)]
    common: Common,
}

impl ComposeCommand {
    pub fn name(&self) -> &'static str {
        match self {
            ComposeCommand::Attach { .. } => "attach",
            ComposeCommand::Join { .. } => "join",
            ComposeCommand::Glue { .. } => "glue",
            ComposeCommand::SymmetricDouble { .. } => "symmetric-double",
            ComposeCommand::Claw { .. } => "claw",
            ComposeCommand::ChainT(_) => "chain-t",
            ComposeCommand::ChainTprime(_) => "chain-tprime",
            ComposeCommand::StarAttachAll { .. } => "star-attach-all",
            ComposeCommand::PositiveFromNegative { .. } => "positive-from-negative",
            ComposeCommand::DeterminerFromPositive { .. } => "determiner-from-positive",
            ComposeCommand::TwoLevelStar { .. } => "two-level-star",
            ComposeCommand::TeeStar { .. } => "tee-star",
            ComposeCommand::Core { .. } => "core",
            ComposeCommand::Replay { .. } => "replay",
        }
    }
}

fn sender(ctx: &mut Ctx, s: &Sender) -> Result<SignalPair> {
    Ok(SignalPair::new(ctx.graph(&s.gadget)?, s.e, s.f)?)
}

fn chain_pair(ctx: &mut Ctx, ch: &Chain) -> Result<(SignalPair, SignalPair)> {
    let s = SignalPair::new(ctx.graph(&ch.s)?, ch.s_e, ch.s_f)?;
    let sc = SignalPair::new(ctx.graph(&ch.sc)?, ch.sc_e, ch.sc_f)?;
    Ok((s, sc))
}

fn triple(v: &[usize]) -> [usize; 3] {
    [v[0], v[1], v[2]]
}

fn provenance_from(ctx: &mut Ctx, file: &PathBuf) -> Result<Construction> {
    let text = ctx.read(file)?;
    let doc: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", file.display()))?;
    let p = doc
        .pointer("/result/provenance")
        .or_else(|| doc.get("provenance"))
        .unwrap_or(&doc)
        .clone();
    serde_json::from_value(p).context("not a construction record")
}

pub fn run(ctx: &mut Ctx, cmd: ComposeCommand) -> Result<Outcome> {
    let (out, common) = match &cmd {
        ComposeCommand::Attach { host, target, gadget, signal, common } => {
            let (h, g) = (ctx.graph(host)?, ctx.graph(gadget)?);
            (c::attach(&h, *target, &g, *signal)?, common)
        }
        ComposeCommand::Join { host, a, b, sender: s, common } => {
            let h = ctx.graph(host)?;
            (c::join(&h, *a, *b, &sender(ctx, s)?)?, common)
        }
        ComposeCommand::Glue { g1, path1, g2, path2, common } => {
            let (x, y) = (ctx.graph(g1)?, ctx.graph(g2)?);
            (c::glue_on_path(&x, triple(path1), &y, triple(path2))?, common)
        }
        ComposeCommand::SymmetricDouble { sender: s, common } => (c::symmetric_double(&sender(ctx, s)?)?, common),
        ComposeCommand::Claw { sender: s, h, d, common } => (c::claw(&sender(ctx, s)?, *h, *d)?, common),
        ComposeCommand::ChainT(ch) => {
            let (s, sc) = chain_pair(ctx, ch)?;
            (c::chain_t(&s, &sc)?, &ch.common)
        }
        ComposeCommand::ChainTprime(ch) => {
            let (s, sc) = chain_pair(ctx, ch)?;
            (c::chain_tprime(&s, &sc)?, &ch.common)
        }
        ComposeCommand::StarAttachAll { host, gadget, signal, except, common } => {
            let (h, g) = (ctx.graph(host)?, ctx.graph(gadget)?);
            (c::star_attach_all(&h, &g, *signal, *except)?, common)
        }
        ComposeCommand::PositiveFromNegative { sender: s, q, common } => {
            (c::positive_from_negative(&sender(ctx, s)?, *q)?, common)
        }
        ComposeCommand::DeterminerFromPositive { sender: s, t, common } => {
            (c::determiner_from_positive(&sender(ctx, s)?, *t)?, common)
        }
        ComposeCommand::TwoLevelStar { host, sender: s, common } => {
            let h = ctx.graph(host)?;
            (c::two_level_star(&h, &sender(ctx, s)?)?, common)
        }
        ComposeCommand::TeeStar { host, gadget, pa, ab, bc, cd, mode, common } => {
            let h = ctx.graph(host)?;
            let t = PathGadget {
                graph: ctx.graph(gadget)?,
                pa: *pa,
                ab: *ab,
                bc: *bc,
                cd: *cd,
            };
            let mode = match mode {
                ModeArg::Case1 => TeeMode::Case1,
                ModeArg::Case2 => TeeMode::Case2,
            };
            (c::tee_star(&h, &t, mode)?, common)
        }
        ComposeCommand::Core { gadget, x, order, hyper, common } => {
            let f = ctx.graph(gadget)?;
            let text = ctx.read(hyper)?;
            let h = OrientedHypergraph::parse(&text).with_context(|| format!("in {}", hyper.display()))?;
            (c::assemble_core(&f, *x, order, &h)?, common)
        }
        ComposeCommand::Replay { file, common } => (c::build(provenance_from(ctx, file)?)?, common),
    };
    if let Some(path) = &common.output {
        fs::write(path, write_graph6(&out.graph) + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(Outcome::definitive(document(&out)))
}

fn document(out: &ComposedGadget) -> Value {
    json!({
        "graph6": write_graph6(&out.graph),
        "n": out.graph.n(),
        "edges": out.graph.edge_count(),
        "tracked": out.tracked.iter().map(|(k, e)| (k.clone(), json!(e.to_string()))).collect::<serde_json::Map<_, _>>(),
        "provenance": to_value(&out.provenance),
    })
}
