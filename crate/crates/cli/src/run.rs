use std::fs;
use std::path::Path;
use std::time::Duration;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use gadget_core::coloring::{parse_orders, CliqueTuple};
use gadget_core::graph::{parse_graph, Graph};

use crate::{checked_orders, parse_tuple_strict};

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunRecord {
    subcommand: String,
    arguments: Vec<String>,
    inputs: Vec<InputDigest>,
    seed: Option<u64>,
    wall_time_ms: f64,
}

pub struct Outcome {
    pub result: Value,
    /// Exit 0 when true, 1 for refusals and absent results.
    pub definitive: bool,
}

impl Outcome {
    pub fn definitive(result: Value) -> Self {
        Outcome { result, definitive: true }
    }

    pub fn negative(result: Value) -> Self {
        Outcome { result, definitive: false }
    }
}

pub struct Ctx {
    normalize: bool,
    inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    /// Original index of each sorted tuple position, when sorting moved any.
    order_map: Option<Vec<usize>>,
}

impl Ctx {
    pub fn new(normalize: bool) -> Self {
        Ctx {
            normalize,
            inputs: Vec::new(),
            seed: None,
            order_map: None,
        }
    }

    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    pub fn graph(&mut self, path: &Path) -> Result<Graph> {
        let text = self.read(path)?;
        parse_graph(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn tuple(&mut self, s: &str) -> Result<CliqueTuple> {
        if self.normalize {
            let (t, idx) = CliqueTuple::normalized(parse_orders(s)?)?;
            self.note_order(idx);
            Ok(t)
        } else {
            parse_tuple_strict(s)
        }
    }

    pub fn orders(&mut self, s: &str) -> Result<Vec<usize>> {
        let mut raw = parse_orders(s)?;
        if self.normalize {
            let mut idx: Vec<usize> = (0..raw.len()).collect();
            idx.sort_by(|&a, &b| raw[b].cmp(&raw[a]).then(a.cmp(&b)));
            raw = idx.iter().map(|&i| raw[i]).collect();
            self.note_order(idx);
        }
        checked_orders(&raw)?;
        Ok(raw)
    }

    fn note_order(&mut self, idx: Vec<usize>) {
        if idx.iter().enumerate().any(|(i, &j)| i != j) {
            self.order_map = Some(idx);
        }
    }

    pub fn order_map(&self) -> Option<&[usize]> {
        self.order_map.as_deref()
    }

    pub fn tuple_doc(&self, t: &CliqueTuple) -> Value {
        json!({ "orders": t.orders(), "order_map": self.order_map })
    }

    pub fn document(self, subcommand: String, elapsed: Duration, result: Value) -> Value {
        let record = RunRecord {
            subcommand,
            arguments: std::env::args().skip(1).collect(),
            inputs: self.inputs,
            seed: self.seed,
            wall_time_ms: elapsed.as_secs_f64() * 1e3,
        };
        json!({ "record": record, "result": result })
    }
}
