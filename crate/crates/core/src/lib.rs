pub mod coloring;
pub mod constructions;
pub mod digraph;
pub mod error;
pub mod gadget;
pub mod graph;
pub mod hyper;
pub mod packing;
pub mod search;

pub use error::{Error, Result};
