//! Text syntaxes, the canonical JSON document and DOT export.

mod dot;
mod json;
mod parse;

pub use dot::{export_dot, export_dot_with, Orientation};
pub use json::{
    content_hash, graph_from_json, graph_to_json, DocError, EndDoc, GraphDoc, NodeDoc, PortDoc, SignatureDoc, SlotDoc,
};
pub use parse::{parse_formula, parse_proof, parse_term, ParseError};
