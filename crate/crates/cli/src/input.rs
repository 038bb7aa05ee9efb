//! Reading proofs, terms and graphs from files or request bodies.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use ndgraph::graph::PortGraph;
use ndgraph::io::{graph_from_json, parse_proof, parse_term};
use ndgraph::lambda::{translate_term, Term};
use ndgraph::logic::Proof;
use ndgraph::translate::translate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// What a piece of text holds.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Proof,
    Term,
    Graph,
}

impl Kind {
    /// Guesses the kind from a file extension.
    pub fn from_path(path: &Path) -> Option<Kind> {
        match path.extension()?.to_str()? {
            "nd" | "prf" | "proof" => Some(Kind::Proof),
            "lam" | "term" => Some(Kind::Term),
            "json" => Some(Kind::Graph),
            _ => None,
        }
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "proof" => Ok(Kind::Proof),
            "term" => Ok(Kind::Term),
            "graph" => Ok(Kind::Graph),
            other => Err(format!("unknown kind `{other}` (expected proof, term or graph)")),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Proof => "proof",
            Kind::Term => "term",
            Kind::Graph => "graph",
        })
    }
}

/// A parsed input.
#[derive(Clone, Debug)]
pub enum Input {
    Proof(Proof),
    Term(Term),
    Graph(PortGraph),
}

/// Why an input could not be used. Every variant is the user's to fix.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: cannot tell whether this is a proof, a term or a graph; pass --kind")]
    UnknownKind { path: String },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

impl InputError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            InputError::Read { .. } => "read_error",
            InputError::UnknownKind { .. } => "unknown_kind",
            InputError::Parse(_) => "parse_error",
            InputError::Invalid(_) => "invalid_input",
        }
    }
}

impl Input {
    pub fn parse(kind: Kind, text: &str) -> Result<Input, InputError> {
        match kind {
            Kind::Proof => parse_proof(text).map(Input::Proof).map_err(|e| InputError::Parse(e.to_string())),
            Kind::Term => parse_term(text).map(Input::Term).map_err(|e| InputError::Parse(e.to_string())),
            Kind::Graph => graph_from_json(text).map(Input::Graph).map_err(|e| InputError::Parse(e.to_string())),
        }
    }

    /// Reads a file, taking the kind from `kind` or else the extension.
    pub fn read(path: &Path, kind: Option<Kind>) -> Result<Input, InputError> {
        let shown = path.display().to_string();
        let kind = kind.or_else(|| Kind::from_path(path)).ok_or(InputError::UnknownKind { path: shown.clone() })?;
        let text = std::fs::read_to_string(path).map_err(|source| InputError::Read { path: shown, source })?;
        Input::parse(kind, &text)
    }

    pub fn kind(&self) -> Kind {
        match self {
            Input::Proof(_) => Kind::Proof,
            Input::Term(_) => Kind::Term,
            Input::Graph(_) => Kind::Graph,
        }
    }

    /// The port graph of the input.
    pub fn to_graph(&self) -> Result<PortGraph, InputError> {
        match self {
            Input::Proof(p) => translate(p).map_err(|e| InputError::Invalid(e.to_string())),
            Input::Term(t) => translate_term(t).map_err(|e| InputError::Invalid(e.to_string())),
            Input::Graph(g) => {
                g.validate().map_err(|e| InputError::Invalid(e.to_string()))?;
                Ok(g.clone())
            }
        }
    }
}
