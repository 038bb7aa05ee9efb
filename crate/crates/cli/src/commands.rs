//! The non-interactive subcommands. Each returns the text to print.

use std::path::Path;

use ndgraph::engine::{normalise, Strategy};
use ndgraph::graph::{NodeKind, PortGraph};
use ndgraph::io::{export_dot, graph_to_json};
use ndgraph::lambda::{check_linear, curry_howard_rename, infer_type, Direction};
use ndgraph::logic::check_proof;
use ndgraph::rules::{Catalogue, Mode};
use thiserror::Error;

use crate::input::{Input, InputError, Kind};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input, flags or files.
    #[error("{0}")]
    User(String),
    /// A failure of the engine itself.
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::User(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::User(e.to_string())
    }
}

/// Output format for graphs.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Dot,
}

pub fn render(g: &PortGraph, format: Format) -> String {
    match format {
        Format::Json => graph_to_json(g),
        Format::Dot => export_dot(g),
    }
}

/// The rules used for reducing graphs in a mode; λ nodes always reduce.
pub fn catalogue(mode: Mode) -> Catalogue {
    Catalogue::for_mode(mode).extend(Catalogue::lambda())
}

/// Validates an input and describes it: the sequent of a proof, the typing
/// of a term, or the size of a graph.
pub fn check(path: &Path, kind: Option<Kind>) -> Result<String, CliError> {
    match Input::read(path, kind)? {
        Input::Proof(p) => check_proof(&p).map(|s| s.to_string()).map_err(|e| CliError::User(e.to_string())),
        Input::Term(t) => {
            check_linear(&t).map_err(|e| CliError::User(format!("not linear: {e}")))?;
            let typing = infer_type(&t).map_err(|e| CliError::User(e.to_string()))?;
            let ctx: Vec<String> = typing.context.iter().map(|(x, a)| format!("{x} : {a}")).collect();
            Ok(format!("{} |- {}", ctx.join(", "), typing.ty).trim_start().to_string())
        }
        Input::Graph(g) => {
            g.validate().map_err(|e| CliError::User(e.to_string()))?;
            Ok(format!("graph: {} nodes, {} interface slots", g.node_count(), g.interface_len()))
        }
    }
}

pub fn translate(path: &Path, kind: Option<Kind>, format: Format) -> Result<String, CliError> {
    let g = Input::read(path, kind)?.to_graph()?;
    Ok(render(&g, format))
}

/// Options for [`reduce`].
#[derive(Clone, Debug)]
pub struct ReduceOptions<'a> {
    pub strategy: Strategy,
    pub mode: Mode,
    pub limit: usize,
    pub trace: Option<&'a Path>,
    pub output: Option<(&'a Path, Format)>,
}

pub fn reduce(path: &Path, kind: Option<Kind>, opts: &ReduceOptions) -> Result<String, CliError> {
    let input = Input::read(path, kind)?;
    let g = input.to_graph()?;
    let out = normalise(&g, &catalogue(opts.mode), &opts.strategy, opts.limit).map_err(|e| {
        // A graph file can carry inconsistent scopes; anything we built
        // ourselves should not.
        if input.kind() == Kind::Graph {
            CliError::User(format!("{} ({})", e, e.code()))
        } else {
            CliError::Internal(e.to_string())
        }
    })?;
    if let Some(p) = opts.trace {
        write(p, &out.trace.to_json())?;
    }
    if let Some((p, format)) = opts.output {
        write(p, &render(&out.graph, format))?;
    }
    let status = match out.status {
        ndgraph::engine::Status::NormalForm => "normal_form",
        ndgraph::engine::Status::StepLimit => "step_limit",
    };
    Ok(format!("steps: {}\nstatus: {status}\nnodes: {}", out.steps, out.graph.node_count()))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::User(format!("{}: {e}", path.display())))
}

/// Curry–Howard renaming. Without a direction, graphs with λ or @ nodes go
/// to the logic side and everything else to the λ side.
pub fn rename(path: &Path, kind: Option<Kind>, to: Option<Direction>, format: Format) -> Result<String, CliError> {
    let g = Input::read(path, kind)?.to_graph()?;
    let direction = to.unwrap_or_else(|| {
        if g.count_kind(NodeKind::Lam) + g.count_kind(NodeKind::App) > 0 {
            Direction::LambdaToLogic
        } else {
            Direction::LogicToLambda
        }
    });
    let out = curry_howard_rename(&g, direction).map_err(|e| CliError::User(e.to_string()))?;
    Ok(render(&out, format))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::User("bad flag".into()).exit_code(), 1);
        assert_eq!(CliError::Internal("lost a wire".into()).exit_code(), 2);
        let missing = InputError::Read { path: "x".into(), source: std::io::ErrorKind::NotFound.into() };
        assert_eq!(CliError::from(missing).exit_code(), 1);
    }
}
