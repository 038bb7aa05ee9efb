//! Graphviz export. Marked ports (conclusion, erasing, copying, principal)
//! carry a bullet; nodes sharing a scope are drawn inside a cluster named
//! after the owning abstraction.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::graph::{Endpoint, NodeId, PortGraph, PortState};

/// Which way conclusions point. Logic graphs are drawn with hypotheses on
/// top; λ graphs traditionally put the root on top.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Orientation {
    #[default]
    ConclusionDown,
    RootUp,
}

pub fn export_dot(g: &PortGraph) -> String {
    export_dot_with(g, Orientation::default())
}

fn escape(s: &str) -> String {
    s.chars()
        .flat_map(|c| match c {
            '{' | '}' | '|' | '<' | '>' | '"' | '\\' => vec!['\\', c],
            c => vec![c],
        })
        .collect()
}

fn node_line(g: &PortGraph, id: NodeId, indent: &str) -> String {
    let node = g.node(id).unwrap();
    let kind = node.kind;
    let mut marked = Vec::new();
    let mut plain = Vec::new();
    for p in 0..kind.arity() {
        let mut text = escape(&kind.port_name(p));
        if let Some(l) = &node.labels[p] {
            text = format!("{text}: {}", escape(&l.to_string()));
        }
        match kind.port_state(p) {
            PortState::Auxiliary | PortState::ScopeBound => plain.push(format!("<p{p}> {text}")),
            _ => marked.push(format!("<p{p}> • {text}")),
        }
    }
    let mut parts = Vec::new();
    if !plain.is_empty() {
        parts.push(format!("{{{}}}", plain.join("|")));
    }
    parts.push(escape(kind.symbol()));
    if !marked.is_empty() {
        parts.push(format!("{{{}}}", marked.join("|")));
    }
    format!("{indent}{id} [label=\"{{{}}}\"];\n", parts.join("|"))
}

pub fn export_dot_with(g: &PortGraph, orientation: Orientation) -> String {
    let mut out = String::from("graph G {\n");
    let rankdir = match orientation {
        Orientation::ConclusionDown => "TB",
        Orientation::RootUp => "BT",
    };
    let _ = writeln!(out, "  rankdir={rankdir};");
    let _ = writeln!(out, "  node [shape=record, fontname=\"Helvetica\"];");

    let mut members: BTreeMap<Option<NodeId>, Vec<NodeId>> = BTreeMap::new();
    for (id, node) in g.nodes() {
        members.entry(node.scope).or_default().push(id);
    }
    fn emit(
        g: &PortGraph,
        scope: Option<NodeId>,
        members: &BTreeMap<Option<NodeId>, Vec<NodeId>>,
        depth: usize,
        out: &mut String,
    ) {
        let indent = "  ".repeat(depth);
        for id in members.get(&scope).into_iter().flatten() {
            out.push_str(&node_line(g, *id, &indent));
            if members.contains_key(&Some(*id)) {
                let _ = writeln!(out, "{indent}subgraph cluster_{id} {{");
                let _ = writeln!(out, "{indent}  style=dashed; label=\"scope of {id}\";");
                emit(g, Some(*id), members, depth + 1, out);
                let _ = writeln!(out, "{indent}}}");
            }
        }
    }
    emit(g, None, &members, 1, &mut out);
    for (i, label) in g.interface_labels().iter().enumerate() {
        let text = label.as_ref().map_or(format!("free{i}"), |l| format!("{i}: {}", escape(&l.to_string())));
        let _ = writeln!(out, "  free{i} [shape=plaintext, label=\"{text}\"];");
    }
    let end = |e: Endpoint| match e {
        Endpoint::Port(n, p) => format!("{n}:p{p}"),
        Endpoint::Free(i) => format!("free{i}"),
    };
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", end(a), end(b));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, NodeKind, NodeSpec};

    #[test]
    fn empty_graph() {
        let text = export_dot(&PortGraph::empty());
        assert!(text.starts_with("graph G {"));
        assert!(text.ends_with("}\n"));
        assert!(!text.contains("--"));
    }

    #[test]
    fn marks_and_clusters() {
        let g = build_graph(
            &[NodeSpec::new(NodeKind::ImpI { scoped: false }), NodeSpec { kind: NodeKind::C, scope: Some(0) }],
            &[((1, "copy"), (0, "binder"))],
        )
        .unwrap();
        let text = export_dot(&g);
        assert!(text.contains("• concl"));
        assert!(text.contains("• copy"));
        assert!(text.contains("subgraph cluster_n0"));
        assert_eq!(text, export_dot(&g));
    }
}
