//! The canonical graph document.
//!
//! ```json
//! {
//!   "signature": { "entries": { "W": ["erase"] }, "variadic": [] },
//!   "nodes": [ { "id": 0, "name": "W",
//!                "ports": [ { "name": "erase", "state": "erasing", "label": "B" } ] } ],
//!   "edges": [ [ { "node": 0, "port": "erase" }, { "free": 0 } ] ],
//!   "interface": [ { "slot": 0, "label": "B" } ],
//!   "next_id": 1
//! }
//! ```
//!
//! Edge ends are either node ports or interface slots (`{"free": i}`).
//! Printing is deterministic, so re-serialising a parsed document
//! reproduces it byte for byte.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{Endpoint, GraphError, Node, NodeId, NodeKind, PSignature, PortGraph, PortState};
use crate::logic::Formula;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureDoc {
    pub entries: BTreeMap<String, Vec<String>>,
    pub variadic: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortDoc {
    pub name: String,
    pub state: PortState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: u32,
    pub name: String,
    pub ports: Vec<PortDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scope: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EndDoc {
    Port { node: u32, port: String },
    Free { free: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotDoc {
    pub slot: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub signature: SignatureDoc,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<[EndDoc; 2]>,
    pub interface: Vec<SlotDoc>,
    pub next_id: u32,
}

#[derive(Debug, Error)]
pub enum DocError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<&PortGraph> for GraphDoc {
    fn from(g: &PortGraph) -> Self {
        let PSignature { entries, variadic } = g.signature();
        let end = |e: Endpoint| match e {
            Endpoint::Port(n, p) => {
                EndDoc::Port { node: n.0, port: g.nodes[&n].kind.port_name(usize::from(p)).into_owned() }
            }
            Endpoint::Free(i) => EndDoc::Free { free: i },
        };
        GraphDoc {
            signature: SignatureDoc { entries, variadic },
            nodes: g
                .nodes()
                .map(|(id, node)| NodeDoc {
                    id: id.0,
                    name: node.kind.name().to_string(),
                    ports: (0..node.kind.arity())
                        .map(|p| PortDoc {
                            name: node.kind.port_name(p).into_owned(),
                            state: node.kind.port_state(p),
                            label: node.labels[p].clone(),
                        })
                        .collect(),
                    scope: node.scope.map(|s| s.0),
                })
                .collect(),
            edges: g.edges().into_iter().map(|(a, b)| [end(a), end(b)]).collect(),
            interface: g
                .interface
                .iter()
                .enumerate()
                .map(|(i, label)| SlotDoc { slot: i as u32, label: label.clone() })
                .collect(),
            next_id: g.next_id,
        }
    }
}

impl TryFrom<GraphDoc> for PortGraph {
    type Error = DocError;

    fn try_from(doc: GraphDoc) -> Result<Self, DocError> {
        let schema = |m: String| Err(DocError::Schema(m));
        let mut g = PortGraph { next_id: doc.next_id, ..PortGraph::default() };
        for n in &doc.nodes {
            let Some(kind) = NodeKind::from_name(&n.name, n.ports.len()) else {
                return schema(format!("node {}: unknown node `{}` with {} ports", n.id, n.name, n.ports.len()));
            };
            for (p, port) in n.ports.iter().enumerate() {
                if port.name != kind.port_name(p) || port.state != kind.port_state(p) {
                    return schema(format!("node {}: port {p} should be `{}`", n.id, kind.port_name(p)));
                }
            }
            let mut node = Node::new(kind, n.scope.map(NodeId));
            node.labels = n.ports.iter().map(|p| p.label.clone()).collect();
            if g.nodes.insert(NodeId(n.id), node).is_some() {
                return schema(format!("duplicate node id {}", n.id));
            }
        }
        let declared = PSignature { entries: doc.signature.entries, variadic: doc.signature.variadic };
        if declared != g.signature() {
            return schema("signature does not describe the nodes present".into());
        }
        for (i, slot) in doc.interface.iter().enumerate() {
            if slot.slot as usize != i {
                return schema(format!("interface slot {} listed at position {i}", slot.slot));
            }
            g.interface.push(slot.label.clone());
        }
        for [a, b] in &doc.edges {
            let mut ends = [Endpoint::Free(0); 2];
            for (k, e) in [a, b].into_iter().enumerate() {
                ends[k] = match e {
                    EndDoc::Free { free } => Endpoint::Free(*free),
                    EndDoc::Port { node, port } => {
                        let Some(n) = g.nodes.get(&NodeId(*node)) else {
                            return Err(GraphError::Dangling(format!("n{node}.{port}")).into());
                        };
                        let idx = n.kind.port_index(port).ok_or_else(|| GraphError::UnknownPort {
                            node: NodeId(*node).to_string(),
                            kind: n.kind.name().to_string(),
                            port: port.clone(),
                        })?;
                        Endpoint::port(NodeId(*node), idx)
                    }
                };
            }
            for e in ends {
                if g.links.contains_key(&e) {
                    return Err(GraphError::DuplicateEdge(g.describe(e)).into());
                }
            }
            if ends[0] == ends[1] {
                return Err(GraphError::DuplicateEdge(g.describe(ends[0])).into());
            }
            g.link(ends[0], ends[1]);
        }
        g.validate()?;
        Ok(g)
    }
}

impl Serialize for PortGraph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PortGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = GraphDoc::deserialize(d)?;
        PortGraph::try_from(doc).map_err(serde::de::Error::custom)
    }
}

pub fn graph_to_json(g: &PortGraph) -> String {
    serde_json::to_string_pretty(g).expect("graph documents always serialise")
}

pub fn graph_from_json(text: &str) -> Result<PortGraph, DocError> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    PortGraph::try_from(doc)
}

/// SHA-256 of the compact canonical document, in hex.
pub fn content_hash(g: &PortGraph) -> String {
    let bytes = serde_json::to_vec(g).expect("graph documents always serialise");
    hex::encode(Sha256::digest(&bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, NodeSpec};

    fn sample() -> PortGraph {
        let mut g = build_graph(
            &[
                NodeSpec::new(NodeKind::ImpI { scoped: true }),
                NodeSpec::new(NodeKind::Scope(1)),
                NodeSpec { kind: NodeKind::W, scope: Some(0) },
            ],
            &[((0, "scope"), (1, "principal")), ((1, "in0"), (0, "body")), ((2, "erase"), (0, "binder"))],
        )
        .unwrap();
        g.interface[0] = Some("A".parse().unwrap());
        g
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let g = sample();
        let text = graph_to_json(&g);
        let back = graph_from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(graph_to_json(&back), text);
        assert_eq!(content_hash(&back), content_hash(&g));
    }

    #[test]
    fn bad_port_is_reported() {
        let text = graph_to_json(&sample()).replace("\"binder\"", "\"bogus\"");
        assert!(graph_from_json(&text).is_err());
        assert!(matches!(graph_from_json("{"), Err(DocError::Json(_))));
    }
}
