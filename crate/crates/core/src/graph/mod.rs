//! Labelled port graphs.
//!
//! A [`PortGraph`] is a set of nodes, each exposing the ordered ports its
//! [`NodeKind`] declares, plus an ordered list of interface slots. Wires join
//! two endpoints, where an endpoint is either a node port or an interface
//! slot. Every port and every slot carries exactly one wire, so a graph never
//! has a half-connected port: "free ports" are the slots of the interface.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::Formula;

pub mod iso;
pub mod matching;
pub mod rewrite;
mod wiring;

pub use iso::{is_isomorphic, Isomorphism};
pub use matching::{find_matches, Morphism};
pub use rewrite::{apply_rule, RewriteRule, RhsNode};
pub(crate) use wiring::{End, Wiring};

/// Creation-ordered node identifier.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// The node alphabet: the logic nodes, the scope family, the small-step
/// agents, the two lambda nodes, and `Fan`, which only appears in graphs
/// produced by [`crate::equiv`] for comparison.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Ax,
    C,
    W,
    AndI,
    AndE1,
    AndE2,
    /// `scoped` instances carry a fourth port wired to their scope node.
    ImpI {
        scoped: bool,
    },
    ImpE,
    /// Scope node binding `n` wires: one principal port, `n` inner ports
    /// facing the body of the abstraction and `n` outer ports.
    Scope(u16),
    Eps,
    Delta,
    Lam,
    App,
    /// n-ary contraction tree with unordered leaves.
    Fan(u16),
}

/// Port annotation. The marked states render the bullet annotations of
/// the graphical notation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PortState {
    Principal,
    Auxiliary,
    Conclusion,
    Erasing,
    Copying,
    ScopeBound,
}

impl NodeKind {
    /// The logic alphabet (excluding the scope family).
    pub const LOGIC: [NodeKind; 8] = [
        NodeKind::C,
        NodeKind::W,
        NodeKind::AndI,
        NodeKind::AndE1,
        NodeKind::AndE2,
        NodeKind::ImpI { scoped: false },
        NodeKind::ImpI { scoped: true },
        NodeKind::ImpE,
    ];

    /// Canonical ASCII name used in documents and rule names.
    pub fn name(&self) -> &'static str {
        match self {
            NodeKind::Ax => "Ax",
            NodeKind::C => "C",
            NodeKind::W => "W",
            NodeKind::AndI => "andI",
            NodeKind::AndE1 => "andE1",
            NodeKind::AndE2 => "andE2",
            NodeKind::ImpI { .. } => "impI",
            NodeKind::ImpE => "impE",
            NodeKind::Scope(_) => "s",
            NodeKind::Eps => "eps",
            NodeKind::Delta => "delta",
            NodeKind::Lam => "lam",
            NodeKind::App => "app",
            NodeKind::Fan(_) => "fan",
        }
    }

    /// Display symbol.
    pub fn symbol(&self) -> &'static str {
        match self {
            NodeKind::Ax => "Ax",
            NodeKind::C => "C",
            NodeKind::W => "W",
            NodeKind::AndI => "∧I",
            NodeKind::AndE1 => "∧E1",
            NodeKind::AndE2 => "∧E2",
            NodeKind::ImpI { .. } => "⊃I",
            NodeKind::ImpE => "⊃E",
            NodeKind::Scope(_) => "s",
            NodeKind::Eps => "ε",
            NodeKind::Delta => "δ",
            NodeKind::Lam => "λ",
            NodeKind::App => "@",
            NodeKind::Fan(_) => "C*",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            NodeKind::Ax => 2,
            NodeKind::W | NodeKind::Eps => 1,
            NodeKind::AndE1 | NodeKind::AndE2 => 2,
            NodeKind::C | NodeKind::AndI | NodeKind::ImpE | NodeKind::Delta => 3,
            NodeKind::Lam | NodeKind::App => 3,
            NodeKind::ImpI { scoped } => 3 + usize::from(*scoped),
            NodeKind::Scope(n) => 1 + 2 * usize::from(*n),
            NodeKind::Fan(n) => 1 + usize::from(*n),
        }
    }

    pub fn port_name(&self, idx: usize) -> Cow<'static, str> {
        let fixed: &[&'static str] = match self {
            NodeKind::Ax => &["left", "right"],
            NodeKind::C => &["copy", "out1", "out2"],
            NodeKind::W => &["erase"],
            NodeKind::AndI => &["concl", "left", "right"],
            NodeKind::AndE1 | NodeKind::AndE2 => &["concl", "prem"],
            NodeKind::ImpI { .. } => &["concl", "body", "binder", "scope"],
            NodeKind::ImpE => &["concl", "fun", "arg"],
            NodeKind::Eps => &["principal"],
            NodeKind::Delta => &["principal", "left", "right"],
            NodeKind::Lam => &["root", "body", "binder"],
            NodeKind::App => &["root", "fun", "arg"],
            NodeKind::Scope(n) => {
                let n = usize::from(*n);
                return match idx {
                    0 => Cow::Borrowed("principal"),
                    i if i <= n => Cow::Owned(format!("in{}", i - 1)),
                    i => Cow::Owned(format!("out{}", i - 1 - n)),
                };
            }
            NodeKind::Fan(_) => {
                return match idx {
                    0 => Cow::Borrowed("root"),
                    i => Cow::Owned(format!("leaf{}", i - 1)),
                };
            }
        };
        Cow::Borrowed(fixed[idx])
    }

    pub fn port_index(&self, name: &str) -> Option<usize> {
        (0..self.arity()).find(|&i| self.port_name(i) == name)
    }

    pub fn port_state(&self, idx: usize) -> PortState {
        match (self, idx) {
            (NodeKind::C, 0) => PortState::Copying,
            (NodeKind::W, 0) => PortState::Erasing,
            (NodeKind::AndI | NodeKind::AndE1 | NodeKind::AndE2 | NodeKind::ImpE, 0) => PortState::Conclusion,
            (NodeKind::ImpI { .. }, 0) => PortState::Conclusion,
            (NodeKind::Scope(_), 0) => PortState::Principal,
            (NodeKind::Scope(_), _) => PortState::ScopeBound,
            (NodeKind::Eps | NodeKind::Delta | NodeKind::Lam, 0) => PortState::Principal,
            (NodeKind::App, 1) => PortState::Principal,
            (NodeKind::Fan(_), 0) => PortState::Copying,
            _ => PortState::Auxiliary,
        }
    }

    /// The marked port through which erasers and duplicators interact.
    pub fn active_port(&self) -> usize {
        match self {
            NodeKind::App => 1,
            _ => 0,
        }
    }

    /// Parses a canonical name with its port count (needed for the
    /// variadic families).
    pub fn from_name(name: &str, arity: usize) -> Option<NodeKind> {
        let kind = match name {
            "Ax" => NodeKind::Ax,
            "C" => NodeKind::C,
            "W" => NodeKind::W,
            "andI" => NodeKind::AndI,
            "andE1" => NodeKind::AndE1,
            "andE2" => NodeKind::AndE2,
            "impI" if arity == 3 => NodeKind::ImpI { scoped: false },
            "impI" if arity == 4 => NodeKind::ImpI { scoped: true },
            "impE" => NodeKind::ImpE,
            "s" if arity % 2 == 1 && arity >= 3 => NodeKind::Scope(u16::try_from(arity / 2).ok()?),
            "eps" => NodeKind::Eps,
            "delta" => NodeKind::Delta,
            "lam" => NodeKind::Lam,
            "app" => NodeKind::App,
            "fan" if arity >= 1 => NodeKind::Fan(u16::try_from(arity - 1).ok()?),
            _ => return None,
        };
        (kind.arity() == arity).then_some(kind)
    }

    pub fn is_logic(&self) -> bool {
        matches!(
            self,
            NodeKind::C
                | NodeKind::W
                | NodeKind::AndI
                | NodeKind::AndE1
                | NodeKind::AndE2
                | NodeKind::ImpI { .. }
                | NodeKind::ImpE
                | NodeKind::Scope(_)
        )
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Port-graph signature: node names and their ordered port names, with the
/// variadic families listed separately.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PSignature {
    pub entries: BTreeMap<String, Vec<String>>,
    pub variadic: BTreeSet<String>,
}

impl PSignature {
    /// The signature instantiated for every kind occurring in `kinds`.
    pub fn of_kinds<'a>(kinds: impl IntoIterator<Item = &'a NodeKind>) -> Self {
        let mut sig = PSignature::default();
        for kind in kinds {
            let key = match kind {
                NodeKind::Scope(n) => format!("s_{n}"),
                NodeKind::Fan(n) => format!("fan_{n}"),
                NodeKind::ImpI { scoped: true } => "impI_s".to_string(),
                k => k.name().to_string(),
            };
            if matches!(kind, NodeKind::Scope(_) | NodeKind::Fan(_) | NodeKind::ImpI { .. }) {
                sig.variadic.insert(kind.name().to_string());
            }
            sig.entries
                .entry(key)
                .or_insert_with(|| (0..kind.arity()).map(|i| kind.port_name(i).into_owned()).collect());
        }
        sig
    }
}

/// One end of a wire.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    Port(NodeId, u16),
    /// Interface slot by position.
    Free(u32),
}

impl Endpoint {
    pub fn port(node: NodeId, idx: usize) -> Self {
        Endpoint::Port(node, idx as u16)
    }

    pub fn node(&self) -> Option<NodeId> {
        match self {
            Endpoint::Port(n, _) => Some(*n),
            Endpoint::Free(_) => None,
        }
    }
}

/// A node together with its annotations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub kind: NodeKind,
    /// Owning abstraction node, if the node lies inside one.
    pub scope: Option<NodeId>,
    /// Per-port formula labels; metadata only.
    pub labels: Vec<Option<Formula>>,
}

impl Node {
    pub fn new(kind: NodeKind, scope: Option<NodeId>) -> Self {
        Node { kind, scope, labels: vec![None; kind.arity()] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown port `{port}` on node {node} ({kind})")]
    UnknownPort { node: String, kind: String, port: String },
    #[error("port {0} already carries a wire")]
    DuplicateEdge(String),
    #[error("port {0} has no wire")]
    Unwired(String),
    #[error("dangling endpoint {0}")]
    Dangling(String),
    #[error("scope of node {node} refers to {scope}, which is not an abstraction node")]
    BadScope { node: NodeId, scope: NodeId },
    #[error("stale match: {0}")]
    StaleMatch(String),
    #[error("scope integrity: {0}")]
    Integrity(String),
    #[error("malformed graph: {0}")]
    Malformed(String),
}

/// An immutable-by-convention port graph. Rewriting returns new values.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PortGraph {
    pub(crate) nodes: BTreeMap<NodeId, Node>,
    pub(crate) links: BTreeMap<Endpoint, Endpoint>,
    pub(crate) interface: Vec<Option<Formula>>,
    pub(crate) next_id: u32,
}

impl PortGraph {
    pub fn empty() -> Self {
        PortGraph::default()
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(&id)
    }

    pub fn kind(&self, id: NodeId) -> Option<NodeKind> {
        self.nodes.get(&id).map(|n| n.kind)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> + '_ {
        self.nodes.iter().map(|(id, n)| (*id, n))
    }

    pub fn node_ids(&self) -> Vec<NodeId> {
        self.nodes.keys().copied().collect()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.interface.is_empty()
    }

    pub fn next_id(&self) -> u32 {
        self.next_id
    }

    pub fn partner(&self, e: Endpoint) -> Option<Endpoint> {
        self.links.get(&e).copied()
    }

    /// Partner of port `idx` of `node`; panics on an ill-formed graph.
    pub fn partner_of(&self, node: NodeId, idx: usize) -> Endpoint {
        self.links[&Endpoint::port(node, idx)]
    }

    pub fn interface_len(&self) -> usize {
        self.interface.len()
    }

    pub fn interface_labels(&self) -> &[Option<Formula>] {
        &self.interface
    }

    /// Every wire once, as `(smaller, larger)` endpoint pairs in order.
    pub fn edges(&self) -> Vec<(Endpoint, Endpoint)> {
        self.links.iter().filter(|(a, b)| a <= b).map(|(a, b)| (*a, *b)).collect()
    }

    pub fn kinds(&self) -> BTreeSet<NodeKind> {
        self.nodes.values().map(|n| n.kind).collect()
    }

    pub fn count_kind(&self, kind: NodeKind) -> usize {
        self.nodes.values().filter(|n| n.kind == kind).count()
    }

    pub fn signature(&self) -> PSignature {
        PSignature::of_kinds(self.kinds().iter())
    }

    pub fn label(&self, e: Endpoint) -> Option<&Formula> {
        match e {
            Endpoint::Port(n, p) => self.nodes.get(&n)?.labels.get(usize::from(p))?.as_ref(),
            Endpoint::Free(i) => self.interface.get(i as usize)?.as_ref(),
        }
    }

    pub fn describe(&self, e: Endpoint) -> String {
        match e {
            Endpoint::Port(n, p) => match self.nodes.get(&n) {
                Some(node) => format!("{n}.{}", node.kind.port_name(usize::from(p))),
                None => format!("{n}.#{p}"),
            },
            Endpoint::Free(i) => format!("free{i}"),
        }
    }

    pub(crate) fn alloc(&mut self, kind: NodeKind, scope: Option<NodeId>) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        self.nodes.insert(id, Node::new(kind, scope));
        id
    }

    pub(crate) fn link(&mut self, a: Endpoint, b: Endpoint) {
        self.links.insert(a, b);
        self.links.insert(b, a);
    }

    /// Checks every structural invariant.
    pub fn validate(&self) -> Result<(), GraphError> {
        for (id, node) in &self.nodes {
            if id.0 >= self.next_id {
                return Err(GraphError::Malformed(format!("{id} not below next_id")));
            }
            if node.labels.len() != node.kind.arity() {
                return Err(GraphError::Malformed(format!("{id} label count")));
            }
            for p in 0..node.kind.arity() {
                let e = Endpoint::port(*id, p);
                if !self.links.contains_key(&e) {
                    return Err(GraphError::Unwired(self.describe(e)));
                }
            }
            if let Some(s) = node.scope {
                match self.nodes.get(&s) {
                    Some(owner) if matches!(owner.kind, NodeKind::ImpI { .. }) => {}
                    _ => return Err(GraphError::BadScope { node: *id, scope: s }),
                }
            }
        }
        for i in 0..self.interface.len() {
            if !self.links.contains_key(&Endpoint::Free(i as u32)) {
                return Err(GraphError::Unwired(format!("free{i}")));
            }
        }
        for (a, b) in &self.links {
            if self.links.get(b) != Some(a) {
                return Err(GraphError::Malformed(format!("asymmetric wire at {}", self.describe(*a))));
            }
            for e in [a, b] {
                let ok = match e {
                    Endpoint::Port(n, p) => self.nodes.get(n).is_some_and(|node| usize::from(*p) < node.kind.arity()),
                    Endpoint::Free(i) => (*i as usize) < self.interface.len(),
                };
                if !ok {
                    return Err(GraphError::Dangling(self.describe(*e)));
                }
            }
        }
        // Scope ownership must be acyclic.
        for id in self.nodes.keys() {
            let mut seen = BTreeSet::new();
            let mut cur = self.nodes[id].scope;
            while let Some(s) = cur {
                if !seen.insert(s) {
                    return Err(GraphError::Malformed(format!("scope cycle through {s}")));
                }
                cur = self.nodes.get(&s).and_then(|n| n.scope);
            }
        }
        Ok(())
    }

    /// True when `owner` is on the scope chain of `node`.
    pub fn in_scope_of(&self, node: NodeId, owner: NodeId) -> bool {
        let mut cur = self.nodes.get(&node).and_then(|n| n.scope);
        while let Some(s) = cur {
            if s == owner {
                return true;
            }
            cur = self.nodes.get(&s).and_then(|n| n.scope);
        }
        false
    }

    /// The scope node attached to a scoped abstraction.
    pub fn scope_node_of(&self, impi: NodeId) -> Option<NodeId> {
        match self.kind(impi)? {
            NodeKind::ImpI { scoped: true } => match self.partner_of(impi, 3) {
                Endpoint::Port(s, 0) if matches!(self.kind(s), Some(NodeKind::Scope(_))) => Some(s),
                _ => None,
            },
            _ => None,
        }
    }

    /// Reorders the interface: new slot `i` is old slot `perm[i]`.
    pub fn permute_interface(&self, perm: &[usize]) -> PortGraph {
        assert_eq!(perm.len(), self.interface.len(), "permutation length");
        let mut inverse = vec![0u32; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new as u32;
        }
        let remap = |e: Endpoint| match e {
            Endpoint::Free(i) => Endpoint::Free(inverse[i as usize]),
            e => e,
        };
        PortGraph {
            nodes: self.nodes.clone(),
            links: self.links.iter().map(|(a, b)| (remap(*a), remap(*b))).collect(),
            interface: perm.iter().map(|&old| self.interface[old].clone()).collect(),
            next_id: self.next_id,
        }
    }

    /// Places `other` beside `self`; its node ids are shifted past ours and
    /// its interface follows ours.
    pub fn disjoint_union(&self, other: &PortGraph) -> PortGraph {
        let offset = self.next_id;
        let base = self.interface.len() as u32;
        let shift = |e: Endpoint| match e {
            Endpoint::Port(n, p) => Endpoint::Port(NodeId(n.0 + offset), p),
            Endpoint::Free(i) => Endpoint::Free(i + base),
        };
        let mut out = self.clone();
        for (id, node) in &other.nodes {
            let mut node = node.clone();
            node.scope = node.scope.map(|s| NodeId(s.0 + offset));
            out.nodes.insert(NodeId(id.0 + offset), node);
        }
        for (a, b) in &other.links {
            out.links.insert(shift(*a), shift(*b));
        }
        out.interface.extend(other.interface.iter().cloned());
        out.next_id = offset + other.next_id;
        out
    }

    /// Number of connected components, counting wires between two slots.
    pub fn component_count(&self) -> usize {
        let keys: Vec<Endpoint> = self
            .nodes
            .keys()
            .map(|n| Endpoint::Port(*n, 0))
            .chain((0..self.interface.len() as u32).map(Endpoint::Free))
            .collect();
        let index: BTreeMap<Endpoint, usize> = keys.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let rep = |e: Endpoint| match e {
            Endpoint::Port(n, _) => index[&Endpoint::Port(n, 0)],
            f => index[&f],
        };
        let mut parent: Vec<usize> = (0..keys.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (a, b) in self.edges() {
            let (ra, rb) = (find(&mut parent, rep(a)), find(&mut parent, rep(b)));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..keys.len()).filter(|&i| find(&mut parent, i) == i).count()
    }

    /// Copies labels across wires onto unlabelled ports until nothing changes.
    pub(crate) fn propagate_labels(&mut self) {
        loop {
            let mut updates = Vec::new();
            for (a, b) in &self.links {
                if let Endpoint::Port(n, p) = a {
                    if self.nodes[n].labels[usize::from(*p)].is_none() {
                        if let Some(l) = self.label(*b) {
                            updates.push((*n, usize::from(*p), l.clone()));
                        }
                    }
                }
            }
            if updates.is_empty() {
                return;
            }
            for (n, p, l) in updates {
                self.nodes.get_mut(&n).unwrap().labels[p] = Some(l);
            }
        }
    }
}

/// Node description for [`build_graph`].
#[derive(Clone, Debug)]
pub struct NodeSpec {
    pub kind: NodeKind,
    /// Index into the same spec list of the owning abstraction.
    pub scope: Option<usize>,
}

impl NodeSpec {
    pub fn new(kind: NodeKind) -> Self {
        NodeSpec { kind, scope: None }
    }
}

/// A port named by node index into the spec list and port name.
pub type PortRef<'a> = (usize, &'a str);

/// Builds a graph from node specs and named port pairs. Ports left without
/// a wire become interface slots in declaration order.
pub fn build_graph(specs: &[NodeSpec], edges: &[(PortRef, PortRef)]) -> Result<PortGraph, GraphError> {
    let mut graph = PortGraph::empty();
    let ids: Vec<NodeId> = specs.iter().map(|s| graph.alloc(s.kind, None)).collect();
    for (spec, id) in specs.iter().zip(&ids) {
        if let Some(owner) = spec.scope {
            let owner_id =
                *ids.get(owner).ok_or_else(|| GraphError::Malformed(format!("scope index {owner} out of range")))?;
            graph.nodes.get_mut(id).unwrap().scope = Some(owner_id);
        }
    }
    let resolve = |(i, name): (usize, &str), graph: &PortGraph| -> Result<Endpoint, GraphError> {
        let id = *ids.get(i).ok_or_else(|| GraphError::Malformed(format!("node index {i} out of range")))?;
        let kind = graph.nodes[&id].kind;
        let p = kind.port_index(name).ok_or_else(|| GraphError::UnknownPort {
            node: id.to_string(),
            kind: kind.name().to_string(),
            port: name.to_string(),
        })?;
        Ok(Endpoint::port(id, p))
    };
    for (a, b) in edges {
        let (ea, eb) = (resolve(*a, &graph)?, resolve(*b, &graph)?);
        for e in [ea, eb] {
            if graph.links.contains_key(&e) {
                return Err(GraphError::DuplicateEdge(graph.describe(e)));
            }
        }
        if ea == eb {
            return Err(GraphError::DuplicateEdge(graph.describe(ea)));
        }
        graph.link(ea, eb);
    }
    for id in &ids {
        for p in 0..graph.nodes[id].kind.arity() {
            let e = Endpoint::port(*id, p);
            if !graph.links.contains_key(&e) {
                let slot = Endpoint::Free(graph.interface.len() as u32);
                graph.interface.push(None);
                graph.link(e, slot);
            }
        }
    }
    graph.validate()?;
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_w_has_one_free_port() {
        let g = build_graph(&[NodeSpec::new(NodeKind::W)], &[]).unwrap();
        assert_eq!(g.interface_len(), 1);
        assert_eq!(g.node(NodeId(0)).unwrap().kind.port_state(0), PortState::Erasing);
    }

    #[test]
    fn eps_pair_is_closed() {
        let g = build_graph(
            &[NodeSpec::new(NodeKind::Eps), NodeSpec::new(NodeKind::Eps)],
            &[((0, "principal"), (1, "principal"))],
        )
        .unwrap();
        assert_eq!(g.interface_len(), 0);
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn duplicate_edge_is_rejected() {
        let err = build_graph(
            &[NodeSpec::new(NodeKind::Eps), NodeSpec::new(NodeKind::Eps), NodeSpec::new(NodeKind::W)],
            &[((0, "principal"), (1, "principal")), ((0, "principal"), (2, "erase"))],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::DuplicateEdge(ref p) if p.contains("principal")));
    }

    #[test]
    fn unknown_port_is_named() {
        let err = build_graph(&[NodeSpec::new(NodeKind::W)], &[((0, "copy"), (0, "erase"))]).unwrap_err();
        assert_eq!(err, GraphError::UnknownPort { node: "n0".into(), kind: "W".into(), port: "copy".into() });
    }

    #[test]
    fn scope_port_layout() {
        let s = NodeKind::Scope(2);
        let names: Vec<_> = (0..s.arity()).map(|i| s.port_name(i).into_owned()).collect();
        assert_eq!(names, ["principal", "in0", "in1", "out0", "out1"]);
        assert_eq!(NodeKind::from_name("s", 5), Some(s));
        assert_eq!(NodeKind::from_name("impI", 4), Some(NodeKind::ImpI { scoped: true }));
        assert_eq!(NodeKind::from_name("W", 2), None);
    }

    #[test]
    fn union_and_components() {
        let g = build_graph(&[NodeSpec::new(NodeKind::W)], &[]).unwrap();
        let u = g.disjoint_union(&g);
        u.validate().unwrap();
        assert_eq!(u.node_count(), 2);
        assert_eq!(u.component_count(), 2);
        assert_eq!(u.interface_len(), 2);
    }
}
