//! Whole-scope erase and copy of an abstraction.
//!
//! The extent of an abstraction is the node itself, its scope node, and
//! every node whose scope chain reaches it. When a W meets the conclusion
//! the extent is deleted and a W is left on every wire that leaves it; when
//! a C meets the conclusion the extent is cloned, the two conclusions take
//! the C's outputs, and every wire leaving the extent gets a fresh C whose
//! outputs feed the original and the clone.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{Endpoint, GraphError, NodeId, NodeKind, PortGraph};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetaKind {
    Erase,
    Copy,
}

impl MetaKind {
    pub fn name(self) -> &'static str {
        match self {
            MetaKind::Erase => "erase.global.impI",
            MetaKind::Copy => "copy.global.impI",
        }
    }

    fn trigger(self) -> NodeKind {
        match self {
            MetaKind::Erase => NodeKind::W,
            MetaKind::Copy => NodeKind::C,
        }
    }
}

/// A meta-rule occurrence: the W or C and the abstraction it meets.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetaMatch {
    pub trigger: NodeId,
    pub abs: NodeId,
}

impl MetaMatch {
    pub fn footprint(&self) -> Vec<NodeId> {
        let mut v = vec![self.trigger, self.abs];
        v.sort();
        v
    }
}

/// Every place where the meta-rule applies, in abstraction id order.
pub fn find_meta(g: &PortGraph, kind: MetaKind) -> Vec<MetaMatch> {
    g.nodes()
        .filter(|(_, n)| matches!(n.kind, NodeKind::ImpI { .. }))
        .filter_map(|(abs, _)| match g.partner_of(abs, 0) {
            Endpoint::Port(t, 0) if g.kind(t) == Some(kind.trigger()) => Some(MetaMatch { trigger: t, abs }),
            _ => None,
        })
        .collect()
}

/// Nodes making up the extent of abstraction `abs`.
pub fn extent(g: &PortGraph, abs: NodeId) -> Result<BTreeSet<NodeId>, GraphError> {
    for (id, node) in g.nodes() {
        if let Some(s) = node.scope {
            if !matches!(g.kind(s), Some(NodeKind::ImpI { .. })) {
                return Err(GraphError::Integrity(format!("{id} is scoped by {s}, which is not an abstraction")));
            }
        }
    }
    let mut out: BTreeSet<NodeId> = g.nodes().map(|(id, _)| id).filter(|id| g.in_scope_of(*id, abs)).collect();
    out.insert(abs);
    if matches!(g.kind(abs), Some(NodeKind::ImpI { scoped: true })) {
        match g.scope_node_of(abs) {
            Some(s) => {
                out.insert(s);
            }
            None => return Err(GraphError::Integrity(format!("{abs} has lost its scope node"))),
        }
    }
    Ok(out)
}

fn check(g: &PortGraph, kind: MetaKind, m: MetaMatch) -> Result<BTreeSet<NodeId>, GraphError> {
    if !find_meta(g, kind).contains(&m) {
        return Err(GraphError::StaleMatch(format!("{} no longer meets {}", m.trigger, m.abs)));
    }
    let ext = extent(g, m.abs)?;
    if ext.contains(&m.trigger) {
        return Err(GraphError::Integrity(format!("{} lies inside the scope of {}", m.trigger, m.abs)));
    }
    let arity = g.kind(m.trigger).unwrap().arity();
    for p in 1..arity {
        if let Endpoint::Port(v, _) = g.partner_of(m.trigger, p) {
            if ext.contains(&v) {
                return Err(GraphError::Integrity(format!("{} feeds back into the scope of {}", m.trigger, m.abs)));
            }
        }
    }
    Ok(ext)
}

/// Wires from a port inside the extent to a port outside it (the trigger's
/// wire to the conclusion excluded).
fn crossing(g: &PortGraph, ext: &BTreeSet<NodeId>, m: MetaMatch) -> Vec<(Endpoint, Endpoint)> {
    let mut out = Vec::new();
    for id in ext {
        for p in 0..g.kind(*id).unwrap().arity() {
            let inner = Endpoint::port(*id, p);
            let outer = g.partner(inner).unwrap();
            let leaves = match outer {
                Endpoint::Port(v, _) => !ext.contains(&v) && v != m.trigger,
                Endpoint::Free(_) => true,
            };
            if leaves {
                out.push((inner, outer));
            }
        }
    }
    out
}

fn remove_node(g: &mut PortGraph, id: NodeId) {
    let node = g.nodes.remove(&id).expect("node present");
    for p in 0..node.kind.arity() {
        if let Some(other) = g.links.remove(&Endpoint::port(id, p)) {
            if g.links.get(&other) == Some(&Endpoint::port(id, p)) {
                g.links.remove(&other);
            }
        }
    }
}

/// Applies a meta-rule occurrence.
pub fn apply_meta(g: &PortGraph, kind: MetaKind, m: MetaMatch) -> Result<PortGraph, GraphError> {
    let ext = check(g, kind, m)?;
    let cross = crossing(g, &ext, m);
    let at = g.node(m.trigger).unwrap().scope;
    let mut out = g.clone();
    match kind {
        MetaKind::Erase => {
            for id in ext.iter().chain([&m.trigger]) {
                remove_node(&mut out, *id);
            }
            for (_, outer) in cross {
                let w = out.alloc(NodeKind::W, at);
                out.link(Endpoint::port(w, 0), outer);
            }
        }
        MetaKind::Copy => {
            let out1 = g.partner_of(m.trigger, 1);
            let out2 = g.partner_of(m.trigger, 2);
            remove_node(&mut out, m.trigger);
            let mut clone = BTreeMap::new();
            for id in &ext {
                let node = g.node(*id).unwrap();
                let c = out.alloc(node.kind, node.scope);
                out.nodes.get_mut(&c).unwrap().labels = node.labels.clone();
                clone.insert(*id, c);
            }
            for id in clone.values() {
                let node = out.nodes.get_mut(id).unwrap();
                if let Some(s) = node.scope {
                    node.scope = Some(*clone.get(&s).unwrap_or(&s));
                }
            }
            let mirror = |e: Endpoint| match e {
                Endpoint::Port(n, p) => Endpoint::Port(clone[&n], p),
                f => f,
            };
            for id in &ext {
                for p in 0..g.kind(*id).unwrap().arity() {
                    let a = Endpoint::port(*id, p);
                    match g.partner(a).unwrap() {
                        b @ Endpoint::Port(v, _) if ext.contains(&v) => out.link(mirror(a), mirror(b)),
                        _ => {}
                    }
                }
            }
            let concl = Endpoint::port(m.abs, 0);
            let concl2 = mirror(concl);
            if out1 == Endpoint::port(m.trigger, 2) {
                out.link(concl, concl2);
            } else {
                out.link(concl, out1);
                out.link(concl2, out2);
            }
            for (inner, outer) in cross {
                let c = out.alloc(NodeKind::C, at);
                out.link(Endpoint::port(c, 0), outer);
                out.link(Endpoint::port(c, 1), inner);
                out.link(Endpoint::port(c, 2), mirror(inner));
            }
        }
    }
    out.propagate_labels();
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_proof;
    use crate::translate::translate;

    fn with_trigger(text: &str, kind: NodeKind) -> PortGraph {
        let mut g = translate(&parse_proof(text).unwrap()).unwrap();
        let last = g.interface_len() - 1;
        let concl = g.partner(Endpoint::Free(last as u32)).unwrap();
        g.links.remove(&concl);
        g.links.remove(&Endpoint::Free(last as u32));
        let t = g.alloc(kind, None);
        g.link(Endpoint::port(t, 0), concl);
        if kind == NodeKind::C {
            g.link(Endpoint::port(t, 1), Endpoint::Free(last as u32));
            g.interface.push(None);
            g.link(Endpoint::port(t, 2), Endpoint::Free(last as u32 + 1));
        } else {
            g.interface.pop();
        }
        g.validate().unwrap();
        g
    }

    #[test]
    fn erase_leaves_weakenings_on_context() {
        // A |- B -> A: the abstraction captures A.
        let g = with_trigger("impI(ex(0, w(B, ax(A))))", NodeKind::W);
        let ms = find_meta(&g, MetaKind::Erase);
        assert_eq!(ms.len(), 1);
        let out = apply_meta(&g, MetaKind::Erase, ms[0]).unwrap();
        assert_eq!(out.node_count(), 1);
        assert_eq!(out.count_kind(NodeKind::W), 1);
    }

    #[test]
    fn copy_duplicates_extent() {
        let g = with_trigger("impI(ex(0, w(B, ax(A))))", NodeKind::C);
        let ms = find_meta(&g, MetaKind::Copy);
        let out = apply_meta(&g, MetaKind::Copy, ms[0]).unwrap();
        assert_eq!(out.count_kind(NodeKind::ImpI { scoped: true }), 2);
        assert_eq!(out.count_kind(NodeKind::Scope(1)), 2);
        // One C on the captured hypothesis A.
        assert_eq!(out.count_kind(NodeKind::C), 1);
        let abs: Vec<_> =
            out.nodes().filter(|(_, n)| matches!(n.kind, NodeKind::ImpI { .. })).map(|(i, _)| i).collect();
        let w_scopes: BTreeSet<_> = out.nodes().filter(|(_, n)| n.kind == NodeKind::W).map(|(_, n)| n.scope).collect();
        assert_eq!(w_scopes, abs.iter().map(|a| Some(*a)).collect());
    }

    #[test]
    fn bad_scope_reference_is_an_integrity_error() {
        let mut g = with_trigger("impI(ax(A))", NodeKind::W);
        let ms = find_meta(&g, MetaKind::Erase);
        let w = ms[0].trigger;
        g.nodes.get_mut(&w).unwrap().scope = Some(w);
        assert!(matches!(apply_meta(&g, MetaKind::Erase, ms[0]), Err(GraphError::Integrity(_))));
    }
}
