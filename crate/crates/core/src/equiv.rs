//! Comparison of proof graphs up to the bookkeeping that differs between
//! equivalent derivations: scope boundaries, where weakenings and
//! contractions sit, and the shape of contraction trees.
//!
//! [`canonical`] removes scope nodes, pushes every W and C as far towards
//! the hypotheses as the erase/copy rules take them, and collapses each
//! maximal tree of C nodes into one `Fan` node with unordered leaves.

use std::collections::{BTreeMap, BTreeSet};

use crate::engine::{list_redexes, normalise, EngineError, Status, Strategy, STEP_LIMIT};
use crate::graph::{is_isomorphic, End, Endpoint, GraphError, Node, NodeId, NodeKind, PortGraph, Wiring};
use crate::logic::{Proof, ProofError};
use crate::rules::Catalogue;
use crate::subst::normalise_root;
use crate::translate::translate;

/// Removes every scope node, joining each inner wire to its outer wire.
/// Scoped abstractions become closed ones; scope annotations are kept.
pub fn strip_scopes(g: &PortGraph) -> PortGraph {
    let mut out = g.clone();
    let scopes: Vec<NodeId> =
        g.nodes().filter(|(_, n)| matches!(n.kind, NodeKind::Scope(_))).map(|(id, _)| id).collect();
    for s in scopes {
        let NodeKind::Scope(n) = out.nodes[&s].kind else { unreachable!() };
        let k = usize::from(n);
        let arity = 1 + 2 * k;
        let mut w = Wiring::default();
        let joint = |p: usize, inner: bool| End::Joint(p as u32, inner);
        for p in 0..arity {
            let e = Endpoint::port(s, p);
            match out.partner(e).expect("validated") {
                Endpoint::Port(v, q) if v == s => {
                    if p < usize::from(q) {
                        w.connect(joint(p, false), joint(usize::from(q), false)).unwrap();
                    }
                }
                Endpoint::Port(v, 3) if p == 0 && matches!(out.kind(v), Some(NodeKind::ImpI { scoped: true })) => {
                    let node = out.nodes.get_mut(&v).unwrap();
                    node.kind = NodeKind::ImpI { scoped: false };
                    node.labels.truncate(3);
                    out.links.remove(&Endpoint::Port(v, 3));
                }
                other => w.connect(joint(p, false), End::Real(other)).unwrap(),
            }
        }
        for i in 0..k {
            w.connect(joint(1 + i, true), joint(1 + k + i, true)).unwrap();
        }
        if !w.has(joint(0, false)) {
            w.connect(joint(0, false), joint(0, true)).unwrap();
        } else {
            // A principal port not facing its abstraction: keep it as an
            // erased wire.
            let e = out.alloc(NodeKind::W, None);
            w.connect(joint(0, true), End::Real(Endpoint::port(e, 0))).unwrap();
        }
        for p in 0..arity {
            if let Some(q) = out.links.remove(&Endpoint::port(s, p)) {
                out.links.remove(&q);
            }
        }
        out.nodes.remove(&s);
        for (a, b) in w.resolve().expect("every joint side is wired") {
            out.link(a, b);
        }
    }
    out
}

/// Collapses maximal trees of C nodes into `Fan` nodes. The root C keeps
/// its id; leaves follow a left-to-right walk of the tree.
pub fn collapse_fans(g: &PortGraph) -> PortGraph {
    let is_c = |id: NodeId| g.kind(id) == Some(NodeKind::C);
    let feeds_c = |e: Endpoint| matches!(e, Endpoint::Port(v, p) if is_c(v) && p > 0);
    let roots: Vec<NodeId> = g
        .nodes()
        .filter(|(id, n)| {
            n.kind == NodeKind::C && {
                let up = g.partner_of(*id, 0);
                !feeds_c(up) && !matches!(up, Endpoint::Port(v, 0) if is_c(v))
            }
        })
        .map(|(id, _)| id)
        .collect();

    // Old endpoint -> new endpoint, for every port of a collapsed C.
    let mut remap: BTreeMap<Endpoint, Endpoint> = BTreeMap::new();
    let mut internal: BTreeSet<Endpoint> = BTreeSet::new();
    let mut fans = Vec::new();
    for root in roots {
        let mut leaves = Vec::new();
        let mut members = vec![root];
        fn walk(
            g: &PortGraph,
            c: NodeId,
            leaves: &mut Vec<Endpoint>,
            members: &mut Vec<NodeId>,
            internal: &mut BTreeSet<Endpoint>,
        ) {
            for p in [1, 2] {
                let e = Endpoint::port(c, p);
                match g.partner(e).unwrap() {
                    Endpoint::Port(v, 0) if g.kind(v) == Some(NodeKind::C) && !members.contains(&v) => {
                        internal.insert(e);
                        internal.insert(Endpoint::port(v, 0));
                        members.push(v);
                        walk(g, v, leaves, members, internal);
                    }
                    _ => leaves.push(e),
                }
            }
        }
        walk(g, root, &mut leaves, &mut members, &mut internal);
        remap.insert(Endpoint::port(root, 0), Endpoint::port(root, 0));
        for (i, leaf) in leaves.iter().enumerate() {
            remap.insert(*leaf, Endpoint::port(root, 1 + i));
        }
        fans.push((root, leaves.len(), members));
    }

    let mut out = g.clone();
    out.links.clear();
    for (root, n, members) in &fans {
        let scope = g.node(*root).unwrap().scope;
        for m in members {
            out.nodes.remove(m);
        }
        let mut node = Node::new(NodeKind::Fan(*n as u16), scope);
        node.labels[0] = g.node(*root).unwrap().labels[0].clone();
        out.nodes.insert(*root, node);
    }
    for (a, b) in g.edges() {
        if internal.contains(&a) || internal.contains(&b) {
            continue;
        }
        let map = |e: Endpoint| *remap.get(&e).unwrap_or(&e);
        out.link(map(a), map(b));
    }
    out.propagate_labels();
    out
}

/// The W/C propagation used for comparison.
pub fn propagation() -> Catalogue {
    Catalogue::erase_copy_global().extend(Catalogue::beta().filter(|n| n == "cw"))
}

/// The comparison form of a graph.
pub fn canonical(g: &PortGraph) -> Result<PortGraph, EngineError> {
    let stripped = strip_scopes(g);
    let out = normalise(&stripped, &propagation(), &Strategy::Outermost, STEP_LIMIT)?;
    if out.status == Status::StepLimit {
        return Err(EngineError::Graph(GraphError::Malformed("erase/copy propagation did not terminate".into())));
    }
    let fanned = collapse_fans(&out.graph);
    fanned.validate()?;
    Ok(fanned)
}

/// Whether two graphs have isomorphic comparison forms.
pub fn equivalent(a: &PortGraph, b: &PortGraph) -> Result<bool, EngineError> {
    Ok(is_isomorphic(&canonical(a)?, &canonical(b)?).is_some())
}

/// Outcome of checking one root detour.
#[derive(Clone, Debug)]
pub struct StepCheck {
    pub rule: String,
    pub reduced: PortGraph,
    pub expected: PortGraph,
    pub equivalent: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Proof(#[from] ProofError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("the proof has no detour at its root")]
    NoRootDetour,
    #[error("no detour rule fires at the root of the graph")]
    NoRootRedex,
}

/// Fires the detour rule at the root of `Gr(p)` and compares the result
/// with the graph of the proof obtained by removing the same detour.
pub fn check_root_step(p: &Proof) -> Result<StepCheck, CheckError> {
    let expected_proof = normalise_root(p)?.ok_or(CheckError::NoRootDetour)?;
    let g = translate(p)?;
    let last = g.interface_len() - 1;
    let Some(Endpoint::Port(root, _)) = g.partner(Endpoint::Free(last as u32)) else {
        return Err(CheckError::NoRootRedex);
    };
    let redex = list_redexes(&g, &Catalogue::beta())
        .into_iter()
        .find(|r| r.rule.starts_with("beta.") && r.nodes.contains(&root))
        .ok_or(CheckError::NoRootRedex)?;
    let reduced = redex.apply(&g).map_err(EngineError::from)?;
    let expected = translate(&expected_proof)?;
    let equivalent = equivalent(&reduced, &expected)?;
    Ok(StepCheck { rule: redex.rule, reduced, expected, equivalent })
}
