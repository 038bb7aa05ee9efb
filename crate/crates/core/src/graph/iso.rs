//! Interface-preserving graph isomorphism.
//!
//! Slot `i` of one graph must correspond to slot `i` of the other. Node
//! kinds and port names must agree, except that the leaves of a `Fan` node
//! may be permuted. Formula labels and scope annotations are ignored.

use std::collections::{BTreeMap, BTreeSet};

use super::{Endpoint, NodeId, NodeKind, PortGraph};

/// A witness: the node bijection from the left graph to the right one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub node_map: BTreeMap<NodeId, NodeId>,
}

#[derive(Clone, Default)]
struct State {
    /// Node image plus the (partial, for fans) port map.
    fwd: BTreeMap<NodeId, (NodeId, Vec<Option<u16>>)>,
    used: BTreeSet<NodeId>,
    pending: Vec<(Endpoint, Endpoint)>,
}

struct Ctx<'g> {
    a: &'g PortGraph,
    b: &'g PortGraph,
}

impl Ctx<'_> {
    /// Records that port `p` of `u` corresponds to port `q` of `v`.
    fn assign(&self, st: &mut State, u: NodeId, p: u16, v: NodeId, q: u16) -> bool {
        if let Some((img, ports)) = st.fwd.get_mut(&u) {
            if *img != v {
                return false;
            }
            return match ports[usize::from(p)] {
                Some(known) => known == q,
                None => {
                    if (p == 0) != (q == 0) || ports.contains(&Some(q)) {
                        return false;
                    }
                    ports[usize::from(p)] = Some(q);
                    st.pending.push((Endpoint::Port(u, p), Endpoint::Port(v, q)));
                    true
                }
            };
        }
        let kind = self.a.nodes[&u].kind;
        if st.used.contains(&v) || self.b.nodes[&v].kind != kind {
            return false;
        }
        let arity = kind.arity();
        let ports = match kind {
            NodeKind::Fan(_) => {
                if (p == 0) != (q == 0) {
                    return false;
                }
                let mut ports = vec![None; arity];
                ports[usize::from(p)] = Some(q);
                st.pending.push((Endpoint::Port(u, p), Endpoint::Port(v, q)));
                ports
            }
            _ => {
                if p != q {
                    return false;
                }
                for k in 0..arity {
                    st.pending.push((Endpoint::port(u, k), Endpoint::port(v, k)));
                }
                (0..arity as u16).map(Some).collect()
            }
        };
        st.fwd.insert(u, (v, ports));
        st.used.insert(v);
        true
    }

    fn propagate(&self, st: &mut State) -> bool {
        while let Some((ea, eb)) = st.pending.pop() {
            let (pa, pb) = match (self.a.partner(ea), self.b.partner(eb)) {
                (Some(x), Some(y)) => (x, y),
                _ => return false,
            };
            let ok = match (pa, pb) {
                (Endpoint::Free(i), Endpoint::Free(j)) => i == j,
                (Endpoint::Port(u, p), Endpoint::Port(v, q)) => self.assign(st, u, p, v, q),
                _ => false,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn search(&self, mut st: State) -> Option<State> {
        if !self.propagate(&mut st) {
            return None;
        }
        // An undetermined fan leaf: try each free target leaf.
        let open_leaf = st.fwd.iter().find_map(|(u, (v, ports))| {
            ports.iter().position(Option::is_none).map(|p| (*u, *v, p as u16, ports.clone()))
        });
        if let Some((u, v, p, ports)) = open_leaf {
            for q in 1..ports.len() as u16 {
                if ports.contains(&Some(q)) {
                    continue;
                }
                let mut next = st.clone();
                if self.assign(&mut next, u, p, v, q) {
                    if let Some(done) = self.search(next) {
                        return Some(done);
                    }
                }
            }
            return None;
        }
        // A component not reachable from the interface: try each candidate.
        let Some(u) = self.a.nodes.keys().find(|u| !st.fwd.contains_key(u)).copied() else {
            return Some(st);
        };
        let kind = self.a.nodes[&u].kind;
        for (v, node) in &self.b.nodes {
            if node.kind != kind || st.used.contains(v) {
                continue;
            }
            let mut next = st.clone();
            if self.assign(&mut next, u, 0, *v, 0) {
                if let Some(done) = self.search(next) {
                    return Some(done);
                }
            }
        }
        None
    }
}

fn kind_census(g: &PortGraph) -> BTreeMap<NodeKind, usize> {
    let mut census = BTreeMap::new();
    for node in g.nodes.values() {
        *census.entry(node.kind).or_insert(0) += 1;
    }
    census
}

/// Finds an isomorphism fixing the interface order, if one exists.
pub fn is_isomorphic(a: &PortGraph, b: &PortGraph) -> Option<Isomorphism> {
    if a.interface_len() != b.interface_len()
        || a.node_count() != b.node_count()
        || a.links.len() != b.links.len()
        || kind_census(a) != kind_census(b)
    {
        return None;
    }
    let ctx = Ctx { a, b };
    let mut st = State::default();
    for i in 0..a.interface_len() as u32 {
        st.pending.push((Endpoint::Free(i), Endpoint::Free(i)));
    }
    let done = ctx.search(st)?;
    Some(Isomorphism { node_map: done.fwd.into_iter().map(|(u, (v, _))| (u, v)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, NodeSpec};

    fn w() -> NodeSpec {
        NodeSpec::new(NodeKind::W)
    }

    #[test]
    fn interface_order_matters() {
        // W on slot 0, C with out1 on slot 1 vs. the C first.
        let g = build_graph(&[w(), NodeSpec::new(NodeKind::C)], &[]).unwrap();
        let h = build_graph(&[NodeSpec::new(NodeKind::C), w()], &[]).unwrap();
        assert!(is_isomorphic(&g, &g).is_some());
        assert!(is_isomorphic(&g, &h).is_none());
        let perm: Vec<usize> = vec![1, 2, 3, 0];
        assert!(is_isomorphic(&g.permute_interface(&perm), &h).is_some());
    }

    #[test]
    fn closed_components_are_matched() {
        let pair =
            |a, b| build_graph(&[NodeSpec::new(a), NodeSpec::new(b)], &[((0, "principal"), (1, "principal"))]).unwrap();
        let ee = pair(NodeKind::Eps, NodeKind::Eps);
        let dd = build_graph(
            &[NodeSpec::new(NodeKind::Delta), NodeSpec::new(NodeKind::Delta)],
            &[((0, "principal"), (1, "principal")), ((0, "left"), (1, "right")), ((0, "right"), (1, "left"))],
        )
        .unwrap();
        let u1 = ee.disjoint_union(&dd);
        let u2 = dd.disjoint_union(&ee);
        let iso = is_isomorphic(&u1, &u2).expect("isomorphic");
        assert_eq!(iso.node_map.len(), 4);
    }

    #[test]
    fn fan_leaves_commute() {
        let fan = |order: [usize; 2]| {
            build_graph(
                &[NodeSpec::new(NodeKind::Fan(2)), w(), NodeSpec::new(NodeKind::C)],
                &[
                    ((0, "leaf0"), (order[0], if order[0] == 1 { "erase" } else { "copy" })),
                    ((0, "leaf1"), (order[1], if order[1] == 1 { "erase" } else { "copy" })),
                ],
            )
            .unwrap()
        };
        let g = fan([1, 2]);
        let h = fan([2, 1]);
        assert!(is_isomorphic(&g, &h).is_some());
    }
}
