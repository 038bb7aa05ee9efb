//! Injective port-graph morphisms from a pattern into a host.

use super::{Endpoint, NodeId, NodeKind, PortGraph};

/// An injective node map from a pattern into a host. `node_map[i]` is the
/// image of the pattern's `i`-th node in id order; ports map by name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Morphism {
    pub node_map: Vec<NodeId>,
}

impl Morphism {
    /// Image of a pattern endpoint. Slots have no image.
    pub fn map_endpoint(&self, pattern: &PortGraph, e: Endpoint) -> Option<Endpoint> {
        match e {
            Endpoint::Port(n, p) => {
                let idx = pattern.nodes.keys().position(|k| *k == n)?;
                Some(Endpoint::Port(self.node_map[idx], p))
            }
            Endpoint::Free(_) => None,
        }
    }

    /// Matched host nodes, sorted.
    pub fn footprint(&self) -> Vec<NodeId> {
        let mut ids = self.node_map.clone();
        ids.sort();
        ids
    }
}

struct Step {
    kind: NodeKind,
    /// Wires to earlier pattern nodes: (own port, earlier step, their port).
    back: Vec<(u16, usize, u16)>,
    /// Wires between two ports of this node.
    loops: Vec<(u16, u16)>,
}

fn plan(lhs: &PortGraph) -> (Vec<Step>, Vec<usize>) {
    let ids: Vec<NodeId> = lhs.node_ids();
    let pos_of = |id: NodeId| ids.iter().position(|k| *k == id).unwrap();
    let mut order: Vec<usize> = Vec::with_capacity(ids.len());
    let mut placed = vec![false; ids.len()];
    for root in 0..ids.len() {
        if placed[root] {
            continue;
        }
        placed[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            let kind = lhs.nodes[&ids[i]].kind;
            for p in 0..kind.arity() {
                if let Some(Endpoint::Port(m, _)) = lhs.partner(Endpoint::port(ids[i], p)) {
                    let j = pos_of(m);
                    if !placed[j] {
                        placed[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    let step_of: Vec<usize> = {
        let mut v = vec![0; ids.len()];
        for (s, &i) in order.iter().enumerate() {
            v[i] = s;
        }
        v
    };
    let steps = order
        .iter()
        .enumerate()
        .map(|(s, &i)| {
            let kind = lhs.nodes[&ids[i]].kind;
            let mut back = Vec::new();
            let mut loops = Vec::new();
            for p in 0..kind.arity() {
                if let Some(Endpoint::Port(m, q)) = lhs.partner(Endpoint::port(ids[i], p)) {
                    let j = step_of[pos_of(m)];
                    if j < s {
                        back.push((p as u16, j, q));
                    } else if j == s && (p as u16) < q {
                        loops.push((p as u16, q));
                    }
                }
            }
            Step { kind, back, loops }
        })
        .collect();
    (steps, order)
}

fn fits(host: &PortGraph, step: &Step, v: NodeId, assigned: &[NodeId]) -> bool {
    if host.kind(v) != Some(step.kind) || assigned.contains(&v) {
        return false;
    }
    step.back.iter().all(|&(p, j, q)| host.partner(Endpoint::Port(v, p)) == Some(Endpoint::Port(assigned[j], q)))
        && step.loops.iter().all(|&(p, q)| host.partner(Endpoint::Port(v, p)) == Some(Endpoint::Port(v, q)))
}

fn extend(host: &PortGraph, steps: &[Step], assigned: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
    let s = assigned.len();
    if s == steps.len() {
        out.push(assigned.clone());
        return;
    }
    let step = &steps[s];
    let candidates: Vec<NodeId> = match step.back.first() {
        Some(&(p, j, q)) => match host.partner(Endpoint::Port(assigned[j], q)) {
            Some(Endpoint::Port(v, pp)) if pp == p => vec![v],
            _ => vec![],
        },
        None => host.nodes.iter().filter(|(_, n)| n.kind == step.kind).map(|(id, _)| *id).collect(),
    };
    for v in candidates {
        if fits(host, step, v, assigned) {
            assigned.push(v);
            extend(host, steps, assigned, out);
            assigned.pop();
        }
    }
}

/// Every injective morphism from `lhs` into `host`, sorted by the images of
/// the pattern nodes. Node names, port names and port states must agree and
/// every wire between two pattern ports must be present in the host; formula
/// labels are not compared.
pub fn find_matches(lhs: &PortGraph, host: &PortGraph) -> Vec<Morphism> {
    if lhs.nodes.is_empty() {
        return Vec::new();
    }
    let (steps, order) = plan(lhs);
    let roots: Vec<NodeId> = host.nodes.iter().filter(|(_, n)| n.kind == steps[0].kind).map(|(id, _)| *id).collect();
    let search = |root: &NodeId| {
        let mut out = Vec::new();
        let mut assigned = vec![*root];
        if fits(host, &steps[0], *root, &[]) {
            extend(host, &steps, &mut assigned, &mut out);
        }
        out
    };
    let found: Vec<Vec<NodeId>> = crate::batch::flat_map(&roots, search);
    let mut matches: Vec<Morphism> = found
        .into_iter()
        .map(|by_step| {
            let mut node_map = vec![NodeId(0); order.len()];
            for (s, &i) in order.iter().enumerate() {
                node_map[i] = by_step[s];
            }
            Morphism { node_map }
        })
        .collect();
    matches.sort();
    matches
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, NodeSpec};

    #[test]
    fn eps_pair_matches_twice() {
        let pair = build_graph(
            &[NodeSpec::new(NodeKind::Eps), NodeSpec::new(NodeKind::Eps)],
            &[((0, "principal"), (1, "principal"))],
        )
        .unwrap();
        let m = find_matches(&pair, &pair);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].node_map, vec![NodeId(0), NodeId(1)]);
        assert_eq!(m[1].node_map, vec![NodeId(1), NodeId(0)]);
    }

    #[test]
    fn missing_name_gives_nothing() {
        let d = build_graph(&[NodeSpec::new(NodeKind::Delta)], &[]).unwrap();
        let w = build_graph(&[NodeSpec::new(NodeKind::W)], &[]).unwrap();
        assert!(find_matches(&d, &w).is_empty());
    }
}
