//! Rewrite rules and single rewriting steps.

use std::collections::{BTreeMap, BTreeSet};

use super::{End, Endpoint, GraphError, Morphism, NodeId, PortGraph, Wiring};

/// Bookkeeping for one right-hand-side node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhsNode {
    /// Left-hand-side node (by index) whose scope the new node inherits.
    pub scope_of: usize,
    /// Left-hand-side node (by index) this node stands in for: nodes scoped
    /// under the replaced node are re-scoped under this one.
    pub succeeds: Option<usize>,
}

/// `lhs => rhs` with the arrow-node interface given as `interface_map`:
/// entry `i` names the right-hand slot that left-hand slot `i` continues
/// as, and `None` sends the slot to the black hole.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub name: String,
    pub lhs: PortGraph,
    pub rhs: PortGraph,
    pub interface_map: Vec<Option<usize>>,
    pub rhs_nodes: Vec<RhsNode>,
}

impl RewriteRule {
    /// Identity interface map; every right-hand node inherits the scope of
    /// the first left-hand node.
    pub fn new(name: impl Into<String>, lhs: PortGraph, rhs: PortGraph) -> Result<Self, GraphError> {
        let map = (0..lhs.interface_len()).map(Some).collect();
        Self::with_interface(name, lhs, rhs, map)
    }

    pub fn with_interface(
        name: impl Into<String>,
        lhs: PortGraph,
        rhs: PortGraph,
        interface_map: Vec<Option<usize>>,
    ) -> Result<Self, GraphError> {
        let name = name.into();
        if interface_map.len() != lhs.interface_len() {
            return Err(GraphError::Malformed(format!(
                "{name}: interface map covers {} of {} slots",
                interface_map.len(),
                lhs.interface_len()
            )));
        }
        let mut hit = vec![0usize; rhs.interface_len()];
        for k in interface_map.iter().flatten() {
            match hit.get_mut(*k) {
                Some(c) => *c += 1,
                None => return Err(GraphError::Malformed(format!("{name}: rhs slot {k} out of range"))),
            }
        }
        if hit.iter().any(|&c| c != 1) {
            return Err(GraphError::Malformed(format!("{name}: every rhs slot needs exactly one preimage")));
        }
        for i in 0..lhs.interface_len() {
            if !matches!(lhs.partner(Endpoint::Free(i as u32)), Some(Endpoint::Port(..))) {
                return Err(GraphError::Malformed(format!("{name}: lhs slot {i} must attach to a port")));
            }
        }
        let rhs_nodes = vec![RhsNode { scope_of: 0, succeeds: None }; rhs.node_count()];
        Ok(RewriteRule { name, lhs, rhs, interface_map, rhs_nodes })
    }

    pub fn with_rhs_nodes(mut self, rhs_nodes: Vec<RhsNode>) -> Self {
        assert_eq!(rhs_nodes.len(), self.rhs.node_count(), "{}: rhs node metadata", self.name);
        self.rhs_nodes = rhs_nodes;
        self
    }
}

/// Checks that `m` is still a morphism of `lhs` into `host`.
pub(crate) fn verify_match(lhs: &PortGraph, host: &PortGraph, m: &Morphism) -> Result<(), GraphError> {
    let ids = lhs.node_ids();
    if m.node_map.len() != ids.len() {
        return Err(GraphError::StaleMatch("node count differs from pattern".into()));
    }
    let distinct: BTreeSet<_> = m.node_map.iter().collect();
    if distinct.len() != ids.len() {
        return Err(GraphError::StaleMatch("node map is not injective".into()));
    }
    let pos: BTreeMap<NodeId, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    for (i, id) in ids.iter().enumerate() {
        let want = lhs.nodes[id].kind;
        match host.kind(m.node_map[i]) {
            Some(k) if k == want => {}
            _ => return Err(GraphError::StaleMatch(format!("{} is no longer a {}", m.node_map[i], want.name()))),
        }
        for p in 0..want.arity() {
            if let Some(Endpoint::Port(u, q)) = lhs.partner(Endpoint::port(*id, p)) {
                let expect = Endpoint::Port(m.node_map[pos[&u]], q);
                if host.partner(Endpoint::port(m.node_map[i], p)) != Some(expect) {
                    return Err(GraphError::StaleMatch(format!(
                        "wire at {} changed",
                        host.describe(Endpoint::port(m.node_map[i], p))
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Replaces the image of `rule.lhs` under `m` by a fresh copy of
/// `rule.rhs`, reconnecting the surroundings through the interface map.
/// Unmatched nodes keep their ids; the interface is untouched.
pub fn apply_rule(host: &PortGraph, rule: &RewriteRule, m: &Morphism) -> Result<PortGraph, GraphError> {
    verify_match(&rule.lhs, host, m)?;
    let lhs_ids = rule.lhs.node_ids();
    let lhs_pos: BTreeMap<NodeId, usize> = lhs_ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let matched: BTreeSet<NodeId> = m.node_map.iter().copied().collect();

    // Host port behind each lhs slot, and the reverse lookup.
    let slot_port: Vec<Endpoint> = (0..rule.lhs.interface_len())
        .map(|i| match rule.lhs.partner(Endpoint::Free(i as u32)) {
            Some(Endpoint::Port(u, p)) => Endpoint::Port(m.node_map[lhs_pos[&u]], p),
            _ => unreachable!("checked at rule construction"),
        })
        .collect();
    let slot_of: BTreeMap<Endpoint, usize> = slot_port.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut rhs_slot_pre = vec![0usize; rule.rhs.interface_len()];
    for (i, k) in rule.interface_map.iter().enumerate() {
        if let Some(k) = k {
            rhs_slot_pre[*k] = i;
        }
    }

    let mut out = host.clone();
    for id in &matched {
        let arity = out.nodes[id].kind.arity();
        for p in 0..arity {
            let e = Endpoint::port(*id, p);
            if let Some(other) = out.links.remove(&e) {
                if out.links.get(&other) == Some(&e) {
                    out.links.remove(&other);
                }
            }
        }
    }
    let removed: BTreeMap<NodeId, _> = matched.iter().map(|id| (*id, out.nodes.remove(id).unwrap())).collect();

    let rhs_ids = rule.rhs.node_ids();
    let mut new_id = BTreeMap::new();
    for (j, rid) in rhs_ids.iter().enumerate() {
        let meta = &rule.rhs_nodes[j];
        let scope = host.nodes[&m.node_map[meta.scope_of]].scope;
        let id = out.alloc(rule.rhs.nodes[rid].kind, scope);
        out.nodes.get_mut(&id).unwrap().labels = rule.rhs.nodes[rid].labels.clone();
        new_id.insert(*rid, id);
    }

    let joint = |i: usize, inner: bool| End::Joint(i as u32, inner);
    let mut w = Wiring::default();
    let bad = |e: End| GraphError::Malformed(format!("{}: conflicting wire at {e:?}", rule.name));
    for (i, hp) in slot_port.iter().enumerate() {
        let outside = host.partner(*hp).expect("host validated");
        match outside {
            Endpoint::Port(v, _) if matched.contains(&v) => {
                let j = *slot_of
                    .get(&outside)
                    .ok_or_else(|| GraphError::StaleMatch(format!("{} wired inside the redex", host.describe(*hp))))?;
                if i < j {
                    w.connect(joint(i, false), joint(j, false)).map_err(bad)?;
                }
            }
            e => w.connect(joint(i, false), End::Real(e)).map_err(bad)?,
        }
        if let Some(k) = rule.interface_map[i] {
            match rule.rhs.partner(Endpoint::Free(k as u32)).expect("rhs validated") {
                Endpoint::Port(x, p) => {
                    w.connect(joint(i, true), End::Real(Endpoint::Port(new_id[&x], p))).map_err(bad)?
                }
                Endpoint::Free(k2) => {
                    let i2 = rhs_slot_pre[k2 as usize];
                    if i < i2 {
                        w.connect(joint(i, true), joint(i2, true)).map_err(bad)?;
                    }
                }
            }
        }
    }
    for (a, b) in rule.rhs.edges() {
        if let (Endpoint::Port(x, p), Endpoint::Port(y, q)) = (a, b) {
            w.connect(End::Real(Endpoint::Port(new_id[&x], p)), End::Real(Endpoint::Port(new_id[&y], q)))
                .map_err(bad)?;
        }
    }
    let wires = w
        .resolve()
        .map_err(|_| GraphError::Dangling(format!("{}: a black-holed slot would leave a wire dangling", rule.name)))?;
    for (a, b) in wires {
        out.link(a, b);
    }

    // Re-home scopes owned by removed nodes.
    let mut successor: BTreeMap<NodeId, Option<NodeId>> = BTreeMap::new();
    for (i, host_id) in m.node_map.iter().enumerate() {
        let succ =
            rhs_ids.iter().zip(&rule.rhs_nodes).find(|(_, meta)| meta.succeeds == Some(i)).map(|(rid, _)| new_id[rid]);
        successor.insert(*host_id, succ.or(removed[host_id].scope));
    }
    rehome_scopes(&mut out, &successor);
    out.propagate_labels();
    out.validate()?;
    Ok(out)
}

/// Points every scope reference to a removed node at its replacement,
/// following chains of removed owners.
pub(crate) fn rehome_scopes(g: &mut PortGraph, successor: &BTreeMap<NodeId, Option<NodeId>>) {
    let resolve = |mut s: Option<NodeId>| {
        let mut guard = 0;
        while let Some(id) = s {
            match successor.get(&id) {
                Some(next) if guard <= successor.len() => {
                    s = *next;
                    guard += 1;
                }
                _ => break,
            }
        }
        s
    };
    for node in g.nodes.values_mut() {
        node.scope = resolve(node.scope);
    }
}
