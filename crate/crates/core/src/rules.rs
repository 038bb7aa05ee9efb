//! The rule catalogue.
//!
//! Every erasing or copying rule has the same shape: an agent `X` meets a
//! node `α` on α's active port (its conclusion, or the principal port of the
//! agents). Erasers put one `X` on every other wire of α; copiers make two
//! copies of α, sending copy one where X's first output went and copy two
//! where its second went, and put a fresh `X` on every other wire of α.
//!
//! Scope nodes have one arity per number of captured hypotheses, so rules
//! involving them are schemas instantiated for the arities present in the
//! graph being rewritten. The whole-scope erase and copy of an abstraction
//! are meta-rules (see [`crate::meta`]).

use std::collections::BTreeSet;

use crate::graph::{find_matches, Endpoint, Morphism, NodeKind, PortGraph, RewriteRule, RhsNode};
use crate::meta::MetaKind;

/// Which erase/copy machinery a catalogue uses.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Whole-scope meta-rules for abstractions.
    #[default]
    Global,
    /// Local ε and δ agents only.
    SmallStep,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Global => "global",
            Mode::SmallStep => "small-step",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "global" => Ok(Mode::Global),
            "small-step" | "smallstep" | "small" => Ok(Mode::SmallStep),
            other => Err(format!("unknown mode `{other}` (expected global or small-step)")),
        }
    }
}

const CLOSED: NodeKind = NodeKind::ImpI { scoped: false };
const SCOPED: NodeKind = NodeKind::ImpI { scoped: true };

/// Nodes that W and C push through locally in both modes.
const LOCAL: [NodeKind; 6] =
    [NodeKind::C, NodeKind::W, NodeKind::AndI, NodeKind::AndE1, NodeKind::AndE2, NodeKind::ImpE];

/// Where a pattern slot attaches.
#[derive(Copy, Clone, Debug)]
enum At {
    Port(usize, usize),
    /// A bare wire to another slot.
    Slot(usize),
}

/// Builds a pattern graph from node kinds, internal wires
/// `(node, port, node, port)` and the ordered slot attachments.
fn pattern(kinds: &[NodeKind], edges: &[(usize, usize, usize, usize)], slots: &[At]) -> PortGraph {
    let mut g = PortGraph::empty();
    let ids: Vec<_> = kinds.iter().map(|k| g.alloc(*k, None)).collect();
    for &(a, p, b, q) in edges {
        g.link(Endpoint::port(ids[a], p), Endpoint::port(ids[b], q));
    }
    g.interface = vec![None; slots.len()];
    for (i, at) in slots.iter().enumerate() {
        match *at {
            At::Port(n, p) => g.link(Endpoint::Free(i as u32), Endpoint::port(ids[n], p)),
            At::Slot(j) => g.link(Endpoint::Free(i as u32), Endpoint::Free(j as u32)),
        }
    }
    if let Err(e) = g.validate() {
        panic!("ill-formed rule pattern: {e}");
    }
    g
}

fn others(kind: NodeKind) -> Vec<usize> {
    (0..kind.arity()).filter(|p| *p != kind.active_port()).collect()
}

fn rule(name: &str, lhs: PortGraph, rhs: PortGraph, meta: Vec<RhsNode>) -> RewriteRule {
    RewriteRule::new(name, lhs, rhs).expect("catalogue rules are well formed").with_rhs_nodes(meta)
}

fn inherit(from: usize) -> RhsNode {
    RhsNode { scope_of: from, succeeds: None }
}

/// `x` meets `alpha`: one `x` on every other wire of `alpha`.
fn erase_like(name: &str, x: NodeKind, alpha: NodeKind) -> RewriteRule {
    let rest = others(alpha);
    let lhs = pattern(
        &[x, alpha],
        &[(0, 0, 1, alpha.active_port())],
        &rest.iter().map(|p| At::Port(1, *p)).collect::<Vec<_>>(),
    );
    let rhs = pattern(&vec![x; rest.len()], &[], &(0..rest.len()).map(|i| At::Port(i, 0)).collect::<Vec<_>>());
    rule(name, lhs, rhs, vec![inherit(1); rest.len()])
}

/// `x` meets `alpha`: two copies of `alpha`, one `x` on every other wire.
fn copy_like(name: &str, x: NodeKind, alpha: NodeKind) -> RewriteRule {
    let act = alpha.active_port();
    let rest = others(alpha);
    let mut lhs_slots = vec![At::Port(0, 1), At::Port(0, 2)];
    lhs_slots.extend(rest.iter().map(|p| At::Port(1, *p)));
    let lhs = pattern(&[x, alpha], &[(0, 0, 1, act)], &lhs_slots);

    let mut kinds = vec![alpha, alpha];
    kinds.extend(std::iter::repeat_n(x, rest.len()));
    let mut edges = Vec::new();
    let mut slots = vec![At::Port(0, act), At::Port(1, act)];
    for (j, p) in rest.iter().enumerate() {
        edges.push((2 + j, 1, 0, *p));
        edges.push((2 + j, 2, 1, *p));
        slots.push(At::Port(2 + j, 0));
    }
    let rhs = pattern(&kinds, &edges, &slots);
    let mut meta = vec![RhsNode { scope_of: 1, succeeds: Some(1) }, inherit(1)];
    meta.extend(std::iter::repeat_n(inherit(1), rest.len()));
    rule(name, lhs, rhs, meta)
}

fn beta_and(e2: bool) -> RewriteRule {
    let (elim, name) = if e2 { (NodeKind::AndE2, "beta.and.e2") } else { (NodeKind::AndE1, "beta.and.e1") };
    // Slots: ∧I.left, ∧I.right, ∧E.concl.
    let lhs = pattern(&[NodeKind::AndI, elim], &[(0, 0, 1, 1)], &[At::Port(0, 1), At::Port(0, 2), At::Port(1, 0)]);
    let rhs = if e2 {
        pattern(&[NodeKind::W], &[], &[At::Port(0, 0), At::Slot(2), At::Slot(1)])
    } else {
        pattern(&[NodeKind::W], &[], &[At::Slot(2), At::Port(0, 0), At::Slot(0)])
    };
    rule(name, lhs, rhs, vec![inherit(0)])
}

fn beta_imp_closed() -> RewriteRule {
    // Slots: body, binder, ⊃E.concl, ⊃E.arg.
    let lhs = pattern(
        &[CLOSED, NodeKind::ImpE],
        &[(0, 0, 1, 1)],
        &[At::Port(0, 1), At::Port(0, 2), At::Port(1, 0), At::Port(1, 2)],
    );
    let rhs = pattern(&[], &[], &[At::Slot(2), At::Slot(3), At::Slot(0), At::Slot(1)]);
    rule("beta.imp", lhs, rhs, vec![])
}

/// Slots shared by the scoped-abstraction patterns: the abstraction's body
/// and binder, then the scope's inner and outer ports.
fn scoped_lhs(head: NodeKind, head_port: usize, n: u16, extra: &[At]) -> (PortGraph, usize) {
    let k = usize::from(n);
    let mut slots = extra.to_vec();
    slots.push(At::Port(1, 1));
    slots.push(At::Port(1, 2));
    slots.extend((0..2 * k).map(|i| At::Port(2, 1 + i)));
    let lhs = pattern(&[head, SCOPED, NodeKind::Scope(n)], &[(0, head_port, 1, 0), (1, 3, 2, 0)], &slots);
    (lhs, extra.len())
}

fn beta_imp_scoped(n: u16) -> RewriteRule {
    let k = usize::from(n);
    // lhs nodes: ⊃E, ⊃I, s. Slots: ⊃E.concl, ⊃E.arg, body, binder, in*, out*.
    let (lhs, e) = scoped_lhs(NodeKind::ImpE, 1, n, &[At::Port(0, 0), At::Port(0, 2)]);
    let mut slots = vec![At::Slot(e), At::Slot(e + 1), At::Slot(0), At::Slot(1)];
    slots.extend((0..k).map(|i| At::Slot(e + 2 + k + i)));
    slots.extend((0..k).map(|i| At::Slot(e + 2 + i)));
    let rhs = pattern(&[], &[], &slots);
    rule("beta.imp", lhs, rhs, vec![])
}

fn cw(out: usize) -> RewriteRule {
    let other = 3 - out;
    let lhs = pattern(&[NodeKind::C, NodeKind::W], &[(0, out, 1, 0)], &[At::Port(0, 0), At::Port(0, other)]);
    let rhs = pattern(&[], &[], &[At::Slot(1), At::Slot(0)]);
    rule("cw", lhs, rhs, vec![])
}

fn delta_delta() -> RewriteRule {
    let d = NodeKind::Delta;
    let lhs = pattern(&[d, d], &[(0, 0, 1, 0)], &[At::Port(0, 1), At::Port(0, 2), At::Port(1, 1), At::Port(1, 2)]);
    let rhs = pattern(&[], &[], &[At::Slot(2), At::Slot(3), At::Slot(0), At::Slot(1)]);
    rule("delta.delta", lhs, rhs, vec![])
}

/// W meets a closed abstraction: ε on its body and binder.
fn eps_w_closed() -> RewriteRule {
    let lhs = pattern(&[NodeKind::W, CLOSED], &[(0, 0, 1, 0)], &[At::Port(1, 1), At::Port(1, 2)]);
    let rhs = pattern(&[NodeKind::Eps, NodeKind::Eps], &[], &[At::Port(0, 0), At::Port(1, 0)]);
    rule("eps.w.impI", lhs, rhs, vec![inherit(1); 2])
}

/// W meets an abstraction with its scope: ε on the body, binder and inner
/// scope wires; W on the outer ones.
fn eps_w_scoped(n: u16) -> RewriteRule {
    let k = usize::from(n);
    let (lhs, _) = scoped_lhs(NodeKind::W, 0, n, &[]);
    let mut kinds = vec![NodeKind::Eps; 2 + k];
    kinds.extend(std::iter::repeat_n(NodeKind::W, k));
    let slots: Vec<At> = (0..2 + 2 * k).map(|i| At::Port(i, 0)).collect();
    let rhs = pattern(&kinds, &[], &slots);
    let mut meta = vec![inherit(1); 2 + k];
    meta.extend(std::iter::repeat_n(inherit(0), k));
    rule("eps.w.impI", lhs, rhs, meta)
}

/// C meets a closed abstraction: two abstractions, δ on body and binder.
fn delta_c_closed() -> RewriteRule {
    let lhs = pattern(
        &[NodeKind::C, CLOSED],
        &[(0, 0, 1, 0)],
        &[At::Port(0, 1), At::Port(0, 2), At::Port(1, 1), At::Port(1, 2)],
    );
    let d = NodeKind::Delta;
    let rhs = pattern(
        &[CLOSED, CLOSED, d, d],
        &[(2, 1, 0, 1), (2, 2, 1, 1), (3, 1, 0, 2), (3, 2, 1, 2)],
        &[At::Port(0, 0), At::Port(1, 0), At::Port(2, 0), At::Port(3, 0)],
    );
    let meta = vec![RhsNode { scope_of: 1, succeeds: Some(1) }, inherit(1), inherit(1), inherit(1)];
    rule("delta.c.impI", lhs, rhs, meta)
}

/// C meets an abstraction with its scope: two abstraction/scope shells, δ
/// on the body, binder and inner wires, C on the outer wires.
fn delta_c_scoped(n: u16) -> RewriteRule {
    let k = usize::from(n);
    let (lhs, e) = scoped_lhs(NodeKind::C, 0, n, &[At::Port(0, 1), At::Port(0, 2)]);
    // rhs nodes: ⊃I₁, ⊃I₂, s₁, s₂, δ(body), δ(binder), δ(in)*, C(out)*.
    let mut kinds = vec![SCOPED, SCOPED, NodeKind::Scope(n), NodeKind::Scope(n), NodeKind::Delta, NodeKind::Delta];
    kinds.extend(std::iter::repeat_n(NodeKind::Delta, k));
    kinds.extend(std::iter::repeat_n(NodeKind::C, k));
    let mut edges = vec![(0, 3, 2, 0), (1, 3, 3, 0), (4, 1, 0, 1), (4, 2, 1, 1), (5, 1, 0, 2), (5, 2, 1, 2)];
    for i in 0..k {
        edges.push((6 + i, 1, 2, 1 + i));
        edges.push((6 + i, 2, 3, 1 + i));
        edges.push((6 + k + i, 1, 2, 1 + k + i));
        edges.push((6 + k + i, 2, 3, 1 + k + i));
    }
    let mut slots = vec![At::Port(0, 0), At::Port(1, 0)];
    slots.extend((0..2 + 2 * k).map(|i| At::Port(4 + i, 0)));
    debug_assert_eq!(slots.len(), e + 2 + 2 * k);
    let rhs = pattern(&kinds, &edges, &slots);
    let mut meta = vec![
        RhsNode { scope_of: 1, succeeds: Some(1) },
        inherit(1),
        RhsNode { scope_of: 2, succeeds: Some(2) },
        inherit(2),
    ];
    meta.extend(std::iter::repeat_n(inherit(1), 2 + k));
    meta.extend(std::iter::repeat_n(inherit(0), k));
    rule("delta.c.impI", lhs, rhs, meta)
}

fn eps_scope(n: u16) -> RewriteRule {
    erase_like("eps.s", NodeKind::Eps, NodeKind::Scope(n))
}

fn delta_scope(n: u16) -> RewriteRule {
    copy_like("delta.s", NodeKind::Delta, NodeKind::Scope(n))
}

/// The linear λ-calculus β rule: @ meets λ on its function port.
fn beta_lambda() -> RewriteRule {
    // lhs nodes: @, λ. Slots: @.root, @.arg, λ.body, λ.binder.
    let lhs = pattern(
        &[NodeKind::App, NodeKind::Lam],
        &[(0, 1, 1, 0)],
        &[At::Port(0, 0), At::Port(0, 2), At::Port(1, 1), At::Port(1, 2)],
    );
    let rhs = pattern(&[], &[], &[At::Slot(2), At::Slot(3), At::Slot(0), At::Slot(1)]);
    rule("beta.lam", lhs, rhs, vec![])
}

#[derive(Clone, Debug)]
enum Entry {
    Fixed(Box<RewriteRule>),
    Schema { name: &'static str, build: fn(u16) -> RewriteRule },
}

impl Entry {
    fn name(&self) -> &str {
        match self {
            Entry::Fixed(r) => &r.name,
            Entry::Schema { name, .. } => name,
        }
    }
}

/// A whole-scope meta-rule entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaEntry {
    pub name: &'static str,
    pub kind: MetaKind,
}

/// A named collection of rules, schemas and meta-rules.
#[derive(Clone, Debug, Default)]
pub struct Catalogue {
    entries: Vec<Entry>,
    metas: Vec<MetaEntry>,
}

fn local_name(prefix: &str, alpha: NodeKind) -> String {
    format!("{prefix}.{}", alpha.name())
}

impl Catalogue {
    fn fixed(mut self, r: RewriteRule) -> Self {
        self.entries.push(Entry::Fixed(Box::new(r)));
        self
    }

    fn schema(mut self, name: &'static str, build: fn(u16) -> RewriteRule) -> Self {
        self.entries.push(Entry::Schema { name, build });
        self
    }

    fn meta(mut self, name: &'static str, kind: MetaKind) -> Self {
        self.metas.push(MetaEntry { name, kind });
        self
    }

    /// Detour elimination and the C-after-W simplification.
    pub fn beta() -> Self {
        Catalogue::default()
            .fixed(beta_and(false))
            .fixed(beta_and(true))
            .fixed(beta_imp_closed())
            .schema("beta.imp", beta_imp_scoped)
            .fixed(cw(1))
            .fixed(cw(2))
    }

    /// W and C pushed through the non-abstraction nodes.
    fn local_erase_copy(mut self) -> Self {
        for alpha in LOCAL {
            self = self.fixed(erase_like(&local_name("erase.global", alpha), NodeKind::W, alpha));
        }
        for alpha in LOCAL {
            self = self.fixed(copy_like(&local_name("copy.global", alpha), NodeKind::C, alpha));
        }
        self
    }

    /// The ε family: ε erases every logic node and agent it meets.
    pub fn eps() -> Self {
        let mut c = Catalogue::default();
        for alpha in LOCAL.into_iter().chain([CLOSED, SCOPED, NodeKind::Eps, NodeKind::Delta]) {
            c = c.fixed(erase_like(&local_name("eps", alpha), NodeKind::Eps, alpha));
        }
        c.schema("eps.s", eps_scope).fixed(eps_w_closed()).schema("eps.w.impI", eps_w_scoped)
    }

    /// The δ family: δ copies every logic node it meets; two δ annihilate.
    pub fn delta() -> Self {
        let mut c = Catalogue::default();
        for alpha in LOCAL.into_iter().chain([CLOSED, SCOPED]) {
            c = c.fixed(copy_like(&local_name("delta", alpha), NodeKind::Delta, alpha));
        }
        c.fixed(delta_delta())
            .schema("delta.s", delta_scope)
            .fixed(delta_c_closed())
            .schema("delta.c.impI", delta_c_scoped)
    }

    /// The W/C propagation rules of the global mode, without detours.
    pub fn erase_copy_global() -> Self {
        Catalogue::default()
            .local_erase_copy()
            .meta("erase.global.impI", MetaKind::Erase)
            .meta("copy.global.impI", MetaKind::Copy)
    }

    /// Full normalisation catalogue for a mode.
    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Global => Catalogue::beta().extend(Catalogue::erase_copy_global()),
            Mode::SmallStep => Catalogue::beta().local_erase_copy().extend(Catalogue::eps()).extend(Catalogue::delta()),
        }
    }

    /// β for λ graphs.
    pub fn lambda() -> Self {
        Catalogue::default().fixed(beta_lambda())
    }

    pub fn extend(mut self, other: Catalogue) -> Self {
        self.entries.extend(other.entries);
        self.metas.extend(other.metas);
        self
    }

    /// Keeps the rules whose name satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&str) -> bool) -> Self {
        Catalogue {
            entries: self.entries.iter().filter(|e| keep(e.name())).cloned().collect(),
            metas: self.metas.iter().filter(|m| keep(m.name)).cloned().collect(),
        }
    }

    /// Distinct rule names, in catalogue order.
    pub fn names(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        self.entries
            .iter()
            .map(|e| e.name().to_string())
            .chain(self.metas.iter().map(|m| m.name.to_string()))
            .filter(|n| seen.insert(n.clone()))
            .collect()
    }

    pub fn metas(&self) -> &[MetaEntry] {
        &self.metas
    }

    /// The fixed-pattern rules applicable to `g`, with schemas instantiated
    /// for the scope arities present.
    pub fn rules_for(&self, g: &PortGraph) -> Vec<RewriteRule> {
        let arities: BTreeSet<u16> = g
            .kinds()
            .into_iter()
            .filter_map(|k| match k {
                NodeKind::Scope(n) => Some(n),
                _ => None,
            })
            .collect();
        let mut out = Vec::new();
        for e in &self.entries {
            match e {
                Entry::Fixed(r) => out.push((**r).clone()),
                Entry::Schema { build, .. } => out.extend(arities.iter().map(|n| build(*n))),
            }
        }
        out
    }

    /// Every fixed-pattern rule instance up to the given scope arity.
    pub fn instances(&self, max_arity: u16) -> Vec<RewriteRule> {
        let mut out = Vec::new();
        for e in &self.entries {
            match e {
                Entry::Fixed(r) => out.push((**r).clone()),
                Entry::Schema { build, .. } => out.extend((1..=max_arity).map(build)),
            }
        }
        out
    }
}

/// Whether no rule of the catalogue (including meta-rules) applies.
pub fn is_normal_form(g: &PortGraph, catalogue: &Catalogue) -> bool {
    catalogue.rules_for(g).iter().all(|r| find_matches(&r.lhs, g).is_empty())
        && catalogue.metas().iter().all(|m| crate::meta::find_meta(g, m.kind).is_empty())
}

/// All matches of one rule.
pub fn matches_of(rule: &RewriteRule, g: &PortGraph) -> Vec<Morphism> {
    find_matches(&rule.lhs, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::apply_rule;

    #[test]
    fn catalogue_instances_are_well_formed() {
        for mode in [Mode::Global, Mode::SmallStep] {
            for r in Catalogue::for_mode(mode).instances(3) {
                assert_eq!(r.lhs.interface_len(), r.rhs.interface_len(), "{}", r.name);
            }
        }
        let names = Catalogue::for_mode(Mode::Global).names();
        assert!(names.contains(&"beta.imp".to_string()));
        assert!(names.contains(&"copy.global.impI".to_string()));
        assert!(!names.iter().any(|n| n.starts_with("eps")));
    }

    #[test]
    fn eps_pair_vanishes() {
        let r = erase_like("eps.eps", NodeKind::Eps, NodeKind::Eps);
        let host = r.lhs.clone();
        let m = &find_matches(&r.lhs, &host)[0];
        assert!(apply_rule(&host, &r, m).unwrap().is_empty());
    }

    #[test]
    fn delta_pair_becomes_two_wires() {
        let r = delta_delta();
        let out = apply_rule(&r.lhs, &r, &find_matches(&r.lhs, &r.lhs)[0]).unwrap();
        assert_eq!(out.node_count(), 0);
        assert_eq!(out.partner(Endpoint::Free(0)), Some(Endpoint::Free(2)));
        assert_eq!(out.partner(Endpoint::Free(1)), Some(Endpoint::Free(3)));
    }

    #[test]
    fn filter_by_name() {
        let c = Catalogue::for_mode(Mode::SmallStep).filter(|n| n.starts_with("eps."));
        assert!(c.names().iter().all(|n| n.starts_with("eps.")));
        assert!(c.metas().is_empty());
    }
}
