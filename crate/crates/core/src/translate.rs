//! The translation of proofs to port graphs, and the ε/δ attachments used
//! by the erasing and duplication properties.
//!
//! Axioms become bare wires and exchanges permute the interface, so neither
//! produces a node. An implication introduction that leaves hypotheses open
//! gets a scope node `s` binding them; every node built for the premise is
//! annotated with the owning abstraction node.

use crate::graph::{End, Endpoint, NodeId, NodeKind, PortGraph, Wiring};
use crate::logic::{check_proof, Formula, Proof, ProofError};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct TranslateOptions {
    /// Draw axioms as `Ax` nodes instead of bare wires (display only; the
    /// rule catalogue never matches them).
    pub materialise_axioms: bool,
}

struct Built {
    hyps: Vec<End>,
    concl: End,
    /// Nodes not yet claimed by an enclosing abstraction.
    unscoped: Vec<NodeId>,
}

struct Builder {
    g: PortGraph,
    w: Wiring,
    opts: TranslateOptions,
}

impl Builder {
    fn node(&mut self, kind: NodeKind, labels: &[Option<&Formula>]) -> NodeId {
        let id = self.g.alloc(kind, None);
        let node = self.g.nodes.get_mut(&id).unwrap();
        for (slot, l) in node.labels.iter_mut().zip(labels) {
            *slot = l.cloned();
        }
        id
    }

    fn connect(&mut self, a: End, b: End) {
        self.w.connect(a, b).expect("each end is wired once");
    }

    fn build(&mut self, p: &Proof) -> Result<(Built, Vec<Formula>, Formula), ProofError> {
        let port = |n: NodeId, i: usize| End::Real(Endpoint::port(n, i));
        Ok(match p {
            Proof::Ax(a) => {
                let (l, r) = if self.opts.materialise_axioms {
                    let n = self.node(NodeKind::Ax, &[Some(a), Some(a)]);
                    (port(n, 0), port(n, 1))
                } else {
                    self.w.joint()
                };
                let unscoped = match (l, self.opts.materialise_axioms) {
                    (End::Real(Endpoint::Port(n, _)), true) => vec![n],
                    _ => vec![],
                };
                (Built { hyps: vec![l], concl: r, unscoped }, vec![a.clone()], a.clone())
            }
            Proof::Ex(i, q) => {
                let (mut b, mut ctx, c) = self.build(q)?;
                b.hyps.swap(*i, i + 1);
                ctx.swap(*i, i + 1);
                (b, ctx, c)
            }
            Proof::W(a, q) => {
                let (mut b, mut ctx, c) = self.build(q)?;
                let n = self.node(NodeKind::W, &[Some(a)]);
                b.hyps.push(port(n, 0));
                b.unscoped.push(n);
                ctx.push(a.clone());
                (b, ctx, c)
            }
            Proof::C(i, q) => {
                let (mut b, mut ctx, c) = self.build(q)?;
                let a = ctx[*i].clone();
                let n = self.node(NodeKind::C, &[Some(&a), Some(&a), Some(&a)]);
                let second = b.hyps.remove(i + 1);
                self.connect(port(n, 1), b.hyps[*i]);
                self.connect(port(n, 2), second);
                b.hyps[*i] = port(n, 0);
                b.unscoped.push(n);
                ctx.remove(i + 1);
                (b, ctx, c)
            }
            Proof::AndI(q1, q2) => {
                let (b1, mut ctx, c1) = self.build(q1)?;
                let (b2, ctx2, c2) = self.build(q2)?;
                let f = Formula::and(c1.clone(), c2.clone());
                let n = self.node(NodeKind::AndI, &[Some(&f), Some(&c1), Some(&c2)]);
                self.connect(port(n, 1), b1.concl);
                self.connect(port(n, 2), b2.concl);
                ctx.extend(ctx2);
                let mut unscoped = b1.unscoped;
                unscoped.extend(b2.unscoped);
                unscoped.push(n);
                let mut hyps = b1.hyps;
                hyps.extend(b2.hyps);
                (Built { hyps, concl: port(n, 0), unscoped }, ctx, f)
            }
            Proof::AndE1(q) | Proof::AndE2(q) => {
                let (mut b, ctx, c) = self.build(q)?;
                let Formula::And(l, r) = &c else { unreachable!("checked") };
                let (kind, out) = match p {
                    Proof::AndE1(_) => (NodeKind::AndE1, (**l).clone()),
                    _ => (NodeKind::AndE2, (**r).clone()),
                };
                let n = self.node(kind, &[Some(&out), Some(&c)]);
                self.connect(port(n, 1), b.concl);
                b.concl = port(n, 0);
                b.unscoped.push(n);
                (b, ctx, out)
            }
            Proof::ImpI(q) => {
                let (mut b, mut ctx, c) = self.build(q)?;
                let a = ctx.pop().expect("checked");
                let bound = b.hyps.pop().expect("checked");
                let f = Formula::imp(a.clone(), c.clone());
                let scoped = !ctx.is_empty();
                let n = self.node(NodeKind::ImpI { scoped }, &[Some(&f), Some(&c), Some(&a), None]);
                self.connect(port(n, 1), b.concl);
                self.connect(port(n, 2), bound);
                for m in &b.unscoped {
                    self.g.nodes.get_mut(m).unwrap().scope = Some(n);
                }
                let mut unscoped = vec![n];
                if scoped {
                    let k = ctx.len();
                    let labels: Vec<Option<&Formula>> =
                        std::iter::once(None).chain(ctx.iter().map(Some)).chain(ctx.iter().map(Some)).collect();
                    let s = self.node(NodeKind::Scope(k as u16), &labels);
                    self.connect(port(n, 3), port(s, 0));
                    for (i, h) in b.hyps.iter_mut().enumerate() {
                        let inner = std::mem::replace(h, port(s, 1 + k + i));
                        self.w.connect(port(s, 1 + i), inner).expect("fresh port");
                    }
                    unscoped.push(s);
                }
                (Built { hyps: b.hyps, concl: port(n, 0), unscoped }, ctx, f)
            }
            Proof::ImpE(q1, q2) => {
                let (b1, mut ctx, c1) = self.build(q1)?;
                let (b2, ctx2, c2) = self.build(q2)?;
                let Formula::Imp(_, cod) = &c1 else { unreachable!("checked") };
                let out = (**cod).clone();
                let n = self.node(NodeKind::ImpE, &[Some(&out), Some(&c1), Some(&c2)]);
                self.connect(port(n, 1), b1.concl);
                self.connect(port(n, 2), b2.concl);
                ctx.extend(ctx2);
                let mut unscoped = b1.unscoped;
                unscoped.extend(b2.unscoped);
                unscoped.push(n);
                let mut hyps = b1.hyps;
                hyps.extend(b2.hyps);
                (Built { hyps, concl: port(n, 0), unscoped }, ctx, out)
            }
        })
    }
}

/// `Gr(π)`: one interface slot per hypothesis in order, then the
/// conclusion.
pub fn translate(p: &Proof) -> Result<PortGraph, ProofError> {
    translate_with(p, TranslateOptions::default())
}

pub fn translate_with(p: &Proof, opts: TranslateOptions) -> Result<PortGraph, ProofError> {
    let seq = check_proof(p)?;
    let mut b = Builder { g: PortGraph::empty(), w: Wiring::default(), opts };
    let (built, ctx, concl) = b.build(p)?;
    debug_assert_eq!(ctx, seq.hyps);
    for (i, h) in built.hyps.iter().enumerate() {
        b.connect(End::Real(Endpoint::Free(i as u32)), *h);
    }
    b.connect(End::Real(Endpoint::Free(ctx.len() as u32)), built.concl);
    let mut g = b.g;
    g.interface = ctx.into_iter().chain(std::iter::once(concl)).map(Some).collect();
    for (x, y) in b.w.resolve().expect("every wire closed") {
        g.link(x, y);
    }
    debug_assert!(g.validate().is_ok());
    Ok(g)
}

/// Plugs every interface slot with a fresh node of `kind`; the node's
/// principal port takes the slot's wire and its remaining ports become the
/// new interface, port by port and then slot by slot.
fn attach(g: &PortGraph, kind: NodeKind) -> PortGraph {
    let n = g.interface_len();
    let mut out = g.clone();
    let agents: Vec<NodeId> = (0..n).map(|_| out.alloc(kind, None)).collect();
    let extra = kind.arity() - 1;
    let at_slot = |e: Endpoint| match e {
        Endpoint::Free(i) => Endpoint::port(agents[i as usize], 0),
        e => e,
    };
    out.links = g.links.iter().map(|(a, b)| (at_slot(*a), at_slot(*b))).collect();
    let labels = std::mem::take(&mut out.interface);
    for (i, label) in labels.iter().enumerate() {
        let node = out.nodes.get_mut(&agents[i]).unwrap();
        node.labels = vec![label.clone(); kind.arity()];
    }
    for p in 0..extra {
        for (i, label) in labels.iter().enumerate() {
            let slot = Endpoint::Free(out.interface.len() as u32);
            out.interface.push(label.clone());
            out.link(Endpoint::port(agents[i], 1 + p), slot);
        }
    }
    out
}

/// Plugs one interface slot with a fresh node of `kind`. The slot is
/// removed (later slots move down by one); the node's principal port takes
/// the slot's wire and its other ports become new slots at the end.
pub fn attach_at(g: &PortGraph, slot: usize, kind: NodeKind) -> PortGraph {
    assert!(slot < g.interface_len(), "slot {slot} out of range");
    let mut out = g.clone();
    let agent = out.alloc(kind, None);
    let label = out.interface.remove(slot);
    let shift = |e: Endpoint| match e {
        Endpoint::Free(i) if i as usize == slot => Endpoint::port(agent, 0),
        Endpoint::Free(i) if i as usize > slot => Endpoint::Free(i - 1),
        e => e,
    };
    out.links = g.links.iter().map(|(a, b)| (shift(*a), shift(*b))).collect();
    out.nodes.get_mut(&agent).unwrap().labels = vec![label.clone(); kind.arity()];
    for p in 1..kind.arity() {
        let e = Endpoint::Free(out.interface.len() as u32);
        out.interface.push(label.clone());
        out.link(Endpoint::port(agent, p), e);
    }
    out
}

/// Attaches an ε to every interface slot, closing the graph.
pub fn attach_eps(g: &PortGraph) -> PortGraph {
    attach(g, NodeKind::Eps)
}

/// Attaches a δ to every one of the `n` slots: the left copies become slots
/// `0..n` and the right copies slots `n..2n`.
pub fn attach_delta(g: &PortGraph) -> PortGraph {
    attach(g, NodeKind::Delta)
}
