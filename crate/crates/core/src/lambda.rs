//! The linear λ-calculus: terms, linearity, β-reduction, simple types,
//! the translation to port graphs and the renaming bridge to the logic
//! graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{End, Wiring};
use crate::graph::{Endpoint, GraphError, NodeId, NodeKind, PortGraph};
use crate::logic::{Formula, Proof};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Lam(String, Box<Term>),
    App(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(x: impl Into<String>) -> Self {
        Term::Var(x.into())
    }

    pub fn lam(x: impl Into<String>, body: Term) -> Self {
        Term::Lam(x.into(), Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Self {
        Term::App(Box::new(f), Box::new(a))
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Free variables in left-to-right order of occurrence (with
    /// repetitions if the term is not linear).
    pub fn free_vars(&self) -> Vec<String> {
        fn go(t: &Term, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match t {
                Term::Var(x) if !bound.contains(x) => out.push(x.clone()),
                Term::Var(_) => {}
                Term::Lam(x, b) => {
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                Term::App(f, a) => {
                    go(f, bound, out);
                    go(a, bound, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Lam(x, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
            Term::App(f, a) => {
                f.all_names(out);
                a.all_names(out);
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Lam(x, b) => write!(f, "\\{x}. {b}"),
            Term::App(g, a) => {
                if matches!(**g, Term::Lam(..)) {
                    write!(f, "({g})")?;
                } else {
                    write!(f, "{g}")?;
                }
                if matches!(**a, Term::Var(_)) {
                    write!(f, " {a}")
                } else {
                    write!(f, " ({a})")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("variable `{variable}` {reason}")]
pub struct LinearityError {
    pub variable: String,
    pub reason: String,
}

/// Checks linearity and returns the free variables in occurrence order.
pub fn check_linear(t: &Term) -> Result<Vec<String>, LinearityError> {
    match t {
        Term::Var(x) => Ok(vec![x.clone()]),
        Term::Lam(x, b) => {
            let mut fv = check_linear(b)?;
            match fv.iter().position(|y| y == x) {
                Some(i) => {
                    fv.remove(i);
                    Ok(fv)
                }
                None => Err(LinearityError { variable: x.clone(), reason: "is bound but never used".into() }),
            }
        }
        Term::App(f, a) => {
            let mut fv = check_linear(f)?;
            let fa = check_linear(a)?;
            if let Some(x) = fa.iter().find(|x| fv.contains(x)) {
                return Err(LinearityError { variable: x.clone(), reason: "is used more than once".into() });
            }
            fv.extend(fa);
            Ok(fv)
        }
    }
}

/// Alpha-equivalence.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go<'t>(a: &'t Term, b: &'t Term, env: &mut Vec<(&'t str, &'t str)>) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                match (env.iter().rev().position(|(l, _)| *l == x), env.iter().rev().position(|(_, r)| *r == y)) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::Lam(x, s), Term::Lam(y, t)) => {
                env.push((x, y));
                let ok = go(s, t, env);
                env.pop();
                ok
            }
            (Term::App(f, s), Term::App(g, t)) => go(f, g, env) && go(s, t, env),
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    (1..).map(|i| format!("{base}{i}")).find(|n| !avoid.contains(n)).unwrap()
}

/// Capture-avoiding substitution `t[x := s]`.
pub fn substitute(t: &Term, x: &str, s: &Term) -> Term {
    match t {
        Term::Var(y) if y == x => s.clone(),
        Term::Var(_) => t.clone(),
        Term::App(f, a) => Term::app(substitute(f, x, s), substitute(a, x, s)),
        Term::Lam(y, _) if y == x => t.clone(),
        Term::Lam(y, b) => {
            let fv_s = s.free_vars();
            if fv_s.iter().any(|v| v == y) {
                let mut avoid = BTreeSet::new();
                b.all_names(&mut avoid);
                s.all_names(&mut avoid);
                avoid.insert(x.to_string());
                let z = fresh_name(y, &avoid);
                let renamed = substitute(b, y, &Term::Var(z.clone()));
                Term::lam(z, substitute(&renamed, x, s))
            } else {
                Term::lam(y.clone(), substitute(b, x, s))
            }
        }
    }
}

/// One leftmost-outermost β step, if any redex exists.
pub fn beta_step(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => {
            if let Term::Lam(x, b) = &**f {
                return Some(substitute(b, x, a));
            }
            if let Some(f2) = beta_step(f) {
                return Some(Term::app(f2, (**a).clone()));
            }
            beta_step(a).map(|a2| Term::app((**f).clone(), a2))
        }
        Term::Lam(x, b) => beta_step(b).map(|b2| Term::lam(x.clone(), b2)),
        Term::Var(_) => None,
    }
}

/// Number of β-redexes in the term.
pub fn redex_count(t: &Term) -> usize {
    match t {
        Term::Var(_) => 0,
        Term::Lam(_, b) => redex_count(b),
        Term::App(f, a) => usize::from(matches!(**f, Term::Lam(..))) + redex_count(f) + redex_count(a),
    }
}

/// Normal form and number of steps under leftmost-outermost reduction.
pub fn normalize(t: &Term) -> (Term, usize) {
    let mut cur = t.clone();
    let mut steps = 0;
    while let Some(next) = beta_step(&cur) {
        cur = next;
        steps += 1;
    }
    (cur, steps)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error(transparent)]
    Linearity(#[from] LinearityError),
    #[error("term has no simple type: {0}")]
    Untypable(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Var(usize),
    Arrow(Box<Ty>, Box<Ty>),
}

#[derive(Default)]
struct Unifier {
    bindings: BTreeMap<usize, Ty>,
    next: usize,
}

impl Unifier {
    fn fresh(&mut self) -> Ty {
        self.next += 1;
        Ty::Var(self.next - 1)
    }

    fn walk(&self, t: &Ty) -> Ty {
        match t {
            Ty::Var(v) => match self.bindings.get(v) {
                Some(b) => self.walk(b),
                None => t.clone(),
            },
            Ty::Arrow(a, b) => Ty::Arrow(Box::new(self.walk(a)), Box::new(self.walk(b))),
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> Result<(), TermError> {
        match (self.walk(a), self.walk(b)) {
            (Ty::Var(x), Ty::Var(y)) if x == y => Ok(()),
            (Ty::Var(x), t) | (t, Ty::Var(x)) => {
                if occurs(x, &t) {
                    return Err(TermError::Untypable("cyclic type".into()));
                }
                self.bindings.insert(x, t);
                Ok(())
            }
            (Ty::Arrow(a1, b1), Ty::Arrow(a2, b2)) => {
                self.unify(&a1, &a2)?;
                self.unify(&b1, &b2)
            }
        }
    }
}

fn occurs(x: usize, t: &Ty) -> bool {
    match t {
        Ty::Var(y) => *y == x,
        Ty::Arrow(a, b) => occurs(x, a) || occurs(x, b),
    }
}

/// A principal simple typing: the types of the free variables (in
/// occurrence order), the type of the term, and the type of every variable
/// occurrence in left-to-right order. Type variables become atoms
/// `A`, `B`, … in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Typing {
    pub context: Vec<(String, Formula)>,
    pub ty: Formula,
    pub occurrences: Vec<Formula>,
}

pub fn infer_type(t: &Term) -> Result<Typing, TermError> {
    fn go(t: &Term, u: &mut Unifier, bound: &mut Vec<(String, Ty)>, occ: &mut Vec<Ty>) -> Result<Ty, TermError> {
        match t {
            Term::Var(x) => {
                let ty = match bound.iter().rev().find(|(y, _)| y == x) {
                    Some((_, ty)) => ty.clone(),
                    None => u.fresh(),
                };
                occ.push(ty.clone());
                Ok(ty)
            }
            Term::Lam(x, b) => {
                let a = u.fresh();
                bound.push((x.clone(), a.clone()));
                let body = go(b, u, bound, occ)?;
                bound.pop();
                Ok(Ty::Arrow(Box::new(a), Box::new(body)))
            }
            Term::App(f, a) => {
                let tf = go(f, u, bound, occ)?;
                let ta = go(a, u, bound, occ)?;
                let r = u.fresh();
                u.unify(&tf, &Ty::Arrow(Box::new(ta), Box::new(r.clone())))?;
                Ok(r)
            }
        }
    }

    fn to_formula(t: &Ty, names: &mut BTreeMap<usize, String>) -> Formula {
        match t {
            Ty::Var(v) => {
                let n = names.len();
                let name = names.entry(*v).or_insert_with(|| atom_name(n)).clone();
                Formula::Atom(name)
            }
            Ty::Arrow(a, b) => {
                let fa = to_formula(a, names);
                Formula::imp(fa, to_formula(b, names))
            }
        }
    }

    let fv = check_linear(t)?;
    let mut u = Unifier::default();
    let mut occ = Vec::new();
    let ty = go(t, &mut u, &mut Vec::new(), &mut occ)?;
    // Free variables occur once each; their occurrence types are their types.
    let free_occ = free_occurrence_positions(t);
    let mut names = BTreeMap::new();
    let context =
        fv.iter().zip(&free_occ).map(|(x, &i)| (x.clone(), to_formula(&u.walk(&occ[i]), &mut names))).collect();
    let ty = to_formula(&u.walk(&ty), &mut names);
    let occurrences = occ.iter().map(|o| to_formula(&u.walk(o), &mut names)).collect();
    Ok(Typing { context, ty, occurrences })
}

fn atom_name(n: usize) -> String {
    let letter = (b'A' + (n % 26) as u8) as char;
    if n < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", n / 26)
    }
}

/// Indices (in occurrence order) of the free-variable occurrences.
fn free_occurrence_positions(t: &Term) -> Vec<usize> {
    fn go(t: &Term, bound: &mut Vec<String>, counter: &mut usize, out: &mut Vec<usize>) {
        match t {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.push(*counter);
                }
                *counter += 1;
            }
            Term::Lam(x, b) => {
                bound.push(x.clone());
                go(b, bound, counter, out);
                bound.pop();
            }
            Term::App(f, a) => {
                go(f, bound, counter, out);
                go(a, bound, counter, out);
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut 0, &mut out);
    out
}

/// The proof corresponding to a linear term under its principal typing.
/// Hypotheses follow the free variables in occurrence order; before each
/// implication introduction the bound variable is moved to the last
/// position with exchanges.
pub fn term_to_proof(t: &Term) -> Result<Proof, TermError> {
    fn go(t: &Term, occ: &mut std::slice::Iter<'_, Formula>) -> (Proof, Vec<String>) {
        match t {
            Term::Var(x) => (Proof::ax(occ.next().expect("one type per occurrence").clone()), vec![x.clone()]),
            Term::App(f, a) => {
                let (pf, mut cf) = go(f, occ);
                let (pa, ca) = go(a, occ);
                cf.extend(ca);
                (Proof::imp_e(pf, pa), cf)
            }
            Term::Lam(x, b) => {
                let (mut p, mut ctx) = go(b, occ);
                let mut i = ctx.iter().position(|y| y == x).expect("linear");
                while i + 1 < ctx.len() {
                    p = Proof::ex(i, p);
                    ctx.swap(i, i + 1);
                    i += 1;
                }
                ctx.pop();
                (Proof::imp_i(p), ctx)
            }
        }
    }
    let typing = infer_type(t)?;
    Ok(go(t, &mut typing.occurrences.iter()).0)
}

/// Translates a linear term: variables are wires, abstractions are λ nodes
/// (root, body, binder) and applications are @ nodes (root, fun, arg). The
/// interface lists the free variables in occurrence order, then the root.
pub fn translate_term(t: &Term) -> Result<PortGraph, TermError> {
    fn go(t: &Term, g: &mut PortGraph, w: &mut Wiring, vars: &mut BTreeMap<String, End>) -> End {
        match t {
            Term::Var(x) => {
                let (a, b) = w.joint();
                vars.insert(x.clone(), b);
                a
            }
            Term::Lam(x, body) => {
                let l = g.alloc(NodeKind::Lam, None);
                let r = go(body, g, w, vars);
                let bound = vars.remove(x).expect("linear");
                w.connect(End::Real(Endpoint::port(l, 1)), r).expect("fresh port");
                w.connect(End::Real(Endpoint::port(l, 2)), bound).expect("fresh port");
                End::Real(Endpoint::port(l, 0))
            }
            Term::App(f, a) => {
                let n = g.alloc(NodeKind::App, None);
                let rf = go(f, g, w, vars);
                let ra = go(a, g, w, vars);
                w.connect(End::Real(Endpoint::port(n, 1)), rf).expect("fresh port");
                w.connect(End::Real(Endpoint::port(n, 2)), ra).expect("fresh port");
                End::Real(Endpoint::port(n, 0))
            }
        }
    }
    let fv = check_linear(t)?;
    let mut g = PortGraph::empty();
    let mut w = Wiring::default();
    let mut vars = BTreeMap::new();
    let root = go(t, &mut g, &mut w, &mut vars);
    for (i, x) in fv.iter().enumerate() {
        w.connect(End::Real(Endpoint::Free(i as u32)), vars[x]).expect("fresh slot");
    }
    w.connect(End::Real(Endpoint::Free(fv.len() as u32)), root).expect("fresh slot");
    g.interface = vec![None; fv.len() + 1];
    for (a, b) in w.resolve().expect("every joint closed") {
        g.link(a, b);
    }
    debug_assert!(g.validate().is_ok());
    Ok(g)
}

/// Direction of [`curry_howard_rename`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    LogicToLambda,
    LambdaToLogic,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenameError {
    #[error("nodes outside the linear implicational fragment: {}", list(.0))]
    OutsideFragment(Vec<NodeId>),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn list(ids: &[NodeId]) -> String {
    ids.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ")
}

/// Renames between the implicational logic graphs and λ graphs: ⊃I ↔ λ,
/// ⊃E ↔ @. Scope nodes are dropped going to λ graphs and synthesised going
/// back, one per abstraction whose body uses variables bound further out.
/// Node ids and the interface order are kept.
pub fn curry_howard_rename(g: &PortGraph, direction: Direction) -> Result<PortGraph, RenameError> {
    match direction {
        Direction::LogicToLambda => logic_to_lambda(g),
        Direction::LambdaToLogic => lambda_to_logic(g),
    }
}

fn logic_to_lambda(g: &PortGraph) -> Result<PortGraph, RenameError> {
    let bad: Vec<NodeId> = g
        .nodes()
        .filter(|(_, n)| !matches!(n.kind, NodeKind::ImpI { .. } | NodeKind::ImpE | NodeKind::Scope(_)))
        .map(|(id, _)| id)
        .collect();
    if !bad.is_empty() {
        return Err(RenameError::OutsideFragment(bad));
    }
    let mut out = PortGraph { interface: g.interface.clone(), next_id: g.next_id, ..PortGraph::default() };
    for (id, node) in g.nodes() {
        let kind = match node.kind {
            NodeKind::ImpI { .. } => NodeKind::Lam,
            NodeKind::ImpE => NodeKind::App,
            _ => continue,
        };
        out.nodes.insert(id, crate::graph::Node::new(kind, None));
    }
    // Scope ports become pass-through joints: in_k and out_k are the two
    // sides of joint (scope, k).
    let mut joint_ids = BTreeMap::new();
    let mut end = |e: Endpoint| -> Option<End> {
        match e {
            Endpoint::Port(n, p) => match g.kind(n).unwrap() {
                NodeKind::Scope(arity) => {
                    if p == 0 {
                        return None;
                    }
                    let k = usize::from((p - 1) % arity);
                    let next = joint_ids.len() as u32;
                    let j = *joint_ids.entry((n, k)).or_insert(next);
                    Some(End::Joint(j, p > arity))
                }
                NodeKind::ImpI { .. } if p == 3 => None,
                _ => Some(End::Real(e)),
            },
            Endpoint::Free(_) => Some(End::Real(e)),
        }
    };
    let mut w = Wiring::default();
    for (a, b) in g.edges() {
        match (end(a), end(b)) {
            (Some(x), Some(y)) => {
                w.connect(x, y).map_err(|_| GraphError::Malformed("wire conflict while dropping scopes".into()))?
            }
            (None, None) => {}
            _ => return Err(GraphError::Malformed("scope principal not wired to its abstraction".into()).into()),
        }
    }
    for (a, b) in w.resolve().map_err(|_| GraphError::Malformed("scope port left open".into()))? {
        out.link(a, b);
    }
    out.validate()?;
    Ok(out)
}

fn lambda_to_logic(g: &PortGraph) -> Result<PortGraph, RenameError> {
    let bad: Vec<NodeId> =
        g.nodes().filter(|(_, n)| !matches!(n.kind, NodeKind::Lam | NodeKind::App)).map(|(id, _)| id).collect();
    if !bad.is_empty() {
        return Err(RenameError::OutsideFragment(bad));
    }
    let malformed = |m: &str| RenameError::Graph(GraphError::Malformed(m.into()));
    // Tree structure: the parent of a node is the node its root port hangs from.
    let mut parent: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for (id, _) in g.nodes() {
        if let Endpoint::Port(p, q) = g.partner_of(id, 0) {
            let is_child_port = match g.kind(p).unwrap() {
                NodeKind::Lam => q == 1,
                _ => q == 1 || q == 2,
            };
            if !is_child_port {
                return Err(malformed("root port not attached to a child port"));
            }
            parent.insert(id, p);
        }
    }
    let lam_ancestors = |mut n: NodeId| {
        let mut out = Vec::new();
        if g.kind(n) == Some(NodeKind::Lam) {
            out.push(n);
        }
        while let Some(&p) = parent.get(&n) {
            if g.kind(p) == Some(NodeKind::Lam) {
                out.push(p);
            }
            n = p;
        }
        out
    };
    // Variable occurrences in left-to-right order: child ports wired to a
    // binder or to a free-variable slot.
    let roots: Vec<NodeId> = g.nodes().map(|(id, _)| id).filter(|id| !parent.contains_key(id)).collect();
    let mut occurrences: Vec<(Endpoint, Endpoint)> = Vec::new();
    fn visit(g: &PortGraph, n: NodeId, out: &mut Vec<(Endpoint, Endpoint)>) {
        let children: &[usize] = if g.kind(n) == Some(NodeKind::Lam) { &[1] } else { &[1, 2] };
        for &c in children {
            let e = Endpoint::port(n, c);
            match g.partner_of(n, c) {
                Endpoint::Port(m, 0) => visit(g, m, out),
                other => out.push((e, other)),
            }
        }
    }
    for r in roots {
        visit(g, r, &mut occurrences);
    }
    // Per abstraction, the occurrences it captures, in order.
    let mut captured: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
    let mut chains: Vec<Vec<NodeId>> = Vec::new();
    for (i, (occ, binder)) in occurrences.iter().enumerate() {
        let binder_node = match binder {
            Endpoint::Port(b, 2) if g.kind(*b) == Some(NodeKind::Lam) => Some(*b),
            Endpoint::Free(_) => None,
            _ => return Err(malformed("variable occurrence not wired to a binder")),
        };
        let enclosing: Vec<NodeId> =
            lam_ancestors(occ.node().unwrap()).into_iter().take_while(|l| Some(*l) != binder_node).collect();
        for l in &enclosing {
            captured.entry(*l).or_default().push(i);
        }
        chains.push(enclosing);
    }

    let mut out = PortGraph { interface: g.interface.clone(), next_id: g.next_id, ..PortGraph::default() };
    for (id, node) in g.nodes() {
        let kind = match node.kind {
            NodeKind::Lam => NodeKind::ImpI { scoped: captured.contains_key(&id) },
            _ => NodeKind::ImpE,
        };
        out.nodes.insert(id, crate::graph::Node::new(kind, None));
    }
    // Scope annotations: the nearest enclosing abstraction strictly above.
    for (id, _) in g.nodes() {
        let mut cur = parent.get(&id).copied();
        while let Some(p) = cur {
            if g.kind(p) == Some(NodeKind::Lam) {
                break;
            }
            cur = parent.get(&p).copied();
        }
        out.nodes.get_mut(&id).unwrap().scope = cur;
    }
    let mut scope_of = BTreeMap::new();
    for (l, occ) in &captured {
        let owner_scope = out.nodes[l].scope;
        let s = out.alloc(NodeKind::Scope(occ.len() as u16), owner_scope);
        out.link(Endpoint::port(*l, 3), Endpoint::port(s, 0));
        scope_of.insert(*l, s);
    }
    let occurrence_ports: BTreeSet<Endpoint> = occurrences.iter().flat_map(|(a, b)| [*a, *b]).collect();
    for (a, b) in g.edges() {
        if !occurrence_ports.contains(&a) {
            out.link(a, b);
        }
    }
    for (i, (occ, binder)) in occurrences.iter().enumerate() {
        let mut cur = *occ;
        for l in &chains[i] {
            let s = scope_of[l];
            let n = captured[l].len();
            let k = captured[l].iter().position(|&j| j == i).unwrap();
            out.link(cur, Endpoint::port(s, 1 + k));
            cur = Endpoint::port(s, 1 + n + k);
        }
        out.link(cur, *binder);
    }
    out.validate()?;
    Ok(out)
}
