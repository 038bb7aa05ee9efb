//! Redex enumeration, strategies, interactive sessions and traces.
//!
//! A redex is named `rule@n3,n7` after its rule and sorted footprint; two
//! matches of the same rule on the same nodes are one redex. Every applied
//! step is recorded with the hash of the resulting graph, so a trace can be
//! replayed and checked step by step.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::batch::{self, Exec};
use crate::graph::{apply_rule, find_matches, Endpoint, GraphError, Morphism, NodeId, PortGraph, RewriteRule};
use crate::io::content_hash;
use crate::meta::{apply_meta, find_meta, MetaKind, MetaMatch};
use crate::rules::Catalogue;

/// Default bound on automatic reduction.
pub const STEP_LIMIT: usize = 10_000;

#[derive(Clone, Debug)]
enum Action {
    Rule(Arc<RewriteRule>, Morphism),
    Meta(MetaKind, MetaMatch),
}

/// One applicable rule occurrence.
#[derive(Clone, Debug)]
pub struct Redex {
    pub id: String,
    pub rule: String,
    pub nodes: Vec<NodeId>,
    action: Action,
}

impl Redex {
    fn new(rule: &str, nodes: Vec<NodeId>, action: Action) -> Self {
        let list: Vec<String> = nodes.iter().map(ToString::to_string).collect();
        Redex { id: format!("{rule}@{}", list.join(",")), rule: rule.to_string(), nodes, action }
    }

    /// Rewrites `g` at this redex.
    pub fn apply(&self, g: &PortGraph) -> Result<PortGraph, GraphError> {
        match &self.action {
            Action::Rule(r, m) => apply_rule(g, r, m),
            Action::Meta(k, m) => apply_meta(g, *k, *m),
        }
    }
}

/// Every redex of the catalogue in `g`, lowest node ids first (then by
/// rule name).
pub fn list_redexes(g: &PortGraph, catalogue: &Catalogue) -> Vec<Redex> {
    let mut out: BTreeMap<String, Redex> = BTreeMap::new();
    for rule in catalogue.rules_for(g) {
        let rule = Arc::new(rule);
        for m in find_matches(&rule.lhs, g) {
            let r = Redex::new(&rule.name, m.footprint(), Action::Rule(rule.clone(), m));
            out.entry(r.id.clone()).or_insert(r);
        }
    }
    for entry in catalogue.metas() {
        for m in find_meta(g, entry.kind) {
            let r = Redex::new(entry.name, m.footprint(), Action::Meta(entry.kind, m));
            out.entry(r.id.clone()).or_insert(r);
        }
    }
    let mut list: Vec<Redex> = out.into_values().collect();
    list.sort_by(|a, b| (&a.nodes, &a.rule).cmp(&(&b.nodes, &b.rule)));
    list
}

/// How the next redex is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Furthest from the conclusion first.
    Innermost,
    /// Closest to the conclusion first.
    #[default]
    Outermost,
    /// Only rules whose name starts with one of the prefixes, lowest node
    /// ids first, until none applies.
    Exhaustive(Vec<String>),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Innermost => f.write_str("innermost"),
            Strategy::Outermost => f.write_str("outermost"),
            Strategy::Exhaustive(p) => write!(f, "exhaustive:{}", p.join(",")),
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "innermost" => Ok(Strategy::Innermost),
            "outermost" => Ok(Strategy::Outermost),
            _ => match s.strip_prefix("exhaustive:") {
                Some(list) if !list.is_empty() => {
                    Ok(Strategy::Exhaustive(list.split(',').map(|p| p.trim().to_string()).collect()))
                }
                _ => Err(format!("unknown strategy `{s}` (innermost, outermost, exhaustive:<prefixes>)")),
            },
        }
    }
}

/// Distance of every node from the conclusion slot (the last slot).
/// Nodes not connected to it count as deepest.
fn depths(g: &PortGraph) -> BTreeMap<NodeId, usize> {
    let mut out = BTreeMap::new();
    let mut queue = VecDeque::new();
    if let Some(last) = g.interface_len().checked_sub(1) {
        if let Some(Endpoint::Port(n, _)) = g.partner(Endpoint::Free(last as u32)) {
            out.insert(n, 0);
            queue.push_back(n);
        }
    }
    while let Some(n) = queue.pop_front() {
        let d = out[&n];
        for p in 0..g.kind(n).unwrap().arity() {
            if let Endpoint::Port(v, _) = g.partner_of(n, p) {
                if let std::collections::btree_map::Entry::Vacant(e) = out.entry(v) {
                    e.insert(d + 1);
                    queue.push_back(v);
                }
            }
        }
    }
    out
}

/// Picks the redex a strategy would fire next.
pub fn choose(g: &PortGraph, catalogue: &Catalogue, strategy: &Strategy) -> Option<Redex> {
    match strategy {
        Strategy::Exhaustive(prefixes) => {
            let cat = catalogue.filter(|n| prefixes.iter().any(|p| n.starts_with(p.as_str())));
            list_redexes(g, &cat).into_iter().next()
        }
        Strategy::Innermost | Strategy::Outermost => {
            let d = depths(g);
            let depth = |r: &Redex| r.nodes.iter().map(|n| d.get(n).copied().unwrap_or(usize::MAX)).min().unwrap();
            let redexes = list_redexes(g, catalogue);
            if *strategy == Strategy::Innermost {
                // Ties go to the lowest node ids: max_by_key keeps the last maximum.
                redexes.into_iter().rev().max_by_key(depth)
            } else {
                redexes.into_iter().min_by_key(depth)
            }
        }
    }
}

/// One recorded rewrite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: String,
    pub redex: String,
    pub nodes: Vec<NodeId>,
    /// Content hash of the graph after the step.
    pub hash: String,
}

/// A replayable reduction: the initial graph and every step taken.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub initial: PortGraph,
    pub initial_hash: String,
    pub steps: Vec<TraceStep>,
    pub final_hash: String,
}

impl Trace {
    pub fn new(initial: PortGraph) -> Self {
        let h = content_hash(&initial);
        Trace { initial, initial_hash: h.clone(), steps: Vec::new(), final_hash: h }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("traces always serialise")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("no redex `{0}` in the current graph")]
    UnknownRedex(String),
    #[error("nothing to undo")]
    NothingToUndo,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("replay diverged at step {step}: {reason}")]
    Replay { step: usize, reason: String },
}

impl EngineError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::UnknownRedex(_) => "unknown_redex",
            EngineError::NothingToUndo => "nothing_to_undo",
            EngineError::Graph(GraphError::StaleMatch(_)) => "stale_match",
            EngineError::Graph(GraphError::Integrity(_)) => "scope_integrity",
            EngineError::Graph(_) => "graph_error",
            EngineError::Replay { .. } => "replay_diverged",
        }
    }
}

/// How an automatic run ended.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    NormalForm,
    StepLimit,
}

/// An interactive reduction with undo and a trace.
#[derive(Clone, Debug)]
pub struct Session {
    catalogue: Catalogue,
    history: Vec<PortGraph>,
    trace: Trace,
}

impl Session {
    pub fn new(g: PortGraph, catalogue: Catalogue) -> Self {
        Session { catalogue, trace: Trace::new(g.clone()), history: vec![g] }
    }

    pub fn graph(&self) -> &PortGraph {
        self.history.last().expect("history starts with the initial graph")
    }

    pub fn catalogue(&self) -> &Catalogue {
        &self.catalogue
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn steps(&self) -> usize {
        self.trace.steps.len()
    }

    pub fn redexes(&self) -> Vec<Redex> {
        list_redexes(self.graph(), &self.catalogue)
    }

    pub fn is_normal(&self) -> bool {
        self.redexes().is_empty()
    }

    fn fire(&mut self, r: Redex) -> Result<&TraceStep, EngineError> {
        let next = r.apply(self.graph())?;
        let hash = content_hash(&next);
        self.trace.final_hash = hash.clone();
        self.trace.steps.push(TraceStep { rule: r.rule, redex: r.id, nodes: r.nodes, hash });
        self.history.push(next);
        Ok(self.trace.steps.last().unwrap())
    }

    /// Fires the redex with the given id (user choice).
    pub fn step(&mut self, id: &str) -> Result<&TraceStep, EngineError> {
        let r =
            self.redexes().into_iter().find(|r| r.id == id).ok_or_else(|| EngineError::UnknownRedex(id.to_string()))?;
        self.fire(r)
    }

    /// Fires the redex the strategy picks; `None` in normal form.
    pub fn step_with(&mut self, strategy: &Strategy) -> Result<Option<&TraceStep>, EngineError> {
        match choose(self.graph(), &self.catalogue, strategy) {
            Some(r) => self.fire(r).map(Some),
            None => Ok(None),
        }
    }

    /// Reverts the last step.
    pub fn undo(&mut self) -> Result<(), EngineError> {
        if self.history.len() <= 1 {
            return Err(EngineError::NothingToUndo);
        }
        self.history.pop();
        self.trace.steps.pop();
        self.trace.final_hash = content_hash(self.graph());
        Ok(())
    }

    /// Runs a strategy until normal form or `limit` steps.
    pub fn run(&mut self, strategy: &Strategy, limit: usize) -> Result<Status, EngineError> {
        for _ in 0..limit {
            if self.step_with(strategy)?.is_none() {
                return Ok(Status::NormalForm);
            }
        }
        Ok(if choose(self.graph(), &self.catalogue, strategy).is_none() {
            Status::NormalForm
        } else {
            Status::StepLimit
        })
    }
}

/// Result of [`normalise`].
#[derive(Clone, Debug)]
pub struct Outcome {
    pub graph: PortGraph,
    pub steps: usize,
    pub status: Status,
    pub trace: Trace,
}

/// Reduces `g` with the strategy, up to `limit` steps.
pub fn normalise(
    g: &PortGraph,
    catalogue: &Catalogue,
    strategy: &Strategy,
    limit: usize,
) -> Result<Outcome, EngineError> {
    let mut s = Session::new(g.clone(), catalogue.clone());
    let status = s.run(strategy, limit)?;
    Ok(Outcome { graph: s.graph().clone(), steps: s.steps(), status, trace: s.trace })
}

/// Normalises many graphs under an execution policy; results keep order.
pub fn normalise_batch(
    exec: Exec,
    graphs: &[PortGraph],
    catalogue: &Catalogue,
    strategy: &Strategy,
    limit: usize,
) -> Vec<Result<Outcome, EngineError>> {
    batch::map(exec, graphs, |g| normalise(g, catalogue, strategy, limit))
}

/// Re-executes a trace, checking every intermediate hash. The catalogue
/// must contain every rule the trace uses.
pub fn replay(trace: &Trace, catalogue: &Catalogue) -> Result<PortGraph, EngineError> {
    if content_hash(&trace.initial) != trace.initial_hash {
        return Err(EngineError::Replay { step: 0, reason: "initial graph does not match its hash".into() });
    }
    let mut g = trace.initial.clone();
    for (i, st) in trace.steps.iter().enumerate() {
        let r = list_redexes(&g, catalogue)
            .into_iter()
            .find(|r| r.id == st.redex)
            .ok_or_else(|| EngineError::Replay { step: i + 1, reason: format!("redex {} not found", st.redex) })?;
        g = r.apply(&g)?;
        if content_hash(&g) != st.hash {
            return Err(EngineError::Replay { step: i + 1, reason: "hash mismatch".into() });
        }
    }
    if content_hash(&g) != trace.final_hash {
        return Err(EngineError::Replay { step: trace.steps.len(), reason: "final hash mismatch".into() });
    }
    Ok(g)
}

/// Rule names used in a trace, for reporting.
pub fn rules_used(trace: &Trace) -> BTreeSet<String> {
    trace.steps.iter().map(|s| s.rule.clone()).collect()
}
