//! Shared fixtures and oracles for the integration suites.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use ndgraph::graph::{Endpoint, Morphism, NodeId, PortGraph};
use ndgraph::io::{parse_proof, parse_term};
use ndgraph::lambda::{translate_term, Term};
use ndgraph::logic::Proof;
use ndgraph::translate::translate;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read_dir(sub: &str, ext: &str) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(fixtures_dir().join(sub))
        .unwrap_or_else(|e| panic!("fixtures/{sub}: {e}"))
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == ext))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

pub fn fixture_proofs() -> Vec<(String, Proof)> {
    read_dir("proofs", "nd").into_iter().map(|(n, t)| (n, parse_proof(&t).unwrap())).collect()
}

pub fn fixture_terms() -> Vec<(String, Term)> {
    read_dir("terms", "lam").into_iter().map(|(n, t)| (n, parse_term(&t).unwrap())).collect()
}

pub fn proof(name: &str) -> Proof {
    fixture_proofs().into_iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("no proof fixture {name}")).1
}

pub fn term(name: &str) -> Term {
    fixture_terms().into_iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("no term fixture {name}")).1
}

/// Every fixture graph: proof and term translations.
pub fn fixture_graphs() -> Vec<(String, PortGraph)> {
    let mut out: Vec<(String, PortGraph)> =
        fixture_proofs().into_iter().map(|(n, p)| (n, translate(&p).unwrap())).collect();
    out.extend(fixture_terms().into_iter().map(|(n, t)| (n, translate_term(&t).unwrap())));
    out
}

/// Exhaustive enumeration of injective kind-preserving node maps that
/// preserve every wire between two pattern ports.
pub fn brute_force_matches(lhs: &PortGraph, host: &PortGraph) -> BTreeSet<Morphism> {
    let pat = lhs.node_ids();
    let hosts = host.node_ids();
    let mut out = BTreeSet::new();
    let mut chosen: Vec<NodeId> = Vec::new();
    fn go(
        lhs: &PortGraph,
        host: &PortGraph,
        pat: &[NodeId],
        hosts: &[NodeId],
        chosen: &mut Vec<NodeId>,
        out: &mut BTreeSet<Morphism>,
    ) {
        if chosen.len() == pat.len() {
            let image = |n: NodeId| chosen[pat.iter().position(|p| *p == n).unwrap()];
            let ok = pat.iter().enumerate().all(|(i, n)| {
                lhs.kind(*n) == host.kind(chosen[i])
                    && (0..lhs.kind(*n).unwrap().arity()).all(|p| match lhs.partner(Endpoint::port(*n, p)) {
                        Some(Endpoint::Port(m, q)) => {
                            host.partner(Endpoint::port(chosen[i], p)) == Some(Endpoint::Port(image(m), q))
                        }
                        _ => true,
                    })
            });
            if ok {
                out.insert(Morphism { node_map: chosen.clone() });
            }
            return;
        }
        for h in hosts {
            if !chosen.contains(h) {
                chosen.push(*h);
                go(lhs, host, pat, hosts, chosen, out);
                chosen.pop();
            }
        }
    }
    go(lhs, host, &pat, &hosts, &mut chosen, &mut out);
    out
}

/// Every graph met while reducing `g` with the catalogue (outermost).
pub fn reduction_graphs(g: &PortGraph, catalogue: &ndgraph::rules::Catalogue) -> Vec<PortGraph> {
    use ndgraph::engine::{Session, Strategy};
    let mut s = Session::new(g.clone(), catalogue.clone());
    let mut out = vec![g.clone()];
    while s.steps() < 1000 && s.step_with(&Strategy::Outermost).unwrap().is_some() {
        out.push(s.graph().clone());
    }
    out
}

/// The same graph with node ids reversed.
pub fn renumber(g: &PortGraph) -> PortGraph {
    use ndgraph::io::{EndDoc, GraphDoc};
    let mut doc = GraphDoc::from(g);
    let top = doc.next_id;
    let flip = |id: u32| top - 1 - id;
    for n in &mut doc.nodes {
        n.id = flip(n.id);
        n.scope = n.scope.map(flip);
    }
    doc.nodes.sort_by_key(|n| n.id);
    for e in doc.edges.iter_mut().flatten() {
        if let EndDoc::Port { node, .. } = e {
            *node = flip(*node);
        }
    }
    PortGraph::try_from(doc).expect("renumbered document is valid")
}

/// Result of one randomized suite.
#[derive(Debug)]
pub struct SuiteReport {
    pub total: usize,
    pub failures: Vec<String>,
    pub elapsed: std::time::Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        format!("{}/{} in {:.2?}", self.total - self.failures.len(), self.total, self.elapsed)
    }
}

fn suite<T: std::fmt::Display + Sync>(items: Vec<T>, check: impl Fn(&T) -> Result<(), String> + Sync) -> SuiteReport {
    let start = std::time::Instant::now();
    let results =
        ndgraph::batch::map(ndgraph::batch::Exec::Parallel, &items, |x| check(x).map_err(|e| format!("{x}: {e}")));
    SuiteReport {
        total: items.len(),
        failures: results.into_iter().filter_map(Result::err).collect(),
        elapsed: start.elapsed(),
    }
}

pub fn random_proofs(n: usize, seed: u64) -> Vec<Proof> {
    use ndgraph::gen::{random_proof, rng, ProofConfig};
    let mut r = rng(seed);
    (0..n).map(|_| random_proof(&mut r, &ProofConfig::default())).collect()
}

pub fn random_detours(n: usize, seed: u64) -> Vec<Proof> {
    use ndgraph::gen::{random_root_detour, rng, ProofConfig};
    let mut r = rng(seed);
    (0..n).map(|_| random_root_detour(&mut r, &ProofConfig::default())).collect()
}

pub fn random_terms(n: usize, seed: u64) -> Vec<Term> {
    use ndgraph::gen::{random_linear_term, rng};
    let mut r = rng(seed);
    (0..n).map(|_| random_linear_term(&mut r, 20)).collect()
}

fn run_to_normal(g: &PortGraph, cat: &ndgraph::rules::Catalogue) -> Result<ndgraph::engine::Outcome, String> {
    use ndgraph::engine::{normalise, Status, Strategy, STEP_LIMIT};
    let out = normalise(g, cat, &Strategy::Outermost, STEP_LIMIT).map_err(|e| e.to_string())?;
    if out.status == Status::StepLimit {
        return Err("step limit reached".into());
    }
    Ok(out)
}

/// Plugging every slot with ε and running the ε rules erases the graph.
pub fn erasing_suite(proofs: Vec<Proof>) -> SuiteReport {
    use ndgraph::rules::Catalogue;
    use ndgraph::translate::attach_eps;
    suite(proofs, |p| {
        let g = translate(p).map_err(|e| e.to_string())?;
        let out = run_to_normal(&attach_eps(&g), &Catalogue::eps())?;
        if out.graph.is_empty() {
            Ok(())
        } else {
            Err(format!("{} nodes left", out.graph.node_count()))
        }
    })
}

/// Plugging every slot with δ and running the δ rules yields two copies.
pub fn duplication_suite(proofs: Vec<Proof>) -> SuiteReport {
    use ndgraph::graph::is_isomorphic;
    use ndgraph::rules::Catalogue;
    use ndgraph::translate::attach_delta;
    suite(proofs, |p| {
        let g = translate(p).map_err(|e| e.to_string())?;
        let out = run_to_normal(&attach_delta(&g), &Catalogue::delta())?;
        if out.graph.component_count() != 2 * g.component_count() {
            return Err(format!("{} components, expected {}", out.graph.component_count(), 2 * g.component_count()));
        }
        if is_isomorphic(&out.graph, &g.disjoint_union(&g)).is_none() {
            return Err("not two copies of the translation".into());
        }
        Ok(())
    })
}

/// The root detour rule followed by W/C propagation reaches the graph of
/// the one-step normalised proof.
pub fn correctness_suite(proofs: Vec<Proof>) -> SuiteReport {
    suite(proofs, |p| {
        let c = ndgraph::equiv::check_root_step(p).map_err(|e| e.to_string())?;
        if c.equivalent {
            Ok(())
        } else {
            Err(format!("{} result differs from the expected graph", c.rule))
        }
    })
}

/// Global and small-step normalisation reach isomorphic normal forms.
pub fn mode_agreement_suite(proofs: Vec<Proof>) -> SuiteReport {
    use ndgraph::graph::is_isomorphic;
    use ndgraph::rules::{Catalogue, Mode};
    suite(proofs, |p| {
        let g = translate(p).map_err(|e| e.to_string())?;
        let a = run_to_normal(&g, &Catalogue::for_mode(Mode::Global))?;
        let b = run_to_normal(&g, &Catalogue::for_mode(Mode::SmallStep))?;
        if is_isomorphic(&a.graph, &b.graph).is_some() {
            Ok(())
        } else {
            Err("normal forms differ".into())
        }
    })
}

/// Renaming the λ translation gives the proof translation, and every β
/// step commutes with the renaming.
pub fn bridge_suite(terms: Vec<Term>) -> SuiteReport {
    use ndgraph::engine::list_redexes;
    use ndgraph::graph::is_isomorphic;
    use ndgraph::lambda::{curry_howard_rename, term_to_proof, Direction};
    use ndgraph::rules::Catalogue;
    suite(terms, |t| {
        let lam = translate_term(t).map_err(|e| e.to_string())?;
        let proof = term_to_proof(t).map_err(|e| e.to_string())?;
        let logic = translate(&proof).map_err(|e| e.to_string())?;
        let renamed = curry_howard_rename(&lam, Direction::LambdaToLogic).map_err(|e| e.to_string())?;
        if is_isomorphic(&renamed, &logic).is_none() {
            return Err("renamed λ graph differs from the proof graph".into());
        }
        let mut g = lam;
        loop {
            let rs = list_redexes(&g, &Catalogue::lambda());
            let Some(r) = rs.first() else { return Ok(()) };
            let next = r.apply(&g).map_err(|e| e.to_string())?;
            // The same redex on the logic side, found through the renaming.
            let as_logic = curry_howard_rename(&g, Direction::LambdaToLogic).map_err(|e| e.to_string())?;
            let lr = list_redexes(&as_logic, &Catalogue::beta())
                .into_iter()
                .find(|x| x.rule == "beta.imp" && r.nodes.iter().all(|n| x.nodes.contains(n)))
                .ok_or("no matching logic redex")?;
            let logic_next = lr.apply(&as_logic).map_err(|e| e.to_string())?;
            let back = curry_howard_rename(&logic_next, Direction::LogicToLambda).map_err(|e| e.to_string())?;
            if is_isomorphic(&back, &next).is_none() {
                return Err(format!("step {} does not commute with the renaming", r.id));
            }
            g = next;
        }
    })
}

/// Fixture graphs, their ε/δ attachments, and everything met while
/// reducing them, restricted to at most eight nodes.
pub fn small_fixture_set() -> Vec<(String, PortGraph)> {
    let mut out = Vec::new();
    for (name, g) in fixture_graphs() {
        let mut seen = vec![
            (name.clone(), g.clone()),
            (format!("{name}+eps"), ndgraph::translate::attach_eps(&g)),
            (format!("{name}+delta"), ndgraph::translate::attach_delta(&g)),
        ];
        for (label, cat) in [
            ("global", ndgraph::rules::Catalogue::for_mode(ndgraph::rules::Mode::Global)),
            ("small", ndgraph::rules::Catalogue::for_mode(ndgraph::rules::Mode::SmallStep)),
            ("lambda", ndgraph::rules::Catalogue::lambda()),
        ] {
            for (i, h) in reduction_graphs(&g, &cat).into_iter().enumerate().skip(1) {
                seen.push((format!("{name}/{label}#{i}"), h));
            }
        }
        for (i, h) in reduction_graphs(&ndgraph::translate::attach_delta(&g), &ndgraph::rules::Catalogue::delta())
            .into_iter()
            .enumerate()
            .skip(1)
        {
            seen.push((format!("{name}+delta#{i}"), h));
        }
        out.extend(seen.into_iter().filter(|(_, h)| h.node_count() <= 8));
    }
    out
}

pub fn all_rules() -> Vec<ndgraph::graph::RewriteRule> {
    let mut rules = ndgraph::rules::Catalogue::for_mode(ndgraph::rules::Mode::Global).instances(3);
    rules.extend(ndgraph::rules::Catalogue::for_mode(ndgraph::rules::Mode::SmallStep).instances(3));
    rules.extend(ndgraph::rules::Catalogue::lambda().instances(0));
    rules
}

/// Compares `find_matches` with exhaustive enumeration for every rule on
/// every small fixture graph.
pub fn oracle_suite() -> SuiteReport {
    let start = std::time::Instant::now();
    let set = small_fixture_set();
    let rules = all_rules();
    let mut failures = Vec::new();
    for (name, g) in &set {
        for r in &rules {
            let fast = ndgraph::graph::find_matches(&r.lhs, g);
            let slow = brute_force_matches(&r.lhs, g);
            if fast.len() != slow.len() || !fast.iter().all(|m| slow.contains(m)) {
                failures.push(format!("{name} / {}", r.name));
            }
        }
    }
    SuiteReport { total: set.len() * rules.len(), failures, elapsed: start.elapsed() }
}
