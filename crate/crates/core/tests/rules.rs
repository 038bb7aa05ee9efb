mod common;

use common::{fixture_proofs, proof};
use ndgraph::engine::{list_redexes, normalise, EngineError, Session, Strategy, STEP_LIMIT};
use ndgraph::graph::{build_graph, is_isomorphic, Endpoint, NodeKind, NodeSpec, PortGraph};
use ndgraph::io::{parse_proof, GraphDoc};
use ndgraph::logic::{Formula, Proof};
use ndgraph::rules::{Catalogue, Mode};
use ndgraph::translate::{attach_at, attach_delta, attach_eps, translate};

const SCOPED: NodeKind = NodeKind::ImpI { scoped: true };

fn gr(text: &str) -> PortGraph {
    translate(&parse_proof(text).unwrap()).unwrap()
}

/// Fires the only redex of the catalogue.
fn fire_only(g: &PortGraph, catalogue: &Catalogue) -> (String, PortGraph) {
    let rs = list_redexes(g, catalogue);
    assert_eq!(rs.len(), 1, "expected one redex, got {:?}", rs.iter().map(|r| &r.id).collect::<Vec<_>>());
    (rs[0].rule.clone(), rs[0].apply(g).unwrap())
}

fn run(g: &PortGraph, catalogue: &Catalogue) -> (PortGraph, usize) {
    let out = normalise(g, catalogue, &Strategy::Outermost, STEP_LIMIT).unwrap();
    (out.graph, out.steps)
}

fn ws(n: usize) -> PortGraph {
    build_graph(&vec![NodeSpec::new(NodeKind::W); n], &[]).unwrap()
}

#[test]
fn beta_and_leaves_a_weakening_on_the_dropped_side() {
    let (rule, g) = fire_only(&translate(&proof("and_detour")).unwrap(), &Catalogue::beta());
    assert_eq!(rule, "beta.and.e1");
    assert!(is_isomorphic(&g, &gr("w(B, ax(A))")).is_some());

    let (rule, g) = fire_only(&translate(&proof("and_detour_right")).unwrap(), &Catalogue::beta());
    assert_eq!(rule, "beta.and.e2");
    assert!(is_isomorphic(&g, &gr("ex(0, w(A, ax(B)))")).is_some());
}

#[test]
fn beta_and_needs_an_introduction_next_to_the_elimination() {
    let g = translate(&proof("commutativity")).unwrap();
    assert!(list_redexes(&g, &Catalogue::beta()).is_empty());
}

#[test]
fn beta_and_is_local() {
    let g = translate(&proof("commutativity_detour")).unwrap();
    let rs = list_redexes(&g, &Catalogue::beta());
    assert_eq!(rs.len(), 1);
    let after = rs[0].apply(&g).unwrap();
    for (id, node) in g.nodes().filter(|(id, _)| !rs[0].nodes.contains(id)) {
        assert_eq!(after.node(id).map(|n| n.kind), Some(node.kind), "{id} changed");
        for p in 0..node.kind.arity() {
            let old = g.partner_of(id, p);
            if old.node().is_some_and(|n| !rs[0].nodes.contains(&n)) {
                assert_eq!(after.partner_of(id, p), old, "wire at {id}:{p} changed");
            }
        }
    }
    let expected = translate(&Proof::w(Formula::atom("C"), proof("commutativity"))).unwrap();
    assert!(is_isomorphic(&after, &expected).is_some());
}

#[test]
fn beta_imp_on_the_identity_redex_is_a_wire() {
    let (rule, g) = fire_only(&translate(&proof("imp_detour")).unwrap(), &Catalogue::beta());
    assert_eq!(rule, "beta.imp");
    assert!(is_isomorphic(&g, &gr("ax(A)")).is_some());
}

#[test]
fn cw_turns_a_contraction_into_a_wire() {
    let g =
        build_graph(&[NodeSpec::new(NodeKind::C), NodeSpec::new(NodeKind::W)], &[((0, "out1"), (1, "erase"))]).unwrap();
    let (rule, h) = fire_only(&g, &Catalogue::beta());
    assert_eq!(rule, "cw");
    assert_eq!(h.node_count(), 0);
    assert_eq!(h.partner(Endpoint::Free(0)), Some(Endpoint::Free(1)));

    let two = build_graph(
        &[NodeSpec::new(NodeKind::C), NodeSpec::new(NodeKind::W), NodeSpec::new(NodeKind::W)],
        &[((0, "out1"), (1, "erase")), ((0, "out2"), (2, "erase"))],
    )
    .unwrap();
    assert_eq!(list_redexes(&two, &Catalogue::beta()).len(), 2);
    let (h, steps) = run(&two, &Catalogue::beta());
    assert_eq!(steps, 1);
    assert!(is_isomorphic(&h, &ws(1)).is_some());

    assert!(list_redexes(&gr("c(0, andI(ax(A), ax(A)))"), &Catalogue::beta()).is_empty());
}

#[test]
fn erase_global_on_local_nodes() {
    let g = attach_at(&gr("andI(ax(A), ax(B))"), 2, NodeKind::W);
    let (rule, h) = fire_only(&g, &Catalogue::erase_copy_global());
    assert_eq!(rule, "erase.global.andI");
    assert!(is_isomorphic(&h, &ws(2)).is_some());
}

#[test]
fn erase_global_on_a_closed_abstraction_empties_the_graph() {
    let g = attach_at(&translate(&proof("identity")).unwrap(), 0, NodeKind::W);
    let (rule, h) = fire_only(&g, &Catalogue::erase_copy_global());
    assert_eq!(rule, "erase.global.impI");
    assert!(h.is_empty());
}

#[test]
fn erase_global_on_a_scoped_abstraction_weakens_its_context() {
    // The inner arrow of |- A -> B -> A: A |- B -> A, its scope capturing A.
    let g = attach_at(&gr("impI(w(B, ax(A)))"), 1, NodeKind::W);
    assert_eq!(g.count_kind(NodeKind::Scope(1)), 1);
    let (rule, h) = fire_only(&g, &Catalogue::erase_copy_global());
    assert_eq!(rule, "erase.global.impI");
    assert_eq!(h.count_kind(NodeKind::Scope(1)), 0);
    assert!(is_isomorphic(&h, &ws(1)).is_some());
}

#[test]
fn eps_rules() {
    let pair = build_graph(
        &[NodeSpec::new(NodeKind::Eps), NodeSpec::new(NodeKind::Eps)],
        &[((0, "principal"), (1, "principal"))],
    )
    .unwrap();
    let (rule, h) = fire_only(&pair, &Catalogue::eps());
    assert_eq!(rule, "eps.eps");
    assert!(h.is_empty());

    let g = attach_at(&gr("andI(ax(A), ax(B))"), 2, NodeKind::Eps);
    let (rule, h) = fire_only(&g, &Catalogue::eps());
    assert_eq!(rule, "eps.andI");
    assert_eq!(h.count_kind(NodeKind::Eps), 2);
    assert_eq!(h.node_count(), 2);
}

/// Steps the ε rules need to erase a graph with every slot plugged: each
/// non-ε node is consumed by one step that leaves an ε on each of its
/// other ports, and every remaining ε dies in a pair.
fn eps_step_oracle(g: &PortGraph) -> usize {
    let nodes = g.node_count();
    let spawned: usize = g.nodes().map(|(_, n)| n.kind.arity() - 1).sum();
    nodes + (g.interface_len() + spawned - nodes) / 2
}

#[test]
fn eps_cascade_matches_the_traversal_count() {
    for (name, p) in fixture_proofs() {
        let g = translate(&p).unwrap();
        let out = normalise(&attach_eps(&g), &Catalogue::eps(), &Strategy::Outermost, STEP_LIMIT).unwrap();
        assert!(out.graph.is_empty(), "{name}");
        assert!(ndgraph::engine::rules_used(&out.trace).iter().all(|r| r != "eps.w.impI"));
        assert_eq!(out.steps, eps_step_oracle(&g), "{name}");
    }
    let g = translate(&proof("commutativity")).unwrap();
    assert_eq!(run(&attach_eps(&g), &Catalogue::eps()).1, 6);
}

#[test]
fn eps_cost_grows_with_the_graph() {
    let steps = |p: &Proof| run(&attach_eps(&translate(p).unwrap()), &Catalogue::eps()).1;
    let mut pairs = 0;
    for (name, q) in fixture_proofs() {
        let big = translate(&q).unwrap().node_count();
        for p in q.premises() {
            if translate(p).unwrap().node_count() < big {
                assert!(steps(p) < steps(&q), "{name}: {p} vs {q}");
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 5);
}

#[test]
fn copy_global_on_local_nodes() {
    let g = attach_at(&gr("andI(ax(A), ax(B))"), 2, NodeKind::C);
    let (rule, h) = fire_only(&g, &Catalogue::erase_copy_global());
    assert_eq!(rule, "copy.global.andI");
    let expected = build_graph(
        &[
            NodeSpec::new(NodeKind::AndI),
            NodeSpec::new(NodeKind::AndI),
            NodeSpec::new(NodeKind::C),
            NodeSpec::new(NodeKind::C),
        ],
        &[
            ((2, "out1"), (0, "left")),
            ((2, "out2"), (1, "left")),
            ((3, "out1"), (0, "right")),
            ((3, "out2"), (1, "right")),
        ],
    )
    .unwrap()
    .permute_interface(&[2, 3, 0, 1]);
    assert!(is_isomorphic(&h, &expected).is_some());
}

#[test]
fn copy_global_on_the_identity_gives_two_identities() {
    let id = translate(&proof("identity")).unwrap();
    let (rule, h) = fire_only(&attach_at(&id, 0, NodeKind::C), &Catalogue::erase_copy_global());
    assert_eq!(rule, "copy.global.impI");
    assert!(is_isomorphic(&h, &id.disjoint_union(&id)).is_some());
}

#[test]
fn copy_global_on_a_scope_contracts_its_context() {
    let g = attach_at(&gr("impI(w(B, ax(A)))"), 1, NodeKind::C);
    let (_, h) = fire_only(&g, &Catalogue::erase_copy_global());
    assert_eq!(h.count_kind(SCOPED), 2);
    assert_eq!(h.count_kind(NodeKind::Scope(1)), 2);
    assert_eq!(h.count_kind(NodeKind::C), 1);
    let c = h.nodes().find(|(_, n)| n.kind == NodeKind::C).unwrap().0;
    assert_eq!(h.partner_of(c, 0), Endpoint::Free(0));
    let owners: Vec<_> = [1, 2].iter().map(|p| h.partner_of(c, *p)).collect();
    for e in &owners {
        assert!(matches!(e, Endpoint::Port(s, 2) if h.kind(*s) == Some(NodeKind::Scope(1))), "{e:?}");
    }
    assert_ne!(owners[0].node(), owners[1].node());
    // Each copy keeps its own scope annotations.
    for (abs, _) in h.nodes().filter(|(_, n)| n.kind == SCOPED) {
        let inside = h.nodes().filter(|(id, _)| h.in_scope_of(*id, abs)).count();
        assert_eq!(inside, 1, "one W per copy");
    }
}

#[test]
fn delta_rules() {
    let ax = gr("ax(A)");
    let (h, steps) = run(&attach_delta(&ax), &Catalogue::delta());
    assert_eq!(steps, 1);
    assert!(is_isomorphic(&h, &ax.disjoint_union(&ax)).is_some());

    let g = attach_at(&gr("andI(ax(A), ax(B))"), 2, NodeKind::Delta);
    let (rule, h) = fire_only(&g, &Catalogue::delta());
    assert_eq!(rule, "delta.andI");
    assert_eq!(h.count_kind(NodeKind::AndI), 2);
    assert_eq!(h.count_kind(NodeKind::Delta), 2);
}

#[test]
fn small_step_abstraction_rules() {
    let g = attach_at(&gr("impI(w(B, ax(A)))"), 1, NodeKind::W);
    let small = Catalogue::for_mode(Mode::SmallStep);
    let rules: Vec<_> = list_redexes(&g, &small).into_iter().map(|r| r.rule).collect();
    assert_eq!(rules, ["eps.w.impI"]);
    let (h, _) = run(&g, &small);
    assert!(is_isomorphic(&h, &ws(1)).is_some());

    let g = attach_at(&gr("impI(w(B, ax(A)))"), 1, NodeKind::C);
    let rules: Vec<_> = list_redexes(&g, &small).into_iter().map(|r| r.rule).collect();
    assert_eq!(rules, ["delta.c.impI"]);
    let (h, _) = run(&g, &small);
    let (global, _) = run(&g, &Catalogue::for_mode(Mode::Global));
    assert!(is_isomorphic(&h, &global).is_some());
}

#[test]
fn catalogue_names_are_enumerable() {
    let mut names = Catalogue::for_mode(Mode::Global).names();
    names.extend(Catalogue::for_mode(Mode::SmallStep).names());
    for want in [
        "beta.and.e1",
        "beta.and.e2",
        "beta.imp",
        "cw",
        "erase.global.impI",
        "copy.global.impI",
        "eps.eps",
        "delta.delta",
        "eps.s",
        "delta.s",
    ] {
        assert!(names.iter().any(|n| n == want), "{want}");
    }
    let global = Catalogue::for_mode(Mode::Global).names();
    assert!(global.iter().all(|n| !n.starts_with("eps.") && !n.starts_with("delta.")), "modes never mix");
}

#[test]
fn inconsistent_scopes_are_an_integrity_error() {
    let g = attach_at(&gr("impI(w(B, ax(A)))"), 1, NodeKind::W);
    let abs = g.nodes().find(|(_, n)| n.kind == SCOPED).unwrap().0;
    let mut doc = GraphDoc::from(&g);
    // Claim the erasing W lies inside the abstraction it erases.
    let w = g.nodes().filter(|(_, n)| n.kind == NodeKind::W).map(|(id, _)| id).max().unwrap();
    doc.nodes.iter_mut().find(|n| n.id == w.0).unwrap().scope = Some(abs.0);
    let bad = PortGraph::try_from(doc).unwrap();
    let mut s = Session::new(bad.clone(), Catalogue::erase_copy_global());
    let id = s.redexes().into_iter().find(|r| r.rule == "erase.global.impI").unwrap().id;
    let err = s.step(&id).unwrap_err();
    assert!(matches!(err, EngineError::Graph(_)));
    assert_eq!(err.code(), "scope_integrity");
    assert_eq!(s.graph(), &bad, "failed step leaves the session unchanged");
}
