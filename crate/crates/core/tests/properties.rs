mod common;

use common::*;
use ndgraph::graph::is_isomorphic;
use ndgraph::io::{graph_from_json, graph_to_json};
use ndgraph::translate::translate;

fn assert_suite(report: SuiteReport) {
    assert!(report.passed(), "{}: {:#?}", report.summary(), &report.failures[..report.failures.len().min(5)]);
}

#[test]
fn eps_erases_every_translation() {
    assert_suite(erasing_suite(random_proofs(500, 1)));
}

#[test]
fn delta_duplicates_every_translation() {
    assert_suite(duplication_suite(random_proofs(500, 2)));
}

#[test]
fn root_detour_correctness() {
    assert_suite(correctness_suite(random_detours(200, 3)));
}

#[test]
fn fixture_detours_are_correct() {
    let detours: Vec<_> =
        fixture_proofs().into_iter().map(|(_, p)| p).filter(ndgraph::subst::has_root_detour).collect();
    assert!(detours.len() >= 6);
    assert_suite(correctness_suite(detours));
}

#[test]
fn modes_agree() {
    assert_suite(mode_agreement_suite(random_proofs(300, 4)));
}

#[test]
fn serialisation_round_trips() {
    let mut graphs: Vec<_> = fixture_graphs().into_iter().map(|(_, g)| g).collect();
    graphs.extend(random_proofs(200, 5).iter().map(|p| translate(p).unwrap()));
    for g in graphs {
        let text = graph_to_json(&g);
        let back = graph_from_json(&text).unwrap();
        assert_eq!(graph_to_json(&back), text, "bit-exact");
        assert!(is_isomorphic(&g, &back).is_some());
        assert_eq!(g.interface_labels(), back.interface_labels());
    }
}

#[test]
fn rewriting_preserves_the_interface() {
    use ndgraph::engine::{Session, Strategy};
    use ndgraph::rules::{Catalogue, Mode};
    for p in random_proofs(100, 6) {
        let g = translate(&p).unwrap();
        for mode in [Mode::Global, Mode::SmallStep] {
            let mut s = Session::new(g.clone(), Catalogue::for_mode(mode));
            while s.step_with(&Strategy::Innermost).unwrap().is_some() {
                assert_eq!(s.graph().interface_labels(), g.interface_labels(), "{p}");
            }
        }
    }
}
