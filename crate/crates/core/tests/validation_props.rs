mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use ucca_core::synth::{random_passage, SynthConfig};
use ucca_core::validation::Reference;
use ucca_core::{fixtures, normalize, validate, Category, NodeId, Passage, Rule, RuleSet};

fn legacy_sample(seed: u64) -> Passage {
    let cfg = SynthConfig {
        legacy_prob: 0.3,
        ..SynthConfig::default()
    };
    random_passage(&mut common::rng(seed), "legacy", &cfg)
}

fn endpoints(p: &Passage) -> BTreeSet<(NodeId, NodeId, bool)> {
    p.edges()
        .iter()
        .map(|e| (e.parent, e.child, e.remote))
        .collect()
}

fn v2_nodes(p: &Passage) -> BTreeSet<NodeId> {
    let rules = RuleSet::from_ids(["V2"]).unwrap();
    validate(p, &rules)
        .violations
        .iter()
        .map(|v| match v.reference {
            Reference::Node(n) => n,
            Reference::Edge(e) => panic!("V2 refers to a node, got {e}"),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        let once = normalize(&legacy_sample(seed));
        prop_assert_eq!(normalize(&once), once);
    }

    #[test]
    fn normalize_only_changes_legacy_codes(seed in any::<u64>()) {
        let p = legacy_sample(seed);
        let n = normalize(&p);
        prop_assert_eq!(n.nodes(), p.nodes());
        prop_assert_eq!(endpoints(&n), endpoints(&p));
        for node in p.nodes() {
            prop_assert_eq!(n.yield_of(node.id).unwrap(), p.yield_of(node.id).unwrap());
        }
        for e in p.edges() {
            let expected = e.category.normalized();
            prop_assert!(n.edges().iter().any(|f| f.parent == e.parent
                && f.child == e.child
                && f.remote == e.remote
                && f.category == expected));
        }
        prop_assert!(n.edges().iter().all(|e| !e.category.is_legacy()));
        let report = validate(&n, &RuleSet::from_ids(["V0", "V4"]).unwrap());
        prop_assert!(report.is_valid());
    }

    /// Taking every Participant away from one Scene makes V2 fire for that
    /// Scene and nothing else.
    #[test]
    fn v2_fires_for_exactly_the_stripped_scene(seed in any::<u64>()) {
        let p = random_passage(&mut common::rng(seed), "s", &SynthConfig::default());
        let scenes: Vec<NodeId> = p
            .units()
            .iter()
            .map(|u| u.id)
            .filter(|&u| p.outgoing(u).unwrap().any(|e| e.category.is_main_relation()))
            .collect();
        prop_assume!(!scenes.is_empty());
        let mut rng = common::rng(seed ^ 1);
        let target = scenes[rng.random_range(0..scenes.len())];
        let before = v2_nodes(&p);

        let mut b = p.to_builder();
        let mut k = 0;
        while k < b.edges().len() {
            let e = b.edges()[k];
            if e.parent == target && e.category == Category::Participant {
                if e.remote {
                    b.remove_edge(k);
                    continue;
                }
                b.relabel_edge(k, Category::Elaborator).unwrap();
            }
            k += 1;
        }
        let stripped = b.freeze().unwrap();
        let mut expected = before.clone();
        expected.insert(target);
        prop_assert_eq!(v2_nodes(&stripped), expected);
    }
}

#[test]
fn injected_legacy_labels_are_relabeled() {
    let mut b = fixtures::graduation_builder();
    // "After" is L, "to" is R: make them T and Q.
    let after = b
        .edges()
        .iter()
        .position(|e| e.child == NodeId::new(0, 1))
        .unwrap();
    let to = b
        .edges()
        .iter()
        .position(|e| e.child == NodeId::new(0, 6))
        .unwrap();
    b.relabel_edge(after, Category::Time).unwrap();
    b.relabel_edge(to, Category::Quantifier).unwrap();
    let legacy = b.freeze().unwrap();

    let report = validate(&legacy, &RuleSet::default());
    let v0 = report
        .violations
        .iter()
        .filter(|v| v.rule == Rule::LegacyLabels)
        .count();
    assert_eq!(v0, 2);

    let n = normalize(&legacy);
    let label_of = |p: &Passage, i: u32| {
        p.edges()
            .iter()
            .find(|e| e.child == NodeId::new(0, i))
            .unwrap()
            .category
    };
    assert_eq!(label_of(&n, 1), Category::Adverbial);
    assert_eq!(label_of(&n, 6), Category::Elaborator);
    assert_eq!(label_of(&n, 7), Category::Center);
    assert_eq!(n.edges().len(), legacy.edges().len());
}

#[test]
fn golden_fixtures_are_valid() {
    for p in [fixtures::graduation(), fixtures::crops()] {
        let report = validate(&p, &RuleSet::default());
        assert!(report.is_valid(), "{report}");
    }
}
