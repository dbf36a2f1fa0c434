//! Brute-force scoring oracle.
//!
//! Recomputes yields from the raw edge list and finds, for every stratum, a
//! maximum one-to-one pairing of output and gold edges by exhaustive search.
//! Nothing here goes through the library's yield cache or signature
//! matching.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use ucca_core::synth::{perturb, random_passage, random_passage_over, SynthConfig};
use ucca_core::{Category, EdgeClass, EvalScores, NodeId, Passage};

#[derive(Debug, Clone)]
pub struct RawEdge {
    pub yield_: BTreeSet<u32>,
    pub category: Category,
    pub remote: bool,
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A gold passage and an output over the same tokens: either a perturbed
/// copy or an unrelated random analysis. Returns (output, gold).
pub fn pair(seed: u64) -> (Passage, Passage) {
    let mut rng = rng(seed);
    let cfg = SynthConfig::default();
    let gold = random_passage(&mut rng, "g", &cfg);
    let output = if rng.random_bool(0.5) {
        perturb(&mut rng, &gold, &cfg)
    } else {
        let tokens: Vec<String> = gold.tokens().map(|t| t.text.clone()).collect();
        random_passage_over(&mut rng, "o", &tokens, &cfg)
    };
    (output, gold)
}

fn collect_yield(
    p: &Passage,
    node: NodeId,
    children: &HashMap<NodeId, Vec<NodeId>>,
    out: &mut BTreeSet<u32>,
) {
    if let Some(t) = p.node(node).and_then(|n| n.token.as_ref()) {
        out.insert(t.position);
    }
    for &c in children.get(&node).into_iter().flatten() {
        collect_yield(p, c, children, out);
    }
}

pub fn oracle_edges(p: &Passage) -> Vec<RawEdge> {
    let mut children: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
    for e in p.edges().iter().filter(|e| !e.remote) {
        children.entry(e.parent).or_default().push(e.child);
    }
    p.edges()
        .iter()
        .filter_map(|e| {
            let mut y = BTreeSet::new();
            collect_yield(p, e.child, &children, &mut y);
            (!y.is_empty()).then_some(RawEdge {
                yield_: y,
                category: e.category,
                remote: e.remote,
            })
        })
        .collect()
}

/// Largest number of disjoint compatible (output, gold) pairs, by trying
/// every assignment.
pub fn max_pairing(
    output: &[RawEdge],
    gold: &[RawEdge],
    compatible: &dyn Fn(&RawEdge, &RawEdge) -> bool,
) -> usize {
    assert!(gold.len() < 64);
    fn go(
        i: usize,
        used: u64,
        output: &[RawEdge],
        gold: &[RawEdge],
        compatible: &dyn Fn(&RawEdge, &RawEdge) -> bool,
        memo: &mut HashMap<(usize, u64), usize>,
    ) -> usize {
        if i == output.len() {
            return 0;
        }
        if let Some(&v) = memo.get(&(i, used)) {
            return v;
        }
        let mut best = go(i + 1, used, output, gold, compatible, memo);
        for (j, g) in gold.iter().enumerate() {
            if used & (1 << j) == 0 && compatible(&output[i], g) {
                best = best.max(1 + go(i + 1, used | (1 << j), output, gold, compatible, memo));
            }
        }
        memo.insert((i, used), best);
        best
    }
    go(0, 0, output, gold, compatible, &mut HashMap::new())
}

/// (matched, predicted, gold)
pub type Triple = (usize, usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OracleScores {
    /// Indexed by [labeled, unlabeled] x [primary, remote].
    pub strata: [[Triple; 2]; 2],
    pub categories: BTreeMap<Category, Triple>,
}

pub fn oracle_score(output: &Passage, gold: &Passage) -> OracleScores {
    let out = oracle_edges(output);
    let gld = oracle_edges(gold);
    let mut scores = OracleScores::default();
    for (li, labeled) in [true, false].into_iter().enumerate() {
        for (ri, remote) in [false, true].into_iter().enumerate() {
            let o: Vec<_> = out.iter().filter(|e| e.remote == remote).cloned().collect();
            let g: Vec<_> = gld.iter().filter(|e| e.remote == remote).cloned().collect();
            let m = max_pairing(&o, &g, &|a, b| {
                a.yield_ == b.yield_ && (!labeled || a.category == b.category)
            });
            scores.strata[li][ri] = (m, o.len(), g.len());
        }
    }
    let cats: BTreeSet<Category> = out.iter().chain(&gld).map(|e| e.category).collect();
    for c in cats {
        let o: Vec<_> = out.iter().filter(|e| e.category == c).cloned().collect();
        let g: Vec<_> = gld.iter().filter(|e| e.category == c).cloned().collect();
        let m = max_pairing(&o, &g, &|a, b| a.yield_ == b.yield_ && a.remote == b.remote);
        scores.categories.insert(c, (m, o.len(), g.len()));
    }
    scores
}

pub fn from_library(s: &EvalScores) -> OracleScores {
    let t = |c: ucca_core::Counts| (c.matched, c.predicted, c.gold);
    let mut out = OracleScores::default();
    for (li, labeled) in [true, false].into_iter().enumerate() {
        out.strata[li][0] = t(s.stratum(labeled, EdgeClass::Primary));
        out.strata[li][1] = t(s.stratum(labeled, EdgeClass::Remote));
    }
    out.categories = s.categories.iter().map(|(&c, &n)| (c, t(n))).collect();
    out
}

pub fn oracle_sum(a: &OracleScores, b: &OracleScores) -> OracleScores {
    let add = |x: Triple, y: Triple| (x.0 + y.0, x.1 + y.1, x.2 + y.2);
    let mut out = a.clone();
    for li in 0..2 {
        for ri in 0..2 {
            out.strata[li][ri] = add(a.strata[li][ri], b.strata[li][ri]);
        }
    }
    for (&c, &n) in &b.categories {
        let e = out.categories.entry(c).or_default();
        *e = add(*e, n);
    }
    out
}

/// The graduation passage with its single remote edge removed.
pub fn graduation_without_remote() -> Passage {
    let mut b = ucca_core::fixtures::graduation_builder();
    let k = b.edges().iter().position(|e| e.remote).unwrap();
    b.remove_edge(k);
    b.freeze().unwrap()
}

/// The graduation passage with the Process edge on "moved" relabeled as State.
pub fn graduation_moved_as_state() -> Passage {
    let mut b = ucca_core::fixtures::graduation_builder();
    let k = b
        .edges()
        .iter()
        .position(|e| e.child == NodeId::new(0, 5))
        .unwrap();
    b.relabel_edge(k, Category::State).unwrap();
    b.freeze().unwrap()
}
