//! Random well-formed passages for property tests and benchmarks.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::category::Category;
use crate::graph::{NodeId, NodeKind, Passage, PassageBuilder, UnitKind};

#[derive(Debug, Clone, Copy)]
pub struct SynthConfig {
    pub max_tokens: usize,
    /// Non-terminal units, root included.
    pub max_non_terminals: usize,
    pub max_remotes: usize,
    pub implicit_prob: f64,
    /// Chance that an edge carries a legacy T or Q label.
    pub legacy_prob: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            max_tokens: 8,
            max_non_terminals: 6,
            max_remotes: 2,
            implicit_prob: 0.2,
            legacy_prob: 0.0,
        }
    }
}

const WORDS: [&str; 10] = [
    "the", "cat", "sat", "on", "a", "mat", "and", "then", "slept", "1990",
];
const PUNCT: [&str; 3] = [",", ".", "--"];

pub fn random_tokens<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<String> {
    (0..n)
        .map(|_| {
            let pool: &[&str] = if rng.random_bool(0.15) {
                &PUNCT
            } else {
                &WORDS
            };
            pool.choose(rng).expect("non-empty pool").to_string()
        })
        .collect()
}

fn random_category<R: Rng + ?Sized>(rng: &mut R, cfg: &SynthConfig) -> Category {
    if cfg.legacy_prob > 0.0 && rng.random_bool(cfg.legacy_prob) {
        *[Category::Time, Category::Quantifier].choose(rng).unwrap()
    } else {
        *Category::CURRENT.choose(rng).unwrap()
    }
}

fn terminal_category<R: Rng + ?Sized>(rng: &mut R, text: &str, cfg: &SynthConfig) -> Category {
    if crate::graph::is_punctuation_text(text) && rng.random_bool(0.8) {
        Category::Punctuation
    } else {
        random_category(rng, cfg)
    }
}

pub fn random_passage<R: Rng + ?Sized>(rng: &mut R, id: &str, cfg: &SynthConfig) -> Passage {
    let n = rng.random_range(1..=cfg.max_tokens.max(1));
    let tokens = random_tokens(rng, n);
    random_passage_over(rng, id, &tokens, cfg)
}

/// Random passage over a fixed token sequence.
pub fn random_passage_over<R: Rng + ?Sized>(
    rng: &mut R,
    id: &str,
    tokens: &[String],
    cfg: &SynthConfig,
) -> Passage {
    let mut b = PassageBuilder::new(id, tokens.iter().cloned()).expect("non-empty tokens");
    let mut units = vec![b.root()];
    let extra = rng.random_range(0..cfg.max_non_terminals.max(1));
    for _ in 0..extra {
        let parent = *units.choose(rng).unwrap();
        let u = b.add_node(UnitKind::NonTerminal);
        let c = random_category(rng, cfg);
        b.add_edge(parent, u, c, false).expect("fresh child");
        units.push(u);
    }
    for (i, text) in tokens.iter().enumerate() {
        let parent = *units.choose(rng).unwrap();
        let c = terminal_category(rng, text, cfg);
        b.add_edge(parent, NodeId::new(0, i as u32 + 1), c, false)
            .expect("terminal attached once");
    }
    if cfg.implicit_prob > 0.0 && rng.random_bool(cfg.implicit_prob) {
        let parent = *units.choose(rng).unwrap();
        let u = b.add_node(UnitKind::Implicit);
        b.add_edge(parent, u, Category::Participant, false)
            .expect("fresh child");
    }
    add_remotes(rng, &mut b, cfg, cfg.max_remotes);
    b.freeze().expect("generated passages are well-formed")
}

fn candidates(b: &PassageBuilder) -> (Vec<NodeId>, Vec<NodeId>) {
    let mut parents = Vec::new();
    let mut children = Vec::new();
    let ids: Vec<NodeId> = b.node_ids().collect();
    for id in ids {
        let node = b.node(id).unwrap();
        if node.kind == NodeKind::NonTerminal {
            parents.push(id);
        }
        if id != b.root() {
            children.push(id);
        }
    }
    (parents, children)
}

fn add_remotes<R: Rng + ?Sized>(
    rng: &mut R,
    b: &mut PassageBuilder,
    cfg: &SynthConfig,
    max: usize,
) {
    let existing = b.edges().iter().filter(|e| e.remote).count();
    let budget = max.saturating_sub(existing);
    if budget == 0 {
        return;
    }
    let wanted = rng.random_range(0..=budget);
    let (parents, children) = candidates(b);
    if children.is_empty() {
        return;
    }
    let mut added = 0;
    for _ in 0..wanted * 4 {
        if added == wanted {
            break;
        }
        let parent = *parents.choose(rng).unwrap();
        let child = *children.choose(rng).unwrap();
        let c = random_category(rng, cfg);
        if b.add_edge(parent, child, c, true).is_ok() {
            added += 1;
        }
    }
}

/// A variant of `gold` over the same tokens: some labels changed, some
/// remote edges dropped or added, some terminals and units re-attached.
pub fn perturb<R: Rng + ?Sized>(rng: &mut R, gold: &Passage, cfg: &SynthConfig) -> Passage {
    let mut b = gold.to_builder();
    for k in 0..b.edges().len() {
        if rng.random_bool(0.2) {
            let c = random_category(rng, cfg);
            let _ = b.relabel_edge(k, c);
        }
    }
    let mut k = 0;
    while k < b.edges().len() {
        if b.edges()[k].remote && rng.random_bool(0.3) {
            b.remove_edge(k);
        } else {
            k += 1;
        }
    }
    let (parents, _) = candidates(&b);
    let moves = rng.random_range(0..=2);
    for _ in 0..moves {
        let primaries: Vec<usize> = b
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.remote)
            .map(|(k, _)| k)
            .collect();
        let Some(&k) = primaries.choose(rng) else {
            break;
        };
        let old = b.remove_edge(k);
        let parent = *parents.choose(rng).unwrap();
        if b.add_edge(parent, old.child, old.category, false).is_err() {
            b.add_edge(old.parent, old.child, old.category, false)
                .expect("restoring the original edge");
        }
    }
    add_remotes(rng, &mut b, cfg, cfg.max_remotes);
    b.freeze().expect("perturbed passages stay well-formed")
}
