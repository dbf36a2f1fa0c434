//! Corpus structural statistics.
//!
//! Counts are accumulated per passage and merged by addition; percentages
//! are computed once on the aggregate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::Serialize;

use crate::category::Category;
use crate::graph::{NodeKind, Passage};

/// Additive counts behind a [`StatsReport`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StatsCounts {
    pub passages: usize,
    pub sentences: usize,
    pub tokens: usize,
    /// Non-terminal and implicit units, root included.
    pub non_terminals: usize,
    pub discontinuous: usize,
    /// Nodes other than the root, terminals included.
    pub reentrancy_base: usize,
    pub reentrant: usize,
    pub edges: usize,
    pub remote: usize,
    pub by_category: BTreeMap<Category, usize>,
}

impl StatsCounts {
    pub fn add_passage(&mut self, passage: &Passage) {
        self.passages += 1;
        // One sentence per paragraph.
        let paragraphs: BTreeSet<u32> = passage.tokens().map(|t| t.paragraph).collect();
        self.sentences += paragraphs.len();
        self.tokens += passage.token_count();
        for unit in passage.units() {
            debug_assert_ne!(unit.kind, NodeKind::Terminal);
            self.non_terminals += 1;
            if passage.is_discontinuous(unit.id).expect("own node") {
                self.discontinuous += 1;
            }
        }
        for node in passage.nodes().iter().filter(|n| n.id != passage.root()) {
            self.reentrancy_base += 1;
            if passage.is_reentrant(node.id).expect("own node") {
                self.reentrant += 1;
            }
        }
        for e in passage.edges() {
            self.edges += 1;
            if e.remote {
                self.remote += 1;
            }
            *self.by_category.entry(e.category).or_default() += 1;
        }
    }

    pub fn merge(&mut self, other: &StatsCounts) {
        self.passages += other.passages;
        self.sentences += other.sentences;
        self.tokens += other.tokens;
        self.non_terminals += other.non_terminals;
        self.discontinuous += other.discontinuous;
        self.reentrancy_base += other.reentrancy_base;
        self.reentrant += other.reentrant;
        self.edges += other.edges;
        self.remote += other.remote;
        for (&c, &n) in &other.by_category {
            *self.by_category.entry(c).or_default() += n;
        }
    }

    pub fn report(&self) -> StatsReport {
        let pct = |num: usize, den: usize| {
            if den == 0 {
                0.0
            } else {
                100.0 * num as f64 / den as f64
            }
        };
        let pct_primary = pct(self.edges - self.remote, self.edges);
        let pct_remote = if self.edges == 0 {
            0.0
        } else {
            100.0 - pct_primary
        };
        StatsReport {
            passages: self.passages,
            sentences: self.sentences,
            tokens: self.tokens,
            non_terminals: self.non_terminals,
            pct_discontinuous: pct(self.discontinuous, self.non_terminals),
            pct_reentrant: pct(self.reentrant, self.reentrancy_base),
            edges: self.edges,
            pct_primary,
            pct_remote,
            by_category: self
                .by_category
                .iter()
                .map(|(&c, &n)| (c, pct(n, self.edges)))
                .collect(),
            category_counts: self.by_category.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub passages: usize,
    pub sentences: usize,
    pub tokens: usize,
    pub non_terminals: usize,
    pub pct_discontinuous: f64,
    pub pct_reentrant: f64,
    pub edges: usize,
    pub pct_primary: f64,
    pub pct_remote: f64,
    /// Percent of all edges.
    pub by_category: BTreeMap<Category, f64>,
    pub category_counts: BTreeMap<Category, usize>,
}

pub fn corpus_stats<'a, I>(passages: I) -> StatsReport
where
    I: IntoIterator<Item = &'a Passage>,
{
    let mut counts = StatsCounts::default();
    for p in passages {
        counts.add_passage(p);
    }
    counts.report()
}

/// Row order of the per-category block.
const CATEGORY_ROWS: [Category; 15] = [
    Category::Participant,
    Category::Center,
    Category::Adverbial,
    Category::Elaborator,
    Category::Function,
    Category::Ground,
    Category::ParallelScene,
    Category::Linker,
    Category::Connector,
    Category::Process,
    Category::Relator,
    Category::State,
    Category::Punctuation,
    Category::Time,
    Category::Quantifier,
];

fn thousands(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

impl StatsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Two-column table, percentages to two decimals.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![
            ("# passages".into(), thousands(self.passages)),
            ("# sentences".into(), thousands(self.sentences)),
            ("# tokens".into(), thousands(self.tokens)),
            ("# non-terminals".into(), thousands(self.non_terminals)),
            (
                "% discontinuous".into(),
                format!("{:.2}", self.pct_discontinuous),
            ),
            ("% reentrant".into(), format!("{:.2}", self.pct_reentrant)),
            ("# edges".into(), thousands(self.edges)),
            ("% primary".into(), format!("{:.2}", self.pct_primary)),
            ("% remote".into(), format!("{:.2}", self.pct_remote)),
            ("by category".into(), String::new()),
        ];
        for c in CATEGORY_ROWS {
            let share = self.by_category.get(&c).copied();
            if share.is_none() && c.is_legacy() {
                continue;
            }
            rows.push((
                format!("  % {}", c.longname()),
                format!("{:.2}", share.unwrap_or(0.0)),
            ));
        }
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let line = format!("{k:<width$}  {v:>10}");
            writeln!(out, "{}", line.trim_end()).unwrap();
        }
        out
    }
}
