//! Yield-based edge matching.
//!
//! Two edges match when their children cover the same set of tokens and, in
//! labeled mode, carry the same category. Primary and remote edges are
//! matched in separate pools; the `all` stratum sums the two. Edges whose
//! child has an empty yield (implicit units) never enter a pool.
//!
//! Counts are kept as matched/predicted/gold triples and aggregate by plain
//! addition, so corpus scores are micro-averages.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, AddAssign};

use serde::Serialize;
use thiserror::Error;

use crate::category::Category;
use crate::graph::Passage;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSignature {
    pub yield_: Vec<u32>,
    /// `None` in unlabeled mode.
    pub category: Option<Category>,
    pub remote: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("passage {passage}: token mismatch ({detail})")]
    TokenMismatch { passage: String, detail: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScoreOptions {
    /// Drop U edges from every pool.
    pub exclude_punct: bool,
}

/// One signature per edge with a non-empty child yield.
pub fn edge_signatures(passage: &Passage, labeled: bool) -> Vec<EdgeSignature> {
    signatures_with(passage, labeled, ScoreOptions::default())
}

fn signatures_with(passage: &Passage, labeled: bool, opts: ScoreOptions) -> Vec<EdgeSignature> {
    passage
        .edges()
        .iter()
        .filter(|e| !(opts.exclude_punct && e.category == Category::Punctuation))
        .filter_map(|e| {
            let y = passage.yield_of(e.child).expect("sealed edge endpoint");
            (!y.is_empty()).then(|| EdgeSignature {
                yield_: y.to_vec(),
                category: labeled.then_some(e.category),
                remote: e.remote,
            })
        })
        .collect()
}

/// Size of the multiset intersection: each gold signature is consumed at
/// most once.
pub fn match_count(output: &[EdgeSignature], gold: &[EdgeSignature]) -> usize {
    let mut available: HashMap<&EdgeSignature, usize> = HashMap::new();
    for s in gold {
        *available.entry(s).or_default() += 1;
    }
    output
        .iter()
        .filter(|s| match available.get_mut(s) {
            Some(n) if *n > 0 => {
                *n -= 1;
                true
            }
            _ => false,
        })
        .count()
}

/// Both passages must cover the same token sequence.
pub fn check_tokens(output: &Passage, gold: &Passage) -> Result<(), EvalError> {
    let mismatch = |detail: String| EvalError::TokenMismatch {
        passage: gold.id().to_string(),
        detail,
    };
    if output.token_count() != gold.token_count() {
        return Err(mismatch(format!(
            "{} output tokens vs {} gold tokens",
            output.token_count(),
            gold.token_count()
        )));
    }
    for (o, g) in output.tokens().zip(gold.tokens()) {
        if o.text != g.text {
            return Err(mismatch(format!(
                "token {} is `{}` in output but `{}` in gold",
                g.position, o.text, g.text
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub matched: usize,
    pub predicted: usize,
    pub gold: usize,
}

impl Counts {
    pub fn new(matched: usize, predicted: usize, gold: usize) -> Self {
        Counts {
            matched,
            predicted,
            gold,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.predicted == 0 && self.gold == 0
    }

    /// matched / predicted; 1 when both sides are empty, 0 when only the
    /// output is.
    pub fn precision(&self) -> f64 {
        match (self.predicted, self.gold) {
            (0, 0) => 1.0,
            (0, _) => 0.0,
            (p, _) => self.matched as f64 / p as f64,
        }
    }

    /// matched / gold; 1 when both sides are empty, 0 when only the gold is.
    pub fn recall(&self) -> f64 {
        match (self.predicted, self.gold) {
            (0, 0) => 1.0,
            (_, 0) => 0.0,
            (_, g) => self.matched as f64 / g as f64,
        }
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

impl Add for Counts {
    type Output = Counts;

    fn add(self, rhs: Counts) -> Counts {
        Counts {
            matched: self.matched + rhs.matched,
            predicted: self.predicted + rhs.predicted,
            gold: self.gold + rhs.gold,
        }
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, rhs: Counts) {
        *self = *self + rhs;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeClass {
    All,
    Primary,
    Remote,
}

impl EdgeClass {
    pub const ALL: [EdgeClass; 3] = [EdgeClass::All, EdgeClass::Primary, EdgeClass::Remote];

    pub fn name(self) -> &'static str {
        match self {
            EdgeClass::All => "all",
            EdgeClass::Primary => "primary",
            EdgeClass::Remote => "remote",
        }
    }
}

/// Primary and remote triples; `all` is their sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StratumCounts {
    pub primary: Counts,
    pub remote: Counts,
}

impl StratumCounts {
    pub fn get(&self, class: EdgeClass) -> Counts {
        match class {
            EdgeClass::All => self.primary + self.remote,
            EdgeClass::Primary => self.primary,
            EdgeClass::Remote => self.remote,
        }
    }
}

impl AddAssign for StratumCounts {
    fn add_assign(&mut self, rhs: StratumCounts) {
        self.primary += rhs.primary;
        self.remote += rhs.remote;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalScores {
    pub labeled: StratumCounts,
    pub unlabeled: StratumCounts,
    /// Labeled counts over the all-edge pool, restricted to one category.
    pub categories: BTreeMap<Category, Counts>,
}

impl EvalScores {
    pub fn stratum(&self, labeled: bool, class: EdgeClass) -> Counts {
        if labeled {
            self.labeled.get(class)
        } else {
            self.unlabeled.get(class)
        }
    }

    /// Associative, commutative merge of count triples.
    pub fn merge(&mut self, other: &EvalScores) {
        self.labeled += other.labeled;
        self.unlabeled += other.unlabeled;
        for (&c, &counts) in &other.categories {
            *self.categories.entry(c).or_default() += counts;
        }
    }
}

fn split_counts(output: &[EdgeSignature], gold: &[EdgeSignature]) -> StratumCounts {
    let pool = |sigs: &[EdgeSignature], remote: bool| -> Vec<EdgeSignature> {
        sigs.iter()
            .filter(|s| s.remote == remote)
            .cloned()
            .collect()
    };
    let counts = |remote: bool| {
        let (o, g) = (pool(output, remote), pool(gold, remote));
        Counts::new(match_count(&o, &g), o.len(), g.len())
    };
    StratumCounts {
        primary: counts(false),
        remote: counts(true),
    }
}

pub fn score_passage(output: &Passage, gold: &Passage) -> Result<EvalScores, EvalError> {
    score_passage_with(output, gold, ScoreOptions::default())
}

pub fn score_passage_with(
    output: &Passage,
    gold: &Passage,
    opts: ScoreOptions,
) -> Result<EvalScores, EvalError> {
    check_tokens(output, gold)?;
    let labeled_out = signatures_with(output, true, opts);
    let labeled_gold = signatures_with(gold, true, opts);
    let unlabeled_out = signatures_with(output, false, opts);
    let unlabeled_gold = signatures_with(gold, false, opts);

    let mut categories = BTreeMap::new();
    let mut present: Vec<Category> = labeled_out
        .iter()
        .chain(&labeled_gold)
        .filter_map(|s| s.category)
        .collect();
    present.sort_unstable();
    present.dedup();
    for c in present {
        let only = |sigs: &[EdgeSignature]| -> Vec<EdgeSignature> {
            sigs.iter()
                .filter(|s| s.category == Some(c))
                .cloned()
                .collect()
        };
        let (o, g) = (only(&labeled_out), only(&labeled_gold));
        categories.insert(c, Counts::new(match_count(&o, &g), o.len(), g.len()));
    }

    Ok(EvalScores {
        labeled: split_counts(&labeled_out, &labeled_gold),
        unlabeled: split_counts(&unlabeled_out, &unlabeled_gold),
        categories,
    })
}

/// Micro-averaged scores over `(output, gold)` pairs.
pub fn score_corpus<'a, I>(pairs: I) -> Result<EvalScores, EvalError>
where
    I: IntoIterator<Item = (&'a Passage, &'a Passage)>,
{
    score_corpus_with(pairs, ScoreOptions::default())
}

pub fn score_corpus_with<'a, I>(pairs: I, opts: ScoreOptions) -> Result<EvalScores, EvalError>
where
    I: IntoIterator<Item = (&'a Passage, &'a Passage)>,
{
    let mut total = EvalScores::default();
    for (output, gold) in pairs {
        total.merge(&score_passage_with(output, gold, opts)?);
    }
    Ok(total)
}
