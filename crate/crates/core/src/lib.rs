//! Toolkit for UCCA semantic graphs.
//!
//! * [`graph`]: passages, nodes and edges, with the structural invariants
//!   of the foundational layer enforced at sealing time.
//! * [`validation`]: legacy-label normalization and guideline checks.
//! * [`eval`]: labeled and unlabeled edge F1 over primary and remote edges,
//!   plus per-category scores; [`report`] renders them.
//! * [`stats`]: corpus structural statistics.
//! * [`io`]: passage XML, plain text and bi-lexical export.
//!
//! ```
//! use ucca_core::{fixtures, score_passage, EdgeClass};
//!
//! let gold = fixtures::graduation();
//! let scores = score_passage(&gold, &gold).unwrap();
//! assert_eq!(scores.labeled.get(EdgeClass::All).f1(), 1.0);
//! ```

pub mod category;
pub mod eval;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod report;
pub mod stats;
pub mod synth;
pub mod validation;

pub use category::{Category, UnknownCategory};
pub use eval::{
    edge_signatures, match_count, score_corpus, score_corpus_with, score_passage,
    score_passage_with, Counts, EdgeClass, EdgeSignature, EvalError, EvalScores, ScoreOptions,
};
pub use graph::{
    Edge, GraphError, Invariant, Node, NodeId, NodeKind, Passage, PassageBuilder,
    StructuralViolation, TerminalSpec, Token, UnitKind,
};
pub use io::{export_bilexical, export_text, parse_xml, serialize_xml, BilexicalRow, XmlError};
pub use stats::{corpus_stats, StatsCounts, StatsReport};
pub use validation::{normalize, validate, Rule, RuleSet, ValidationReport, Violation};
