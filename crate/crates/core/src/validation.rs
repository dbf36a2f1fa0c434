//! Label normalization and guideline checks.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::category::Category;
use crate::graph::{Edge, NodeId, NodeKind, Passage};

/// Relabels Time as Adverbial and Quantifier as Elaborator. Idempotent.
pub fn normalize(passage: &Passage) -> Passage {
    passage.relabeled(Category::normalized)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// No Time or Quantifier labels remain.
    LegacyLabels,
    /// A unit with a Process or State child has exactly one such child.
    SceneMainRelation,
    /// A unit with a Process or State child has a Participant child
    /// (remote and implicit children count).
    SceneParticipant,
    /// Punctuation terminals hang off U edges and U edges reach only
    /// punctuation terminals.
    TerminalRoles,
    /// Every category is in the foundational inventory or U.
    CategoryInventory,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::LegacyLabels,
        Rule::SceneMainRelation,
        Rule::SceneParticipant,
        Rule::TerminalRoles,
        Rule::CategoryInventory,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::LegacyLabels => "V0",
            Rule::SceneMainRelation => "V1",
            Rule::SceneParticipant => "V2",
            Rule::TerminalRoles => "V3",
            Rule::CategoryInventory => "V4",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::LegacyLabels => "legacy-labels",
            Rule::SceneMainRelation => "scene-main-relation",
            Rule::SceneParticipant => "scene-participant",
            Rule::TerminalRoles => "terminal-roles",
            Rule::CategoryInventory => "category-inventory",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown validation rule `{0}`")]
pub struct UnknownRule(pub String);

/// Accepts either the short id (`V2`) or the name (`scene-participant`).
impl FromStr for Rule {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.id() == s || r.name() == s)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    enabled: BTreeSet<Rule>,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet {
            enabled: Rule::ALL.into_iter().collect(),
        }
    }
}

impl RuleSet {
    pub fn from_ids<I, S>(ids: I) -> Result<Self, UnknownRule>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let enabled = ids
            .into_iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<_, _>>()?;
        Ok(RuleSet { enabled })
    }

    pub fn is_enabled(&self, rule: Rule) -> bool {
        self.enabled.contains(&rule)
    }

    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.enabled.iter().copied()
    }
}

/// What a violation points at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    Node(NodeId),
    Edge(Edge),
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reference::Node(id) => id.fmt(f),
            Reference::Edge(e) => e.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub reference: Reference,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub passage_id: String,
    pub violations: Vec<Violation>,
}

#[derive(Serialize)]
struct ViolationLine<'a> {
    passage: &'a str,
    rule: &'static str,
    #[serde(rename = "ref")]
    reference: String,
    message: &'a str,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// One JSON object per violation, newline-terminated.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for v in &self.violations {
            let line = ViolationLine {
                passage: &self.passage_id,
                rule: v.rule.id(),
                reference: v.reference.to_string(),
                message: &v.message,
            };
            out.push_str(&serde_json::to_string(&line).expect("plain strings serialize"));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(
                f,
                "{}\t{}\t{}\t{}",
                self.passage_id, v.rule, v.reference, v.message
            )?;
        }
        Ok(())
    }
}

pub fn validate(passage: &Passage, rules: &RuleSet) -> ValidationReport {
    let mut violations = Vec::new();
    for rule in rules.rules() {
        match rule {
            Rule::LegacyLabels => legacy_labels(passage, &mut violations),
            Rule::SceneMainRelation | Rule::SceneParticipant => {
                scenes(passage, rule, &mut violations)
            }
            Rule::TerminalRoles => terminal_roles(passage, &mut violations),
            Rule::CategoryInventory => inventory(passage, &mut violations),
        }
    }
    ValidationReport {
        passage_id: passage.id().to_string(),
        violations,
    }
}

fn legacy_labels(passage: &Passage, out: &mut Vec<Violation>) {
    for e in passage.edges().iter().filter(|e| e.category.is_legacy()) {
        out.push(Violation {
            rule: Rule::LegacyLabels,
            reference: Reference::Edge(*e),
            message: format!(
                "legacy label {} ({}); normalizes to {}",
                e.category,
                e.category.longname(),
                e.category.normalized()
            ),
        });
    }
}

fn inventory(passage: &Passage, out: &mut Vec<Violation>) {
    for e in passage.edges().iter().filter(|e| !e.category.is_current()) {
        out.push(Violation {
            rule: Rule::CategoryInventory,
            reference: Reference::Edge(*e),
            message: format!(
                "category {} is outside the foundational inventory",
                e.category
            ),
        });
    }
}

fn scenes(passage: &Passage, rule: Rule, out: &mut Vec<Violation>) {
    for unit in passage.units() {
        let children: Vec<&Edge> = passage.outgoing(unit.id).expect("own node").collect();
        let main = children
            .iter()
            .filter(|e| e.category.is_main_relation())
            .count();
        if main == 0 {
            continue;
        }
        match rule {
            Rule::SceneMainRelation if main > 1 => out.push(Violation {
                rule,
                reference: Reference::Node(unit.id),
                message: format!("Scene has {main} main relations (P or S), expected one"),
            }),
            Rule::SceneParticipant
                if !children.iter().any(|e| e.category == Category::Participant) =>
            {
                out.push(Violation {
                    rule,
                    reference: Reference::Node(unit.id),
                    message: "Scene has no Participant".to_string(),
                })
            }
            _ => {}
        }
    }
}

fn terminal_roles(passage: &Passage, out: &mut Vec<Violation>) {
    for node in passage.terminals() {
        let token = node.token.as_ref().expect("terminal token");
        if !token.is_punctuation() {
            continue;
        }
        let incoming = passage
            .primary_incoming(node.id)
            .expect("own node")
            .expect("sealed terminals have a primary parent");
        if incoming.category != Category::Punctuation {
            out.push(Violation {
                rule: Rule::TerminalRoles,
                reference: Reference::Node(node.id),
                message: format!(
                    "punctuation `{}` is attached as {} instead of U",
                    token.text, incoming.category
                ),
            });
        }
    }
    for e in passage
        .edges()
        .iter()
        .filter(|e| e.category == Category::Punctuation)
    {
        let child = passage.node(e.child).expect("sealed edge endpoint");
        let ok = child.kind == NodeKind::Terminal
            && child.token.as_ref().is_some_and(|t| t.is_punctuation());
        if !ok {
            out.push(Violation {
                rule: Rule::TerminalRoles,
                reference: Reference::Edge(*e),
                message: "U edge does not point at a punctuation terminal".to_string(),
            });
        }
    }
}
