//! Lossy token-to-token dependency export.
//!
//! Every unit is headed by the head of its highest-priority primary child
//! (priority by the category of the edge into the child, ties broken by the
//! leftmost yield start). A token depends on the head of the unit directly
//! above the largest unit it heads, labeled with the category of the edge
//! into that largest unit. The token heading the root depends on 0.
//!
//! Remote edges and implicit units are dropped.

use std::fmt::Write;

use crate::category::Category;
use crate::graph::{NodeId, Passage};

/// Head priority, highest first. Legacy labels rank after all others.
pub const HEAD_PRIORITY: [Category; 13] = [
    Category::Center,
    Category::Process,
    Category::State,
    Category::ParallelScene,
    Category::Participant,
    Category::Adverbial,
    Category::Elaborator,
    Category::Connector,
    Category::Relator,
    Category::Linker,
    Category::Ground,
    Category::Function,
    Category::Punctuation,
];

fn rank(c: Category) -> usize {
    HEAD_PRIORITY
        .iter()
        .position(|&p| p == c)
        .unwrap_or(HEAD_PRIORITY.len())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilexicalRow {
    pub position: u32,
    pub form: String,
    /// 0 for the root.
    pub head: u32,
    /// `None` for the root.
    pub deprel: Option<Category>,
}

/// One row per terminal, in position order.
pub fn export_bilexical(passage: &Passage) -> Vec<BilexicalRow> {
    let mut rows = Vec::with_capacity(passage.token_count());
    for node in passage.terminals() {
        let token = node.token.as_ref().expect("terminal token");
        // Climb while this token heads the parent unit.
        let mut top = node.id;
        let mut incoming = passage.primary_incoming(top).expect("own node");
        while let Some(edge) = incoming {
            if lexical_head(passage, edge.parent) != Some(token.position) {
                break;
            }
            top = edge.parent;
            incoming = passage.primary_incoming(top).expect("own node");
        }
        let (head, deprel) = match incoming {
            None => (0, None),
            Some(edge) => (
                lexical_head(passage, edge.parent).expect("parent yield contains this token"),
                Some(edge.category),
            ),
        };
        rows.push(BilexicalRow {
            position: token.position,
            form: token.text.clone(),
            head,
            deprel,
        });
    }
    rows
}

/// Token position heading `unit`, or `None` when its yield is empty.
fn lexical_head(passage: &Passage, unit: NodeId) -> Option<u32> {
    let node = passage.node(unit)?;
    if let Some(t) = &node.token {
        return Some(t.position);
    }
    let best = passage
        .outgoing(unit)
        .expect("own node")
        .filter(|e| !e.remote)
        .filter_map(|e| {
            let start = *passage.yield_of(e.child).expect("edge endpoint").first()?;
            Some((rank(e.category), start, e.child))
        })
        .min()?;
    lexical_head(passage, best.2)
}

/// Four tab-separated columns per row, newline-terminated.
pub fn render_rows(rows: &[BilexicalRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let deprel = r.deprel.map_or("ROOT", Category::code);
        writeln!(out, "{}\t{}\t{}\t{}", r.position, r.form, r.head, deprel).unwrap();
    }
    out
}
