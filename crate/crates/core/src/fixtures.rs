//! Two hand-built reference passages.
//!
//! `graduation` is "After graduation , John moved to Paris": two Scenes linked
//! by "After", with "John" a primary Participant of the moving Scene and a
//! remote Participant of the graduation Scene.
//!
//! `crops` is a single Scene around "apply" with an implicit Participant
//! and nested complex arguments.

use crate::category::Category::*;
use crate::graph::{NodeId, Passage, PassageBuilder, UnitKind};

/// Graduation Scene, moving Scene and the "to Paris" unit.
pub const GRADUATION_UNITS: [NodeId; 3] = [NodeId::new(1, 2), NodeId::new(1, 3), NodeId::new(1, 4)];
pub const GRADUATION_JOHN: NodeId = NodeId::new(0, 4);
pub const CROPS_IMPLICIT: NodeId = NodeId::new(1, 4);

pub const GRADUATION_TOKENS: [&str; 7] =
    ["After", "graduation", ",", "John", "moved", "to", "Paris"];

pub const CROPS_TOKENS: [&str; 19] = [
    "A",
    "similar",
    "technique",
    "is",
    "almost",
    "impossible",
    "to",
    "apply",
    "to",
    "other",
    "crops",
    ",",
    "such as",
    "cotton",
    ",",
    "soybeans",
    "and",
    "rice",
    ".",
];

fn t(k: u32) -> NodeId {
    NodeId::new(0, k)
}

pub fn graduation_builder() -> PassageBuilder {
    let mut b = PassageBuilder::new("graduation", GRADUATION_TOKENS).expect("non-empty");
    let root = b.root();
    let graduation = b.add_node(UnitKind::NonTerminal);
    let moved = b.add_node(UnitKind::NonTerminal);
    let to_paris = b.add_node(UnitKind::NonTerminal);
    let edges = [
        (root, t(1), Linker, false),
        (root, graduation, ParallelScene, false),
        (graduation, t(2), Process, false),
        (root, t(3), Punctuation, false),
        (root, moved, ParallelScene, false),
        (moved, t(4), Participant, false),
        (moved, t(5), Process, false),
        (moved, to_paris, Participant, false),
        (to_paris, t(6), Relator, false),
        (to_paris, t(7), Center, false),
        (graduation, t(4), Participant, true),
    ];
    for (parent, child, category, remote) in edges {
        b.add_edge(parent, child, category, remote)
            .expect("graduation passage edges are valid");
    }
    b
}

pub fn graduation() -> Passage {
    graduation_builder()
        .freeze()
        .expect("graduation passage is well-formed")
}

pub fn crops() -> Passage {
    let mut b = PassageBuilder::new("crops", CROPS_TOKENS).expect("non-empty");
    let root = b.root();
    let technique = b.add_node(UnitKind::NonTerminal);
    let impossible = b.add_node(UnitKind::NonTerminal);
    let implicit = b.add_node(UnitKind::Implicit);
    let crops = b.add_node(UnitKind::NonTerminal);
    let such_as = b.add_node(UnitKind::NonTerminal);
    debug_assert_eq!(implicit, CROPS_IMPLICIT);
    let edges = [
        (root, technique, Participant),
        (technique, t(1), Elaborator),
        (technique, t(2), Elaborator),
        (technique, t(3), Center),
        (root, t(4), Function),
        (root, impossible, Adverbial),
        (impossible, t(5), Elaborator),
        (impossible, t(6), Center),
        (root, implicit, Participant),
        (root, t(7), Function),
        (root, t(8), Process),
        (root, crops, Participant),
        (crops, t(9), Relator),
        (crops, t(10), Elaborator),
        (crops, t(11), Center),
        (crops, t(12), Punctuation),
        (crops, such_as, Elaborator),
        (such_as, t(13), Relator),
        (such_as, t(14), Center),
        (such_as, t(15), Punctuation),
        (such_as, t(16), Center),
        (such_as, t(17), Connector),
        (such_as, t(18), Center),
        (root, t(19), Punctuation),
    ];
    for (parent, child, category) in edges {
        b.add_edge(parent, child, category, false)
            .expect("crops passage edges are valid");
    }
    b.freeze().expect("crops passage is well-formed")
}
