use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Edge category of the foundational layer.
///
/// Variants are declared in inventory order (Scene elements, non-Scene
/// elements, inter-Scene relations, Function), followed by Punctuation and
/// the two legacy labels. The derived `Ord` follows that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Category {
    Process,
    State,
    Participant,
    Adverbial,
    Center,
    Elaborator,
    Connector,
    Relator,
    ParallelScene,
    Linker,
    Ground,
    Function,
    Punctuation,
    /// Legacy label, normalized to `Adverbial`.
    Time,
    /// Legacy label, normalized to `Elaborator`.
    Quantifier,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown category code `{0}`")]
pub struct UnknownCategory(pub String);

impl Category {
    /// Every category, legacy labels included.
    pub const ALL: [Category; 15] = [
        Category::Process,
        Category::State,
        Category::Participant,
        Category::Adverbial,
        Category::Center,
        Category::Elaborator,
        Category::Connector,
        Category::Relator,
        Category::ParallelScene,
        Category::Linker,
        Category::Ground,
        Category::Function,
        Category::Punctuation,
        Category::Time,
        Category::Quantifier,
    ];

    /// The twelve foundational categories followed by Punctuation.
    pub const CURRENT: [Category; 13] = [
        Category::Process,
        Category::State,
        Category::Participant,
        Category::Adverbial,
        Category::Center,
        Category::Elaborator,
        Category::Connector,
        Category::Relator,
        Category::ParallelScene,
        Category::Linker,
        Category::Ground,
        Category::Function,
        Category::Punctuation,
    ];

    pub fn code(self) -> &'static str {
        use Category::*;
        match self {
            Process => "P",
            State => "S",
            Participant => "A",
            Adverbial => "D",
            Center => "C",
            Elaborator => "E",
            Connector => "N",
            Relator => "R",
            ParallelScene => "H",
            Linker => "L",
            Ground => "G",
            Function => "F",
            Punctuation => "U",
            Time => "T",
            Quantifier => "Q",
        }
    }

    pub fn longname(self) -> &'static str {
        use Category::*;
        match self {
            Process => "Process",
            State => "State",
            Participant => "Participant",
            Adverbial => "Adverbial",
            Center => "Center",
            Elaborator => "Elaborator",
            Connector => "Connector",
            Relator => "Relator",
            ParallelScene => "Parallel Scene",
            Linker => "Linker",
            Ground => "Ground",
            Function => "Function",
            Punctuation => "Punctuation",
            Time => "Time",
            Quantifier => "Quantifier",
        }
    }

    pub fn is_legacy(self) -> bool {
        matches!(self, Category::Time | Category::Quantifier)
    }

    /// Member of the foundational inventory or Punctuation.
    pub fn is_current(self) -> bool {
        !self.is_legacy()
    }

    /// Main relation of a Scene.
    pub fn is_main_relation(self) -> bool {
        matches!(self, Category::Process | Category::State)
    }

    /// Replacement applied by normalization: Time becomes Adverbial and
    /// Quantifier becomes Elaborator; everything else maps to itself.
    pub fn normalized(self) -> Category {
        match self {
            Category::Time => Category::Adverbial,
            Category::Quantifier => Category::Elaborator,
            other => other,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Category {
    type Err = UnknownCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .iter()
            .copied()
            .find(|c| c.code() == s)
            .ok_or_else(|| UnknownCategory(s.to_string()))
    }
}

impl From<Category> for String {
    fn from(c: Category) -> String {
        c.code().to_string()
    }
}

impl TryFrom<String> for Category {
    type Error = UnknownCategory;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}
