//! Passage formats: XML in and out, plain text and bi-lexical export.

mod bilexical;
mod xml;

pub use bilexical::{export_bilexical, render_rows, BilexicalRow, HEAD_PRIORITY};
pub use xml::{parse_xml, parse_xml_str, serialize_xml, XmlError};

use crate::graph::Passage;

/// Tokens joined by single spaces.
pub fn export_text(passage: &Passage) -> String {
    passage
        .tokens()
        .map(|t| t.text.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}
