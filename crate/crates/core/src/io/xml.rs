//! Passage XML.
//!
//! ```text
//! <root passageID="...">
//!   <layer layerID="0">
//!     <node ID="0.1" type="Word">
//!       <attributes text="After" paragraph="1" paragraph_position="1"/>
//!     </node>
//!     ...
//!   </layer>
//!   <layer layerID="1">
//!     <node ID="1.1" type="FN">
//!       <edge toID="0.1" type="L"/>
//!       <edge toID="0.4" type="A"><attributes remote="True"/></edge>
//!     </node>
//!     <node ID="1.5" type="FN"><attributes implicit="True"/></node>
//!   </layer>
//! </root>
//! ```
//!
//! Layer 0 holds terminals in document order; their order defines token
//! positions. Terminal `type` is `Punctuation` for tokens without letters or
//! digits and `Word` otherwise; on input either value is accepted. The root
//! is the first layer-1 node without an incoming primary edge.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use quick_xml::events::{BytesDecl, BytesEnd, BytesStart, Event};
use quick_xml::{Reader, Writer, XmlVersion};
use thiserror::Error;

use crate::category::{Category, UnknownCategory};
use crate::graph::{
    is_punctuation_text, GraphError, NodeId, NodeKind, Passage, PassageBuilder, TerminalSpec,
    UnitKind, TERMINAL_LAYER, UNIT_LAYER,
};

#[derive(Debug, Error)]
pub enum XmlError {
    #[error("XML syntax error: {0}")]
    Syntax(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("edge points at undeclared node {0}")]
    DanglingReference(String),
    #[error(transparent)]
    UnknownCategory(#[from] UnknownCategory),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<quick_xml::Error> for XmlError {
    fn from(e: quick_xml::Error) -> Self {
        XmlError::Syntax(e.to_string())
    }
}

impl From<quick_xml::events::attributes::AttrError> for XmlError {
    fn from(e: quick_xml::events::attributes::AttrError) -> Self {
        XmlError::Syntax(e.to_string())
    }
}

fn schema(msg: impl Into<String>) -> XmlError {
    XmlError::Schema(msg.into())
}

struct RawEdge {
    to: String,
    category: Category,
    remote: bool,
}

struct RawUnit {
    id: NodeId,
    implicit: bool,
    edges: Vec<RawEdge>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Scope {
    Root,
    Layer(u32),
    Terminal,
    Unit,
    Edge,
    Attributes,
}

fn attrs(e: &BytesStart<'_>) -> Result<HashMap<String, String>, XmlError> {
    let mut out = HashMap::new();
    for a in e.attributes() {
        let a = a?;
        let key = a.key.as_ref().to_string();
        let value = a.normalized_value(XmlVersion::Implicit1_0)?.into_owned();
        out.insert(key, value);
    }
    Ok(out)
}

fn required<'m>(
    map: &'m HashMap<String, String>,
    key: &str,
    element: &str,
) -> Result<&'m str, XmlError> {
    map.get(key)
        .map(String::as_str)
        .ok_or_else(|| schema(format!("<{element}> lacks `{key}`")))
}

fn flag(map: &HashMap<String, String>, key: &str) -> Result<bool, XmlError> {
    match map.get(key).map(String::as_str) {
        None | Some("False") => Ok(false),
        Some("True") => Ok(true),
        Some(other) => Err(schema(format!(
            "`{key}` must be True or False, got `{other}`"
        ))),
    }
}

fn node_id(s: &str) -> Result<NodeId, XmlError> {
    s.parse()
        .map_err(|_| schema(format!("malformed node id `{s}`")))
}

fn number(map: &HashMap<String, String>, key: &str, default: u32) -> Result<u32, XmlError> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| schema(format!("`{key}` must be a non-negative integer, got `{v}`"))),
    }
}

/// Reads one passage document and seals it.
pub fn parse_xml<R: BufRead>(input: R) -> Result<Passage, XmlError> {
    let mut reader = Reader::from_reader(input);
    let mut buf = Vec::new();
    let mut stack: Vec<Scope> = Vec::new();
    let mut passage_id: Option<String> = None;
    let mut terminals: Vec<TerminalSpec> = Vec::new();
    let mut units: Vec<RawUnit> = Vec::new();
    let mut seen_root = false;

    loop {
        let event = reader.read_event_into(&mut buf)?;
        let (start, empty) = match &event {
            Event::Start(e) => (Some(e.clone().into_owned()), false),
            Event::Empty(e) => (Some(e.clone().into_owned()), true),
            Event::End(_) => {
                stack.pop();
                buf.clear();
                continue;
            }
            Event::Text(t) => {
                if !t.as_ref().trim().is_empty() {
                    return Err(schema("unexpected text content"));
                }
                (None, false)
            }
            Event::Eof => break,
            _ => (None, false),
        };
        buf.clear();
        let Some(e) = start else { continue };
        let name = e.name().as_ref().to_string();
        let map = attrs(&e)?;
        let scope = match (stack.last().copied(), name.as_str()) {
            (None, "root") => {
                if seen_root {
                    return Err(schema("more than one <root>"));
                }
                seen_root = true;
                passage_id = Some(required(&map, "passageID", "root")?.to_string());
                Scope::Root
            }
            (Some(Scope::Root), "layer") => {
                let layer = required(&map, "layerID", "layer")?;
                match layer.parse::<u32>() {
                    Ok(l @ (TERMINAL_LAYER | UNIT_LAYER)) => Scope::Layer(l),
                    _ => return Err(schema(format!("unsupported layer `{layer}`"))),
                }
            }
            (Some(Scope::Layer(TERMINAL_LAYER)), "node") => {
                let id = node_id(required(&map, "ID", "node")?)?;
                if id.layer != TERMINAL_LAYER {
                    return Err(schema(format!("node {id} declared in layer 0")));
                }
                match required(&map, "type", "node")? {
                    "Word" | "Punctuation" => {}
                    other => return Err(schema(format!("terminal type `{other}`"))),
                }
                let k = terminals.len() as u32 + 1;
                terminals.push(TerminalSpec {
                    id,
                    text: String::new(),
                    paragraph: 1,
                    paragraph_position: k,
                });
                if empty {
                    return Err(schema(format!("terminal {id} has no text")));
                }
                Scope::Terminal
            }
            (Some(Scope::Layer(UNIT_LAYER)), "node") => {
                let id = node_id(required(&map, "ID", "node")?)?;
                if id.layer != UNIT_LAYER {
                    return Err(schema(format!("node {id} declared in layer 1")));
                }
                match required(&map, "type", "node")? {
                    "FN" => {}
                    other => return Err(schema(format!("unit type `{other}`"))),
                }
                units.push(RawUnit {
                    id,
                    implicit: false,
                    edges: Vec::new(),
                });
                Scope::Unit
            }
            (Some(Scope::Terminal), "attributes") => {
                let t = terminals.last_mut().expect("inside a terminal");
                t.text = required(&map, "text", "attributes")?.to_string();
                t.paragraph = number(&map, "paragraph", t.paragraph)?;
                t.paragraph_position = number(&map, "paragraph_position", t.paragraph_position)?;
                Scope::Attributes
            }
            (Some(Scope::Unit), "attributes") => {
                units.last_mut().expect("inside a unit").implicit = flag(&map, "implicit")?;
                Scope::Attributes
            }
            (Some(Scope::Unit), "edge") => {
                let to = required(&map, "toID", "edge")?.to_string();
                let category: Category = required(&map, "type", "edge")?.parse()?;
                units
                    .last_mut()
                    .expect("inside a unit")
                    .edges
                    .push(RawEdge {
                        to,
                        category,
                        remote: false,
                    });
                Scope::Edge
            }
            (Some(Scope::Edge), "attributes") => {
                let unit = units.last_mut().expect("inside a unit");
                unit.edges.last_mut().expect("inside an edge").remote = flag(&map, "remote")?;
                Scope::Attributes
            }
            (parent, _) => {
                let parent = match parent {
                    None => "document",
                    Some(Scope::Root) => "root",
                    Some(Scope::Layer(_)) => "layer",
                    Some(Scope::Terminal | Scope::Unit) => "node",
                    Some(Scope::Edge) => "edge",
                    Some(Scope::Attributes) => "attributes",
                };
                return Err(schema(format!("unexpected <{name}> in {parent}")));
            }
        };
        if !empty {
            stack.push(scope);
        }
    }
    if !stack.is_empty() {
        return Err(XmlError::Syntax("unexpected end of document".into()));
    }
    let passage_id = passage_id.ok_or_else(|| schema("missing <root>"))?;
    if let Some(t) = terminals.iter().find(|t| t.text.is_empty()) {
        return Err(schema(format!("terminal {} has no text", t.id)));
    }

    let declared: HashSet<NodeId> = terminals
        .iter()
        .map(|t| t.id)
        .chain(units.iter().map(|u| u.id))
        .collect();
    let mut primary_children = HashSet::new();
    for u in &units {
        for e in &u.edges {
            let to: NodeId =
                e.to.parse()
                    .ok()
                    .filter(|id| declared.contains(id))
                    .ok_or_else(|| XmlError::DanglingReference(e.to.clone()))?;
            if !e.remote {
                primary_children.insert(to);
            }
        }
    }
    let root = units
        .iter()
        .find(|u| !primary_children.contains(&u.id))
        .or(units.first())
        .ok_or_else(|| schema("layer 1 has no nodes"))?;
    if root.implicit {
        return Err(schema(format!("root {} is implicit", root.id)));
    }
    let root_id = root.id;

    let mut builder = PassageBuilder::with_terminals(passage_id, terminals, root_id)?;
    for u in units.iter().filter(|u| u.id != root_id) {
        let kind = if u.implicit {
            UnitKind::Implicit
        } else {
            UnitKind::NonTerminal
        };
        builder.add_node_with_id(u.id, kind)?;
    }
    for u in &units {
        for e in &u.edges {
            let to = e.to.parse().expect("checked above");
            builder.push_edge(u.id, to, e.category, e.remote)?;
        }
    }
    Ok(builder.freeze()?)
}

pub fn parse_xml_str(document: &str) -> Result<Passage, XmlError> {
    parse_xml(document.as_bytes())
}

/// Deterministic UTF-8 rendering, two-space indent, LF line endings.
pub fn serialize_xml(passage: &Passage) -> Vec<u8> {
    let mut w = Writer::new_with_indent(Vec::new(), b' ', 2);
    write_passage(&mut w, passage).expect("writing to memory cannot fail");
    let mut out = w.into_inner();
    out.push(b'\n');
    out
}

fn write_passage(w: &mut Writer<Vec<u8>>, p: &Passage) -> std::io::Result<()> {
    w.write_event(Event::Decl(BytesDecl::new("1.0", Some("utf-8"), None)))?;
    w.write_event(Event::Start(
        BytesStart::new("root").with_attributes([("passageID", p.id())]),
    ))?;

    w.write_event(Event::Start(
        BytesStart::new("layer").with_attributes([("layerID", "0")]),
    ))?;
    for node in p.terminals() {
        let token = node.token.as_ref().expect("terminal token");
        let id = node.id.to_string();
        let kind = if is_punctuation_text(&token.text) {
            "Punctuation"
        } else {
            "Word"
        };
        w.write_event(Event::Start(
            BytesStart::new("node").with_attributes([("ID", id.as_str()), ("type", kind)]),
        ))?;
        let paragraph = token.paragraph.to_string();
        let position = token.paragraph_position.to_string();
        w.write_event(Event::Empty(BytesStart::new("attributes").with_attributes(
            [
                ("text", token.text.as_str()),
                ("paragraph", paragraph.as_str()),
                ("paragraph_position", position.as_str()),
            ],
        )))?;
        w.write_event(Event::End(BytesEnd::new("node")))?;
    }
    w.write_event(Event::End(BytesEnd::new("layer")))?;

    w.write_event(Event::Start(
        BytesStart::new("layer").with_attributes([("layerID", "1")]),
    ))?;
    for node in p.units() {
        let id = node.id.to_string();
        let start = BytesStart::new("node").with_attributes([("ID", id.as_str()), ("type", "FN")]);
        let edges: Vec<_> = p.outgoing(node.id).expect("own node").collect();
        if node.kind != NodeKind::Implicit && edges.is_empty() {
            w.write_event(Event::Empty(start))?;
            continue;
        }
        w.write_event(Event::Start(start))?;
        if node.kind == NodeKind::Implicit {
            w.write_event(Event::Empty(
                BytesStart::new("attributes").with_attributes([("implicit", "True")]),
            ))?;
        }
        for e in edges {
            let to = e.child.to_string();
            let edge = BytesStart::new("edge")
                .with_attributes([("toID", to.as_str()), ("type", e.category.code())]);
            if e.remote {
                w.write_event(Event::Start(edge))?;
                w.write_event(Event::Empty(
                    BytesStart::new("attributes").with_attributes([("remote", "True")]),
                ))?;
                w.write_event(Event::End(BytesEnd::new("edge")))?;
            } else {
                w.write_event(Event::Empty(edge))?;
            }
        }
        w.write_event(Event::End(BytesEnd::new("node")))?;
    }
    w.write_event(Event::End(BytesEnd::new("layer")))?;
    w.write_event(Event::End(BytesEnd::new("root")))?;
    Ok(())
}
