//! In-memory passages.
//!
//! A passage is assembled with a [`PassageBuilder`] and sealed with
//! [`PassageBuilder::freeze`], which checks the global invariants of the
//! foundational layer:
//!
//! * restricted to primary edges, every node except the root has exactly one
//!   parent and the root has none;
//! * the full edge set (primary and remote) is acyclic;
//! * every terminal is covered by a primary edge;
//! * every unit is reachable from the root over primary edges.
//!
//! A sealed [`Passage`] is immutable. Yields are computed once at sealing
//! time and follow primary edges only.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::category::Category;

/// Node address, rendered as `layer.index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId {
    pub layer: u32,
    pub index: u32,
}

impl NodeId {
    pub const fn new(layer: u32, index: u32) -> Self {
        NodeId { layer, index }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.layer, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed node id `{0}`")]
pub struct ParseNodeIdError(pub String);

impl FromStr for NodeId {
    type Err = ParseNodeIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseNodeIdError(s.to_string());
        let (layer, index) = s.split_once('.').ok_or_else(err)?;
        let layer = layer.parse().map_err(|_| err())?;
        let index: u32 = index.parse().map_err(|_| err())?;
        if index == 0 {
            return Err(err());
        }
        Ok(NodeId { layer, index })
    }
}

/// Layer holding the tokens.
pub const TERMINAL_LAYER: u32 = 0;
/// The foundational layer.
pub const UNIT_LAYER: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Terminal,
    NonTerminal,
    Implicit,
}

/// Kinds that can be added to a passage after construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitKind {
    NonTerminal,
    Implicit,
}

impl From<UnitKind> for NodeKind {
    fn from(kind: UnitKind) -> Self {
        match kind {
            UnitKind::NonTerminal => NodeKind::NonTerminal,
            UnitKind::Implicit => NodeKind::Implicit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    /// 1-based position in the passage.
    pub position: u32,
    pub paragraph: u32,
    pub paragraph_position: u32,
}

impl Token {
    /// A token is punctuation when it has no letter or digit.
    pub fn is_punctuation(&self) -> bool {
        is_punctuation_text(&self.text)
    }
}

pub fn is_punctuation_text(text: &str) -> bool {
    !text.chars().any(char::is_alphanumeric)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    /// Present for terminals only.
    pub token: Option<Token>,
}

impl Node {
    pub fn is_terminal(&self) -> bool {
        self.kind == NodeKind::Terminal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub parent: NodeId,
    pub child: NodeId,
    pub category: Category,
    pub remote: bool,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}[{}", self.parent, self.child, self.category)?;
        if self.remote {
            f.write_str(",remote")?;
        }
        f.write_str("]")
    }
}

/// Global invariants checked when sealing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Invariant {
    Acyclicity,
    PrimaryTree,
    TerminalCoverage,
    Reachability,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Acyclicity => "acyclicity",
            Invariant::PrimaryTree => "primary-tree",
            Invariant::TerminalCoverage => "terminal-coverage",
            Invariant::Reachability => "reachability",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("structural violation ({invariant}) at node {node}")]
pub struct StructuralViolation {
    pub invariant: Invariant,
    pub node: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a passage needs at least one token")]
    EmptyTokens,
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node id {0} is already in use")]
    DuplicateNodeId(NodeId),
    #[error("node id {0} is in the wrong layer for its kind")]
    WrongLayer(NodeId),
    #[error("terminal {0} cannot have children")]
    TerminalAsParent(NodeId),
    #[error("implicit unit {0} cannot have children")]
    ImplicitAsParent(NodeId),
    #[error("root {0} cannot be a child")]
    RootAsChild(NodeId),
    #[error("node {child} already has a primary parent")]
    DuplicatePrimaryParent { child: NodeId },
    #[error("edge {parent}->{child} would close a cycle")]
    CycleDetected { parent: NodeId, child: NodeId },
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error(transparent)]
    Structural(#[from] StructuralViolation),
}

/// Terminal description used when the caller controls node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalSpec {
    pub id: NodeId,
    pub text: String,
    pub paragraph: u32,
    pub paragraph_position: u32,
}

/// Mutable passage under construction.
#[derive(Debug, Clone)]
pub struct PassageBuilder {
    passage_id: String,
    nodes: Vec<Node>,
    lookup: HashMap<NodeId, usize>,
    edges: Vec<Edge>,
    edge_keys: HashSet<Edge>,
    primary_parent: Vec<Option<usize>>,
    root: NodeId,
    next_unit: u32,
}

impl PassageBuilder {
    /// Terminals `0.1..0.n` in token order, plus a root unit `1.1`.
    pub fn new<I, S>(passage_id: impl Into<String>, tokens: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let terminals = tokens
            .into_iter()
            .enumerate()
            .map(|(i, text)| {
                let k = i as u32 + 1;
                TerminalSpec {
                    id: NodeId::new(TERMINAL_LAYER, k),
                    text: text.into(),
                    paragraph: 1,
                    paragraph_position: k,
                }
            })
            .collect();
        Self::with_terminals(passage_id, terminals, NodeId::new(UNIT_LAYER, 1))
    }

    /// Terminals with explicit ids (positions follow list order) and a root
    /// unit with the given id.
    pub fn with_terminals(
        passage_id: impl Into<String>,
        terminals: Vec<TerminalSpec>,
        root: NodeId,
    ) -> Result<Self, GraphError> {
        if terminals.is_empty() {
            return Err(GraphError::EmptyTokens);
        }
        let mut builder = PassageBuilder {
            passage_id: passage_id.into(),
            nodes: Vec::with_capacity(terminals.len() + 1),
            lookup: HashMap::new(),
            edges: Vec::new(),
            edge_keys: HashSet::new(),
            primary_parent: Vec::new(),
            root,
            next_unit: 1,
        };
        for (i, spec) in terminals.into_iter().enumerate() {
            if spec.id.layer != TERMINAL_LAYER {
                return Err(GraphError::WrongLayer(spec.id));
            }
            let token = Token {
                text: spec.text,
                position: i as u32 + 1,
                paragraph: spec.paragraph,
                paragraph_position: spec.paragraph_position,
            };
            builder.insert(Node {
                id: spec.id,
                kind: NodeKind::Terminal,
                token: Some(token),
            })?;
        }
        builder.add_node_with_id(root, UnitKind::NonTerminal)?;
        Ok(builder)
    }

    fn insert(&mut self, node: Node) -> Result<NodeId, GraphError> {
        let id = node.id;
        if self.lookup.contains_key(&id) {
            return Err(GraphError::DuplicateNodeId(id));
        }
        if id.layer == UNIT_LAYER {
            self.next_unit = self.next_unit.max(id.index + 1);
        }
        self.lookup.insert(id, self.nodes.len());
        self.nodes.push(node);
        self.primary_parent.push(None);
        Ok(id)
    }

    pub fn passage_id(&self) -> &str {
        &self.passage_id
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.lookup.get(&id).map(|&i| &self.nodes[i])
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// All node ids in insertion order.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().map(|n| n.id)
    }

    /// Terminal ids in position order.
    pub fn terminal_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().filter(|n| n.is_terminal()).map(|n| n.id)
    }

    /// Allocates the next free id in the unit layer.
    pub fn add_node(&mut self, kind: UnitKind) -> NodeId {
        let id = NodeId::new(UNIT_LAYER, self.next_unit);
        self.insert(Node {
            id,
            kind: kind.into(),
            token: None,
        })
        .expect("fresh unit id is unused")
    }

    pub fn add_node_with_id(&mut self, id: NodeId, kind: UnitKind) -> Result<NodeId, GraphError> {
        if id.layer != UNIT_LAYER {
            return Err(GraphError::WrongLayer(id));
        }
        self.insert(Node {
            id,
            kind: kind.into(),
            token: None,
        })
    }

    fn index_of(&self, id: NodeId) -> Result<usize, GraphError> {
        self.lookup
            .get(&id)
            .copied()
            .ok_or(GraphError::UnknownNode(id))
    }

    /// Adds an edge after checking only local conditions: both endpoints
    /// exist, the parent can have children and the edge is not an exact
    /// duplicate. Global invariants are left to [`freeze`](Self::freeze).
    pub fn push_edge(
        &mut self,
        parent: NodeId,
        child: NodeId,
        category: Category,
        remote: bool,
    ) -> Result<(), GraphError> {
        let p = self.index_of(parent)?;
        let c = self.index_of(child)?;
        match self.nodes[p].kind {
            NodeKind::Terminal => return Err(GraphError::TerminalAsParent(parent)),
            NodeKind::Implicit => return Err(GraphError::ImplicitAsParent(parent)),
            NodeKind::NonTerminal => {}
        }
        let edge = Edge {
            parent,
            child,
            category,
            remote,
        };
        if !self.edge_keys.insert(edge) {
            return Err(GraphError::DuplicateEdge(edge));
        }
        if !remote && self.primary_parent[c].is_none() {
            self.primary_parent[c] = Some(p);
        }
        self.edges.push(edge);
        Ok(())
    }

    /// Adds an edge, rejecting anything that would break the primary tree or
    /// introduce a cycle.
    pub fn add_edge(
        &mut self,
        parent: NodeId,
        child: NodeId,
        category: Category,
        remote: bool,
    ) -> Result<(), GraphError> {
        let p = self.index_of(parent)?;
        let c = self.index_of(child)?;
        match self.nodes[p].kind {
            NodeKind::Terminal => return Err(GraphError::TerminalAsParent(parent)),
            NodeKind::Implicit => return Err(GraphError::ImplicitAsParent(parent)),
            NodeKind::NonTerminal => {}
        }
        if child == self.root {
            return Err(GraphError::RootAsChild(child));
        }
        if !remote && self.primary_parent[c].is_some() {
            return Err(GraphError::DuplicatePrimaryParent { child });
        }
        if p == c || self.reaches(c, p) {
            return Err(GraphError::CycleDetected { parent, child });
        }
        self.push_edge(parent, child, category, remote)
    }

    /// Whether `to` is reachable from `from` over existing edges.
    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut children: HashMap<usize, Vec<usize>> = HashMap::new();
        for e in &self.edges {
            children
                .entry(self.lookup[&e.parent])
                .or_default()
                .push(self.lookup[&e.child]);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            if let Some(cs) = children.get(&v) {
                stack.extend(cs.iter().copied().filter(|&u| !seen[u]));
            }
        }
        false
    }

    /// Changes the category of the `index`-th edge (insertion order).
    pub fn relabel_edge(&mut self, index: usize, category: Category) -> Result<(), GraphError> {
        let old = self.edges[index];
        let new = Edge { category, ..old };
        if new == old {
            return Ok(());
        }
        if !self.edge_keys.insert(new) {
            return Err(GraphError::DuplicateEdge(new));
        }
        self.edge_keys.remove(&old);
        self.edges[index] = new;
        Ok(())
    }

    /// Removes and returns the `index`-th edge (insertion order).
    pub fn remove_edge(&mut self, index: usize) -> Edge {
        let edge = self.edges.remove(index);
        self.edge_keys.remove(&edge);
        if !edge.remote {
            let c = self.lookup[&edge.child];
            self.primary_parent[c] = self
                .edges
                .iter()
                .find(|e| !e.remote && e.child == edge.child)
                .map(|e| self.lookup[&e.parent]);
        }
        edge
    }

    /// Checks every passage invariant and seals the passage.
    pub fn freeze(self) -> Result<Passage, GraphError> {
        let PassageBuilder {
            passage_id,
            nodes,
            edges,
            root,
            ..
        } = self;

        // Canonical order: terminals by position, then units by id.
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by_key(|&i| match &nodes[i].token {
            Some(t) => (0, t.position, NodeId::new(0, 1)),
            None => (1, 0, nodes[i].id),
        });
        let mut slots: Vec<Option<Node>> = nodes.into_iter().map(Some).collect();
        let nodes: Vec<Node> = order
            .iter()
            .map(|&i| slots[i].take().expect("each node moved once"))
            .collect();
        let lookup: HashMap<NodeId, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();

        let mut edges = edges;
        edges.sort_by_key(|e| lookup[&e.parent]);

        let n = nodes.len();
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            outgoing[lookup[&e.parent]].push(k);
            incoming[lookup[&e.child]].push(k);
        }

        let topo = topological_order(&edges, &lookup, &outgoing, &incoming).map_err(|i| {
            StructuralViolation {
                invariant: Invariant::Acyclicity,
                node: nodes[i].id,
            }
        })?;

        let root_index = lookup[&root];
        let mut primary_parent = vec![None; n];
        for (v, ins) in incoming.iter().enumerate() {
            let mut primaries = ins.iter().filter(|&&k| !edges[k].remote);
            let first = primaries.next();
            if (v == root_index && first.is_some()) || primaries.next().is_some() {
                return Err(StructuralViolation {
                    invariant: Invariant::PrimaryTree,
                    node: nodes[v].id,
                }
                .into());
            }
            primary_parent[v] = first.map(|&k| lookup[&edges[k].parent]);
        }
        if let Some(t) = (0..n).find(|&v| nodes[v].is_terminal() && primary_parent[v].is_none()) {
            return Err(StructuralViolation {
                invariant: Invariant::TerminalCoverage,
                node: nodes[t].id,
            }
            .into());
        }
        if let Some(u) = (0..n).find(|&v| v != root_index && primary_parent[v].is_none()) {
            return Err(StructuralViolation {
                invariant: Invariant::Reachability,
                node: nodes[u].id,
            }
            .into());
        }

        let mut yields: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &v in topo.iter().rev() {
            if let Some(t) = &nodes[v].token {
                yields[v] = vec![t.position];
                continue;
            }
            let mut y = Vec::new();
            for &k in &outgoing[v] {
                if !edges[k].remote {
                    y.extend_from_slice(&yields[lookup[&edges[k].child]]);
                }
            }
            y.sort_unstable();
            yields[v] = y;
        }

        Ok(Passage {
            passage_id,
            nodes,
            lookup,
            edges,
            root,
            outgoing,
            incoming,
            primary_parent,
            yields,
        })
    }
}

/// Kahn's algorithm over all edges. On failure returns a node lying on a
/// cycle.
fn topological_order(
    edges: &[Edge],
    lookup: &HashMap<NodeId, usize>,
    outgoing: &[Vec<usize>],
    incoming: &[Vec<usize>],
) -> Result<Vec<usize>, usize> {
    let n = outgoing.len();
    let mut indegree: Vec<usize> = incoming.iter().map(Vec::len).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop() {
        order.push(v);
        for &k in &outgoing[v] {
            let c = lookup[&edges[k].child];
            indegree[c] -= 1;
            if indegree[c] == 0 {
                queue.push(c);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Peel nodes that only lead out of the cyclic region; what is left lies
    // on or between cycles.
    let mut alive: Vec<bool> = indegree.iter().map(|&d| d > 0).collect();
    loop {
        let mut changed = false;
        for v in 0..n {
            if alive[v] && !outgoing[v].iter().any(|&k| alive[lookup[&edges[k].child]]) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Err((0..n).find(|&v| alive[v]).expect("a cycle remains"))
}

/// A sealed, immutable passage.
#[derive(Debug, Clone)]
pub struct Passage {
    passage_id: String,
    nodes: Vec<Node>,
    lookup: HashMap<NodeId, usize>,
    edges: Vec<Edge>,
    root: NodeId,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
    primary_parent: Vec<Option<usize>>,
    yields: Vec<Vec<u32>>,
}

/// Same id, nodes, root and edges (in canonical order).
impl PartialEq for Passage {
    fn eq(&self, other: &Self) -> bool {
        self.passage_id == other.passage_id
            && self.root == other.root
            && self.nodes == other.nodes
            && self.edges == other.edges
    }
}

impl Eq for Passage {}

impl Passage {
    pub fn id(&self) -> &str {
        &self.passage_id
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Terminals in position order, then units in id order.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.lookup.get(&id).map(|&i| &self.nodes[i])
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.lookup.contains_key(&id)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn token_count(&self) -> usize {
        self.nodes.iter().take_while(|n| n.is_terminal()).count()
    }

    pub fn terminals(&self) -> &[Node] {
        &self.nodes[..self.token_count()]
    }

    /// Non-terminal and implicit units, root included.
    pub fn units(&self) -> &[Node] {
        &self.nodes[self.token_count()..]
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.nodes.iter().filter_map(|n| n.token.as_ref())
    }

    fn index_of(&self, id: NodeId) -> Result<usize, GraphError> {
        self.lookup
            .get(&id)
            .copied()
            .ok_or(GraphError::UnknownNode(id))
    }

    pub fn outgoing(&self, id: NodeId) -> Result<impl Iterator<Item = &Edge>, GraphError> {
        let v = self.index_of(id)?;
        Ok(self.outgoing[v].iter().map(|&k| &self.edges[k]))
    }

    pub fn incoming(&self, id: NodeId) -> Result<impl Iterator<Item = &Edge>, GraphError> {
        let v = self.index_of(id)?;
        Ok(self.incoming[v].iter().map(|&k| &self.edges[k]))
    }

    /// The incoming primary edge, `None` for the root.
    pub fn primary_incoming(&self, id: NodeId) -> Result<Option<&Edge>, GraphError> {
        Ok(self.incoming(id)?.find(|e| !e.remote))
    }

    pub fn primary_parent(&self, id: NodeId) -> Result<Option<NodeId>, GraphError> {
        let v = self.index_of(id)?;
        Ok(self.primary_parent[v].map(|p| self.nodes[p].id))
    }

    /// Sorted token positions reachable from `id` over primary edges.
    pub fn yield_of(&self, id: NodeId) -> Result<&[u32], GraphError> {
        Ok(&self.yields[self.index_of(id)?])
    }

    /// True iff the yield is non-empty and has a gap.
    pub fn is_discontinuous(&self, id: NodeId) -> Result<bool, GraphError> {
        let y = self.yield_of(id)?;
        Ok(match (y.first(), y.last()) {
            (Some(&lo), Some(&hi)) => (hi - lo + 1) as usize != y.len(),
            _ => false,
        })
    }

    /// True iff the node has at least two incoming edges.
    pub fn is_reentrant(&self, id: NodeId) -> Result<bool, GraphError> {
        Ok(self.incoming[self.index_of(id)?].len() >= 2)
    }

    /// Unsealed copy, for building variants of this passage.
    pub fn to_builder(&self) -> PassageBuilder {
        let mut builder = PassageBuilder {
            passage_id: self.passage_id.clone(),
            nodes: Vec::new(),
            lookup: HashMap::new(),
            edges: Vec::new(),
            edge_keys: HashSet::new(),
            primary_parent: Vec::new(),
            root: self.root,
            next_unit: 1,
        };
        for node in &self.nodes {
            builder.insert(node.clone()).expect("sealed ids are unique");
        }
        for e in &self.edges {
            builder
                .push_edge(e.parent, e.child, e.category, e.remote)
                .expect("sealed edges are valid");
        }
        builder
    }

    /// Same passage with every category passed through `f`. Edges that
    /// become exact duplicates are merged, keeping the first.
    pub(crate) fn relabeled(&self, f: impl Fn(Category) -> Category) -> Passage {
        let mut seen = HashSet::new();
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut remap = vec![usize::MAX; self.edges.len()];
        for (k, e) in self.edges.iter().enumerate() {
            let e = Edge {
                category: f(e.category),
                ..*e
            };
            if seen.insert(e) {
                remap[k] = edges.len();
                edges.push(e);
            }
        }
        let keep = |ks: &Vec<usize>| -> Vec<usize> {
            ks.iter()
                .filter(|&&k| remap[k] != usize::MAX)
                .map(|&k| remap[k])
                .collect()
        };
        Passage {
            passage_id: self.passage_id.clone(),
            nodes: self.nodes.clone(),
            lookup: self.lookup.clone(),
            root: self.root,
            outgoing: self.outgoing.iter().map(keep).collect(),
            incoming: self.incoming.iter().map(keep).collect(),
            primary_parent: self.primary_parent.clone(),
            yields: self.yields.clone(),
            edges,
        }
    }
}
