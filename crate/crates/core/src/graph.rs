//! Directed labelled multigraphs.
//!
//! A [`Graph`] is parameterised over its node and edge label types so the same
//! structure serves host graphs (total [`HostLabel`]s), interface graphs
//! (partially labelled nodes) and rule graphs (labels are expressions).
//! Parallel edges and loops are allowed; every edge endpoint must name an
//! existing node.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Opaque node or edge identifier.
///
/// Identifiers order "naturally": a trailing run of digits compares by
/// numeric value, so `n2 < n10`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Id(Arc<str>);

impl Id {
    pub fn new(s: impl Into<String>) -> Self {
        Id(s.into().into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn split(&self) -> (&str, &str) {
        let digits = self.0.bytes().rev().take_while(u8::is_ascii_digit).count();
        self.0.split_at(self.0.len() - digits)
    }
}

impl Ord for Id {
    fn cmp(&self, other: &Self) -> Ordering {
        let (pa, da) = self.split();
        let (pb, db) = other.split();
        pa.cmp(pb)
            .then_with(|| {
                let ta = da.trim_start_matches('0');
                let tb = db.trim_start_matches('0');
                ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
            })
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Id {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Id {
    fn from(s: &str) -> Self {
        Id(s.into())
    }
}

impl From<String> for Id {
    fn from(s: String) -> Self {
        Id(s.into())
    }
}

/// One element of a host list: an integer or a character string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Int(i64),
    Str(String),
}

impl Atom {
    pub fn str(s: impl Into<String>) -> Self {
        Atom::Str(s.into())
    }
}

impl From<i64> for Atom {
    fn from(v: i64) -> Self {
        Atom::Int(v)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::Str(s.to_owned())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Int(v) => write!(f, "{v}"),
            Atom::Str(s) => write_quoted(f, s),
        }
    }
}

pub(crate) fn write_quoted(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}

/// Writes a list in concrete syntax: `empty` or atoms joined by `:`.
pub(crate) fn write_list(f: &mut impl fmt::Write, list: &[Atom]) -> fmt::Result {
    if list.is_empty() {
        return f.write_str("empty");
    }
    for (i, atom) in list.iter().enumerate() {
        if i > 0 {
            f.write_char(':')?;
        }
        write!(f, "{atom}")?;
    }
    Ok(())
}

/// A semantic label: a (possibly empty) list of atoms plus a mark.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HostLabel {
    pub list: Vec<Atom>,
    pub mark: bool,
}

impl HostLabel {
    pub fn new(list: Vec<Atom>, mark: bool) -> Self {
        HostLabel { list, mark }
    }

    pub fn unmarked(list: Vec<Atom>) -> Self {
        HostLabel { list, mark: false }
    }

    pub fn empty() -> Self {
        HostLabel::default()
    }

    pub fn int(v: i64) -> Self {
        HostLabel::unmarked(vec![Atom::Int(v)])
    }

    pub fn string(s: &str) -> Self {
        HostLabel::unmarked(vec![Atom::str(s)])
    }

    pub fn marked(mut self) -> Self {
        self.mark = true;
        self
    }
}

impl fmt::Display for HostLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.list)?;
        if self.mark {
            f.write_str(" #")?;
        }
        Ok(())
    }
}

/// Node labels that may be undefined.
pub trait MaybeLabel {
    fn defined(&self) -> Option<&HostLabel>;
}

impl MaybeLabel for HostLabel {
    fn defined(&self) -> Option<&HostLabel> {
        Some(self)
    }
}

impl MaybeLabel for Option<HostLabel> {
    fn defined(&self) -> Option<&HostLabel> {
        self.as_ref()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge<E> {
    pub source: Id,
    pub target: Id,
    pub label: E,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate identifier `{0}`")]
    DuplicateId(Id),
    #[error("unknown node `{0}`")]
    UnknownNode(Id),
    #[error("unknown edge `{0}`")]
    UnknownEdge(Id),
    #[error("node `{0}` still has incident edges")]
    NodeHasEdges(Id),
}

/// A finite directed multigraph with node labels `N` and edge labels `E`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph<N, E = N> {
    nodes: BTreeMap<Id, N>,
    edges: BTreeMap<Id, Edge<E>>,
}

/// Totally labelled graph over the semantic label domain.
pub type HostGraph = Graph<HostLabel>;

/// Graph whose node labels may be undefined; used for rule interfaces.
pub type PartialGraph = Graph<Option<HostLabel>, HostLabel>;

impl<N, E> Default for Graph<N, E> {
    fn default() -> Self {
        Graph {
            nodes: BTreeMap::new(),
            edges: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    In,
    Out,
}

impl<N, E> Graph<N, E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn has_node(&self, id: &Id) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn has_edge(&self, id: &Id) -> bool {
        self.edges.contains_key(id)
    }

    fn id_taken(&self, id: &Id) -> bool {
        self.nodes.contains_key(id) || self.edges.contains_key(id)
    }

    pub fn add_node(&mut self, id: impl Into<Id>, label: N) -> Result<(), GraphError> {
        let id = id.into();
        if self.id_taken(&id) {
            return Err(GraphError::DuplicateId(id));
        }
        self.nodes.insert(id, label);
        Ok(())
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<Id>,
        source: impl Into<Id>,
        target: impl Into<Id>,
        label: E,
    ) -> Result<(), GraphError> {
        let (id, source, target) = (id.into(), source.into(), target.into());
        if self.id_taken(&id) {
            return Err(GraphError::DuplicateId(id));
        }
        for end in [&source, &target] {
            if !self.nodes.contains_key(end) {
                return Err(GraphError::UnknownNode(end.clone()));
            }
        }
        self.edges.insert(
            id,
            Edge {
                source,
                target,
                label,
            },
        );
        Ok(())
    }

    /// Removes an isolated node. Nodes with incident edges are refused so
    /// that no edge is ever left dangling.
    pub fn remove_node(&mut self, id: &Id) -> Result<N, GraphError> {
        if !self.nodes.contains_key(id) {
            return Err(GraphError::UnknownNode(id.clone()));
        }
        if self
            .edges
            .values()
            .any(|e| &e.source == id || &e.target == id)
        {
            return Err(GraphError::NodeHasEdges(id.clone()));
        }
        Ok(self.nodes.remove(id).expect("checked above"))
    }

    pub fn remove_edge(&mut self, id: &Id) -> Result<Edge<E>, GraphError> {
        self.edges
            .remove(id)
            .ok_or_else(|| GraphError::UnknownEdge(id.clone()))
    }

    pub fn node(&self, id: &Id) -> Option<&N> {
        self.nodes.get(id)
    }

    pub fn node_mut(&mut self, id: &Id) -> Option<&mut N> {
        self.nodes.get_mut(id)
    }

    pub fn edge(&self, id: &Id) -> Option<&Edge<E>> {
        self.edges.get(id)
    }

    /// Nodes in identifier order.
    pub fn nodes(&self) -> impl Iterator<Item = (&Id, &N)> + '_ {
        self.nodes.iter()
    }

    /// Edges in identifier order.
    pub fn edges(&self) -> impl Iterator<Item = (&Id, &Edge<E>)> + '_ {
        self.edges.iter()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &Id> + '_ {
        self.nodes.keys()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &Id> + '_ {
        self.edges.keys()
    }

    /// Number of edges entering (`In`) or leaving (`Out`) `node`. A loop
    /// counts once in each direction.
    pub fn degree(&self, node: &Id, direction: Direction) -> Result<usize, GraphError> {
        if !self.nodes.contains_key(node) {
            return Err(GraphError::UnknownNode(node.clone()));
        }
        Ok(self
            .edges
            .values()
            .filter(|e| match direction {
                Direction::In => &e.target == node,
                Direction::Out => &e.source == node,
            })
            .count())
    }

    pub fn indegree(&self, node: &Id) -> Result<usize, GraphError> {
        self.degree(node, Direction::In)
    }

    pub fn outdegree(&self, node: &Id) -> Result<usize, GraphError> {
        self.degree(node, Direction::Out)
    }

    /// Edges with `node` as source or target.
    pub fn incident_edges<'a>(&'a self, node: &'a Id) -> impl Iterator<Item = &'a Id> + 'a {
        self.edges
            .iter()
            .filter(move |(_, e)| &e.source == node || &e.target == node)
            .map(|(id, _)| id)
    }

    /// Applies `f` to every node label, keeping structure and identifiers.
    pub fn map_nodes<M>(&self, mut f: impl FnMut(&Id, &N) -> M) -> Graph<M, E>
    where
        E: Clone,
    {
        Graph {
            nodes: self
                .nodes
                .iter()
                .map(|(id, l)| (id.clone(), f(id, l)))
                .collect(),
            edges: self.edges.clone(),
        }
    }

    pub fn map_labels<M, F>(
        &self,
        mut node_fn: impl FnMut(&Id, &N) -> M,
        mut edge_fn: impl FnMut(&Id, &E) -> F,
    ) -> Graph<M, F> {
        Graph {
            nodes: self
                .nodes
                .iter()
                .map(|(id, l)| (id.clone(), node_fn(id, l)))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(id, e)| {
                    (
                        id.clone(),
                        Edge {
                            source: e.source.clone(),
                            target: e.target.clone(),
                            label: edge_fn(id, &e.label),
                        },
                    )
                })
                .collect(),
        }
    }

    /// Returns an identifier `<prefix><k>` not used in this graph, taking the
    /// smallest `k >= 1`.
    pub fn fresh_id(&self, prefix: &str) -> Id {
        FreshIds::new(prefix).next(self)
    }
}

impl fmt::Display for HostGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (id, label) in self.nodes() {
            write!(f, " ({id}, {label})")?;
        }
        f.write_str(" |")?;
        for (id, e) in self.edges() {
            write!(f, " ({id}, {}, {}, {})", e.source, e.target, e.label)?;
        }
        f.write_str(" ]")
    }
}

impl<N: fmt::Debug, E: fmt::Debug> fmt::Debug for Graph<N, E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("nodes", &self.nodes)
            .field("edges", &self.edges)
            .finish()
    }
}

/// Counter-based generator of fresh identifiers, skipping taken ones.
#[derive(Debug, Clone)]
pub struct FreshIds {
    prefix: String,
    next: u64,
}

impl FreshIds {
    pub fn new(prefix: &str) -> Self {
        FreshIds {
            prefix: prefix.to_owned(),
            next: 1,
        }
    }

    pub fn next<N, E>(&mut self, graph: &Graph<N, E>) -> Id {
        loop {
            let id = Id(format!("{}{}", self.prefix, self.next).into());
            self.next += 1;
            if !graph.id_taken(&id) {
                return id;
            }
        }
    }
}

/// Structure-preserving map between two graphs: sources and targets are
/// preserved, labels need not be.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Premorphism {
    nodes: BTreeMap<Id, Id>,
    edges: BTreeMap<Id, Id>,
    injective: bool,
}

impl Premorphism {
    pub fn new(nodes: BTreeMap<Id, Id>, edges: BTreeMap<Id, Id>) -> Self {
        let injective = nodes.values().collect::<BTreeSet<_>>().len() == nodes.len()
            && edges.values().collect::<BTreeSet<_>>().len() == edges.len();
        Premorphism {
            nodes,
            edges,
            injective,
        }
    }

    pub fn identity<N, E>(graph: &Graph<N, E>) -> Self {
        Premorphism::new(
            graph
                .node_ids()
                .map(|id| (id.clone(), id.clone()))
                .collect(),
            graph
                .edge_ids()
                .map(|id| (id.clone(), id.clone()))
                .collect(),
        )
    }

    pub fn node(&self, id: &Id) -> Option<&Id> {
        self.nodes.get(id)
    }

    pub fn edge(&self, id: &Id) -> Option<&Id> {
        self.edges.get(id)
    }

    pub fn node_map(&self) -> &BTreeMap<Id, Id> {
        &self.nodes
    }

    pub fn edge_map(&self) -> &BTreeMap<Id, Id> {
        &self.edges
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    /// Checks that the map is total on `from`, lands in `to`, and commutes
    /// with sources and targets.
    pub fn preserves_structure<A, B, C, D>(&self, from: &Graph<A, B>, to: &Graph<C, D>) -> bool {
        if self.nodes.len() != from.node_count() || self.edges.len() != from.edge_count() {
            return false;
        }
        let nodes_ok = from
            .node_ids()
            .all(|v| self.nodes.get(v).is_some_and(|image| to.has_node(image)));
        nodes_ok
            && from.edges().all(|(id, e)| {
                let Some(image) = self.edges.get(id).and_then(|img| to.edge(img)) else {
                    return false;
                };
                self.nodes.get(&e.source) == Some(&image.source)
                    && self.nodes.get(&e.target) == Some(&image.target)
            })
    }
}

/// True iff `g` preserves structure and all defined labels from `from` to `to`.
pub fn is_label_preserving_morphism<N: MaybeLabel>(
    g: &Premorphism,
    from: &Graph<N, HostLabel>,
    to: &HostGraph,
) -> bool {
    if !g.preserves_structure(from, to) {
        return false;
    }
    let nodes_ok = from.nodes().all(|(v, label)| match label.defined() {
        None => true,
        Some(l) => to.node(&g.nodes[v]) == Some(l),
    });
    nodes_ok
        && from
            .edges()
            .all(|(e, edge)| to.edge(&g.edges[e]).map(|img| &img.label) == Some(&edge.label))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node_graph(labels: &[i64]) -> HostGraph {
        let mut g = HostGraph::new();
        for (i, l) in labels.iter().enumerate() {
            g.add_node(format!("n{}", i + 1), HostLabel::int(*l))
                .unwrap();
        }
        g
    }

    #[test]
    fn natural_id_order() {
        let mut ids: Vec<Id> = ["n10", "n2", "e1", "n1", "n02"]
            .iter()
            .map(|s| Id::from(*s))
            .collect();
        ids.sort();
        let names: Vec<_> = ids.iter().map(Id::as_str).collect();
        assert_eq!(names, ["e1", "n1", "n02", "n2", "n10"]);
    }

    #[test]
    fn degree_of_isolated_node() {
        let g = node_graph(&[0]);
        assert_eq!(g.indegree(&"n1".into()).unwrap(), 0);
        assert_eq!(g.outdegree(&"n1".into()).unwrap(), 0);
    }

    #[test]
    fn loop_counts_in_both_directions() {
        let mut g = node_graph(&[0]);
        g.add_edge("e1", "n1", "n1", HostLabel::empty()).unwrap();
        assert_eq!(g.indegree(&"n1".into()).unwrap(), 1);
        assert_eq!(g.outdegree(&"n1".into()).unwrap(), 1);
    }

    #[test]
    fn parallel_edges_add_up() {
        let mut g = node_graph(&[0, 0]);
        g.add_edge("e1", "n1", "n2", HostLabel::empty()).unwrap();
        g.add_edge("e2", "n1", "n2", HostLabel::empty()).unwrap();
        assert_eq!(g.indegree(&"n2".into()).unwrap(), 2);
        assert_eq!(g.outdegree(&"n1".into()).unwrap(), 2);
        assert_eq!(g.indegree(&"n1".into()).unwrap(), 0);
    }

    #[test]
    fn degree_of_unknown_node_is_error() {
        let g = node_graph(&[0]);
        assert_eq!(
            g.indegree(&"n9".into()),
            Err(GraphError::UnknownNode("n9".into()))
        );
    }

    #[test]
    fn duplicate_and_dangling_rejected() {
        let mut g = node_graph(&[0]);
        assert!(matches!(
            g.add_node("n1", HostLabel::empty()),
            Err(GraphError::DuplicateId(_))
        ));
        assert!(matches!(
            g.add_edge("e1", "n1", "n7", HostLabel::empty()),
            Err(GraphError::UnknownNode(_))
        ));
        g.add_edge("e1", "n1", "n1", HostLabel::empty()).unwrap();
        assert!(matches!(
            g.remove_node(&"n1".into()),
            Err(GraphError::NodeHasEdges(_))
        ));
    }

    #[test]
    fn fresh_ids_skip_collisions() {
        let g = node_graph(&[0, 0]);
        assert_eq!(g.fresh_id("n"), Id::from("n3"));
        assert_eq!(g.fresh_id("e"), Id::from("e1"));
    }

    #[test]
    fn identity_is_label_preserving() {
        let mut g = node_graph(&[1, 2]);
        g.add_edge("e1", "n1", "n2", HostLabel::string("x"))
            .unwrap();
        let id = Premorphism::identity(&g);
        assert!(id.is_injective());
        assert!(is_label_preserving_morphism(&id, &g, &g));
    }

    #[test]
    fn label_mismatch_is_not_a_morphism() {
        let a = node_graph(&[1]);
        let b = node_graph(&[2]);
        let g = Premorphism::new(
            [("n1".into(), "n1".into())].into_iter().collect(),
            BTreeMap::new(),
        );
        assert!(g.preserves_structure(&a, &b));
        assert!(!is_label_preserving_morphism(&g, &a, &b));
    }

    #[test]
    fn permuted_triangles() {
        // a: n1 -> n2 -> n3 -> n1, labels 1, 2, 3
        let mut a = node_graph(&[1, 2, 3]);
        a.add_edge("e1", "n1", "n2", HostLabel::empty()).unwrap();
        a.add_edge("e2", "n2", "n3", HostLabel::empty()).unwrap();
        a.add_edge("e3", "n3", "n1", HostLabel::empty()).unwrap();
        // b: same triangle with ids rotated (x_k holds label k)
        let mut b = HostGraph::new();
        b.add_node("x3", HostLabel::int(1)).unwrap();
        b.add_node("x1", HostLabel::int(2)).unwrap();
        b.add_node("x2", HostLabel::int(3)).unwrap();
        b.add_edge("f9", "x3", "x1", HostLabel::empty()).unwrap();
        b.add_edge("f7", "x1", "x2", HostLabel::empty()).unwrap();
        b.add_edge("f8", "x2", "x3", HostLabel::empty()).unwrap();
        let g = Premorphism::new(
            [("n1", "x3"), ("n2", "x1"), ("n3", "x2")]
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
            [("e1", "f9"), ("e2", "f7"), ("e3", "f8")]
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
        );
        assert!(is_label_preserving_morphism(&g, &a, &b));
        // a rotation that breaks the labels
        let bad = Premorphism::new(
            [("n1", "x1"), ("n2", "x2"), ("n3", "x3")]
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
            [("e1", "f7"), ("e2", "f8"), ("e3", "f9")]
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
        );
        assert!(bad.preserves_structure(&a, &b));
        assert!(!is_label_preserving_morphism(&bad, &a, &b));
    }

    #[test]
    fn partial_labels_are_unconstrained() {
        let host = node_graph(&[5]);
        let mut k = PartialGraph::new();
        k.add_node("n1", None).unwrap();
        let g = Premorphism::identity(&k);
        assert!(is_label_preserving_morphism(&g, &k, &host));
    }

    #[test]
    fn display_format() {
        let mut g = HostGraph::new();
        g.add_node(
            "n1",
            HostLabel::unmarked(vec![0.into(), 1.into(), 2.into()]),
        )
        .unwrap();
        g.add_node("n2", HostLabel::string("ok").marked()).unwrap();
        g.add_edge("e1", "n1", "n2", HostLabel::empty()).unwrap();
        assert_eq!(
            g.to_string(),
            r#"[ (n1, 0:1:2) (n2, "ok" #) | (e1, n1, n2, empty) ]"#
        );
        assert_eq!(HostGraph::new().to_string(), "[ | ]");
        assert_eq!(HostLabel::string("a\"b\\").to_string(), r#""a\"b\\""#);
    }
}
