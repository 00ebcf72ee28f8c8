//! Reference graph algorithms, independent of the rewriting engine, plus the
//! example programs they check.

use std::collections::{BTreeMap, HashSet};

use crate::graph::{Atom, HostGraph, HostLabel, Id};
use crate::iso::isomorphic;

/// Example programs in concrete syntax.
pub mod corpus {
    pub const CONNECTED: &str = include_str!("../corpus/connected.gp");
    pub const ACYCLIC: &str = include_str!("../corpus/acyclic.gp");
    pub const SERIES_PARALLEL: &str = include_str!("../corpus/series_parallel.gp");
    pub const EULERIAN: &str = include_str!("../corpus/eulerian.gp");
    pub const EULER_CYCLE: &str = include_str!("../corpus/euler_cycle.gp");
    /// Rules for expressing `or` through `if`.
    pub const OR_ELIMINATION: &str = include_str!("../corpus/or_elimination.gp");

    pub const ALL: [(&str, &str); 6] = [
        ("connected", CONNECTED),
        ("acyclic", ACYCLIC),
        ("series_parallel", SERIES_PARALLEL),
        ("eulerian", EULERIAN),
        ("euler_cycle", EULER_CYCLE),
        ("or_elimination", OR_ELIMINATION),
    ];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub property: &'static str,
    pub holds: bool,
    pub witness: Option<String>,
}

impl OracleVerdict {
    fn valid(property: &'static str) -> Self {
        OracleVerdict {
            property,
            holds: true,
            witness: None,
        }
    }

    fn invalid(property: &'static str, witness: String) -> Self {
        OracleVerdict {
            property,
            holds: false,
            witness: Some(witness),
        }
    }
}

/// Nodes as dense indices, edges as index pairs.
fn indexed(g: &HostGraph) -> (usize, Vec<(usize, usize)>) {
    let pos: BTreeMap<&Id, usize> = g.node_ids().enumerate().map(|(i, v)| (v, i)).collect();
    let edges = g
        .edges()
        .map(|(_, e)| (pos[&e.source], pos[&e.target]))
        .collect();
    (pos.len(), edges)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Undirected connectivity; the empty graph is connected.
pub fn oracle_connected(g: &HostGraph) -> bool {
    let (n, edges) = indexed(g);
    let mut parent: Vec<usize> = (0..n).collect();
    let mut components = n;
    for (s, t) in edges {
        let (a, b) = (find(&mut parent, s), find(&mut parent, t));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components <= 1
}

/// No directed cycle (loops included), by Kahn's algorithm.
pub fn oracle_acyclic(g: &HostGraph) -> bool {
    let (n, edges) = indexed(g);
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(s, t) in &edges {
        indeg[t] += 1;
        out[s].push(t);
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = ready.pop() {
        removed += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(w);
            }
        }
    }
    removed == n
}

pub fn oracle_eulerian(g: &HostGraph) -> bool {
    oracle_connected(g)
        && g.node_ids()
            .all(|v| g.indegree(v).ok() == g.outdegree(v).ok())
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct SpState {
    nodes: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl SpState {
    fn normalised(mut self) -> Self {
        self.nodes.sort_unstable();
        self.edges.sort_unstable();
        self
    }

    fn is_base(&self) -> bool {
        self.nodes.len() == 2 && self.edges.len() == 1 && self.edges[0].0 != self.edges[0].1
    }

    fn reductions(&self) -> Vec<SpState> {
        let mut out = Vec::new();
        // (a) a node whose only edges are one incoming i and one outgoing o
        // with s(i) != t(o)
        for &v in &self.nodes {
            let incident: Vec<usize> = (0..self.edges.len())
                .filter(|&k| self.edges[k].0 == v || self.edges[k].1 == v)
                .collect();
            let [a, b] = incident[..] else { continue };
            let (i, o) = match (self.edges[a], self.edges[b]) {
                ((s, t), _) if s == t => continue,
                (_, (s, t)) if s == t => continue,
                ((_, t), _) if t == v => (a, b),
                _ => (b, a),
            };
            let (u, w) = (self.edges[i].0, self.edges[o].1);
            if self.edges[i].1 != v || self.edges[o].0 != v || u == w {
                continue;
            }
            let mut edges: Vec<_> = (0..self.edges.len())
                .filter(|&k| k != i && k != o)
                .map(|k| self.edges[k])
                .collect();
            edges.push((u, w));
            let nodes = self.nodes.iter().copied().filter(|&x| x != v).collect();
            out.push(SpState { nodes, edges }.normalised());
        }
        // (b) two parallel edges between distinct nodes
        for k in 1..self.edges.len() {
            let (s, t) = self.edges[k];
            if s != t && self.edges[k - 1] == (s, t) {
                let mut edges = self.edges.clone();
                edges.remove(k);
                out.push(SpState {
                    nodes: self.nodes.clone(),
                    edges,
                });
            }
        }
        out
    }
}

const SP_EXHAUSTIVE_EDGES: usize = 8;

/// Reducibility to a base graph (two nodes joined by one edge). All
/// reduction orders are explored on small graphs; larger graphs are reduced
/// greedily.
pub fn oracle_series_parallel(g: &HostGraph) -> bool {
    let (n, edges) = indexed(g);
    let start = SpState {
        nodes: (0..n).collect(),
        edges,
    }
    .normalised();
    if start.edges.len() > SP_EXHAUSTIVE_EDGES {
        let mut s = start;
        while let Some(next) = s.reductions().into_iter().next() {
            s = next;
        }
        return s.is_base();
    }
    let mut seen = HashSet::new();
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        if s.is_base() {
            return true;
        }
        for r in s.reductions() {
            if seen.insert(r.clone()) {
                stack.push(r);
            }
        }
    }
    false
}

/// Splits an edge label into its original atom and an integer numbering.
fn split_numbering(label: &HostLabel) -> Option<(Atom, Vec<i64>)> {
    let (first, rest) = label.list.split_first()?;
    let numbering = rest
        .iter()
        .map(|a| match a {
            Atom::Int(v) => Some(*v),
            Atom::Str(_) => None,
        })
        .collect::<Option<Vec<i64>>>()?;
    Some((first.clone(), numbering))
}

/// Checks the output of the Euler-cycle program: stripping the numbering
/// from edge labels gives back `original`, numberings are distinct, and
/// taking edges in lexicographic order of their numberings is a closed walk.
pub fn validate_euler_numbering(result: &HostGraph, original: &HostGraph) -> OracleVerdict {
    const P: &str = "euler numbering";
    let mut stripped = result.clone();
    let mut order: Vec<(Vec<i64>, &Id)> = Vec::new();
    for (id, e) in result.edges() {
        let Some((atom, numbering)) = split_numbering(&e.label) else {
            return OracleVerdict::invalid(
                P,
                format!("edge `{id}` label `{}` is not atom:numbering", e.label),
            );
        };
        if numbering.is_empty() {
            return OracleVerdict::invalid(P, format!("edge `{id}` is not numbered"));
        }
        let old = stripped.remove_edge(id).expect("edge exists");
        stripped
            .add_edge(
                id.clone(),
                old.source,
                old.target,
                HostLabel::new(vec![atom], e.label.mark),
            )
            .expect("re-adding an edge");
        order.push((numbering, id));
    }
    if !isomorphic(&stripped, original) {
        return OracleVerdict::invalid(P, "graph without numbering differs from the input".into());
    }
    order.sort();
    for w in order.windows(2) {
        if w[0].0 == w[1].0 {
            return OracleVerdict::invalid(
                P,
                format!("edges `{}` and `{}` share a numbering", w[0].1, w[1].1),
            );
        }
    }
    for k in 0..order.len() {
        let e = result.edge(order[k].1).expect("edge exists");
        let next = result
            .edge(order[(k + 1) % order.len()].1)
            .expect("edge exists");
        if e.target != next.source {
            return OracleVerdict::invalid(
                P,
                format!(
                    "edge `{}` is not followed by an edge leaving `{}`",
                    order[k].1, e.target
                ),
            );
        }
    }
    OracleVerdict::valid(P)
}

/// The numbering lists of a numbered result, in edge order.
pub fn euler_numberings(result: &HostGraph) -> Vec<Vec<i64>> {
    result
        .edges()
        .filter_map(|(_, e)| split_numbering(&e.label).map(|(_, n)| n))
        .collect()
}

/// Shape of a hierarchical numbering: one top-level cycle `1:1 .. 1:m`, and
/// each inserted cycle numbered `p:1 .. p:k` below an existing numbering `p`.
pub fn hierarchical_numbering(numberings: &[Vec<i64>]) -> bool {
    let all: HashSet<&[i64]> = numberings.iter().map(Vec::as_slice).collect();
    if all.len() != numberings.len() {
        return false;
    }
    let mut children: BTreeMap<&[i64], Vec<i64>> = BTreeMap::new();
    for n in numberings {
        let Some((&last, parent)) = n.split_last() else {
            return false;
        };
        if n.len() < 2 || n[0] != 1 || (parent.len() > 1 && !all.contains(parent)) {
            return false;
        }
        children.entry(parent).or_default().push(last);
    }
    children.into_values().all(|mut ks| {
        ks.sort_unstable();
        ks.iter().zip(1..).all(|(&k, i)| k == i)
    })
}
