//! Isomorphism of host graphs and containers that deduplicate up to it.
//!
//! Nodes are partitioned by (label, indegree, outdegree) and a bijection is
//! searched by backtracking within partitions, checking the multiset of edge
//! labels between every pair of already-mapped nodes.

use std::hash::{Hash, Hasher};

use rustc_hash::{FxHashMap, FxHasher};

use crate::graph::{HostGraph, HostLabel, Id};

struct Indexed<'a> {
    signatures: Vec<(&'a HostLabel, usize, usize)>,
    /// `(source, target)` of every edge, sorted, with labels in `labels`
    pairs: Vec<(usize, usize)>,
    labels: Vec<&'a HostLabel>,
}

impl<'a> Indexed<'a> {
    fn new(g: &'a HostGraph) -> Self {
        // node ids iterate in sorted order
        let ids: Vec<&Id> = g.node_ids().collect();
        let index = |v: &Id| ids.binary_search(&v).expect("edge endpoints are nodes");
        let mut indeg = vec![0; ids.len()];
        let mut outdeg = vec![0; ids.len()];
        let mut edges: Vec<(usize, usize, &HostLabel)> = g
            .edges()
            .map(|(_, e)| {
                let (s, t) = (index(&e.source), index(&e.target));
                outdeg[s] += 1;
                indeg[t] += 1;
                (s, t, &e.label)
            })
            .collect();
        edges.sort_unstable();
        let signatures = g
            .nodes()
            .enumerate()
            .map(|(i, (_, l))| (l, indeg[i], outdeg[i]))
            .collect();
        Indexed {
            signatures,
            pairs: edges.iter().map(|&(s, t, _)| (s, t)).collect(),
            labels: edges.into_iter().map(|(_, _, l)| l).collect(),
        }
    }

    fn between(&self, s: usize, t: usize) -> &[&'a HostLabel] {
        let from = self.pairs.partition_point(|&p| p < (s, t));
        let to = self.pairs.partition_point(|&p| p <= (s, t));
        &self.labels[from..to]
    }
}

/// True iff there is a bijective, label-preserving morphism between `a` and `b`.
pub fn isomorphic(a: &HostGraph, b: &HostGraph) -> bool {
    if a.node_count() != b.node_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    if a == b {
        return true;
    }
    let ia = Indexed::new(a);
    let ib = Indexed::new(b);
    let mut sa = ia.signatures.clone();
    let mut sb = ib.signatures.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let mut ea: Vec<_> = a.edges().map(|(_, e)| &e.label).collect();
    let mut eb: Vec<_> = b.edges().map(|(_, e)| &e.label).collect();
    ea.sort();
    eb.sort();
    if ea != eb {
        return false;
    }

    // map rare signatures first
    let mut class_size: FxHashMap<_, usize> = FxHashMap::default();
    for s in &sa {
        *class_size.entry(*s).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..ia.signatures.len()).collect();
    order.sort_by_key(|&i| (class_size[&ia.signatures[i]], i));

    let mut mapping = vec![usize::MAX; order.len()];
    let mut used = vec![false; order.len()];
    extend(&ia, &ib, &order, 0, &mut mapping, &mut used)
}

fn extend(
    a: &Indexed,
    b: &Indexed,
    order: &[usize],
    depth: usize,
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&i) = order.get(depth) else {
        return true;
    };
    for j in 0..b.signatures.len() {
        if used[j] || a.signatures[i] != b.signatures[j] {
            continue;
        }
        if a.between(i, i) != b.between(j, j) {
            continue;
        }
        let consistent = order[..depth].iter().all(|&k| {
            let fk = mapping[k];
            a.between(i, k) == b.between(j, fk) && a.between(k, i) == b.between(fk, j)
        });
        if !consistent {
            continue;
        }
        mapping[i] = j;
        used[j] = true;
        if extend(a, b, order, depth + 1, mapping, used) {
            return true;
        }
        used[j] = false;
        mapping[i] = usize::MAX;
    }
    false
}

/// A hash that agrees on isomorphic graphs.
pub fn invariant_hash(g: &HostGraph) -> u64 {
    let ix = Indexed::new(g);
    let mut nodes = ix.signatures.clone();
    nodes.sort();
    let mut edges: Vec<_> = ix
        .pairs
        .iter()
        .zip(&ix.labels)
        .map(|(&(s, t), l)| (*l, ix.signatures[s], ix.signatures[t], s == t))
        .collect();
    edges.sort();
    let mut h = FxHasher::default();
    nodes.hash(&mut h);
    edges.hash(&mut h);
    h.finish()
}

/// Map keyed by `(K, graph up to isomorphism)`.
#[derive(Debug, Clone)]
pub struct IsoMap<K, V> {
    buckets: FxHashMap<(K, u64), Vec<(HostGraph, V)>>,
    len: usize,
}

impl<K, V> Default for IsoMap<K, V> {
    fn default() -> Self {
        IsoMap {
            buckets: FxHashMap::default(),
            len: 0,
        }
    }
}

impl<K: Hash + Eq + Clone, V> IsoMap<K, V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, key: &K, graph: &HostGraph) -> Option<&V> {
        self.get_hashed(key, graph, invariant_hash(graph))
    }

    pub(crate) fn get_hashed(&self, key: &K, graph: &HostGraph, hash: u64) -> Option<&V> {
        self.buckets
            .get(&(key.clone(), hash))?
            .iter()
            .find(|(g, _)| isomorphic(g, graph))
            .map(|(_, v)| v)
    }

    /// Inserts unless an isomorphic entry exists; returns the stored value
    /// and whether it was newly inserted.
    pub fn get_or_insert_with(
        &mut self,
        key: K,
        graph: &HostGraph,
        make: impl FnOnce() -> V,
    ) -> (&V, bool) {
        self.get_or_insert_hashed(key, graph, invariant_hash(graph), make)
    }

    pub(crate) fn get_or_insert_hashed(
        &mut self,
        key: K,
        graph: &HostGraph,
        hash: u64,
        make: impl FnOnce() -> V,
    ) -> (&V, bool) {
        let bucket = self.buckets.entry((key, hash)).or_default();
        if let Some(pos) = bucket.iter().position(|(g, _)| isomorphic(g, graph)) {
            return (&bucket[pos].1, false);
        }
        bucket.push((graph.clone(), make()));
        self.len += 1;
        (&bucket.last().expect("just pushed").1, true)
    }

    pub fn insert(&mut self, key: K, graph: &HostGraph, value: V) -> bool {
        self.get_or_insert_with(key, graph, || value).1
    }
}

/// Set of host graphs holding one representative per isomorphism class, in
/// insertion order.
#[derive(Debug, Clone, Default)]
pub struct GraphSet {
    graphs: Vec<HostGraph>,
    index: IsoMap<(), usize>,
}

impl GraphSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns true if `g` was not yet represented.
    pub fn insert(&mut self, g: HostGraph) -> bool {
        let next = self.graphs.len();
        let (_, fresh) = self.index.get_or_insert_with((), &g, || next);
        if fresh {
            self.graphs.push(g);
        }
        fresh
    }

    pub fn contains(&self, g: &HostGraph) -> bool {
        self.index.get(&(), g).is_some()
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &HostGraph> + '_ {
        self.graphs.iter()
    }

    pub fn into_vec(self) -> Vec<HostGraph> {
        self.graphs
    }

    /// Equality of the represented isomorphism classes.
    pub fn same_classes(&self, other: &GraphSet) -> bool {
        self.len() == other.len() && self.graphs.iter().all(|g| other.contains(g))
    }
}

impl FromIterator<HostGraph> for GraphSet {
    fn from_iter<T: IntoIterator<Item = HostGraph>>(iter: T) -> Self {
        let mut set = GraphSet::new();
        for g in iter {
            set.insert(g);
        }
        set
    }
}
