#![allow(dead_code)]

pub mod inference;

use gp2::exec::{run_one, Budget, Executable, RunOutcome};
use gp2::graph::{Atom, HostGraph, HostLabel};
use gp2::iso::GraphSet;
use gp2::syntax::parse_program;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn executable(src: &str) -> Executable {
    Executable::from_program(&parse_program(src).expect("parses")).expect("checks")
}

pub fn labels() -> Vec<HostLabel> {
    vec![
        HostLabel::empty(),
        HostLabel::int(0),
        HostLabel::string("a"),
    ]
}

/// Every graph with at most three nodes and three edges over `labels()`,
/// one per isomorphism class.
pub fn small_hosts() -> Vec<HostGraph> {
    let ls = labels();
    let mut set = GraphSet::new();
    for n in 0..=3usize {
        let kinds: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|s| (0..n).flat_map(move |t| (0..3).map(move |l| (s, t, l))))
            .collect();
        for node_labels in nondecreasing(3, n) {
            for edge_kinds in (0..=3).flat_map(|m| nondecreasing(kinds.len(), m)) {
                let mut g = HostGraph::new();
                for (i, &l) in node_labels.iter().enumerate() {
                    g.add_node(format!("n{i}"), ls[l].clone()).unwrap();
                }
                for (k, &e) in edge_kinds.iter().enumerate() {
                    let (s, t, l) = kinds[e];
                    g.add_edge(
                        format!("e{k}"),
                        format!("n{s}"),
                        format!("n{t}"),
                        ls[l].clone(),
                    )
                    .unwrap();
                }
                set.insert(g);
            }
        }
    }
    set.into_vec()
}

/// All nondecreasing sequences of length `len` over `0..base`.
fn nondecreasing(base: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for mut prefix in nondecreasing(base, len - 1) {
        let from = prefix.last().copied().unwrap_or(0);
        for x in from..base {
            prefix.push(x);
            out.push(prefix.clone());
            prefix.pop();
        }
    }
    out
}

pub fn random_graph(rng: &mut impl Rng, max_nodes: usize, max_edges: usize) -> HostGraph {
    let ls = labels();
    let n = rng.gen_range(0..=max_nodes);
    let mut g = HostGraph::new();
    for i in 0..n {
        g.add_node(format!("n{i}"), ls.choose(rng).unwrap().clone())
            .unwrap();
    }
    if n > 0 {
        for k in 0..rng.gen_range(0..=max_edges) {
            let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
            g.add_edge(
                format!("e{k}"),
                format!("n{s}"),
                format!("n{t}"),
                ls.choose(rng).unwrap().clone(),
            )
            .unwrap();
        }
    }
    g
}

/// A connected graph with balanced degrees and atomic labels: one closed
/// walk through every node.
pub fn random_eulerian(rng: &mut impl Rng, max_nodes: usize, max_edges: usize) -> HostGraph {
    let n = rng.gen_range(1..=max_nodes);
    let mut walk: Vec<usize> = (0..n).collect();
    walk.shuffle(rng);
    let extra = rng.gen_range(0..=max_edges.saturating_sub(n));
    for _ in 0..extra {
        let at = rng.gen_range(0..=walk.len());
        walk.insert(at, rng.gen_range(0..n));
    }
    let atoms = [Atom::str("a"), Atom::str("b"), Atom::Int(0), Atom::Int(7)];
    let mut g = HostGraph::new();
    for i in 0..n {
        let a = atoms.choose(rng).unwrap().clone();
        g.add_node(format!("n{i}"), HostLabel::unmarked(vec![a]))
            .unwrap();
    }
    if walk.len() > 1 || rng.gen_bool(0.5) {
        for k in 0..walk.len() {
            let (s, t) = (walk[k], walk[(k + 1) % walk.len()]);
            let a = atoms.choose(rng).unwrap().clone();
            g.add_edge(
                format!("e{k}"),
                format!("n{s}"),
                format!("n{t}"),
                HostLabel::unmarked(vec![a]),
            )
            .unwrap();
        }
    }
    g
}

/// A series-parallel graph built by composition, with empty labels.
pub fn random_series_parallel(rng: &mut impl Rng, edges: usize) -> HostGraph {
    // nodes 0 and 1 are the terminals
    fn build(
        rng: &mut impl Rng,
        edges: usize,
        s: usize,
        t: usize,
        next: &mut usize,
        out: &mut Vec<(usize, usize)>,
    ) {
        if edges == 1 {
            out.push((s, t));
            return;
        }
        let left = rng.gen_range(1..edges);
        if rng.gen_bool(0.5) {
            let mid = *next;
            *next += 1;
            build(rng, left, s, mid, next, out);
            build(rng, edges - left, mid, t, next, out);
        } else {
            build(rng, left, s, t, next, out);
            build(rng, edges - left, s, t, next, out);
        }
    }
    let mut next = 2;
    let mut es = Vec::new();
    build(rng, edges.max(1), 0, 1, &mut next, &mut es);
    let mut g = HostGraph::new();
    for i in 0..next {
        g.add_node(format!("n{i}"), HostLabel::empty()).unwrap();
    }
    for (k, (s, t)) in es.into_iter().enumerate() {
        g.add_edge(
            format!("e{k}"),
            format!("n{s}"),
            format!("n{t}"),
            HostLabel::empty(),
        )
        .unwrap();
    }
    g
}

/// The verdict node added by a deciding program: `Some(true)` for "yes".
pub fn decision(exe: &Executable, host: &HostGraph, seed: u64) -> Option<bool> {
    let budget = Budget {
        seed,
        ..Budget::default()
    };
    let RunOutcome::Graph(h) = run_one(exe, host, budget, false).outcome else {
        return None;
    };
    if h.node_count() != host.node_count() + 1 {
        return None;
    }
    let count = |s: &str| {
        h.nodes()
            .filter(|(_, l)| **l == HostLabel::string(s))
            .count()
            - host
                .nodes()
                .filter(|(_, l)| **l == HostLabel::string(s))
                .count()
    };
    match (count("yes"), count("no")) {
        (1, 0) => Some(true),
        (0, 1) => Some(false),
        _ => None,
    }
}

use gp2::graph::{Id, Premorphism};
use gp2::label::{Assignment, Env, ListExpr, RuleLabel, VarType};
use gp2::rule::{apply_at, find_matches, infer_assignment, validate, RuleGraph, RuleSchema};
use std::collections::{BTreeMap, BTreeSet};

fn pick<T: Clone>(rng: &mut impl Rng, xs: &[T]) -> T {
    xs.choose(rng).unwrap().clone()
}

/// A random valid rule schema with up to four left nodes and no condition.
pub fn random_schema(rng: &mut ChaRng) -> RuleSchema {
    loop {
        let mut left = RuleGraph::new();
        let mut vars = Vec::new();
        let n = rng.gen_range(1..=4);
        let mut fresh = 0;
        let mut left_label = |rng: &mut ChaRng, vars: &mut Vec<ListExpr>| {
            if rng.gen_bool(0.7) {
                fresh += 1;
                let v = ListExpr::var(&format!("x{fresh}"), VarType::List);
                vars.push(v.clone());
                v
            } else {
                pick(
                    rng,
                    &[ListExpr::Int(0), ListExpr::string("a"), ListExpr::Empty],
                )
            }
        };
        for i in 1..=n {
            let l = left_label(rng, &mut vars);
            left.add_node(i.to_string(), RuleLabel::unmarked(l))
                .unwrap();
        }
        for k in 0..rng.gen_range(0..=3) {
            let (s, t) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            let l = left_label(rng, &mut vars);
            left.add_edge(
                format!("e{k}"),
                s.to_string(),
                t.to_string(),
                RuleLabel::unmarked(l),
            )
            .unwrap();
        }
        let interface: Vec<Id> = (1..=n)
            .filter(|_| rng.gen_bool(0.6))
            .map(|i| Id::from(i.to_string()))
            .collect();
        let mut right = RuleGraph::new();
        let right_label = |rng: &mut ChaRng| {
            let base = if !vars.is_empty() && rng.gen_bool(0.7) {
                pick(rng, &vars)
            } else {
                pick(
                    rng,
                    &[ListExpr::Int(1), ListExpr::string("b"), ListExpr::Empty],
                )
            };
            if rng.gen_bool(0.3) {
                ListExpr::cons(base, ListExpr::Int(9))
            } else {
                base
            }
        };
        let mut right_nodes: Vec<String> =
            interface.iter().map(|i| i.as_str().to_owned()).collect();
        for j in 0..rng.gen_range(0..=2) {
            right_nodes.push(format!("r{j}"));
        }
        for v in &right_nodes {
            right
                .add_node(v.clone(), RuleLabel::unmarked(right_label(rng)))
                .unwrap();
        }
        if !right_nodes.is_empty() {
            for k in 0..rng.gen_range(0..=3) {
                let (s, t) = (pick(rng, &right_nodes), pick(rng, &right_nodes));
                right
                    .add_edge(format!("f{k}"), s, t, RuleLabel::unmarked(right_label(rng)))
                    .unwrap();
            }
        }
        let schema = RuleSchema::new("r", left, interface, right);
        if validate(&schema).is_empty() {
            return schema;
        }
    }
}

type ChaRng = rand_chacha::ChaCha8Rng;

/// Every injective structure-preserving premorphism from `left` into `host`.
pub fn premorphisms(left: &RuleGraph, host: &HostGraph) -> Vec<Premorphism> {
    fn nodes(
        ln: &[Id],
        k: usize,
        host: &HostGraph,
        map: &mut BTreeMap<Id, Id>,
        left: &RuleGraph,
        out: &mut Vec<Premorphism>,
    ) {
        if k == ln.len() {
            let le: Vec<Id> = left.edge_ids().cloned().collect();
            edges(&le, 0, host, map, &mut BTreeMap::new(), left, out);
            return;
        }
        for v in host.node_ids() {
            if map.values().any(|w| w == v) {
                continue;
            }
            map.insert(ln[k].clone(), v.clone());
            nodes(ln, k + 1, host, map, left, out);
            map.remove(&ln[k]);
        }
    }
    fn edges(
        le: &[Id],
        k: usize,
        host: &HostGraph,
        nmap: &BTreeMap<Id, Id>,
        emap: &mut BTreeMap<Id, Id>,
        left: &RuleGraph,
        out: &mut Vec<Premorphism>,
    ) {
        if k == le.len() {
            out.push(Premorphism::new(nmap.clone(), emap.clone()));
            return;
        }
        let e = left.edge(&le[k]).unwrap();
        for (id, he) in host.edges() {
            if emap.values().any(|x| x == id)
                || he.source != nmap[&e.source]
                || he.target != nmap[&e.target]
            {
                continue;
            }
            emap.insert(le[k].clone(), id.clone());
            edges(le, k + 1, host, nmap, emap, left, out);
            emap.remove(&le[k]);
        }
    }
    let ln: Vec<Id> = left.node_ids().cloned().collect();
    let mut out = Vec::new();
    nodes(&ln, 0, host, &mut BTreeMap::new(), left, &mut out);
    out
}

/// Applies `schema` at every structural premorphism into `host` and checks
/// the rewriting laws on each result. Returns the number of applications.
pub fn check_dpo(schema: &RuleSchema, host: &HostGraph) -> Result<usize, String> {
    let deleted: Vec<&Id> = schema.deleted_nodes().collect();
    let added = schema
        .right
        .node_ids()
        .filter(|v| !schema.interface.contains(*v))
        .count();
    let found: Vec<Premorphism> = find_matches(schema, host, &mut Vec::new())
        .into_iter()
        .map(|m| m.morphism)
        .collect();
    let mut applied = 0;
    for g in premorphisms(&schema.left, host) {
        let image_edges: BTreeSet<&Id> = g.edge_map().values().collect();
        let image_nodes: BTreeSet<&Id> = g.node_map().values().collect();
        let dangling = deleted.iter().any(|v| {
            host.incident_edges(&g.node_map()[*v])
                .any(|e| !image_edges.contains(e))
        });
        let result = apply_at(schema, host, &g);
        if found.contains(&g) != result.is_ok() {
            return Err(format!("match search and application disagree at {g:?}"));
        }
        let h = match result {
            Ok(_) if dangling => return Err(format!("dangling match applied at {g:?}")),
            Ok(h) => h,
            Err(_) => continue,
        };
        applied += 1;
        if h.node_count() + deleted.len() != host.node_count() + added {
            return Err(format!("node count law fails at {g:?}"));
        }
        if h.edge_count() + schema.left.edge_count()
            != host.edge_count() + schema.right.edge_count()
        {
            return Err(format!("edge count law fails at {g:?}"));
        }
        for (id, l) in host.nodes() {
            if !image_nodes.contains(id) && h.node(id) != Some(l) {
                return Err(format!("unmatched node `{id}` changed at {g:?}"));
            }
        }
        for (id, e) in host.edges() {
            if !image_edges.contains(id) && h.edge(id) != Some(e) {
                return Err(format!("unmatched edge `{id}` changed at {g:?}"));
            }
        }
        for v in &schema.interface {
            if !h.has_node(&g.node_map()[v]) {
                return Err(format!("interface node `{v}` lost at {g:?}"));
            }
        }
    }
    Ok(applied)
}

const INT_VARS: [&str; 2] = ["n", "m"];
const STR_VARS: [&str; 2] = ["s", "t"];
const ATOM_VARS: [&str; 2] = ["a", "b"];

fn random_item(rng: &mut ChaRng) -> ListExpr {
    match rng.gen_range(0..7) {
        0 => ListExpr::Int(rng.gen_range(-1..=1)),
        1 => ListExpr::string(pick(rng, &["a", "b", "ab"])),
        2 => ListExpr::var(pick(rng, &ATOM_VARS), VarType::Atom),
        3 => ListExpr::var(pick(rng, &INT_VARS), VarType::Int),
        4 => ListExpr::neg(ListExpr::var(pick(rng, &INT_VARS), VarType::Int)),
        5 => ListExpr::var(pick(rng, &STR_VARS), VarType::Str),
        _ => {
            let piece = |rng: &mut ChaRng| {
                if rng.gen_bool(0.5) {
                    ListExpr::var(pick(rng, &STR_VARS), VarType::Str)
                } else {
                    ListExpr::string(pick(rng, &["a", "b"]))
                }
            };
            let first = piece(rng);
            ListExpr::concat(first, piece(rng))
        }
    }
}

/// A random simple left-hand label.
pub fn random_simple_label(rng: &mut ChaRng) -> ListExpr {
    loop {
        let mut items: Vec<ListExpr> = (0..rng.gen_range(0..=4))
            .map(|_| random_item(rng))
            .collect();
        if rng.gen_bool(0.5) {
            let at = rng.gen_range(0..=items.len());
            items.insert(at, ListExpr::var("x", VarType::List));
        }
        let e = ListExpr::list(items);
        if e.is_simple() && e.type_of().is_ok() {
            return e;
        }
    }
}

fn host_atoms() -> Vec<Atom> {
    vec![
        Atom::Int(0),
        Atom::Int(1),
        Atom::Int(-1),
        Atom::str("a"),
        Atom::str("b"),
        Atom::str("ab"),
        Atom::str(""),
    ]
}

fn eval(e: &ListExpr, alpha: &Assignment) -> Option<Vec<Atom>> {
    Env::new(&Premorphism::default(), alpha, &HostGraph::new())
        .list(e)
        .ok()
}

/// A host label of length at most six: either random or an instance of `e`.
pub fn random_host_list(rng: &mut ChaRng, e: &ListExpr) -> Vec<Atom> {
    let atoms = host_atoms();
    if rng.gen_bool(0.5) {
        let mut alpha = Assignment::new();
        for (name, ty) in e.vars() {
            alpha = match ty {
                VarType::Int => alpha.with_int(&name, rng.gen_range(-1..=1)),
                VarType::Str => alpha.with_string(&name, pick(rng, &["", "a", "b", "ab"])),
                VarType::Atom => alpha.with_atom(&name, pick(rng, &atoms)),
                VarType::List => {
                    let len = rng.gen_range(0..=2);
                    alpha.with_list(&name, (0..len).map(|_| pick(rng, &atoms)).collect())
                }
            };
        }
        if let Some(l) = eval(e, &alpha).filter(|l| l.len() <= 6) {
            return l;
        }
    }
    let len = rng.gen_range(0..=6);
    (0..len).map(|_| pick(rng, &atoms)).collect()
}

/// Every assignment `alpha` of the variables of `e` with `e^alpha = h`, by
/// enumeration over the values that can occur in `h`.
pub fn brute_force_assignments(e: &ListExpr, h: &[Atom]) -> Vec<Assignment> {
    let mut ints: BTreeSet<i64> = BTreeSet::new();
    let mut strings: BTreeSet<String> = BTreeSet::from([String::new()]);
    for a in h {
        match a {
            Atom::Int(v) => {
                ints.insert(*v);
                ints.extend(v.checked_neg());
            }
            Atom::Str(s) => {
                let cs: Vec<char> = s.chars().collect();
                for i in 0..=cs.len() {
                    for j in i..=cs.len() {
                        strings.insert(cs[i..j].iter().collect());
                    }
                }
            }
        }
    }
    let sublists: Vec<Vec<Atom>> = (0..=h.len())
        .flat_map(|i| (i..=h.len()).map(move |j| h[i..j].to_vec()))
        .collect();
    let vars: Vec<(String, VarType)> = e.vars().into_iter().collect();
    let mut partial = vec![Assignment::new()];
    for (name, ty) in &vars {
        partial = partial
            .into_iter()
            .flat_map(|alpha| -> Vec<Assignment> {
                match ty {
                    VarType::Int => ints
                        .iter()
                        .map(|&v| alpha.clone().with_int(name, v))
                        .collect(),
                    VarType::Str => strings
                        .iter()
                        .map(|s| alpha.clone().with_string(name, s))
                        .collect(),
                    VarType::Atom => h
                        .iter()
                        .map(|a| alpha.clone().with_atom(name, a.clone()))
                        .collect(),
                    VarType::List => sublists
                        .iter()
                        .map(|l| alpha.clone().with_list(name, l.clone()))
                        .collect(),
                }
            })
            .collect();
    }
    let mut out: Vec<Assignment> = Vec::new();
    for alpha in partial {
        if eval(e, &alpha).as_deref() == Some(h) && !out.contains(&alpha) {
            out.push(alpha);
        }
    }
    out
}

/// Compares inference with enumeration on one label pair.
pub fn check_assignment(e: &ListExpr, h: &[Atom]) -> Result<(), String> {
    let mut left = RuleGraph::new();
    left.add_node("1", RuleLabel::unmarked(e.clone())).unwrap();
    let mut host = HostGraph::new();
    host.add_node("n1", HostLabel::unmarked(h.to_vec()))
        .unwrap();
    let g = Premorphism::new(
        BTreeMap::from([(Id::from("1"), Id::from("n1"))]),
        BTreeMap::new(),
    );
    let inferred = infer_assignment(&left, &g, &host);
    let all = brute_force_assignments(e, h);
    let shown = HostLabel::unmarked(h.to_vec());
    if all.len() > 1 {
        return Err(format!(
            "`{e}` against `{shown}` has {} solutions",
            all.len()
        ));
    }
    if inferred.as_ref() != all.first() {
        return Err(format!(
            "`{e}` against `{shown}`: inferred {inferred:?}, enumerated {all:?}"
        ));
    }
    Ok(())
}
