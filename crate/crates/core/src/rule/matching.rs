//! Match enumeration and assignment inference.
//!
//! Left-hand labels are simple, so each host label can be unified with its
//! pattern deterministically: positional atoms bind individually, the single
//! list variable absorbs the residue of a list, and the single string
//! variable in a string expression absorbs the residue of a string.

use std::collections::{BTreeMap, BTreeSet};

use super::schema::{RuleGraph, RuleSchema};
use crate::graph::{Atom, HostGraph, HostLabel, Id, Premorphism};
use crate::label::{Assignment, Env, EvalError, ListExpr, RuleLabel, VarType};

/// An applicable occurrence of a rule schema: the premorphism and the unique
/// assignment that makes it label-preserving.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub morphism: Premorphism,
    pub assignment: Assignment,
}

struct Unifier<'a> {
    morphism: &'a Premorphism,
    host: &'a HostGraph,
    alpha: Assignment,
}

impl<'a> Unifier<'a> {
    fn env(&self) -> Env<'_> {
        Env::new(self.morphism, &self.alpha, self.host)
    }

    fn is_ground(&self, e: &ListExpr) -> bool {
        e.vars().iter().all(|(n, t)| self.alpha.is_bound(n, *t))
    }

    /// Number of atoms `e` stands for, if determined by the current bindings.
    fn width(&self, e: &ListExpr) -> Option<usize> {
        match e {
            ListExpr::Empty => Some(0),
            ListExpr::Var(n, VarType::List) => self.alpha.value(n, VarType::List).map(|v| v.len()),
            _ => Some(1),
        }
    }

    fn unify_label(&mut self, pattern: &RuleLabel, value: &HostLabel) -> Result<bool, EvalError> {
        Ok(pattern.mark == value.mark && self.unify_list(&pattern.expr, &value.list)?)
    }

    fn unify_list(&mut self, e: &ListExpr, value: &[Atom]) -> Result<bool, EvalError> {
        let items: Vec<&ListExpr> = e
            .cons_items()
            .into_iter()
            .filter(|i| !matches!(i, ListExpr::Empty))
            .collect();
        let widths: Vec<Option<usize>> = items.iter().map(|i| self.width(i)).collect();
        let unknown: Vec<usize> = (0..items.len()).filter(|&i| widths[i].is_none()).collect();
        match unknown.as_slice() {
            [] => {
                if widths.iter().map(|w| w.unwrap_or(0)).sum::<usize>() != value.len() {
                    return Ok(false);
                }
                let mut at = 0;
                for (item, w) in items.iter().zip(&widths) {
                    let w = w.unwrap_or(0);
                    if !self.unify_item(item, &value[at..at + w])? {
                        return Ok(false);
                    }
                    at += w;
                }
                Ok(true)
            }
            [u] => {
                let u = *u;
                let prefix: usize = widths[..u].iter().map(|w| w.unwrap_or(0)).sum();
                let suffix: usize = widths[u + 1..].iter().map(|w| w.unwrap_or(0)).sum();
                if prefix + suffix > value.len() {
                    return Ok(false);
                }
                let mut at = 0;
                for (item, w) in items[..u].iter().zip(&widths[..u]) {
                    let w = w.unwrap_or(0);
                    if !self.unify_item(item, &value[at..at + w])? {
                        return Ok(false);
                    }
                    at += w;
                }
                let mut end = value.len();
                for (item, w) in items[u + 1..].iter().zip(&widths[u + 1..]).rev() {
                    let w = w.unwrap_or(0);
                    if !self.unify_item(item, &value[end - w..end])? {
                        return Ok(false);
                    }
                    end -= w;
                }
                self.unify_item(items[u], &value[prefix..value.len() - suffix])
            }
            // more than one unbound list variable: not simple
            _ => Ok(false),
        }
    }

    fn unify_item(&mut self, e: &ListExpr, value: &[Atom]) -> Result<bool, EvalError> {
        match (e, value) {
            (ListExpr::Var(n, VarType::List), v) => Ok(self.alpha.bind(n, VarType::List, v)),
            (_, [atom]) => self.unify_atom(e, atom),
            _ => Ok(false),
        }
    }

    fn unify_atom(&mut self, e: &ListExpr, atom: &Atom) -> Result<bool, EvalError> {
        if self.is_ground(e) {
            return Ok(self.env().list(e)? == std::slice::from_ref(atom));
        }
        match e {
            ListExpr::Var(n, t) => Ok(self.alpha.bind(n, *t, std::slice::from_ref(atom))),
            ListExpr::Neg(inner) => match atom {
                Atom::Int(v) => match v.checked_neg() {
                    Some(neg) => self.unify_atom(inner, &Atom::Int(neg)),
                    None => Ok(false),
                },
                Atom::Str(_) => Ok(false),
            },
            ListExpr::Concat(..) => match atom {
                Atom::Str(s) => self.unify_string(e, s),
                Atom::Int(_) => Ok(false),
            },
            _ => Ok(false),
        }
    }

    fn unify_string(&mut self, e: &ListExpr, s: &str) -> Result<bool, EvalError> {
        let pieces = e.concat_pieces();
        let mut unknown = None;
        for (i, p) in pieces.iter().enumerate() {
            if self.is_ground(p) {
                continue;
            }
            match p {
                ListExpr::Var(_, VarType::Str) if unknown.is_none() => unknown = Some(i),
                _ => return Ok(false),
            }
        }
        let env = self.env();
        let text = |ps: &[&ListExpr]| -> Result<String, EvalError> {
            ps.iter().map(|p| env.string(p)).collect()
        };
        let Some(u) = unknown else {
            return Ok(text(&pieces)? == s);
        };
        let (before, after) = (text(&pieces[..u])?, text(&pieces[u + 1..])?);
        let middle = s
            .strip_prefix(before.as_str())
            .and_then(|rest| rest.strip_suffix(after.as_str()));
        match (middle, pieces[u]) {
            (Some(m), ListExpr::Var(n, VarType::Str)) => {
                Ok(self.alpha.bind(n, VarType::Str, &[Atom::str(m)]))
            }
            _ => Ok(false),
        }
    }
}

/// Unifies every left-hand label with the label of its image. Errors come
/// from evaluating ground subterms.
pub(crate) fn try_infer_assignment(
    left: &RuleGraph,
    g: &Premorphism,
    host: &HostGraph,
) -> Result<Option<Assignment>, EvalError> {
    let mut u = Unifier {
        morphism: g,
        host,
        alpha: Assignment::new(),
    };
    for (id, pattern) in left.nodes() {
        let Some(value) = g.node(id).and_then(|img| host.node(img)) else {
            return Ok(None);
        };
        if !u.unify_label(pattern, value)? {
            return Ok(None);
        }
    }
    for (id, edge) in left.edges() {
        let Some(value) = g.edge(id).and_then(|img| host.edge(img)) else {
            return Ok(None);
        };
        if !u.unify_label(&edge.label, &value.label)? {
            return Ok(None);
        }
    }
    // the instance must reproduce the host labels exactly
    let env = Env::new(g, &u.alpha, host);
    for (id, pattern) in left.nodes() {
        if host.node(&g.node(id).expect("checked")) != Some(&env.label(pattern)?) {
            return Ok(None);
        }
    }
    for (id, edge) in left.edges() {
        let img = host.edge(g.edge(id).expect("checked")).expect("checked");
        if img.label != env.label(&edge.label)? {
            return Ok(None);
        }
    }
    Ok(Some(u.alpha))
}

/// The unique assignment making `g` a label-preserving morphism from the
/// instantiated left graph into `host`, if one exists.
pub fn infer_assignment(left: &RuleGraph, g: &Premorphism, host: &HostGraph) -> Option<Assignment> {
    try_infer_assignment(left, g, host).ok().flatten()
}

struct Search<'a> {
    schema: &'a RuleSchema,
    host: &'a HostGraph,
    left_nodes: Vec<(&'a Id, &'a RuleLabel)>,
    left_edges: Vec<(&'a Id, &'a crate::graph::Edge<RuleLabel>)>,
    host_nodes: Vec<(&'a Id, &'a HostLabel)>,
    node_map: BTreeMap<Id, Id>,
    edge_map: BTreeMap<Id, Id>,
    used_nodes: BTreeSet<&'a Id>,
    used_edges: BTreeSet<&'a Id>,
    deleted: BTreeSet<&'a Id>,
    out: Vec<Match>,
    warnings: &'a mut Vec<String>,
}

impl<'a> Search<'a> {
    fn nodes(&mut self, depth: usize) {
        let Some(&(lid, label)) = self.left_nodes.get(depth) else {
            self.edges(0);
            return;
        };
        for i in 0..self.host_nodes.len() {
            let (hid, hlabel) = self.host_nodes[i];
            if self.used_nodes.contains(hid) || hlabel.mark != label.mark {
                continue;
            }
            // deleted nodes must not lose edges outside the match; check the
            // degree bound early
            if self.deleted.contains(lid) {
                let incident = self.host.incident_edges(hid).count();
                let in_left = self
                    .left_edges
                    .iter()
                    .filter(|(_, e)| &e.source == lid || &e.target == lid)
                    .count();
                if incident != in_left {
                    continue;
                }
            }
            self.used_nodes.insert(hid);
            self.node_map.insert(lid.clone(), hid.clone());
            self.nodes(depth + 1);
            self.node_map.remove(lid);
            self.used_nodes.remove(hid);
        }
    }

    fn edges(&mut self, depth: usize) {
        let Some(&(lid, edge)) = self.left_edges.get(depth) else {
            self.complete();
            return;
        };
        let source = self.node_map[&edge.source].clone();
        let target = self.node_map[&edge.target].clone();
        let host = self.host;
        for (hid, he) in host.edges() {
            if he.source != source
                || he.target != target
                || self.used_edges.contains(hid)
                || he.label.mark != edge.label.mark
            {
                continue;
            }
            self.used_edges.insert(hid);
            self.edge_map.insert(lid.clone(), hid.clone());
            self.edges(depth + 1);
            self.edge_map.remove(lid);
            self.used_edges.remove(hid);
        }
    }

    fn complete(&mut self) {
        let g = Premorphism::new(self.node_map.clone(), self.edge_map.clone());
        if !dangling_ok(self.schema, self.host, &g) {
            return;
        }
        let alpha = match try_infer_assignment(&self.schema.left, &g, self.host) {
            Ok(Some(a)) => a,
            Ok(None) => return,
            Err(e) => {
                self.warn(&g, &e);
                return;
            }
        };
        if let Some(c) = &self.schema.condition {
            match Env::new(&g, &alpha, self.host).condition(c) {
                Ok(true) => {}
                Ok(false) => return,
                Err(e) => {
                    self.warn(&g, &e);
                    return;
                }
            }
        }
        self.out.push(Match {
            morphism: g,
            assignment: alpha,
        });
    }

    fn warn(&mut self, g: &Premorphism, e: &EvalError) {
        let at: Vec<String> = g
            .node_map()
            .iter()
            .map(|(l, h)| format!("{l}->{h}"))
            .collect();
        self.warnings.push(format!(
            "rule `{}`: match {{{}}} discarded: {e}",
            self.schema.name,
            at.join(", ")
        ));
    }
}

/// No deleted node may be incident to an edge outside the image of `L`.
pub(crate) fn dangling_ok(schema: &RuleSchema, host: &HostGraph, g: &Premorphism) -> bool {
    let matched: BTreeSet<&Id> = g.edge_map().values().collect();
    schema.deleted_nodes().all(|v| {
        let image = &g.node_map()[v];
        host.incident_edges(image).all(|e| matched.contains(e))
    })
}

/// All matches of `schema` in `host`, in deterministic order. Candidate
/// matches whose labels or condition fail to evaluate are dropped and
/// reported in `warnings`.
pub fn find_matches(
    schema: &RuleSchema,
    host: &HostGraph,
    warnings: &mut Vec<String>,
) -> Vec<Match> {
    if schema.left.node_count() > host.node_count() || schema.left.edge_count() > host.edge_count()
    {
        return Vec::new();
    }
    let mut search = Search {
        schema,
        host,
        left_nodes: schema.left.nodes().collect(),
        left_edges: schema.left.edges().collect(),
        host_nodes: host.nodes().collect(),
        node_map: BTreeMap::new(),
        edge_map: BTreeMap::new(),
        used_nodes: BTreeSet::new(),
        used_edges: BTreeSet::new(),
        deleted: schema.deleted_nodes().collect(),
        out: Vec::new(),
        warnings,
    };
    search.nodes(0);
    search.out
}

/// All matches of `schema` in `host`, in deterministic order.
pub fn enumerate_matches(schema: &RuleSchema, host: &HostGraph) -> Vec<Match> {
    find_matches(schema, host, &mut Vec::new())
}
