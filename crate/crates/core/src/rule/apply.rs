use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use thiserror::Error;

use super::matching::{dangling_ok, find_matches, try_infer_assignment};
use super::schema::{RuleGraph, RuleSchema};
use crate::graph::{
    is_label_preserving_morphism, FreshIds, HostGraph, Id, PartialGraph, Premorphism,
};
use crate::iso::GraphSet;
use crate::label::{Assignment, Env, EvalError};

/// A rule over host labels: `L <- K -> R` where `K` carries no node labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub left: HostGraph,
    pub interface: PartialGraph,
    pub right: HostGraph,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApplyError {
    #[error("the premorphism is not an injective label-preserving morphism")]
    NotAMorphism,
    #[error("the dangling condition fails")]
    Dangling,
    #[error("the rule condition does not hold")]
    ConditionFalse,
    #[error("no assignment makes the premorphism label-preserving")]
    NoAssignment,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Instantiates `schema` under `alpha`. Degree operators are evaluated in
/// `host` through `g`, so the instance is specific to this match.
pub fn instantiate(
    schema: &RuleSchema,
    host: &HostGraph,
    g: &Premorphism,
    alpha: &Assignment,
) -> Result<RuleInstance, EvalError> {
    let env = Env::new(g, alpha, host);
    let eval = |side: &RuleGraph| -> Result<HostGraph, EvalError> {
        let mut out = HostGraph::new();
        for (id, l) in side.nodes() {
            out.add_node(id.clone(), env.label(l)?)
                .expect("ids are distinct");
        }
        for (id, e) in side.edges() {
            out.add_edge(
                id.clone(),
                e.source.clone(),
                e.target.clone(),
                env.label(&e.label)?,
            )
            .expect("rule graph is well formed");
        }
        Ok(out)
    };
    let left = eval(&schema.left)?;
    let right = eval(&schema.right)?;
    let mut interface = PartialGraph::new();
    for v in &schema.interface {
        interface
            .add_node(v.clone(), None)
            .expect("interface ids are distinct");
    }
    Ok(RuleInstance {
        left,
        interface,
        right,
    })
}

/// Applies a rule instance along `g`, checking that `g` is an injective
/// label-preserving morphism satisfying the dangling condition.
///
/// All matched edges are deleted together with the matched non-interface
/// nodes; then the nodes of `R - K` and every edge of `R` are added with
/// fresh identifiers, and interface images take their labels from `R`.
pub fn apply_rule(
    rule: &RuleInstance,
    host: &HostGraph,
    g: &Premorphism,
) -> Result<HostGraph, ApplyError> {
    if !g.is_injective() || !is_label_preserving_morphism(g, &rule.left, host) {
        return Err(ApplyError::NotAMorphism);
    }
    let kept: BTreeSet<&Id> = rule.interface.node_ids().collect();
    let matched_edges: BTreeSet<&Id> = g.edge_map().values().collect();
    let deleted: Vec<&Id> = rule
        .left
        .node_ids()
        .filter(|v| !kept.contains(v))
        .map(|v| &g.node_map()[v])
        .collect();
    for v in &deleted {
        if host.incident_edges(v).any(|e| !matched_edges.contains(e)) {
            return Err(ApplyError::Dangling);
        }
    }

    let mut out = host.clone();
    for e in &matched_edges {
        out.remove_edge(e).expect("matched edge exists");
    }
    for v in deleted {
        out.remove_node(v).expect("no incident edges remain");
    }

    let mut image: std::collections::BTreeMap<&Id, Id> = std::collections::BTreeMap::new();
    for v in &kept {
        let h = g.node_map()[*v].clone();
        *out.node_mut(&h).expect("interface image kept") =
            rule.right.node(v).cloned().expect("interface in R");
        image.insert(v, h);
    }
    let mut fresh_nodes = FreshIds::new("n");
    for (v, l) in rule.right.nodes() {
        if kept.contains(v) {
            continue;
        }
        let id = fresh_nodes.next(&out);
        out.add_node(id.clone(), l.clone()).expect("fresh id");
        image.insert(v, id);
    }
    let mut fresh_edges = FreshIds::new("e");
    for (_, e) in rule.right.edges() {
        let id = fresh_edges.next(&out);
        out.add_edge(
            id,
            image[&e.source].clone(),
            image[&e.target].clone(),
            e.label.clone(),
        )
        .expect("fresh id, endpoints present");
    }
    Ok(out)
}

/// Applies `schema` at the match `g` with assignment `alpha`. The match is
/// re-validated: labels, dangling condition and rule condition must hold.
pub fn apply(
    schema: &RuleSchema,
    host: &HostGraph,
    g: &Premorphism,
    alpha: &Assignment,
) -> Result<HostGraph, ApplyError> {
    if !g.is_injective() || !g.preserves_structure(&schema.left, host) {
        return Err(ApplyError::NotAMorphism);
    }
    if !dangling_ok(schema, host, g) {
        return Err(ApplyError::Dangling);
    }
    if let Some(c) = &schema.condition {
        if !Env::new(g, alpha, host).condition(c)? {
            return Err(ApplyError::ConditionFalse);
        }
    }
    let rule = instantiate(schema, host, g, alpha)?;
    apply_rule(&rule, host, g)
}

/// Applies `schema` at `g`, inferring the assignment.
pub fn apply_at(
    schema: &RuleSchema,
    host: &HostGraph,
    g: &Premorphism,
) -> Result<HostGraph, ApplyError> {
    let alpha = try_infer_assignment(&schema.left, g, host)?.ok_or(ApplyError::NoAssignment)?;
    apply(schema, host, g, &alpha)
}

/// Every result of applying one of `rules` to `host`, up to isomorphism.
pub fn apply_ruleset_all(
    rules: &[&RuleSchema],
    host: &HostGraph,
    warnings: &mut Vec<String>,
) -> GraphSet {
    let mut out = GraphSet::new();
    for r in rules {
        for m in find_matches(r, host, warnings) {
            match apply(r, host, &m.morphism, &m.assignment) {
                Ok(h) => {
                    out.insert(h);
                }
                Err(e) => warnings.push(format!("rule `{}`: {e}", r.name)),
            }
        }
    }
    out
}

/// One result of applying a rule from `rules`, or `None` if none applies.
/// Without a random source the first match of the first applicable rule is
/// used; otherwise a uniformly random applicable rule and then a uniformly
/// random match of it.
pub fn apply_ruleset_one(
    rules: &[&RuleSchema],
    host: &HostGraph,
    rng: Option<&mut dyn RngCore>,
    warnings: &mut Vec<String>,
) -> Option<HostGraph> {
    let mut candidates: Vec<(&RuleSchema, Vec<super::Match>)> = rules
        .iter()
        .map(|r| (*r, find_matches(r, host, warnings)))
        .filter(|(_, ms)| !ms.is_empty())
        .collect();
    let (rule, m) = match rng {
        None => {
            let (r, mut ms) = candidates.into_iter().next()?;
            (r, ms.swap_remove(0))
        }
        Some(rng) => {
            if candidates.is_empty() {
                return None;
            }
            let i = rng.gen_range(0..candidates.len());
            let (r, ms) = candidates.swap_remove(i);
            let m = ms.choose(rng).cloned().expect("nonempty");
            (r, m)
        }
    };
    match apply(rule, host, &m.morphism, &m.assignment) {
        Ok(h) => Some(h),
        Err(e) => {
            warnings.push(format!("rule `{}`: {e}", rule.name));
            None
        }
    }
}
