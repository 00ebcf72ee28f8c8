use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Graph, Id};
use crate::label::{Condition, ListExpr, RuleLabel, VarType};
use crate::syntax::{Span, Violation};

/// Graph labelled with rule-schema label expressions.
pub type RuleGraph = Graph<RuleLabel>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// A conditional rule schema `L <- K -> R` with condition.
///
/// The interface `K` is the set of node identifiers shared by both sides; its
/// nodes are unlabelled, so their images are relabelled on application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSchema {
    pub name: String,
    pub vars: Vec<(String, VarType)>,
    pub left: RuleGraph,
    pub interface: BTreeSet<Id>,
    pub right: RuleGraph,
    pub condition: Option<Condition>,
    pub span: Span,
    /// Source positions of individual nodes and edges, when parsed.
    pub item_spans: BTreeMap<(Side, Id), Span>,
}

impl RuleSchema {
    pub fn new(
        name: &str,
        left: RuleGraph,
        interface: impl IntoIterator<Item = Id>,
        right: RuleGraph,
    ) -> Self {
        let mut vars = BTreeSet::new();
        for g in [&left, &right] {
            for e in label_exprs(g) {
                vars.extend(e.vars());
            }
        }
        RuleSchema {
            name: name.to_owned(),
            vars: vars.into_iter().collect(),
            left,
            interface: interface.into_iter().collect(),
            right,
            condition: None,
            span: Span::default(),
            item_spans: BTreeMap::new(),
        }
    }

    pub fn with_condition(mut self, c: Condition) -> Self {
        for v in c.vars() {
            if !self.vars.contains(&v) {
                self.vars.push(v);
            }
        }
        self.condition = Some(c);
        self
    }

    /// The identity rule on the empty graph.
    pub fn null() -> Self {
        RuleSchema::new("null", RuleGraph::new(), [], RuleGraph::new())
    }

    /// Left nodes outside the interface, deleted on application.
    pub fn deleted_nodes(&self) -> impl Iterator<Item = &Id> + '_ {
        self.left
            .node_ids()
            .filter(|v| !self.interface.contains(*v))
    }

    fn locate(&self, side: Side, id: &Id) -> Span {
        self.item_spans
            .get(&(side, id.clone()))
            .copied()
            .unwrap_or(self.span)
    }
}

fn label_exprs(g: &RuleGraph) -> impl Iterator<Item = &ListExpr> + '_ {
    g.nodes()
        .map(|(_, l)| &l.expr)
        .chain(g.edges().map(|(_, e)| &e.label.expr))
}

fn graph_vars(g: &RuleGraph) -> BTreeSet<(String, VarType)> {
    label_exprs(g).flat_map(ListExpr::vars).collect()
}

/// Static well-formedness of a rule schema; an empty list means valid.
pub fn validate(schema: &RuleSchema) -> Vec<Violation> {
    let mut out = Vec::new();
    let rule = &schema.name;
    let mut report =
        |span: Span, msg: String| out.push(Violation::new(span, format!("rule `{rule}`: {msg}")));

    let mut declared: BTreeMap<&str, VarType> = BTreeMap::new();
    for (name, ty) in &schema.vars {
        if let Some(prev) = declared.insert(name, *ty) {
            report(
                schema.span,
                format!("variable `{name}` declared twice ({prev} and {ty})"),
            );
        }
    }

    for v in &schema.interface {
        if !schema.left.has_node(v) {
            report(
                schema.span,
                format!("interface node `{v}` is missing from the left graph"),
            );
        }
        if !schema.right.has_node(v) {
            report(
                schema.span,
                format!("interface node `{v}` is missing from the right graph"),
            );
        }
    }
    for v in schema.left.node_ids() {
        if schema.right.has_node(v) && !schema.interface.contains(v) {
            report(
                schema.locate(Side::Left, v),
                format!("node `{v}` occurs on both sides but is not in the interface"),
            );
        }
    }

    let check_label = |side: Side, id: &Id, l: &RuleLabel, report: &mut dyn FnMut(Span, String)| {
        let span = schema.locate(side, id);
        if let Err(e) = l.expr.type_of() {
            report(span, format!("ill-typed label of `{id}`: {e}"));
        }
        for (name, ty) in l.expr.vars() {
            if declared.get(name.as_str()) != Some(&ty) {
                report(span, format!("variable `{name}` is not declared as {ty}"));
            }
        }
        for n in l.expr.degree_nodes() {
            if !schema.left.has_node(&n) {
                report(
                    span,
                    format!("degree of `{n}` which is not a left-hand node"),
                );
            }
        }
        if side == Side::Left && !l.expr.is_simple() {
            report(
                span,
                format!("left-hand label `{}` of `{id}` is not simple", l.expr),
            );
        }
    };
    for (side, graph) in [(Side::Left, &schema.left), (Side::Right, &schema.right)] {
        for (id, l) in graph.nodes() {
            check_label(side, id, l, &mut report);
        }
        for (id, e) in graph.edges() {
            check_label(side, id, &e.label, &mut report);
        }
    }

    let left_vars = graph_vars(&schema.left);
    for (name, _) in graph_vars(&schema.right) {
        if !left_vars.iter().any(|(n, _)| *n == name) {
            report(
                schema.span,
                format!("variable `{name}` occurs in the right graph but not in the left graph"),
            );
        }
    }

    if let Some(c) = &schema.condition {
        for e in c.type_errors() {
            report(schema.span, format!("ill-typed condition: {e}"));
        }
        for (name, ty) in c.vars() {
            if declared.get(name.as_str()) != Some(&ty) {
                report(
                    schema.span,
                    format!("variable `{name}` is not declared as {ty}"),
                );
            }
            if !left_vars.iter().any(|(n, _)| *n == name) {
                report(
                    schema.span,
                    format!("variable `{name}` occurs in the condition but not in the left graph"),
                );
            }
        }
        for n in c.node_refs() {
            if !schema.left.has_node(&n) {
                report(
                    schema.span,
                    format!("condition refers to `{n}` which is not a left-hand node"),
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Direction;

    fn node_rule(left: ListExpr, right: ListExpr) -> RuleSchema {
        let mut l = RuleGraph::new();
        l.add_node("1", RuleLabel::unmarked(left)).unwrap();
        let mut r = RuleGraph::new();
        r.add_node("1", RuleLabel::unmarked(right)).unwrap();
        RuleSchema::new("r", l, ["1".into()], r)
    }

    #[test]
    fn null_rule_is_valid() {
        assert!(validate(&RuleSchema::null()).is_empty());
    }

    #[test]
    fn right_variable_missing_on_left() {
        let r = node_rule(ListExpr::Int(1), ListExpr::var("n", VarType::Int));
        let v = validate(&r);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].message.contains("not in the left graph"));
    }

    #[test]
    fn non_simple_left_label() {
        let xy = ListExpr::cons(
            ListExpr::var("x", VarType::List),
            ListExpr::var("y", VarType::List),
        );
        let r = node_rule(xy.clone(), xy);
        let v = validate(&r);
        assert!(v.iter().any(|v| v.message.contains("not simple")), "{v:?}");
    }

    #[test]
    fn arithmetic_allowed_on_the_right_only() {
        let n = || ListExpr::var("n", VarType::Int);
        let sq = ListExpr::arith(crate::label::ArithOp::Mul, n(), n());
        assert!(validate(&node_rule(n(), sq.clone())).is_empty());
        assert!(!validate(&node_rule(sq, n())).is_empty());
    }

    #[test]
    fn degree_of_created_node_rejected() {
        let mut r = node_rule(ListExpr::Empty, ListExpr::Empty);
        r.right
            .add_node(
                "2",
                RuleLabel::unmarked(ListExpr::Degree(Direction::In, "2".into())),
            )
            .unwrap();
        let v = validate(&r);
        assert!(
            v.iter().any(|v| v.message.contains("not a left-hand node")),
            "{v:?}"
        );
    }

    #[test]
    fn interface_must_be_on_both_sides() {
        let mut l = RuleGraph::new();
        l.add_node("1", RuleLabel::unmarked(ListExpr::Empty))
            .unwrap();
        let r = RuleSchema::new("r", l, ["1".into()], RuleGraph::new());
        assert_eq!(validate(&r).len(), 1);
    }

    #[test]
    fn condition_checks() {
        let r = node_rule(ListExpr::var("n", VarType::Int), ListExpr::Empty).with_condition(
            Condition::and(
                Condition::Rel(
                    crate::label::RelOp::Gt,
                    ListExpr::var("n", VarType::Int),
                    ListExpr::string("a"),
                ),
                Condition::Edge("1".into(), "9".into(), None),
            ),
        );
        let v = validate(&r);
        assert_eq!(v.len(), 2, "{v:?}");
    }
}
