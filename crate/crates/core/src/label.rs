//! Rule-schema label expressions and conditions, their typing, and their
//! evaluation under a premorphism and an assignment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{write_quoted, Atom, Direction, HostGraph, HostLabel, Id, Premorphism};

/// Declared type of a rule-schema variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarType {
    Int,
    Str,
    Atom,
    List,
}

impl VarType {
    pub fn keyword(self) -> &'static str {
        match self {
            VarType::Int => "int",
            VarType::Str => "string",
            VarType::Atom => "atom",
            VarType::List => "list",
        }
    }

    /// Subtype order: int, string <= atom <= list.
    pub fn is_subtype_of(self, other: VarType) -> bool {
        use VarType::*;
        matches!(
            (self, other),
            (Int, Int) | (Str, Str) | (Int | Str | Atom, Atom) | (_, List)
        )
    }
}

impl fmt::Display for VarType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            ArithOp::Add | ArithOp::Sub => 2,
            ArithOp::Mul | ArithOp::Div => 3,
        }
    }
}

/// A label expression of a rule schema.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ListExpr {
    Empty,
    Int(i64),
    Str(String),
    Var(String, VarType),
    Neg(Box<ListExpr>),
    Arith(ArithOp, Box<ListExpr>, Box<ListExpr>),
    Degree(Direction, Id),
    /// String concatenation `.`
    Concat(Box<ListExpr>, Box<ListExpr>),
    /// List concatenation `:`
    Cons(Box<ListExpr>, Box<ListExpr>),
}

impl ListExpr {
    pub fn var(name: &str, ty: VarType) -> Self {
        ListExpr::Var(name.to_owned(), ty)
    }

    pub fn string(s: &str) -> Self {
        ListExpr::Str(s.to_owned())
    }

    pub fn neg(e: ListExpr) -> Self {
        ListExpr::Neg(Box::new(e))
    }

    pub fn arith(op: ArithOp, a: ListExpr, b: ListExpr) -> Self {
        ListExpr::Arith(op, Box::new(a), Box::new(b))
    }

    pub fn concat(a: ListExpr, b: ListExpr) -> Self {
        ListExpr::Concat(Box::new(a), Box::new(b))
    }

    pub fn cons(a: ListExpr, b: ListExpr) -> Self {
        ListExpr::Cons(Box::new(a), Box::new(b))
    }

    /// Right-nested `:` chain of the given items; `empty` for none.
    pub fn list(items: impl IntoIterator<Item = ListExpr>) -> Self {
        let mut items: Vec<_> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return ListExpr::Empty;
        };
        while let Some(prev) = items.pop() {
            acc = ListExpr::cons(prev, acc);
        }
        acc
    }

    /// The operands of a `:` chain, left to right.
    pub fn cons_items(&self) -> Vec<&ListExpr> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a ListExpr, out: &mut Vec<&'a ListExpr>) {
            match e {
                ListExpr::Cons(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// The operands of a `.` chain, left to right.
    pub fn concat_pieces(&self) -> Vec<&ListExpr> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a ListExpr, out: &mut Vec<&'a ListExpr>) {
            match e {
                ListExpr::Concat(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    fn children(&self) -> Vec<&ListExpr> {
        match self {
            ListExpr::Neg(a) => vec![a],
            ListExpr::Arith(_, a, b) | ListExpr::Concat(a, b) | ListExpr::Cons(a, b) => vec![a, b],
            _ => vec![],
        }
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a ListExpr)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Variables occurring in the expression with their declared types.
    pub fn vars(&self) -> BTreeSet<(String, VarType)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let ListExpr::Var(n, t) = e {
                out.insert((n.clone(), *t));
            }
        });
        out
    }

    /// Node identifiers referenced by `indeg`/`outdeg`.
    pub fn degree_nodes(&self) -> BTreeSet<Id> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let ListExpr::Degree(_, n) = e {
                out.insert(n.clone());
            }
        });
        out
    }

    pub fn has_arith(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= matches!(e, ListExpr::Arith(..)));
        found
    }

    /// Infers the most specific type of a well-typed expression.
    pub fn type_of(&self) -> Result<VarType, TypeError> {
        let need = |e: &ListExpr, want: VarType| -> Result<(), TypeError> {
            let got = e.type_of()?;
            if got.is_subtype_of(want) {
                Ok(())
            } else {
                Err(TypeError {
                    expr: e.to_string(),
                    expected: want,
                    found: got,
                })
            }
        };
        Ok(match self {
            ListExpr::Empty => VarType::List,
            ListExpr::Int(_) | ListExpr::Degree(..) => VarType::Int,
            ListExpr::Str(_) => VarType::Str,
            ListExpr::Var(_, t) => *t,
            ListExpr::Neg(a) => {
                need(a, VarType::Int)?;
                VarType::Int
            }
            ListExpr::Arith(_, a, b) => {
                need(a, VarType::Int)?;
                need(b, VarType::Int)?;
                VarType::Int
            }
            ListExpr::Concat(a, b) => {
                need(a, VarType::Str)?;
                need(b, VarType::Str)?;
                VarType::Str
            }
            ListExpr::Cons(a, b) => {
                a.type_of()?;
                b.type_of()?;
                VarType::List
            }
        })
    }

    /// Whether the expression may appear in a left-hand graph: no arithmetic,
    /// at most one list variable, and at most one string variable in each
    /// maximal string subexpression.
    pub fn is_simple(&self) -> bool {
        if self.has_arith() {
            return false;
        }
        let mut list_vars = 0;
        self.visit(&mut |e| {
            if matches!(e, ListExpr::Var(_, VarType::List)) {
                list_vars += 1;
            }
        });
        list_vars <= 1 && self.strings_simple()
    }

    fn strings_simple(&self) -> bool {
        match self {
            ListExpr::Concat(..) => {
                let mut n = 0;
                self.visit(&mut |e| {
                    if matches!(e, ListExpr::Var(_, VarType::Str)) {
                        n += 1;
                    }
                });
                n <= 1
            }
            other => other.children().into_iter().all(ListExpr::strings_simple),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            ListExpr::Cons(..) => 0,
            ListExpr::Concat(..) => 1,
            ListExpr::Arith(op, ..) => op.precedence(),
            ListExpr::Neg(_) => 4,
            ListExpr::Int(v) if *v < 0 => 4,
            _ => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            ListExpr::Empty => f.write_str("empty"),
            ListExpr::Int(v) => write!(f, "{v}"),
            ListExpr::Str(s) => write_quoted(f, s),
            ListExpr::Var(n, _) => f.write_str(n),
            ListExpr::Neg(a) => {
                f.write_str("-")?;
                a.fmt_at(f, 5)
            }
            ListExpr::Arith(op, a, b) => {
                let p = op.precedence();
                a.fmt_at(f, p)?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_at(f, p + 1)
            }
            ListExpr::Degree(Direction::In, n) => write!(f, "indeg({n})"),
            ListExpr::Degree(Direction::Out, n) => write!(f, "outdeg({n})"),
            ListExpr::Concat(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str(".")?;
                b.fmt_at(f, 2)
            }
            ListExpr::Cons(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str(":")?;
                b.fmt_at(f, 0)
            }
        }
    }
}

impl fmt::Display for ListExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("`{expr}` has type {found}, expected {expected}")]
pub struct TypeError {
    pub expr: String,
    pub expected: VarType,
    pub found: VarType,
}

/// A rule-graph label: expression plus concrete mark.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RuleLabel {
    pub expr: ListExpr,
    pub mark: bool,
}

impl RuleLabel {
    pub fn new(expr: ListExpr, mark: bool) -> Self {
        RuleLabel { expr, mark }
    }

    pub fn unmarked(expr: ListExpr) -> Self {
        RuleLabel { expr, mark: false }
    }
}

impl fmt::Display for RuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)?;
        if self.mark {
            f.write_str(" #")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypePredicate {
    Int,
    Str,
    Atom,
}

impl TypePredicate {
    fn keyword(self) -> &'static str {
        match self {
            TypePredicate::Int => "int",
            TypePredicate::Str => "string",
            TypePredicate::Atom => "atom",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelOp {
    Gt,
    Ge,
    Lt,
    Le,
}

impl RelOp {
    fn symbol(self) -> &'static str {
        match self {
            RelOp::Gt => ">",
            RelOp::Ge => ">=",
            RelOp::Lt => "<",
            RelOp::Le => "<=",
        }
    }

    fn holds(self, a: i64, b: i64) -> bool {
        match self {
            RelOp::Gt => a > b,
            RelOp::Ge => a >= b,
            RelOp::Lt => a < b,
            RelOp::Le => a <= b,
        }
    }
}

/// Application condition of a rule schema.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    TypeCheck(TypePredicate, ListExpr),
    Eq(ListExpr, ListExpr),
    Neq(ListExpr, ListExpr),
    Rel(RelOp, ListExpr, ListExpr),
    Edge(Id, Id, Option<ListExpr>),
    Not(Box<Condition>),
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
}

impl Condition {
    pub fn not(c: Condition) -> Self {
        Condition::Not(Box::new(c))
    }

    pub fn and(a: Condition, b: Condition) -> Self {
        Condition::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Condition, b: Condition) -> Self {
        Condition::Or(Box::new(a), Box::new(b))
    }

    /// Every list expression inside the condition.
    pub fn exprs(&self) -> Vec<&ListExpr> {
        match self {
            Condition::TypeCheck(_, e) => vec![e],
            Condition::Eq(a, b) | Condition::Neq(a, b) | Condition::Rel(_, a, b) => vec![a, b],
            Condition::Edge(_, _, e) => e.iter().collect(),
            Condition::Not(c) => c.exprs(),
            Condition::And(a, b) | Condition::Or(a, b) => {
                let mut v = a.exprs();
                v.extend(b.exprs());
                v
            }
        }
    }

    /// Node identifiers referenced by `edge` predicates and degree terms.
    pub fn node_refs(&self) -> BTreeSet<Id> {
        let mut out: BTreeSet<Id> = self.exprs().iter().flat_map(|e| e.degree_nodes()).collect();
        fn edges(c: &Condition, out: &mut BTreeSet<Id>) {
            match c {
                Condition::Edge(a, b, _) => {
                    out.insert(a.clone());
                    out.insert(b.clone());
                }
                Condition::Not(c) => edges(c, out),
                Condition::And(a, b) | Condition::Or(a, b) => {
                    edges(a, out);
                    edges(b, out);
                }
                _ => {}
            }
        }
        edges(self, &mut out);
        out
    }

    pub fn vars(&self) -> BTreeSet<(String, VarType)> {
        self.exprs().iter().flat_map(|e| e.vars()).collect()
    }

    /// Type errors of the operands, in order of occurrence.
    pub fn type_errors(&self) -> Vec<TypeError> {
        let mut out = Vec::new();
        let mut check = |e: &ListExpr, want: VarType| match e.type_of() {
            Err(err) => out.push(err),
            Ok(t) if !t.is_subtype_of(want) => out.push(TypeError {
                expr: e.to_string(),
                expected: want,
                found: t,
            }),
            Ok(_) => {}
        };
        match self {
            Condition::TypeCheck(_, e) => check(e, VarType::List),
            Condition::Eq(a, b) | Condition::Neq(a, b) => {
                check(a, VarType::List);
                check(b, VarType::List);
            }
            Condition::Rel(_, a, b) => {
                check(a, VarType::Int);
                check(b, VarType::Int);
            }
            Condition::Edge(_, _, e) => {
                if let Some(e) = e {
                    check(e, VarType::List);
                }
            }
            Condition::Not(c) => out.extend(c.type_errors()),
            Condition::And(a, b) | Condition::Or(a, b) => {
                out.extend(a.type_errors());
                out.extend(b.type_errors());
            }
        }
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Condition::Or(..) => 0,
            Condition::And(..) => 1,
            Condition::Not(_) => 2,
            _ => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        // a relation operand starting with '(' would be read as a nested
        // condition, so operands are printed at cons level
        let operand = |f: &mut fmt::Formatter<'_>, e: &ListExpr| write!(f, "{e}");
        match self {
            Condition::TypeCheck(t, e) => write!(f, "{}({e})", t.keyword()),
            Condition::Eq(a, b) => {
                operand(f, a)?;
                f.write_str(" = ")?;
                operand(f, b)
            }
            Condition::Neq(a, b) => {
                operand(f, a)?;
                f.write_str(" != ")?;
                operand(f, b)
            }
            Condition::Rel(op, a, b) => {
                operand(f, a)?;
                write!(f, " {} ", op.symbol())?;
                operand(f, b)
            }
            Condition::Edge(a, b, None) => write!(f, "edge({a}, {b})"),
            Condition::Edge(a, b, Some(e)) => write!(f, "edge({a}, {b}, {e})"),
            Condition::Not(c) => {
                f.write_str("not ")?;
                c.fmt_at(f, 2)
            }
            Condition::And(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str(" and ")?;
                b.fmt_at(f, 2)
            }
            Condition::Or(a, b) => {
                a.fmt_at(f, 0)?;
                f.write_str(" or ")?;
                b.fmt_at(f, 1)
            }
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// Typed valuation of rule-schema variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    ints: BTreeMap<String, i64>,
    strings: BTreeMap<String, String>,
    atoms: BTreeMap<String, Atom>,
    lists: BTreeMap<String, Vec<Atom>>,
}

/// Value bound to a variable, viewed as a list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding<'a> {
    Int(i64),
    Str(&'a str),
    Atom(&'a Atom),
    List(&'a [Atom]),
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_int(mut self, name: &str, v: i64) -> Self {
        self.ints.insert(name.to_owned(), v);
        self
    }

    pub fn with_string(mut self, name: &str, v: &str) -> Self {
        self.strings.insert(name.to_owned(), v.to_owned());
        self
    }

    pub fn with_atom(mut self, name: &str, v: Atom) -> Self {
        self.atoms.insert(name.to_owned(), v);
        self
    }

    pub fn with_list(mut self, name: &str, v: Vec<Atom>) -> Self {
        self.lists.insert(name.to_owned(), v);
        self
    }

    pub fn get(&self, name: &str, ty: VarType) -> Option<Binding<'_>> {
        match ty {
            VarType::Int => self.ints.get(name).map(|v| Binding::Int(*v)),
            VarType::Str => self.strings.get(name).map(|s| Binding::Str(s)),
            VarType::Atom => self.atoms.get(name).map(Binding::Atom),
            VarType::List => self.lists.get(name).map(|l| Binding::List(l)),
        }
    }

    pub fn is_bound(&self, name: &str, ty: VarType) -> bool {
        self.get(name, ty).is_some()
    }

    /// Value of a variable as a host list.
    pub fn value(&self, name: &str, ty: VarType) -> Option<Vec<Atom>> {
        Some(match self.get(name, ty)? {
            Binding::Int(v) => vec![Atom::Int(v)],
            Binding::Str(s) => vec![Atom::str(s)],
            Binding::Atom(a) => vec![a.clone()],
            Binding::List(l) => l.to_vec(),
        })
    }

    /// Binds `name` to `value`, or checks agreement if already bound.
    /// Returns false when the value has the wrong type or disagrees.
    pub fn bind(&mut self, name: &str, ty: VarType, value: &[Atom]) -> bool {
        if let Some(existing) = self.value(name, ty) {
            return existing == value;
        }
        match (ty, value) {
            (VarType::Int, [Atom::Int(v)]) => {
                self.ints.insert(name.to_owned(), *v);
            }
            (VarType::Str, [Atom::Str(s)]) => {
                self.strings.insert(name.to_owned(), s.clone());
            }
            (VarType::Atom, [a]) => {
                self.atoms.insert(name.to_owned(), a.clone());
            }
            (VarType::List, l) => {
                self.lists.insert(name.to_owned(), l.to_vec());
            }
            _ => return false,
        }
        true
    }

    pub fn len(&self) -> usize {
        self.ints.len() + self.strings.len() + self.atoms.len() + self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut entries: Vec<(String, String)> = Vec::new();
        entries.extend(self.ints.iter().map(|(k, v)| (k.clone(), v.to_string())));
        entries.extend(self.strings.iter().map(|(k, v)| {
            let mut s = String::new();
            let _ = write_quoted(&mut s, v);
            (k.clone(), s)
        }));
        entries.extend(self.atoms.iter().map(|(k, v)| (k.clone(), v.to_string())));
        entries.extend(self.lists.iter().map(|(k, v)| {
            let mut s = String::new();
            let _ = crate::graph::write_list(&mut s, v);
            (k.clone(), s)
        }));
        entries.sort();
        f.write_str("{")?;
        for (i, (k, v)) in entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} -> {v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow")]
    Overflow,
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("node `{0}` is not matched")]
    UnmatchedNode(Id),
    #[error("expected {expected} value for `{expr}`")]
    Type { expr: String, expected: VarType },
}

/// Evaluation context: the match, the assignment and the host graph.
#[derive(Clone, Copy)]
pub struct Env<'a> {
    pub morphism: &'a Premorphism,
    pub assignment: &'a Assignment,
    pub host: &'a HostGraph,
}

impl<'a> Env<'a> {
    pub fn new(morphism: &'a Premorphism, assignment: &'a Assignment, host: &'a HostGraph) -> Self {
        Env {
            morphism,
            assignment,
            host,
        }
    }

    fn degree(&self, dir: Direction, node: &Id) -> Result<i64, EvalError> {
        let image = self
            .morphism
            .node(node)
            .ok_or_else(|| EvalError::UnmatchedNode(node.clone()))?;
        let d = self
            .host
            .degree(image, dir)
            .map_err(|_| EvalError::UnmatchedNode(node.clone()))?;
        i64::try_from(d).map_err(|_| EvalError::Overflow)
    }

    pub fn list(&self, e: &ListExpr) -> Result<Vec<Atom>, EvalError> {
        Ok(match e {
            ListExpr::Empty => vec![],
            ListExpr::Cons(a, b) => {
                let mut v = self.list(a)?;
                v.extend(self.list(b)?);
                v
            }
            ListExpr::Var(n, t) => self
                .assignment
                .value(n, *t)
                .ok_or_else(|| EvalError::Unbound(n.clone()))?,
            other => vec![self.atom(other)?],
        })
    }

    fn atom(&self, e: &ListExpr) -> Result<Atom, EvalError> {
        match e {
            ListExpr::Str(_) | ListExpr::Concat(..) | ListExpr::Var(_, VarType::Str) => {
                Ok(Atom::Str(self.string(e)?))
            }
            ListExpr::Var(n, VarType::Atom) => match self.assignment.get(n, VarType::Atom) {
                Some(Binding::Atom(a)) => Ok(a.clone()),
                _ => Err(EvalError::Unbound(n.clone())),
            },
            ListExpr::Var(_, VarType::List) | ListExpr::Empty | ListExpr::Cons(..) => {
                let mut v = self.list(e)?;
                if v.len() == 1 {
                    Ok(v.pop().expect("length checked"))
                } else {
                    Err(EvalError::Type {
                        expr: e.to_string(),
                        expected: VarType::Atom,
                    })
                }
            }
            _ => Ok(Atom::Int(self.int(e)?)),
        }
    }

    pub fn int(&self, e: &ListExpr) -> Result<i64, EvalError> {
        match e {
            ListExpr::Int(v) => Ok(*v),
            ListExpr::Degree(dir, n) => self.degree(*dir, n),
            ListExpr::Neg(a) => self.int(a)?.checked_neg().ok_or(EvalError::Overflow),
            ListExpr::Arith(op, a, b) => {
                let (x, y) = (self.int(a)?, self.int(b)?);
                match op {
                    ArithOp::Add => x.checked_add(y).ok_or(EvalError::Overflow),
                    ArithOp::Sub => x.checked_sub(y).ok_or(EvalError::Overflow),
                    ArithOp::Mul => x.checked_mul(y).ok_or(EvalError::Overflow),
                    ArithOp::Div if y == 0 => Err(EvalError::DivisionByZero),
                    ArithOp::Div => x.checked_div(y).ok_or(EvalError::Overflow),
                }
            }
            other => match self.list(other)?.as_slice() {
                [Atom::Int(v)] => Ok(*v),
                _ => Err(EvalError::Type {
                    expr: other.to_string(),
                    expected: VarType::Int,
                }),
            },
        }
    }

    pub fn string(&self, e: &ListExpr) -> Result<String, EvalError> {
        match e {
            ListExpr::Str(s) => Ok(s.clone()),
            ListExpr::Concat(a, b) => Ok(self.string(a)? + &self.string(b)?),
            ListExpr::Var(n, VarType::Str) => match self.assignment.get(n, VarType::Str) {
                Some(Binding::Str(s)) => Ok(s.to_owned()),
                _ => Err(EvalError::Unbound(n.clone())),
            },
            other => match self.list(other)?.as_slice() {
                [Atom::Str(s)] => Ok(s.clone()),
                _ => Err(EvalError::Type {
                    expr: other.to_string(),
                    expected: VarType::Str,
                }),
            },
        }
    }

    pub fn label(&self, l: &RuleLabel) -> Result<HostLabel, EvalError> {
        Ok(HostLabel::new(self.list(&l.expr)?, l.mark))
    }

    /// Evaluates a condition. Both operands of `and`/`or` are evaluated, so
    /// an error on either side is reported.
    pub fn condition(&self, c: &Condition) -> Result<bool, EvalError> {
        Ok(match c {
            Condition::TypeCheck(t, e) => {
                let v = self.list(e)?;
                match (t, v.as_slice()) {
                    (TypePredicate::Int, [Atom::Int(_)]) => true,
                    (TypePredicate::Str, [Atom::Str(_)]) => true,
                    (TypePredicate::Atom, [_]) => true,
                    _ => false,
                }
            }
            Condition::Eq(a, b) => self.list(a)? == self.list(b)?,
            Condition::Neq(a, b) => self.list(a)? != self.list(b)?,
            Condition::Rel(op, a, b) => op.holds(self.int(a)?, self.int(b)?),
            Condition::Edge(m, n, label) => {
                let image = |v: &Id| {
                    self.morphism
                        .node(v)
                        .ok_or_else(|| EvalError::UnmatchedNode(v.clone()))
                };
                let (s, t) = (image(m)?, image(n)?);
                let wanted = label.as_ref().map(|e| self.list(e)).transpose()?;
                self.host.edges().any(|(_, e)| {
                    &e.source == s
                        && &e.target == t
                        && wanted.as_ref().map_or(true, |w| &e.label.list == w)
                })
            }
            Condition::Not(c) => !self.condition(c)?,
            Condition::And(a, b) => {
                let (x, y) = (self.condition(a)?, self.condition(b)?);
                x && y
            }
            Condition::Or(a, b) => {
                let (x, y) = (self.condition(a)?, self.condition(b)?);
                x || y
            }
        })
    }
}

pub fn eval_list(
    e: &ListExpr,
    g: &Premorphism,
    alpha: &Assignment,
    host: &HostGraph,
) -> Result<Vec<Atom>, EvalError> {
    Env::new(g, alpha, host).list(e)
}

pub fn eval_condition(
    c: &Condition,
    g: &Premorphism,
    alpha: &Assignment,
    host: &HostGraph,
) -> Result<bool, EvalError> {
    Env::new(g, alpha, host).condition(c)
}
