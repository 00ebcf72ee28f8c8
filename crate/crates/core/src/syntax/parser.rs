use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::ast::{Command, CommandKind, Decl, MacroDecl, MainDecl, Program};
use super::lexer::{tokenize, Tok, KEYWORDS};
use super::Span;
use crate::graph::{Atom, Direction, Graph, HostGraph, HostLabel, Id};
use crate::label::{ArithOp, Condition, ListExpr, RelOp, RuleLabel, TypePredicate, VarType};
use crate::rule::{RuleGraph, RuleSchema, Side};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

impl ParseError {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
        }
    }
}

type PResult<T> = Result<T, ParseError>;

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    vars: BTreeMap<String, VarType>,
}

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            vars: BTreeMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(ParseError::new(
            self.span(),
            format!("expected {expected}, found {}", self.peek()),
        ))
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.at_sym(s);
        if hit {
            self.bump();
        }
        hit
    }

    fn expect_sym(&mut self, s: &str) -> PResult<Span> {
        if self.at_sym(s) {
            Ok(self.bump().1)
        } else {
            self.error(&format!("`{s}`"))
        }
    }

    fn at_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == k)
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        let hit = self.at_kw(k);
        if hit {
            self.bump();
        }
        hit
    }

    fn expect_kw(&mut self, k: &str) -> PResult<Span> {
        if self.at_kw(k) {
            Ok(self.bump().1)
        } else {
            self.error(&format!("`{k}`"))
        }
    }

    fn at_name(&self) -> bool {
        matches!(self.peek(), Tok::Ident(t) if !KEYWORDS.contains(&t.as_str()))
    }

    /// A non-keyword identifier.
    fn name(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let span = self.bump().1;
                Ok((s, span))
            }
            Tok::Ident(s) => Err(ParseError::new(
                self.span(),
                format!("`{s}` is a reserved keyword and cannot be used as {what}"),
            )),
            _ => self.error(what),
        }
    }

    /// Node or edge identifier: a name or a digit string.
    fn item_id(&mut self) -> PResult<(Id, Span)> {
        if let Tok::Int(s) = self.peek().clone() {
            let span = self.bump().1;
            return Ok((Id::new(s), span));
        }
        let (s, span) = self.name("an identifier")?;
        Ok((Id::new(s), span))
    }

    fn int_literal(&self, digits: &str, negative: bool, span: Span) -> PResult<i64> {
        let text = if negative {
            format!("-{digits}")
        } else {
            digits.to_owned()
        };
        text.parse()
            .map_err(|_| ParseError::new(span, format!("integer literal {text} out of range")))
    }

    // ---- programs ----

    fn program(&mut self) -> PResult<Program> {
        let mut decls = Vec::new();
        while *self.peek() != Tok::Eof {
            decls.push(self.decl()?);
        }
        Ok(Program { decls })
    }

    fn decl(&mut self) -> PResult<Decl> {
        if self.at_kw("rule") {
            return Ok(Decl::Rule(self.rule_decl()?));
        }
        if self.at_kw("main") {
            let span = self.bump().1;
            self.expect_sym("=")?;
            let body = self.comseq()?;
            return Ok(Decl::Main(MainDecl { body, span }));
        }
        if self.at_name() {
            let (name, span) = self.name("a macro name")?;
            self.expect_sym("=")?;
            let body = self.comseq()?;
            return Ok(Decl::Macro(MacroDecl { name, body, span }));
        }
        self.error("a declaration (`rule`, `main` or a macro name)")
    }

    fn comseq(&mut self) -> PResult<Command> {
        let mut left = self.seq()?;
        while self.eat_kw("or") {
            let right = self.seq()?;
            let span = left.span;
            left = Command::at(CommandKind::Or(Box::new(left), Box::new(right)), span);
        }
        Ok(left)
    }

    fn seq(&mut self) -> PResult<Command> {
        let first = self.postfix()?;
        if !self.at_sym(";") {
            return Ok(first);
        }
        let span = first.span;
        let mut items = vec![first];
        while self.eat_sym(";") {
            items.push(self.postfix()?);
        }
        Ok(Command::at(CommandKind::Seq(items), span))
    }

    fn postfix(&mut self) -> PResult<Command> {
        let mut c = self.command_atom()?;
        while self.at_sym("!") {
            self.bump();
            let span = c.span;
            c = Command::at(CommandKind::Loop(Box::new(c)), span);
        }
        Ok(c)
    }

    fn command_atom(&mut self) -> PResult<Command> {
        let span = self.span();
        let kind = if self.eat_kw("skip") {
            CommandKind::Skip
        } else if self.eat_kw("fail") {
            CommandKind::Fail
        } else if self.eat_sym("{") {
            let mut names = Vec::new();
            if !self.at_sym("}") {
                loop {
                    names.push(self.name("a rule name")?.0);
                    if !self.eat_sym(",") {
                        break;
                    }
                }
            }
            self.expect_sym("}")?;
            CommandKind::RuleSetCall(names)
        } else if self.at_kw("if") || self.at_kw("try") {
            let is_if = self.at_kw("if");
            self.bump();
            let cond = Box::new(self.comseq()?);
            self.expect_kw("then")?;
            let then = Box::new(self.postfix()?);
            let else_ = if self.eat_kw("else") {
                Some(Box::new(self.postfix()?))
            } else {
                None
            };
            if is_if {
                CommandKind::If { cond, then, else_ }
            } else {
                CommandKind::Try { cond, then, else_ }
            }
        } else if self.eat_sym("(") {
            let inner = self.comseq()?;
            self.expect_sym(")")?;
            return Ok(inner);
        } else if self.at_name() {
            // resolved to a rule or macro once all declarations are known
            CommandKind::MacroCall(self.name("a command")?.0)
        } else {
            return self.error("a command");
        };
        Ok(Command::at(kind, span))
    }

    // ---- rules ----

    fn rule_decl(&mut self) -> PResult<RuleSchema> {
        let span = self.expect_kw("rule")?;
        let (name, _) = self.name("a rule name")?;
        self.expect_sym("(")?;
        let mut vars = Vec::new();
        if !self.at_sym(")") {
            loop {
                let mut group = vec![self.name("a variable name")?.0];
                while self.eat_sym(",") {
                    group.push(self.name("a variable name")?.0);
                }
                self.expect_sym(":")?;
                let ty = match self.peek() {
                    Tok::Ident(k) if k == "int" => VarType::Int,
                    Tok::Ident(k) if k == "string" => VarType::Str,
                    Tok::Ident(k) if k == "atom" => VarType::Atom,
                    Tok::Ident(k) if k == "list" => VarType::List,
                    _ => return self.error("a type (`int`, `string`, `atom` or `list`)"),
                };
                self.bump();
                vars.extend(group.into_iter().map(|n| (n, ty)));
                if !self.eat_sym(";") {
                    break;
                }
            }
        }
        self.expect_sym(")")?;
        self.vars.clear();
        for (n, t) in &vars {
            self.vars.entry(n.clone()).or_insert(*t);
        }
        let mut item_spans = BTreeMap::new();
        let left = self.rule_graph(Side::Left, &mut item_spans)?;
        self.expect_sym("=>")?;
        let right = self.rule_graph(Side::Right, &mut item_spans)?;
        self.expect_kw("interface")?;
        self.expect_sym("=")?;
        self.expect_sym("{")?;
        let mut interface = BTreeSet::new();
        if !self.at_sym("}") {
            loop {
                let (id, s) = self.item_id()?;
                if !interface.insert(id.clone()) {
                    return Err(ParseError::new(
                        s,
                        format!("duplicate interface node `{id}`"),
                    ));
                }
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("}")?;
        let condition = if self.eat_kw("where") {
            Some(self.condition()?)
        } else {
            None
        };
        Ok(RuleSchema {
            name,
            vars,
            left,
            interface,
            right,
            condition,
            span,
            item_spans,
        })
    }

    fn graph<N, E>(
        &mut self,
        mut node: impl FnMut(&mut Self) -> PResult<N>,
        mut edge: impl FnMut(&mut Self) -> PResult<E>,
        mut spans: impl FnMut(Id, Span),
    ) -> PResult<Graph<N, E>> {
        let mut g = Graph::new();
        self.expect_sym("[")?;
        while self.at_sym("(") {
            self.bump();
            let (id, span) = self.item_id()?;
            self.expect_sym(",")?;
            let label = node(self)?;
            self.expect_sym(")")?;
            g.add_node(id.clone(), label)
                .map_err(|e| ParseError::new(span, e.to_string()))?;
            spans(id, span);
        }
        self.expect_sym("|")?;
        while self.at_sym("(") {
            self.bump();
            let (id, span) = self.item_id()?;
            self.expect_sym(",")?;
            let (source, _) = self.item_id()?;
            self.expect_sym(",")?;
            let (target, _) = self.item_id()?;
            self.expect_sym(",")?;
            let label = edge(self)?;
            self.expect_sym(")")?;
            g.add_edge(id.clone(), source, target, label)
                .map_err(|e| ParseError::new(span, e.to_string()))?;
            spans(id, span);
        }
        self.expect_sym("]")?;
        Ok(g)
    }

    fn rule_graph(
        &mut self,
        side: Side,
        spans: &mut BTreeMap<(Side, Id), Span>,
    ) -> PResult<RuleGraph> {
        self.graph(Self::rule_label, Self::rule_label, |id, s| {
            spans.insert((side, id), s);
        })
    }

    fn rule_label(&mut self) -> PResult<RuleLabel> {
        let expr = self.list_expr()?;
        Ok(RuleLabel::new(expr, self.eat_sym("#")))
    }

    fn list_expr(&mut self) -> PResult<ListExpr> {
        let head = self.concat_expr()?;
        if self.eat_sym(":") {
            Ok(ListExpr::cons(head, self.list_expr()?))
        } else {
            Ok(head)
        }
    }

    fn concat_expr(&mut self) -> PResult<ListExpr> {
        let mut e = self.additive()?;
        while self.eat_sym(".") {
            e = ListExpr::concat(e, self.additive()?);
        }
        Ok(e)
    }

    fn additive(&mut self) -> PResult<ListExpr> {
        let mut e = self.term()?;
        loop {
            let op = if self.eat_sym("+") {
                ArithOp::Add
            } else if self.eat_sym("-") {
                ArithOp::Sub
            } else {
                return Ok(e);
            };
            e = ListExpr::arith(op, e, self.term()?);
        }
    }

    fn term(&mut self) -> PResult<ListExpr> {
        let mut e = self.unary()?;
        loop {
            let op = if self.eat_sym("*") {
                ArithOp::Mul
            } else if self.eat_sym("/") {
                ArithOp::Div
            } else {
                return Ok(e);
            };
            e = ListExpr::arith(op, e, self.unary()?);
        }
    }

    fn unary(&mut self) -> PResult<ListExpr> {
        if !self.at_sym("-") {
            return self.primary();
        }
        let span = self.bump().1;
        if let Tok::Int(digits) = self.peek().clone() {
            self.bump();
            return Ok(ListExpr::Int(self.int_literal(&digits, true, span)?));
        }
        Ok(ListExpr::neg(self.unary()?))
    }

    fn primary(&mut self) -> PResult<ListExpr> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(digits) => {
                self.bump();
                Ok(ListExpr::Int(self.int_literal(&digits, false, span)?))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(ListExpr::Str(s))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.list_expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Ident(k) if k == "empty" => {
                self.bump();
                Ok(ListExpr::Empty)
            }
            Tok::Ident(k) if k == "indeg" || k == "outdeg" => {
                self.bump();
                let dir = if k == "indeg" {
                    Direction::In
                } else {
                    Direction::Out
                };
                self.expect_sym("(")?;
                let (id, _) = self.item_id()?;
                self.expect_sym(")")?;
                Ok(ListExpr::Degree(dir, id))
            }
            Tok::Ident(_) if self.at_name() => {
                let (name, span) = self.name("a variable")?;
                match self.vars.get(&name) {
                    Some(t) => Ok(ListExpr::Var(name, *t)),
                    None => Err(ParseError::new(
                        span,
                        format!("undeclared variable `{name}`"),
                    )),
                }
            }
            _ => self.error("a label expression"),
        }
    }

    fn condition(&mut self) -> PResult<Condition> {
        let mut c = self.cond_and()?;
        while self.eat_kw("or") {
            c = Condition::or(c, self.cond_and()?);
        }
        Ok(c)
    }

    fn cond_and(&mut self) -> PResult<Condition> {
        let mut c = self.cond_not()?;
        while self.eat_kw("and") {
            c = Condition::and(c, self.cond_not()?);
        }
        Ok(c)
    }

    fn cond_not(&mut self) -> PResult<Condition> {
        if self.eat_kw("not") {
            Ok(Condition::not(self.cond_not()?))
        } else {
            self.cond_atom()
        }
    }

    fn cond_atom(&mut self) -> PResult<Condition> {
        let pred = match self.peek() {
            Tok::Ident(k) if k == "int" => Some(TypePredicate::Int),
            Tok::Ident(k) if k == "string" => Some(TypePredicate::Str),
            Tok::Ident(k) if k == "atom" => Some(TypePredicate::Atom),
            _ => None,
        };
        if let Some(p) = pred {
            self.bump();
            self.expect_sym("(")?;
            let e = self.list_expr()?;
            self.expect_sym(")")?;
            return Ok(Condition::TypeCheck(p, e));
        }
        if self.eat_kw("edge") {
            self.expect_sym("(")?;
            let (a, _) = self.item_id()?;
            self.expect_sym(",")?;
            let (b, _) = self.item_id()?;
            let label = if self.eat_sym(",") {
                Some(self.list_expr()?)
            } else {
                None
            };
            self.expect_sym(")")?;
            return Ok(Condition::Edge(a, b, label));
        }
        if self.at_sym("(") {
            // either a parenthesised operand of a relation or a nested condition
            let save = self.pos;
            if let Ok(c) = self.relation() {
                return Ok(c);
            }
            self.pos = save;
            self.bump();
            let c = self.condition()?;
            self.expect_sym(")")?;
            return Ok(c);
        }
        self.relation()
    }

    fn relation(&mut self) -> PResult<Condition> {
        let a = self.list_expr()?;
        let op = match self.peek() {
            Tok::Sym(s @ ("=" | "!=" | ">" | ">=" | "<" | "<=")) => *s,
            _ => return self.error("a comparison operator"),
        };
        self.bump();
        let b = self.list_expr()?;
        Ok(match op {
            "=" => Condition::Eq(a, b),
            "!=" => Condition::Neq(a, b),
            ">" => Condition::Rel(RelOp::Gt, a, b),
            ">=" => Condition::Rel(RelOp::Ge, a, b),
            "<" => Condition::Rel(RelOp::Lt, a, b),
            _ => Condition::Rel(RelOp::Le, a, b),
        })
    }

    // ---- host graphs ----

    fn host_label(&mut self) -> PResult<HostLabel> {
        let mut list = Vec::new();
        if !self.eat_kw("empty") {
            loop {
                list.push(self.host_atom()?);
                if !self.eat_sym(":") {
                    break;
                }
            }
        }
        Ok(HostLabel::new(list, self.eat_sym("#")))
    }

    fn host_atom(&mut self) -> PResult<Atom> {
        let span = self.span();
        let negative = self.eat_sym("-");
        match self.peek().clone() {
            Tok::Int(d) => {
                self.bump();
                Ok(Atom::Int(self.int_literal(&d, negative, span)?))
            }
            Tok::Str(s) if !negative => {
                self.bump();
                Ok(Atom::Str(s))
            }
            _ => self.error(if negative {
                "an integer"
            } else {
                "an integer or a string"
            }),
        }
    }
}

fn resolve_command(
    c: &mut Command,
    rules: &BTreeSet<&str>,
    macros: &BTreeSet<&str>,
) -> PResult<()> {
    match &mut c.kind {
        CommandKind::MacroCall(name) if !macros.contains(name.as_str()) => {
            if !rules.contains(name.as_str()) {
                return Err(ParseError::new(
                    c.span,
                    format!("unknown rule or macro `{name}`"),
                ));
            }
            c.kind = CommandKind::RuleSetCall(vec![name.clone()]);
        }
        CommandKind::RuleSetCall(names) => {
            if let Some(n) = names.iter().find(|n| !rules.contains(n.as_str())) {
                return Err(ParseError::new(c.span, format!("unknown rule `{n}`")));
            }
        }
        _ => {}
    }
    for child in c.children_mut() {
        resolve_command(child, rules, macros)?;
    }
    Ok(())
}

/// Rewrites provisional calls to rule-set calls where the name is a rule, and
/// rejects names that resolve to nothing.
fn resolve(program: &mut Program) -> PResult<()> {
    let names = program.clone();
    let rules: BTreeSet<&str> = names.rules().map(|r| r.name.as_str()).collect();
    let macros: BTreeSet<&str> = names.macros().map(|m| m.name.as_str()).collect();
    for d in &mut program.decls {
        match d {
            Decl::Macro(m) => resolve_command(&mut m.body, &rules, &macros)?,
            Decl::Main(m) => resolve_command(&mut m.body, &rules, &macros)?,
            Decl::Rule(_) => {}
        }
    }
    Ok(())
}

/// Parses a command sequence, resolving names against the declarations of
/// `program`.
pub fn parse_command(src: &str, program: &Program) -> Result<Command, ParseError> {
    let mut p = Parser::new(src)?;
    let mut c = p.comseq()?;
    if *p.peek() != Tok::Eof {
        return p.error("end of input");
    }
    let rules: BTreeSet<&str> = program.rules().map(|r| r.name.as_str()).collect();
    let macros: BTreeSet<&str> = program.macros().map(|m| m.name.as_str()).collect();
    resolve_command(&mut c, &rules, &macros)?;
    Ok(c)
}

/// Parses a program and resolves every called name to a rule or macro.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(src)?;
    let mut program = p.program()?;
    resolve(&mut program)?;
    Ok(program)
}

/// Parses a host graph `[ (id, label)... | (id, src, tgt, label)... ]`.
pub fn parse_host_graph(src: &str) -> Result<HostGraph, ParseError> {
    let mut p = Parser::new(src)?;
    let g = p.graph(Parser::host_label, Parser::host_label, |_, _| {})?;
    if *p.peek() != Tok::Eof {
        return p.error("end of input");
    }
    Ok(g)
}
