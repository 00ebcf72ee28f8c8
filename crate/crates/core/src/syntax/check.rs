use std::collections::{BTreeMap, BTreeSet};

use super::ast::{Command, CommandKind, Decl, Program};
use super::{Span, Violation};
use crate::rule::validate;

fn calls<'a>(c: &'a Command, out: &mut Vec<(&'a str, Span)>) {
    c.visit(&mut |c| {
        if let CommandKind::MacroCall(name) = &c.kind {
            out.push((name, c.span));
        }
    });
}

/// Static checks: rule validity, unique names, exactly one main, resolved
/// calls and non-recursive macros. Violations are sorted by position.
pub fn check_program(p: &Program) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    for r in p.rules() {
        out.extend(validate(r));
    }

    let mut names: BTreeMap<&str, Span> = BTreeMap::new();
    for d in &p.decls {
        let (name, span) = match d {
            Decl::Rule(r) => (r.name.as_str(), r.span),
            Decl::Macro(m) => (m.name.as_str(), m.span),
            Decl::Main(_) => continue,
        };
        if let Some(first) = names.insert(name, span) {
            names.insert(name, first);
            out.push(Violation::new(
                span,
                format!("`{name}` is already declared at {first}"),
            ));
        }
    }

    let mains: Vec<Span> = p
        .decls
        .iter()
        .filter_map(|d| match d {
            Decl::Main(m) => Some(m.span),
            _ => None,
        })
        .collect();
    match mains.as_slice() {
        [] => out.push(Violation::new(Span::new(1, 1), "no `main` declaration")),
        [_] => {}
        [_, rest @ ..] => {
            for s in rest {
                out.push(Violation::new(*s, "more than one `main` declaration"));
            }
        }
    }

    let rules: BTreeSet<&str> = p.rules().map(|r| r.name.as_str()).collect();
    let macros: BTreeSet<&str> = p.macros().map(|m| m.name.as_str()).collect();
    let bodies = p.decls.iter().filter_map(|d| match d {
        Decl::Macro(m) => Some(&m.body),
        Decl::Main(m) => Some(&m.body),
        Decl::Rule(_) => None,
    });
    for body in bodies {
        body.visit(&mut |c| match &c.kind {
            CommandKind::RuleSetCall(ns) => {
                for n in ns.iter().filter(|n| !rules.contains(n.as_str())) {
                    out.push(Violation::new(
                        c.span,
                        format!("`{n}` is not a declared rule"),
                    ));
                }
            }
            CommandKind::MacroCall(n) if !macros.contains(n.as_str()) => {
                out.push(Violation::new(
                    c.span,
                    format!("`{n}` is not a declared macro"),
                ));
            }
            _ => {}
        });
    }

    // macros reachable from themselves
    let graph: BTreeMap<&str, Vec<&str>> = p
        .macros()
        .map(|m| {
            let mut cs = Vec::new();
            calls(&m.body, &mut cs);
            (m.name.as_str(), cs.into_iter().map(|(n, _)| n).collect())
        })
        .collect();
    for m in p.macros() {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&str> = graph[m.name.as_str()].clone();
        while let Some(n) = stack.pop() {
            if n == m.name {
                out.push(Violation::new(
                    m.span,
                    format!("macro `{}` is recursive", m.name),
                ));
                break;
            }
            if seen.insert(n) {
                stack.extend(graph.get(n).into_iter().flatten());
            }
        }
    }

    if out.is_empty() {
        Ok(())
    } else {
        out.sort_by_key(|v| v.span);
        Err(out)
    }
}
