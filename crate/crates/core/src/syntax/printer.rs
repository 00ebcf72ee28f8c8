use std::fmt::{self, Write};

use super::ast::{Command, CommandKind, Decl, Program};
use crate::graph::Graph;
use crate::label::RuleLabel;
use crate::rule::RuleSchema;

// binding strength of command forms; an operand printed below its required
// level is parenthesised
const OR: u8 = 0;
const SEQ: u8 = 1;
const BRANCHING: u8 = 2;
const LOOP: u8 = 3;
const ATOM: u8 = 4;

fn level(c: &Command) -> u8 {
    match &c.kind {
        CommandKind::Or(..) => OR,
        CommandKind::Seq(_) => SEQ,
        CommandKind::If { .. } | CommandKind::Try { .. } => BRANCHING,
        CommandKind::Loop(_) => LOOP,
        _ => ATOM,
    }
}

fn write_command(out: &mut String, c: &Command, min: u8) -> fmt::Result {
    if level(c) < min {
        out.push('(');
        write_command(out, c, OR)?;
        out.push(')');
        return Ok(());
    }
    match &c.kind {
        CommandKind::RuleSetCall(names) if names.len() == 1 => out.push_str(&names[0]),
        CommandKind::RuleSetCall(names) => write!(out, "{{{}}}", names.join(", "))?,
        CommandKind::MacroCall(name) => out.push_str(name),
        CommandKind::Skip => out.push_str("skip"),
        CommandKind::Fail => out.push_str("fail"),
        CommandKind::Seq(items) => {
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str("; ");
                }
                write_command(out, item, BRANCHING)?;
            }
        }
        CommandKind::Or(a, b) => {
            write_command(out, a, OR)?;
            out.push_str(" or ");
            write_command(out, b, SEQ)?;
        }
        CommandKind::Loop(body) => {
            write_command(out, body, LOOP)?;
            out.push('!');
        }
        CommandKind::If { cond, then, else_ } | CommandKind::Try { cond, then, else_ } => {
            out.push_str(if matches!(c.kind, CommandKind::If { .. }) {
                "if "
            } else {
                "try "
            });
            write_command(out, cond, OR)?;
            out.push_str(" then ");
            write_command(out, then, LOOP)?;
            if let Some(e) = else_ {
                out.push_str(" else ");
                write_command(out, e, LOOP)?;
            }
        }
    }
    Ok(())
}

/// Concrete syntax of a single command.
pub fn print_command(c: &Command) -> String {
    let mut s = String::new();
    write_command(&mut s, c, OR).expect("writing to a string");
    s
}

fn write_rule_graph(out: &mut String, g: &Graph<RuleLabel>) -> fmt::Result {
    out.push('[');
    for (id, l) in g.nodes() {
        write!(out, " ({id}, {l})")?;
    }
    out.push_str(" |");
    for (id, e) in g.edges() {
        write!(out, " ({id}, {}, {}, {})", e.source, e.target, e.label)?;
    }
    out.push_str(" ]");
    Ok(())
}

fn write_rule(out: &mut String, r: &RuleSchema) -> fmt::Result {
    write!(out, "rule {}(", r.name)?;
    // consecutive variables of one type share a group
    let mut i = 0;
    while i < r.vars.len() {
        let ty = r.vars[i].1;
        let mut j = i;
        while j < r.vars.len() && r.vars[j].1 == ty {
            j += 1;
        }
        if i > 0 {
            out.push_str("; ");
        }
        let names: Vec<&str> = r.vars[i..j].iter().map(|(n, _)| n.as_str()).collect();
        write!(out, "{}: {ty}", names.join(", "))?;
        i = j;
    }
    out.push_str(")\n    ");
    write_rule_graph(out, &r.left)?;
    out.push_str("\n    => ");
    write_rule_graph(out, &r.right)?;
    let iface: Vec<String> = r.interface.iter().map(|v| v.to_string()).collect();
    write!(out, "\n    interface = {{{}}}", iface.join(", "))?;
    if let Some(c) = &r.condition {
        write!(out, "\n    where {c}")?;
    }
    Ok(())
}

/// Concrete syntax of a program, one declaration per paragraph.
pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    for (i, d) in p.decls.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match d {
            Decl::Rule(r) => write_rule(&mut out, r),
            Decl::Macro(m) => write!(out, "{} = {}", m.name, print_command(&m.body)),
            Decl::Main(m) => write!(out, "main = {}", print_command(&m.body)),
        }
        .expect("writing to a string");
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn roundtrip(src: &str) -> String {
        let once = print_program(&parse_program(src).unwrap());
        let twice = print_program(&parse_program(&once).unwrap());
        assert_eq!(once, twice);
        once
    }

    const RULES: &str = "rule a() [|] => [|] interface = {}\nrule b() [|] => [|] interface = {}\n";

    #[test]
    fn command_forms() {
        let cases = [
            ("a; b or a!", "a; b or a!"),
            ("(a or b)!", "(a or b)!"),
            ("{a, b}; {}", "{a, b}; {}"),
            ("{a}", "a"),
            ("if a; b then (a; b) else b!", "if a; b then (a; b) else b!"),
            ("(if a then b)!", "(if a then b)!"),
            (
                "try a then (if b then a else b)",
                "try a then (if b then a else b)",
            ),
            ("a or (b or a)", "a or (b or a)"),
            ("(a; b); a", "(a; b); a"),
            ("a!!", "a!!"),
        ];
        for (src, want) in cases {
            let text = roundtrip(&format!("{RULES}main = {src}"));
            let last = text.lines().last().unwrap();
            assert_eq!(last, format!("main = {want}"), "from {src}");
        }
    }

    #[test]
    fn rule_text() {
        let src = "rule r(x,y:list;n:int) [(1,x:n)(2,y)|(e1,1,2,\"a\"#)] => [(1,x:n+1)(2,y)|] interface={1,2} where n>=0 or edge(2,1,y)";
        let text = roundtrip(src);
        assert_eq!(
            text,
            "rule r(x, y: list; n: int)\n    [ (1, x:n) (2, y) | (e1, 1, 2, \"a\" #) ]\n    => [ (1, x:n + 1) (2, y) | ]\n    interface = {1, 2}\n    where n >= 0 or edge(2, 1, y)\n"
        );
    }
}
