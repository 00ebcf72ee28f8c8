use super::Span;
use crate::rule::RuleSchema;

#[derive(Clone, Debug)]
pub struct Command {
    pub kind: CommandKind,
    pub span: Span,
}

/// Commands compare structurally; spans are ignored.
impl PartialEq for Command {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Command {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommandKind {
    RuleSetCall(Vec<String>),
    MacroCall(String),
    Seq(Vec<Command>),
    If {
        cond: Box<Command>,
        then: Box<Command>,
        else_: Option<Box<Command>>,
    },
    Try {
        cond: Box<Command>,
        then: Box<Command>,
        else_: Option<Box<Command>>,
    },
    Loop(Box<Command>),
    Or(Box<Command>, Box<Command>),
    Skip,
    Fail,
}

impl Command {
    pub fn new(kind: CommandKind) -> Self {
        Command {
            kind,
            span: Span::default(),
        }
    }

    pub fn at(kind: CommandKind, span: Span) -> Self {
        Command { kind, span }
    }

    /// Direct subcommands, in source order.
    pub fn children(&self) -> Vec<&Command> {
        match &self.kind {
            CommandKind::Seq(cs) => cs.iter().collect(),
            CommandKind::If { cond, then, else_ } | CommandKind::Try { cond, then, else_ } => {
                let mut v = vec![&**cond, &**then];
                v.extend(else_.as_deref());
                v
            }
            CommandKind::Loop(c) => vec![c],
            CommandKind::Or(a, b) => vec![a, b],
            CommandKind::RuleSetCall(_)
            | CommandKind::MacroCall(_)
            | CommandKind::Skip
            | CommandKind::Fail => {
                vec![]
            }
        }
    }

    pub(crate) fn children_mut(&mut self) -> Vec<&mut Command> {
        match &mut self.kind {
            CommandKind::Seq(cs) => cs.iter_mut().collect(),
            CommandKind::If { cond, then, else_ } | CommandKind::Try { cond, then, else_ } => {
                let mut v = vec![&mut **cond, &mut **then];
                v.extend(else_.as_deref_mut());
                v
            }
            CommandKind::Loop(c) => vec![c],
            CommandKind::Or(a, b) => vec![a, b],
            CommandKind::RuleSetCall(_)
            | CommandKind::MacroCall(_)
            | CommandKind::Skip
            | CommandKind::Fail => {
                vec![]
            }
        }
    }

    /// Calls `f` on this command and every subcommand, preorder.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Command)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacroDecl {
    pub name: String,
    pub body: Command,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainDecl {
    pub body: Command,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Rule(RuleSchema),
    Macro(MacroDecl),
    Main(MainDecl),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub decls: Vec<Decl>,
}

impl Program {
    pub fn rules(&self) -> impl Iterator<Item = &RuleSchema> + '_ {
        self.decls.iter().filter_map(|d| match d {
            Decl::Rule(r) => Some(r),
            _ => None,
        })
    }

    pub fn macros(&self) -> impl Iterator<Item = &MacroDecl> + '_ {
        self.decls.iter().filter_map(|d| match d {
            Decl::Macro(m) => Some(m),
            _ => None,
        })
    }

    pub fn rule(&self, name: &str) -> Option<&RuleSchema> {
        self.rules().find(|r| r.name == name)
    }

    pub fn macro_decl(&self, name: &str) -> Option<&MacroDecl> {
        self.macros().find(|m| m.name == name)
    }

    /// The first main declaration.
    pub fn main(&self) -> Option<&MainDecl> {
        self.decls.iter().find_map(|d| match d {
            Decl::Main(m) => Some(m),
            _ => None,
        })
    }
}
