//! Operational semantics of programs: configurations, the transition
//! relation, exhaustive exploration, single runs and equivalence checking.

use std::fmt;
use std::rc::Rc;

use crate::graph::HostGraph;
use crate::iso::{isomorphic, GraphSet};
use crate::rule::RuleSchema;
use crate::syntax::{check_program, print_command, Command, CommandKind, Program, Violation};

mod equiv;
mod explore;
mod run;

pub use equiv::{equivalent, equivalent_commands, Verdict};
pub use explore::{Explorer, Successors, Transition};
pub use run::{run_one, RunOutcome, RunReport};

/// A command with macros expanded and rule names resolved to indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Com {
    Call(Rc<[usize]>),
    Seq(Rc<Com>, Rc<Com>),
    If(Rc<Com>, Rc<Com>, Option<Rc<Com>>),
    Try(Rc<Com>, Rc<Com>, Option<Rc<Com>>),
    Loop(Rc<Com>),
    Or(Rc<Com>, Rc<Com>),
    Skip,
    Fail,
}

impl Com {
    pub fn seq(a: Com, b: Com) -> Com {
        Com::Seq(Rc::new(a), Rc::new(b))
    }

    pub fn or(a: Com, b: Com) -> Com {
        Com::Or(Rc::new(a), Rc::new(b))
    }

    pub fn looped(a: Com) -> Com {
        Com::Loop(Rc::new(a))
    }

    pub fn call(rules: &[usize]) -> Com {
        Com::Call(rules.into())
    }

    pub fn if_(c: Com, p: Com, q: Option<Com>) -> Com {
        Com::If(Rc::new(c), Rc::new(p), q.map(Rc::new))
    }

    pub fn try_(c: Com, p: Com, q: Option<Com>) -> Com {
        Com::Try(Rc::new(c), Rc::new(p), q.map(Rc::new))
    }
}

/// A checked program ready to execute: its rules and a lowered main command.
#[derive(Clone, Debug)]
pub struct Executable {
    pub rules: Vec<RuleSchema>,
    pub main: Com,
}

impl Executable {
    /// Checks `program` and lowers its main command.
    pub fn from_program(program: &Program) -> Result<Self, Vec<Violation>> {
        check_program(program)?;
        let main = &program.main().expect("checked program has a main").body;
        Ok(Self::with_main(program, main))
    }

    /// Lowers `command` against the declarations of a checked `program`.
    pub fn with_main(program: &Program, command: &Command) -> Self {
        let rules: Vec<RuleSchema> = program.rules().cloned().collect();
        let main = lower(program, &rules, command);
        Executable { rules, main }
    }

    /// The same rules with a different main command.
    pub fn with_command(&self, main: Com) -> Self {
        Executable {
            rules: self.rules.clone(),
            main,
        }
    }

    pub fn rule_index(&self, name: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.name == name)
    }

    pub fn show(&self, c: &Com) -> String {
        print_command(&self.raise(c))
    }

    fn raise(&self, c: &Com) -> Command {
        let b = |c: &Rc<Com>| Box::new(self.raise(c));
        Command::new(match c {
            Com::Call(rs) => {
                CommandKind::RuleSetCall(rs.iter().map(|&i| self.rules[i].name.clone()).collect())
            }
            Com::Seq(..) => {
                let mut items = Vec::new();
                let mut cur = c;
                while let Com::Seq(a, rest) = cur {
                    items.push(self.raise(a));
                    cur = rest;
                }
                items.push(self.raise(cur));
                CommandKind::Seq(items)
            }
            Com::If(x, p, q) => CommandKind::If {
                cond: b(x),
                then: b(p),
                else_: q.as_ref().map(b),
            },
            Com::Try(x, p, q) => CommandKind::Try {
                cond: b(x),
                then: b(p),
                else_: q.as_ref().map(b),
            },
            Com::Loop(p) => CommandKind::Loop(b(p)),
            Com::Or(p, q) => CommandKind::Or(b(p), b(q)),
            Com::Skip => CommandKind::Skip,
            Com::Fail => CommandKind::Fail,
        })
    }
}

fn lower(program: &Program, rules: &[RuleSchema], c: &Command) -> Com {
    let l = |c: &Command| lower(program, rules, c);
    match &c.kind {
        CommandKind::RuleSetCall(names) => Com::Call(
            names
                .iter()
                .map(|n| {
                    rules
                        .iter()
                        .position(|r| &r.name == n)
                        .expect("resolved rule")
                })
                .collect(),
        ),
        CommandKind::MacroCall(name) => l(&program.macro_decl(name).expect("resolved macro").body),
        CommandKind::Seq(items) => {
            let mut it = items.iter().rev();
            let last = l(it.next().expect("sequences are nonempty"));
            it.fold(last, |acc, c| Com::seq(l(c), acc))
        }
        CommandKind::If { cond, then, else_ } => {
            Com::if_(l(cond), l(then), else_.as_deref().map(l))
        }
        CommandKind::Try { cond, then, else_ } => {
            Com::try_(l(cond), l(then), else_.as_deref().map(l))
        }
        CommandKind::Loop(p) => Com::looped(l(p)),
        CommandKind::Or(p, q) => Com::or(l(p), l(q)),
        CommandKind::Skip => Com::Skip,
        CommandKind::Fail => Com::Fail,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Configuration {
    Unfinished(Com, HostGraph),
    Result(HostGraph),
    Failure,
}

impl Configuration {
    pub fn is_terminal(&self) -> bool {
        !matches!(self, Configuration::Unfinished(..))
    }

    /// Equality with graphs compared up to isomorphism.
    pub fn same_as(&self, other: &Configuration) -> bool {
        match (self, other) {
            (Configuration::Unfinished(c, g), Configuration::Unfinished(d, h)) => {
                c == d && isomorphic(g, h)
            }
            (Configuration::Result(g), Configuration::Result(h)) => isomorphic(g, h),
            (Configuration::Failure, Configuration::Failure) => true,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InferenceRule {
    Call1,
    Call2,
    Seq1,
    Seq2,
    Seq3,
    If1,
    If2,
    Try1,
    Try2,
    Alap1,
    Alap2,
    Or1,
    Or2,
    Skip,
    Fail,
    If3,
    If4,
    Try3,
    Try4,
}

impl InferenceRule {
    pub const ALL: [InferenceRule; 19] = [
        InferenceRule::Call1,
        InferenceRule::Call2,
        InferenceRule::Seq1,
        InferenceRule::Seq2,
        InferenceRule::Seq3,
        InferenceRule::If1,
        InferenceRule::If2,
        InferenceRule::Try1,
        InferenceRule::Try2,
        InferenceRule::Alap1,
        InferenceRule::Alap2,
        InferenceRule::Or1,
        InferenceRule::Or2,
        InferenceRule::Skip,
        InferenceRule::Fail,
        InferenceRule::If3,
        InferenceRule::If4,
        InferenceRule::Try3,
        InferenceRule::Try4,
    ];

    pub fn name(self) -> &'static str {
        use InferenceRule::*;
        match self {
            Call1 => "call1",
            Call2 => "call2",
            Seq1 => "seq1",
            Seq2 => "seq2",
            Seq3 => "seq3",
            If1 => "if1",
            If2 => "if2",
            Try1 => "try1",
            Try2 => "try2",
            Alap1 => "alap1",
            Alap2 => "alap2",
            Or1 => "or1",
            Or2 => "or2",
            Skip => "skip",
            Fail => "fail",
            If3 => "if3",
            If4 => "if4",
            Try3 => "try3",
            Try4 => "try4",
        }
    }
}

impl fmt::Display for InferenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Transitions per run, and exploration depth per result-set computation.
    pub max_steps: usize,
    /// Distinct configurations expanded per result-set computation.
    pub max_configs: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 10_000,
            max_configs: 100_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bottom {
    None,
    Possible,
    Proven,
}

/// An approximation of the set of results of a program on a graph.
#[derive(Clone, Debug)]
pub struct ResultSet {
    pub graphs: GraphSet,
    pub can_fail: bool,
    pub bottom: Bottom,
    /// False if the budget cut exploration short; graphs or failure may then
    /// be missing.
    pub complete: bool,
}

impl ResultSet {
    pub fn empty() -> Self {
        ResultSet {
            graphs: GraphSet::new(),
            can_fail: false,
            bottom: Bottom::None,
            complete: true,
        }
    }

    /// Same graphs up to isomorphism, same failure and divergence.
    pub fn same_as(&self, other: &ResultSet) -> bool {
        self.graphs.same_classes(&other.graphs)
            && self.can_fail == other.can_fail
            && self.bottom == other.bottom
    }
}

impl fmt::Display for ResultSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in self.graphs.iter() {
            writeln!(f, "{g}")?;
        }
        if self.can_fail {
            writeln!(f, "fail")?;
        }
        match self.bottom {
            Bottom::None => Ok(()),
            Bottom::Possible => writeln!(f, "bottom: possible"),
            Bottom::Proven => writeln!(f, "bottom: proven"),
        }
    }
}

/// The result set of the main command of `exe` on `host`.
pub fn semantics(exe: &Executable, host: &HostGraph, budget: Budget) -> ResultSet {
    Explorer::new(exe, budget).semantics(&exe.main, host)
}
