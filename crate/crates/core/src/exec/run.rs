use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Budget, Com, Configuration, Executable, InferenceRule};
use crate::graph::HostGraph;
use crate::rule::{apply_ruleset_one, RuleSchema};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Graph(HostGraph),
    Fail,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub outcome: RunOutcome,
    pub steps: usize,
    pub warnings: Vec<String>,
    /// One line per transition, present when tracing was requested.
    pub trace: Option<Vec<String>>,
}

struct Exhausted;

enum Terminal {
    Graph(HostGraph),
    Fail,
}

struct Runner<'a> {
    exe: &'a Executable,
    rng: ChaCha8Rng,
    steps: usize,
    max_steps: usize,
    depth: usize,
    trace: Option<Vec<String>>,
    warnings: Vec<String>,
}

const SUMMARY_WIDTH: usize = 60;

impl Runner<'_> {
    fn run(&mut self, com: Com, g: HostGraph) -> Result<Terminal, Exhausted> {
        let mut cfg = Configuration::Unfinished(com, g);
        loop {
            match cfg {
                Configuration::Result(h) => return Ok(Terminal::Graph(h)),
                Configuration::Failure => return Ok(Terminal::Fail),
                Configuration::Unfinished(c, h) => {
                    if self.steps >= self.max_steps {
                        return Err(Exhausted);
                    }
                    let (rule, next) = self.derive(&c, &h)?;
                    self.steps += 1;
                    self.record(rule, &c, &next);
                    cfg = next;
                }
            }
        }
    }

    /// Runs a premise as a nested derivation.
    fn premise(&mut self, com: &Com, g: &HostGraph) -> Result<Terminal, Exhausted> {
        self.depth += 1;
        let r = self.run(com.clone(), g.clone());
        self.depth -= 1;
        r
    }

    fn derive(
        &mut self,
        com: &Com,
        g: &HostGraph,
    ) -> Result<(InferenceRule, Configuration), Exhausted> {
        use Configuration::{Failure, Result as Done, Unfinished};
        use InferenceRule as R;
        Ok(match com {
            Com::Call(rs) => {
                let rules: Vec<&RuleSchema> = rs.iter().map(|&i| &self.exe.rules[i]).collect();
                match apply_ruleset_one(&rules, g, Some(&mut self.rng), &mut self.warnings) {
                    Some(h) => (R::Call1, Done(h)),
                    None => (R::Call2, Failure),
                }
            }
            Com::Seq(p, q) => match self.derive(p, g)?.1 {
                Unfinished(p2, h) => (R::Seq1, Unfinished(Com::Seq(p2.into(), q.clone()), h)),
                Done(h) => (R::Seq2, Unfinished((**q).clone(), h)),
                Failure => (R::Seq3, Failure),
            },
            Com::If(c, p, q) => match (self.premise(c, g)?, q) {
                (Terminal::Graph(_), Some(_)) => (R::If1, Unfinished((**p).clone(), g.clone())),
                (Terminal::Graph(_), None) => (R::If3, Unfinished((**p).clone(), g.clone())),
                (Terminal::Fail, Some(q)) => (R::If2, Unfinished((**q).clone(), g.clone())),
                (Terminal::Fail, None) => (R::If4, Done(g.clone())),
            },
            Com::Try(c, p, q) => match (self.premise(c, g)?, q) {
                (Terminal::Graph(h), Some(_)) => (R::Try1, Unfinished((**p).clone(), h)),
                (Terminal::Graph(h), None) => (R::Try3, Unfinished((**p).clone(), h)),
                (Terminal::Fail, Some(q)) => (R::Try2, Unfinished((**q).clone(), g.clone())),
                (Terminal::Fail, None) => (R::Try4, Done(g.clone())),
            },
            Com::Loop(p) => match self.premise(p, g)? {
                Terminal::Graph(h) => (R::Alap1, Unfinished(com.clone(), h)),
                Terminal::Fail => (R::Alap2, Done(g.clone())),
            },
            Com::Or(p, q) => {
                if self.rng.gen_bool(0.5) {
                    (R::Or1, Unfinished((**p).clone(), g.clone()))
                } else {
                    (R::Or2, Unfinished((**q).clone(), g.clone()))
                }
            }
            Com::Skip => (R::Skip, Done(g.clone())),
            Com::Fail => (R::Fail, Failure),
        })
    }

    fn record(&mut self, rule: InferenceRule, com: &Com, next: &Configuration) {
        let Some(trace) = &mut self.trace else {
            return;
        };
        let mut summary = self.exe.show(com);
        if summary.chars().count() > SUMMARY_WIDTH {
            summary = summary.chars().take(SUMMARY_WIDTH - 3).collect::<String>() + "...";
        }
        let graph = match next {
            Configuration::Unfinished(_, h) | Configuration::Result(h) => {
                format!("{} nodes, {} edges", h.node_count(), h.edge_count())
            }
            Configuration::Failure => "fail".to_owned(),
        };
        trace.push(format!(
            "{:>5} {}{rule} {summary} | {graph}",
            self.steps,
            "  ".repeat(self.depth)
        ));
    }
}

/// One execution of the main command from `host`, resolving nondeterminism
/// with a generator seeded from `budget.seed`.
pub fn run_one(exe: &Executable, host: &HostGraph, budget: Budget, trace: bool) -> RunReport {
    let mut r = Runner {
        exe,
        rng: ChaCha8Rng::seed_from_u64(budget.seed),
        steps: 0,
        max_steps: budget.max_steps,
        depth: 0,
        trace: trace.then(Vec::new),
        warnings: Vec::new(),
    };
    let outcome = match r.run(exe.main.clone(), host.clone()) {
        Ok(Terminal::Graph(h)) => RunOutcome::Graph(h),
        Ok(Terminal::Fail) => RunOutcome::Fail,
        Err(Exhausted) => RunOutcome::BudgetExceeded,
    };
    RunReport {
        outcome,
        steps: r.steps,
        warnings: r.warnings,
        trace: r.trace,
    }
}
