use std::collections::VecDeque;
use std::rc::Rc;

use super::{Bottom, Com, Configuration, Executable, InferenceRule, ResultSet};
use crate::graph::HostGraph;
use crate::iso::{invariant_hash, IsoMap};
use crate::rule::{apply_ruleset_all, RuleSchema};

use super::Budget;

#[derive(Clone, Debug)]
pub struct Transition {
    pub rule: InferenceRule,
    pub target: Configuration,
}

/// The one-step successors of a configuration, with the divergence status
/// of any premise that had to be executed to derive them.
#[derive(Clone, Debug)]
pub struct Successors {
    pub transitions: Vec<Transition>,
    pub bottom: Bottom,
    pub complete: bool,
}

impl Successors {
    fn push(&mut self, rule: InferenceRule, target: Configuration) {
        let dup = self
            .transitions
            .iter()
            .any(|t| t.rule == rule && t.target.same_as(&target));
        if !dup {
            self.transitions.push(Transition { rule, target });
        }
    }

    fn absorb(&mut self, premise: &ResultSet) {
        self.bottom = self.bottom.max(premise.bottom);
        self.complete &= premise.complete;
    }
}

/// Computes transitions and result sets, memoising result sets per command
/// and graph isomorphism class.
pub struct Explorer<'a> {
    exe: &'a Executable,
    budget: Budget,
    memo: IsoMap<Com, ResultSet>,
    /// Discarded matches and similar diagnostics, in order of occurrence.
    pub warnings: Vec<String>,
}

struct Node {
    com: Com,
    graph: HostGraph,
    depth: usize,
    succ: Vec<usize>,
}

impl<'a> Explorer<'a> {
    pub fn new(exe: &'a Executable, budget: Budget) -> Self {
        Explorer {
            exe,
            budget,
            memo: IsoMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn executable(&self) -> &Executable {
        self.exe
    }

    /// All configurations reachable in one step from `<com, g>`.
    pub fn successors(&mut self, com: &Com, g: &HostGraph) -> Successors {
        use Configuration::{Failure, Result, Unfinished};
        use InferenceRule as R;
        let mut out = Successors {
            transitions: Vec::new(),
            bottom: Bottom::None,
            complete: true,
        };
        match com {
            Com::Call(rs) => {
                let rules: Vec<&RuleSchema> = rs.iter().map(|&i| &self.exe.rules[i]).collect();
                let results = apply_ruleset_all(&rules, g, &mut self.warnings);
                if results.is_empty() {
                    out.push(R::Call2, Failure);
                }
                for h in results.into_vec() {
                    out.push(R::Call1, Result(h));
                }
            }
            Com::Seq(p, q) => {
                let inner = self.successors(p, g);
                out.bottom = inner.bottom;
                out.complete = inner.complete;
                for t in inner.transitions {
                    match t.target {
                        Unfinished(p2, h) => {
                            out.push(R::Seq1, Unfinished(Com::Seq(Rc::new(p2), q.clone()), h))
                        }
                        Result(h) => out.push(R::Seq2, Unfinished((**q).clone(), h)),
                        Failure => out.push(R::Seq3, Failure),
                    }
                }
            }
            Com::If(c, p, q) => {
                let r = self.semantics(c, g);
                out.absorb(&r);
                if !r.graphs.is_empty() {
                    let rule = if q.is_some() { R::If1 } else { R::If3 };
                    out.push(rule, Unfinished((**p).clone(), g.clone()));
                }
                if r.can_fail {
                    match q {
                        Some(q) => out.push(R::If2, Unfinished((**q).clone(), g.clone())),
                        None => out.push(R::If4, Result(g.clone())),
                    }
                }
            }
            Com::Try(c, p, q) => {
                let r = self.semantics(c, g);
                out.absorb(&r);
                let rule = if q.is_some() { R::Try1 } else { R::Try3 };
                for h in r.graphs.iter() {
                    out.push(rule, Unfinished((**p).clone(), h.clone()));
                }
                if r.can_fail {
                    match q {
                        Some(q) => out.push(R::Try2, Unfinished((**q).clone(), g.clone())),
                        None => out.push(R::Try4, Result(g.clone())),
                    }
                }
            }
            Com::Loop(p) => {
                let r = self.semantics(p, g);
                out.absorb(&r);
                for h in r.graphs.iter() {
                    out.push(R::Alap1, Unfinished(com.clone(), h.clone()));
                }
                if r.can_fail {
                    out.push(R::Alap2, Result(g.clone()));
                }
            }
            Com::Or(p, q) => {
                out.push(R::Or1, Unfinished((**p).clone(), g.clone()));
                out.push(R::Or2, Unfinished((**q).clone(), g.clone()));
            }
            Com::Skip => out.push(R::Skip, Result(g.clone())),
            Com::Fail => out.push(R::Fail, Failure),
        }
        out
    }

    /// The result set of `com` on `g`, memoised up to isomorphism of `g`.
    pub fn semantics(&mut self, com: &Com, g: &HostGraph) -> ResultSet {
        let hash = invariant_hash(g);
        if let Some(r) = self.memo.get_hashed(com, g, hash) {
            return r.clone();
        }
        let r = self.explore(com, g);
        self.memo
            .get_or_insert_hashed(com.clone(), g, hash, || r.clone());
        r
    }

    /// Breadth-first exploration of the transition graph from `<com, g>`.
    fn explore(&mut self, com: &Com, g: &HostGraph) -> ResultSet {
        let mut result = ResultSet::empty();
        let mut proven = false;
        let mut index: IsoMap<Com, usize> = IsoMap::new();
        let mut nodes = vec![Node {
            com: com.clone(),
            graph: g.clone(),
            depth: 0,
            succ: Vec::new(),
        }];
        index.insert(com.clone(), g, 0);
        let mut queue = VecDeque::from([0]);
        let mut expanded = 0;
        while let Some(i) = queue.pop_front() {
            if expanded >= self.budget.max_configs || nodes[i].depth >= self.budget.max_steps {
                result.complete = false;
                continue;
            }
            expanded += 1;
            let (c, h, depth) = (nodes[i].com.clone(), nodes[i].graph.clone(), nodes[i].depth);
            let s = self.successors(&c, &h);
            proven |= s.bottom == Bottom::Proven;
            result.complete &= s.complete;
            if s.transitions.is_empty() {
                // stuck
                proven = true;
            }
            for t in s.transitions {
                match t.target {
                    Configuration::Result(h) => {
                        result.graphs.insert(h);
                    }
                    Configuration::Failure => result.can_fail = true,
                    Configuration::Unfinished(c2, h2) => {
                        let next = nodes.len();
                        let (&j, fresh) = index.get_or_insert_with(c2.clone(), &h2, || next);
                        if fresh {
                            nodes.push(Node {
                                com: c2,
                                graph: h2,
                                depth: depth + 1,
                                succ: Vec::new(),
                            });
                            queue.push_back(j);
                        }
                        nodes[i].succ.push(j);
                    }
                }
            }
        }
        proven |= has_cycle(&nodes);
        result.bottom = if proven {
            Bottom::Proven
        } else if !result.complete {
            Bottom::Possible
        } else {
            Bottom::None
        };
        result
    }
}

fn has_cycle(nodes: &[Node]) -> bool {
    // 0 unvisited, 1 on stack, 2 done
    let mut state = vec![0u8; nodes.len()];
    for root in 0..nodes.len() {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(&mut (v, ref mut k)) = stack.last_mut() {
            if let Some(&w) = nodes[v].succ.get(*k) {
                *k += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    false
}
