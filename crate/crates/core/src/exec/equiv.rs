use super::{Budget, Com, Executable, Explorer, ResultSet};
use crate::graph::HostGraph;

#[derive(Clone, Debug)]
pub enum Verdict {
    Equal,
    /// The result sets differ on `hosts[host]`.
    Counterexample {
        host: usize,
        left: ResultSet,
        right: ResultSet,
    },
    /// No difference found, but exploration on `hosts[host]` was cut short.
    Inconclusive {
        host: usize,
    },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }
}

/// Compares the main commands of `p` and `q` on every host. A counterexample
/// takes precedence over an inconclusive host.
pub fn equivalent(p: &Executable, q: &Executable, hosts: &[HostGraph], budget: Budget) -> Verdict {
    let mut left = Explorer::new(p, budget);
    let mut right = Explorer::new(q, budget);
    compare(hosts, |g| {
        (left.semantics(&p.main, g), right.semantics(&q.main, g))
    })
}

/// Compares two commands over the rules of `explorer`, sharing its memo.
pub fn equivalent_commands(
    explorer: &mut Explorer,
    p: &Com,
    q: &Com,
    hosts: &[HostGraph],
) -> Verdict {
    compare(hosts, |g| {
        (explorer.semantics(p, g), explorer.semantics(q, g))
    })
}

fn compare(
    hosts: &[HostGraph],
    mut both: impl FnMut(&HostGraph) -> (ResultSet, ResultSet),
) -> Verdict {
    let mut inconclusive = None;
    for (i, g) in hosts.iter().enumerate() {
        let (a, b) = both(g);
        if !a.complete || !b.complete {
            inconclusive.get_or_insert(i);
            continue;
        }
        if !a.same_as(&b) {
            return Verdict::Counterexample {
                host: i,
                left: a,
                right: b,
            };
        }
    }
    match inconclusive {
        Some(host) => Verdict::Inconclusive { host },
        None => Verdict::Equal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HostLabel;
    use crate::syntax::{parse_command, parse_program};

    fn pair(src: &str, p: &str, q: &str) -> (Executable, Executable) {
        let prog = parse_program(src).unwrap();
        let mk = |c: &str| Executable::with_main(&prog, &parse_command(c, &prog).unwrap());
        (mk(p), mk(q))
    }

    fn hosts() -> Vec<HostGraph> {
        let mut one = HostGraph::new();
        one.add_node("n1", HostLabel::empty()).unwrap();
        vec![HostGraph::new(), one]
    }

    const SRC: &str = "rule null() [|] => [|] interface = {}\nmain = skip";

    #[test]
    fn skip_is_null() {
        let (p, q) = pair(SRC, "skip", "null");
        assert!(equivalent(&p, &q, &hosts(), Budget::default()).is_equal());
    }

    #[test]
    fn fail_is_empty_set() {
        let (p, q) = pair(SRC, "fail", "{}");
        assert!(equivalent(&p, &q, &hosts(), Budget::default()).is_equal());
    }

    #[test]
    fn skip_is_not_fail() {
        let (p, q) = pair(SRC, "skip", "skip or fail");
        assert!(matches!(
            equivalent(&p, &q, &hosts(), Budget::default()),
            Verdict::Counterexample { host: 0, .. }
        ));
    }

    #[test]
    fn shared_explorer() {
        let (p, q) = pair(SRC, "skip", "null or fail");
        let mut ex = Explorer::new(&p, Budget::default());
        let v = equivalent_commands(&mut ex, &p.main, &q.main, &hosts());
        assert!(matches!(v, Verdict::Counterexample { host: 0, .. }));
        assert!(equivalent_commands(&mut ex, &p.main, &p.main, &hosts()).is_equal());
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let (p, q) = pair(SRC, "skip; skip; skip", "skip");
        let b = Budget {
            max_steps: 1,
            ..Budget::default()
        };
        assert!(matches!(
            equivalent(&p, &q, &hosts(), b),
            Verdict::Inconclusive { host: 0 }
        ));
    }
}
