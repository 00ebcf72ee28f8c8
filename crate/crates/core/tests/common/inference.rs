#![allow(dead_code)]

use gp2::exec::{Budget, Com, Configuration, Executable, Explorer, InferenceRule as R};
use gp2::graph::{HostGraph, HostLabel};
use gp2::syntax::{parse_command, parse_program, Program};

pub const RULES: &str = "rule del(x: list) [ (1, x) | ] => [ | ] interface = {}\nmain = skip";

pub fn program() -> Program {
    parse_program(RULES).unwrap()
}

pub fn com(src: &str) -> Com {
    let p = program();
    Executable::with_main(&p, &parse_command(src, &p).unwrap()).main
}

pub fn g() -> HostGraph {
    let mut g = HostGraph::new();
    g.add_node("n1", HostLabel::int(0)).unwrap();
    g
}

pub fn empty() -> HostGraph {
    HostGraph::new()
}

pub fn unfinished(src: &str, h: HostGraph) -> Configuration {
    Configuration::Unfinished(com(src), h)
}

/// Compares the one-step successors of `<src, host>` with `expected`.
pub fn check_successors(
    src: &str,
    host: HostGraph,
    expected: Vec<(R, Configuration)>,
) -> Result<(), String> {
    let p = program();
    let exe = Executable::with_main(&p, &parse_command(src, &p).unwrap());
    let mut ex = Explorer::new(&exe, Budget::default());
    let s = ex.successors(&exe.main, &host);
    let got: Vec<(R, Configuration)> = s
        .transitions
        .into_iter()
        .map(|t| (t.rule, t.target))
        .collect();
    let all_found = expected
        .iter()
        .all(|(rule, cfg)| got.iter().any(|(r, c)| r == rule && c.same_as(cfg)));
    if got.len() != expected.len() || !all_found {
        return Err(format!("`{src}`: expected {expected:?}, got {got:?}"));
    }
    Ok(())
}

/// A minimal configuration whose derivation uses `rule`, checked against its
/// exact successor set.
pub fn inference_case(rule: R) -> Result<(), String> {
    match rule {
        R::Call1 => check_successors("del", g(), vec![(R::Call1, Configuration::Result(empty()))]),
        R::Call2 => check_successors("del", empty(), vec![(R::Call2, Configuration::Failure)]),
        R::Seq1 => check_successors(
            "(skip or fail); del",
            g(),
            vec![
                (R::Seq1, unfinished("skip; del", g())),
                (R::Seq1, unfinished("fail; del", g())),
            ],
        ),
        R::Seq2 => check_successors(
            "del; skip",
            g(),
            vec![(R::Seq2, unfinished("skip", empty()))],
        ),
        R::Seq3 => check_successors("fail; del", g(), vec![(R::Seq3, Configuration::Failure)]),
        R::If1 => check_successors(
            "if del then skip else fail",
            g(),
            vec![(R::If1, unfinished("skip", g()))],
        ),
        R::If2 => check_successors(
            "if fail then skip else del",
            g(),
            vec![(R::If2, unfinished("del", g()))],
        ),
        R::Try1 => check_successors(
            "try del then skip else fail",
            g(),
            vec![(R::Try1, unfinished("skip", empty()))],
        ),
        R::Try2 => check_successors(
            "try fail then skip else del",
            g(),
            vec![(R::Try2, unfinished("del", g()))],
        ),
        R::Alap1 => check_successors("del!", g(), vec![(R::Alap1, unfinished("del!", empty()))]),
        R::Alap2 => check_successors(
            "del!",
            empty(),
            vec![(R::Alap2, Configuration::Result(empty()))],
        ),
        R::Or1 => check_successors(
            "del or fail",
            g(),
            vec![
                (R::Or1, unfinished("del", g())),
                (R::Or2, unfinished("fail", g())),
            ],
        ),
        R::Or2 => check_successors(
            "fail or del",
            empty(),
            vec![
                (R::Or1, unfinished("fail", empty())),
                (R::Or2, unfinished("del", empty())),
            ],
        ),
        R::Skip => check_successors("skip", g(), vec![(R::Skip, Configuration::Result(g()))]),
        R::Fail => check_successors("fail", g(), vec![(R::Fail, Configuration::Failure)]),
        R::If3 => check_successors(
            "if del then skip",
            g(),
            vec![(R::If3, unfinished("skip", g()))],
        ),
        R::If4 => check_successors(
            "if del then skip",
            empty(),
            vec![(R::If4, Configuration::Result(empty()))],
        ),
        R::Try3 => check_successors(
            "try del then skip",
            g(),
            vec![(R::Try3, unfinished("skip", empty()))],
        ),
        R::Try4 => check_successors(
            "try del then skip",
            empty(),
            vec![(R::Try4, Configuration::Result(empty()))],
        ),
    }
}
