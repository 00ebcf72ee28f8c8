use gp2::syntax::{
    parse_command, parse_program, print_command, print_program, Command, CommandKind, Program,
};
use proptest::prelude::*;

const DECLS: &str = "rule a() [|] => [|] interface = {}
rule b(n: int) [ (1, n) | ] => [ (1, n + 1) | ] interface = {1} where n < 2
m = a; b
main = skip";

fn program() -> Program {
    parse_program(DECLS).unwrap()
}

fn boxed(c: Command) -> Box<Command> {
    Box::new(c)
}

fn command() -> impl Strategy<Value = Command> {
    let leaf = prop_oneof![
        Just(CommandKind::Skip),
        Just(CommandKind::Fail),
        Just(CommandKind::MacroCall("m".into())),
        prop::sample::subsequence(vec!["a".to_owned(), "b".to_owned()], 0..=2)
            .prop_map(CommandKind::RuleSetCall),
    ]
    .prop_map(Command::new);
    leaf.prop_recursive(4, 32, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(CommandKind::Seq),
            inner.clone().prop_map(|c| CommandKind::Loop(boxed(c))),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| CommandKind::Or(boxed(p), boxed(q))),
            (
                inner.clone(),
                inner.clone(),
                prop::option::of(inner.clone())
            )
                .prop_map(|(c, p, q)| CommandKind::If {
                    cond: boxed(c),
                    then: boxed(p),
                    else_: q.map(boxed),
                }),
            (inner.clone(), inner.clone(), prop::option::of(inner)).prop_map(|(c, p, q)| {
                CommandKind::Try {
                    cond: boxed(c),
                    then: boxed(p),
                    else_: q.map(boxed),
                }
            }),
        ]
        .prop_map(Command::new)
    })
}

proptest! {
    #[test]
    fn printed_commands_parse_back(c in command()) {
        let p = program();
        let text = print_command(&c);
        let back = parse_command(&text, &p).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&back, &c, "{}", text);
        prop_assert_eq!(print_command(&back), text);
    }
}

#[test]
fn printed_program_is_a_fixpoint() {
    let text = print_program(&program());
    assert_eq!(print_program(&parse_program(&text).unwrap()), text);
}
