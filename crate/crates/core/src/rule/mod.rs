//! Conditional rule schemata: validation, matching and application.

mod apply;
mod matching;
mod schema;

pub use apply::{
    apply, apply_at, apply_rule, apply_ruleset_all, apply_ruleset_one, instantiate, ApplyError,
    RuleInstance,
};
pub use matching::{enumerate_matches, find_matches, infer_assignment, Match};
pub use schema::{validate, RuleGraph, RuleSchema, Side};
