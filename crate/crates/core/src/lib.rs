pub mod cli;
pub mod exec;
pub mod graph;
pub mod iso;
pub mod label;
pub mod oracles;
pub mod rule;
pub mod syntax;
