//! Script language, evaluator and session handling for `closure-lab`.

pub mod ast;
pub mod examples;
pub mod parser;
pub mod session;
