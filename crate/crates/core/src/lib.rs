//! Arbitrary pattern formation for asynchronous oblivious robots with
//! chirality, non-rigid moves and strong multiplicity detection.
//!
//! The crate is organised bottom-up: [`geometry`] is a plain planar kernel,
//! [`configuration`] analyses robot multisets, [`pattern`] holds the target
//! side (parking circles, embedding, sectors), [`algorithm`] is the Compute
//! phase, [`simulator`] executes LCM cycles under a seeded adversary and
//! [`verifier`] checks traces against the transition graph.

pub mod algorithm;
pub mod configuration;
pub mod format;
pub mod generate;
pub mod geometry;
pub mod pattern;
pub mod render;
pub mod simulator;
pub mod verifier;

pub use algorithm::{classify, Algorithm, BasicVariables, MoveDirective, Mutation, PredicateVector, TaskId};
pub use configuration::Configuration;
pub use geometry::{Point, Tolerance, Trajectory};
pub use pattern::Pattern;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("point is not a member of the multiset")]
    NotAMember,
    #[error("local coordinate system reverses orientation")]
    ReflectionLcs,
    #[error("tolerances must be finite and positive (length {length}, angle {angle})")]
    InvalidTolerance { length: f64, angle: f64 },
    #[error("{robots} robots but the pattern has {pattern} points")]
    CardinalityMismatch { robots: usize, pattern: usize },
    #[error("pattern is a single point")]
    DegeneratePattern,
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("task T10 needs a gathering or leader-election solver and none is installed")]
    DelegatedUnsupported,
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("schema error at line {line}, column {column}: {message}")]
    Schema { line: usize, column: usize, message: String },
    #[error("malformed trace at line {line}: {message}")]
    MalformedTrace { line: usize, message: String },
    #[error("exploration visited more than {0} states")]
    StateExplosion(usize),
    #[error("cannot generate a scenario: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
