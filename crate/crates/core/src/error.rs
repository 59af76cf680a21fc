use thiserror::Error;

use crate::logic::{Literal, RelationSymbol, Var};

pub type Result<T, E = Error> = std::result::Result<T, E>;

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),

    #[error("ill-formed: {0}")]
    IllFormed(String),

    #[error("inconsistent: {positive} clashes with {negative}")]
    Inconsistent {
        positive: Box<Literal>,
        negative: Box<Literal>,
    },

    #[error("morphisms do not compose: {0}")]
    TypeMismatch(String),

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("cover is not jointly surjective; uncovered variables: {}", join(.uncovered))]
    NotSurjective { uncovered: Vec<Var> },

    #[error("cover misses relations: {}", join(.missing))]
    VocabNotCovered { missing: Vec<RelationSymbol> },

    #[error("a cover needs at least one leg")]
    EmptyCover,

    #[error("expected {expected} sections, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{slots} literal slots exceed the brute-force bound of {bound}")]
    TooLarge { slots: usize, bound: usize },

    #[error("unknown variable `{0}`")]
    UnknownVariable(Var),

    #[error("disjointness violated: {0}")]
    DisjointnessViolated(String),

    #[error("all weights are zero")]
    AllZero,

    #[error("weights do not sum to one")]
    NotNormalized,

    #[error("negative weight")]
    NegativeWeight,

    #[error("function undefined on `{0}`")]
    PartialMap(String),

    #[error("no merging pattern for {anaphor} -> {antecedent}")]
    MissingPattern { anaphor: Var, antecedent: Var },

    #[error("no frequency recorded for pattern label \"{0}\"")]
    MissingCount(String),

    #[error("duplicate merging pattern for {anaphor} -> {antecedent}")]
    DuplicatePattern { anaphor: Var, antecedent: Var },

    #[error("cover #{index} has an inconsistent canonical gluing: {positive} clashes with {negative}")]
    InconsistentCover {
        index: usize,
        positive: Box<Literal>,
        negative: Box<Literal>,
    },

    #[error("cover #{index} admits no gluing (restriction mismatch on leg {leg})")]
    NoGluing { index: usize, leg: usize },
}
