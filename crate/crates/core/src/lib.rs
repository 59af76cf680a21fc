//! Gluing local meanings of discourse into global ones.
//!
//! The local meaning of a sentence is a consistent set of literals over a
//! context of relation symbols and variables. Those sets form a presheaf over
//! the category of contexts, and resolving anaphora amounts to gluing local
//! sections along a cover that identifies referents. When several covers are
//! plausible, corpus frequencies induce a distribution over the resulting
//! gluings and the most likely one is selected.
//!
//! | module | contents |
//! |---|---|
//! | [`logic`] | vocabularies, contexts, literals, sections |
//! | [`presheaf`] | morphisms, composition, restriction, functor laws |
//! | [`gluing`] | covers, canonical gluing, brute-force gluing oracle |
//! | [`drt`] | basic DRS, merge, resolution by equations, candidate covers |
//! | [`distribution`] | semirings, finite distributions, pushforward, entropy |
//! | [`rank`] | frequency-weighted ranking of candidate gluings |
//! | [`laws`] | seeded generators and law suites |
//! | [`cli`] | problem-file parser and command-line front end |

pub mod cli;
pub mod distribution;
pub mod drt;
pub mod error;
pub mod gluing;
pub mod laws;
pub mod logic;
pub mod presheaf;
pub mod rank;

pub use error::{Error, Result};
pub use gluing::{
    all_gluings_bruteforce, canonical_glue, glue, validate_cover, Cover, GluingOutcome,
    GluingResult,
};
pub use logic::{Context, Literal, Polarity, RelationSymbol, Section, Var, Vocabulary};
pub use presheaf::{compose, identity, restrict, Morphism};
