#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use semunify::cli::dsl::{parse_problem, Problem};
use semunify::logic::{make_section, Context, Literal, Polarity, RelationSymbol, Section, Var, Vocabulary};
use semunify::Morphism;

pub fn data(name: &str) -> String {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn problem(name: &str) -> Problem {
    parse_problem(&data(name))
        .and_then(|f| f.elaborate())
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn var(s: &str) -> Var {
    Var::new(s).unwrap()
}

pub fn lits(s: &str) -> BTreeSet<Literal> {
    semunify::logic::parse_literals(s).unwrap()
}

pub fn pool() -> Vec<RelationSymbol> {
    vec![
        RelationSymbol::new("R", 1).unwrap(),
        RelationSymbol::new("S", 2).unwrap(),
        RelationSymbol::new("T", 1).unwrap(),
    ]
}

fn vocab_from_mask(mask: u8) -> Vocabulary {
    Vocabulary::new(
        pool()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, s)| s),
    )
    .unwrap()
}

fn vars_named(prefix: &str, n: usize) -> BTreeSet<Var> {
    (0..n).map(|i| var(&format!("{prefix}{i}"))).collect()
}

/// Every ground atom of `ctx`, listed independently of the library.
pub fn ground_atoms(ctx: &Context) -> Vec<(RelationSymbol, Vec<Var>)> {
    let vars: Vec<&Var> = ctx.vars().iter().collect();
    let mut out = Vec::new();
    for sym in ctx.vocab().symbols() {
        let mut tuples: Vec<Vec<Var>> = vec![vec![]];
        for _ in 0..sym.arity() {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    vars.iter().map(move |v| {
                        let mut t = t.clone();
                        t.push((*v).clone());
                        t
                    })
                })
                .collect();
        }
        out.extend(tuples.into_iter().map(|t| (sym.clone(), t)));
    }
    out
}

pub fn arb_context(prefix: &'static str) -> impl Strategy<Value = Context> {
    (0u8..8, 0usize..=3).prop_map(move |(mask, n)| Context::new(vocab_from_mask(mask), vars_named(prefix, n)))
}

/// A section over `ctx`: every atom is absent, positive or negative.
pub fn arb_section_over(ctx: Context) -> impl Strategy<Value = Section> {
    let atoms = ground_atoms(&ctx);
    prop::collection::vec(0u8..3, atoms.len()).prop_map(move |choice| {
        let lits = atoms.iter().zip(&choice).filter_map(|((sym, args), c)| {
            let pol = match c {
                1 => Polarity::Positive,
                2 => Polarity::Negative,
                _ => return None,
            };
            Some(Literal::new(pol, sym.name(), args.clone()).unwrap())
        });
        make_section(&ctx, lits).unwrap()
    })
}

pub fn arb_section(prefix: &'static str) -> impl Strategy<Value = Section> {
    arb_context(prefix).prop_flat_map(arb_section_over)
}

/// A morphism into `target` from a fresh context over a subset of its vocabulary.
pub fn arb_morphism_into(target: Context, prefix: &'static str) -> impl Strategy<Value = Morphism> {
    let tvars: Vec<Var> = target.vars().iter().cloned().collect();
    let tmask: u8 = pool()
        .iter()
        .enumerate()
        .filter(|(_, s)| target.vocab().contains(s))
        .map(|(i, _)| 1u8 << i)
        .sum();
    let max_vars = if tvars.is_empty() { 0 } else { 3 };
    (0u8..8, prop::collection::vec(0usize..3, 0..=max_vars)).prop_map(move |(mask, images)| {
        let source = Context::new(vocab_from_mask(mask & tmask), vars_named(prefix, images.len()));
        let pairs: Vec<(String, String)> = images
            .iter()
            .enumerate()
            .map(|(i, j)| (format!("{prefix}{i}"), tvars[j % tvars.len()].to_string()))
            .collect();
        Morphism::parse(source, target.clone(), pairs).unwrap()
    })
}
