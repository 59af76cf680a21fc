//! Seeded generators and law suites: restriction functoriality, semiring
//! axioms, and gluing uniqueness against the brute-force oracle.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::{rational, Rational, Real, Semiring};
use crate::error::Result;
use crate::gluing::{all_gluings_bruteforce, canonical_glue, glue, Cover, GluingOutcome};
use crate::logic::{Context, RelationSymbol, Section, Var, Vocabulary};
use crate::presheaf::{restrict, FunctorLawReport, Morphism};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn var(prefix: &str, i: usize) -> Var {
    Var::new(format!("{prefix}{i}")).expect("generated name")
}

fn symbol(name: &str, arity: usize) -> RelationSymbol {
    RelationSymbol::new(name, arity).expect("generated symbol")
}

fn vocab_of(symbols: &[RelationSymbol]) -> Vocabulary {
    Vocabulary::new(symbols.iter().cloned()).expect("distinct names")
}

/// Every subset of `items`, smallest bitmask first.
fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0..1usize << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Every total function from `from` to `to`, as variable maps.
fn all_maps(from: &[Var], to: &[Var]) -> Vec<BTreeMap<Var, Var>> {
    let mut out = vec![BTreeMap::new()];
    for x in from {
        out = out
            .into_iter()
            .flat_map(|m| {
                to.iter().map(move |y| {
                    let mut m = m.clone();
                    m.insert(x.clone(), y.clone());
                    m
                })
            })
            .collect();
    }
    out
}

/// A random section: each atom is independently absent, positive or negative.
pub fn random_section(rng: &mut impl Rng, ctx: &Context) -> Section {
    let lits = ctx.atoms().into_iter().filter_map(|a| match rng.gen_range(0..3) {
        0 => None,
        1 => Some(a),
        _ => Some(a.complement()),
    });
    Section::new(ctx.clone(), lits).expect("one polarity per atom")
}

/// Composable `(g, f)` pairs over small contexts, each with a few sections
/// over `g`'s target.
///
/// Contexts have at most 3 variables; vocabularies are the subset chains of
/// `{R/1, S/2}` and `{R/2, S/1}`; every pair of total functions is taken.
pub fn exhaustive_functor_suite(sections_per_pair: usize, seed: u64) -> FunctorLawReport {
    let mut rng = rng(seed);
    let mut report = FunctorLawReport::default();
    let tops = [
        vec![symbol("R", 1), symbol("S", 2)],
        vec![symbol("R", 2), symbol("S", 1)],
    ];
    for top in &tops {
        for mid in subsets(top) {
            for low in subsets(&mid) {
                for c_size in 0..=3 {
                    let c_vars: Vec<Var> = (0..c_size).map(|i| var("z", i)).collect();
                    let c_ctx = Context::new(vocab_of(top), c_vars.iter().cloned().collect());
                    let sections: Vec<Section> = (0..sections_per_pair)
                        .map(|_| random_section(&mut rng, &c_ctx))
                        .collect();
                    for b_size in 0..=3 {
                        let b_vars: Vec<Var> = (0..b_size).map(|i| var("y", i)).collect();
                        let b_ctx = Context::new(vocab_of(&mid), b_vars.iter().cloned().collect());
                        for a_size in 0..=3 {
                            let a_vars: Vec<Var> = (0..a_size).map(|i| var("x", i)).collect();
                            let a_ctx =
                                Context::new(vocab_of(&low), a_vars.iter().cloned().collect());
                            for gm in all_maps(&b_vars, &c_vars) {
                                let g = Morphism::new(b_ctx.clone(), c_ctx.clone(), gm)
                                    .expect("generated morphism");
                                for fm in all_maps(&a_vars, &b_vars) {
                                    let f = Morphism::new(a_ctx.clone(), b_ctx.clone(), fm)
                                        .expect("generated morphism");
                                    for s in &sections {
                                        report.check(&g, &f, s);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

fn random_context(rng: &mut impl Rng, top: &[RelationSymbol], prefix: &str) -> Context {
    let vocab: Vec<RelationSymbol> = top.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
    let size = rng.gen_range(0..=3);
    Context::new(vocab_of(&vocab), (0..size).map(|i| var(prefix, i)).collect())
}

fn random_morphism(rng: &mut impl Rng, source: &Context, target: &Context) -> Morphism {
    let image: Vec<&Var> = target.vars().iter().collect();
    let varmap = source
        .vars()
        .iter()
        .map(|v| (v.clone(), (*image.choose(rng).expect("nonempty target")).clone()))
        .collect();
    Morphism::new(source.clone(), target.clone(), varmap).expect("generated morphism")
}

/// `n` random composable cases.
pub fn random_functor_suite(n: usize, seed: u64) -> FunctorLawReport {
    let mut rng = rng(seed);
    let top = [symbol("P", 1), symbol("Q", 2), symbol("T", 3)];
    let mut report = FunctorLawReport::default();
    while report.cases < n {
        let c = random_context(&mut rng, &top, "z");
        if c.vars().is_empty() {
            continue;
        }
        let c_syms: Vec<_> = c.vocab().symbols().collect();
        let b = random_context(&mut rng, &c_syms, "y");
        if b.vars().is_empty() {
            continue;
        }
        let b_syms: Vec<_> = b.vocab().symbols().collect();
        let a = random_context(&mut rng, &b_syms, "x");
        let g = random_morphism(&mut rng, &b, &c);
        let f = random_morphism(&mut rng, &a, &b);
        let s = random_section(&mut rng, &c);
        report.check(&g, &f, &s);
    }
    report
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Commutative-monoid, distributivity and annihilation laws over every
/// triple drawn from `samples`.
pub fn check_semiring_axioms<R: Semiring>(samples: &[R]) -> AxiomReport {
    let mut report = AxiomReport::default();
    let mut law = |name: &str, lhs: R, rhs: R, args: &[&R]| {
        report.checks += 1;
        if !lhs.approx_eq(&rhs) {
            report
                .failures
                .push(format!("{name} fails at {args:?}: {lhs:?} != {rhs:?}"));
        }
    };
    let (zero, one) = (R::zero(), R::one());
    for x in samples {
        law("additive identity", x.add(&zero), x.clone(), &[x]);
        law("multiplicative identity", x.mul(&one), x.clone(), &[x]);
        law("annihilation", x.mul(&zero), zero.clone(), &[x]);
        for y in samples {
            law("additive commutativity", x.add(y), y.add(x), &[x, y]);
            law("multiplicative commutativity", x.mul(y), y.mul(x), &[x, y]);
            for z in samples {
                law("additive associativity", x.add(y).add(z), x.add(&y.add(z)), &[x, y, z]);
                law(
                    "multiplicative associativity",
                    x.mul(y).mul(z),
                    x.mul(&y.mul(z)),
                    &[x, y, z],
                );
                law(
                    "distributivity",
                    x.mul(&y.add(z)),
                    x.mul(y).add(&x.mul(z)),
                    &[x, y, z],
                );
            }
        }
    }
    report
}

pub fn rational_samples(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    let mut out = vec![rational(0, 1), rational(1, 1)];
    out.extend((0..n).map(|_| rational(rng.gen_range(0..20), rng.gen_range(1..12))));
    out
}

/// Dyadic values, so sums and products are exact in floating point too.
pub fn real_samples(rng: &mut impl Rng, n: usize) -> Vec<Real> {
    let mut out = vec![Real(0.0), Real(1.0)];
    out.extend((0..n).map(|_| Real(f64::from(rng.gen_range(0u32..64)) / 16.0)));
    out
}

/// Shape of random cover-and-family instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceShape {
    /// Give every relation to exactly one leg and make every leg injective.
    pub disjoint: bool,
    /// Probability of deriving the family from a hidden global section.
    pub from_global: f64,
}

impl Default for InstanceShape {
    fn default() -> Self {
        InstanceShape {
            disjoint: false,
            from_global: 0.5,
        }
    }
}

/// A random valid cover over at most 3 target variables and the relations
/// `R/1, S/2, T/1` (at most 15 literal slots), with a family of sections.
pub fn random_gluing_instance(rng: &mut impl Rng, shape: InstanceShape) -> (Cover, Vec<Section>) {
    let all = [symbol("R", 1), symbol("S", 2), symbol("T", 1)];
    let target_size = rng.gen_range(1..=3);
    let target_vars: Vec<Var> = (0..target_size).map(|i| var("t", i)).collect();
    let symbols: Vec<RelationSymbol> = all.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
    let symbols = if symbols.is_empty() { vec![all[0].clone()] } else { symbols };
    let target = Context::new(vocab_of(&symbols), target_vars.iter().cloned().collect());

    let leg_count = rng.gen_range(1..=3);
    let mut leg_syms: Vec<BTreeSet<RelationSymbol>> = vec![BTreeSet::new(); leg_count];
    for s in &symbols {
        if shape.disjoint {
            leg_syms[rng.gen_range(0..leg_count)].insert(s.clone());
        } else {
            for set in leg_syms.iter_mut() {
                if rng.gen_bool(0.5) {
                    set.insert(s.clone());
                }
            }
            if leg_syms.iter().all(|set| !set.contains(s)) {
                leg_syms[rng.gen_range(0..leg_count)].insert(s.clone());
            }
        }
    }

    let mut images: Vec<Vec<Var>> = vec![Vec::new(); leg_count];
    for img in images.iter_mut() {
        let size = rng.gen_range(0..=2);
        for _ in 0..size {
            let t = target_vars.choose(rng).expect("nonempty").clone();
            if shape.disjoint && img.contains(&t) {
                continue;
            }
            img.push(t);
        }
    }
    for t in &target_vars {
        if !images.iter().any(|img| img.contains(t)) {
            images[rng.gen_range(0..leg_count)].push(t.clone());
        }
    }

    let legs: Vec<Morphism> = images
        .iter()
        .enumerate()
        .map(|(i, img)| {
            let prefix = format!("l{i}_");
            let source_vars: BTreeSet<Var> = (0..img.len()).map(|j| var(&prefix, j)).collect();
            let varmap = (0..img.len()).map(|j| (var(&prefix, j), img[j].clone())).collect();
            let vocab = Vocabulary::new(leg_syms[i].iter().cloned()).expect("distinct names");
            Morphism::new(Context::new(vocab, source_vars), target.clone(), varmap)
                .expect("generated leg")
        })
        .collect();
    let cover = Cover::new(legs).expect("shared target");

    let family = if rng.gen_bool(shape.from_global) {
        let global = random_section(rng, &target);
        cover
            .legs()
            .iter()
            .map(|l| restrict(l, &global).expect("matching context"))
            .collect()
    } else {
        cover
            .legs()
            .iter()
            .map(|l| random_section(rng, l.source()))
            .collect()
    };
    (cover, family)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GluingLawReport {
    pub instances: usize,
    pub glued: usize,
    pub failures: Vec<String>,
}

impl GluingLawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The oracle finds at most one gluing, and exactly `glue`'s when it does.
pub fn uniqueness_suite(n: usize, seed: u64, bound: usize) -> Result<GluingLawReport> {
    let mut rng = rng(seed);
    let mut report = GluingLawReport::default();
    for case in 0..n {
        let (cover, family) = random_gluing_instance(&mut rng, InstanceShape::default());
        let oracle = all_gluings_bruteforce(&cover, &family, bound)?;
        let result = glue(&cover, &family)?;
        report.instances += 1;
        match (oracle.as_slice(), result.glued()) {
            ([], None) => {}
            ([only], Some(s)) if only == s => report.glued += 1,
            (found, got) => report.failures.push(format!(
                "case {case}: oracle found {} gluing(s), glue returned {:?}",
                found.len(),
                got.map(ToString::to_string)
            )),
        }
    }
    Ok(report)
}

/// With pairwise-disjoint vocabularies and injective legs, a consistent
/// canonical union is always a gluing.
pub fn disjoint_shortcut_suite(n: usize, seed: u64) -> Result<GluingLawReport> {
    let mut rng = rng(seed);
    let shape = InstanceShape {
        disjoint: true,
        from_global: 0.3,
    };
    let mut report = GluingLawReport::default();
    for case in 0..n {
        let (cover, family) = random_gluing_instance(&mut rng, shape);
        report.instances += 1;
        if canonical_glue(&cover, &family).is_err() {
            continue;
        }
        match glue(&cover, &family)?.outcome {
            GluingOutcome::Glued(_) => report.glued += 1,
            other => report
                .failures
                .push(format!("case {case}: consistent union but {other:?}")),
        }
    }
    Ok(report)
}
