//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use common::*;
use num::ToPrimitive;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::seq::SliceRandom;
use rand::Rng;
use semunify::distribution::{rational, Distribution, Rational};
use semunify::drt::{drs_to_section, enumerate_candidate_covers, merge, resolve_by_equations, Drs};
use semunify::gluing::DEFAULT_BRUTEFORCE_BOUND;
use semunify::laws;
use semunify::rank::{resolve, FrequencyTable, Strictness};
use semunify::{all_gluings_bruteforce, glue, restrict, Context, Cover, GluingOutcome, Literal, Morphism, Section, Var};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn family_for(pb: &semunify::cli::dsl::Problem, cover: &str) -> (Cover, Vec<String>, Vec<Section>) {
    let (c, legs) = pb.cover(cover).expect("declared cover");
    let family = legs
        .iter()
        .map(|leg| {
            let names = pb.sections_over_source(leg);
            pb.section(names[0]).unwrap().clone()
        })
        .collect();
    (c.clone(), legs.to_vec(), family)
}

/// A gluing must restrict back to every section of the family.
fn restricts_back(c: &Cover, family: &[Section], s: &Section) -> bool {
    c.legs().iter().zip(family).all(|(leg, si)| restrict(leg, s).as_ref() == Ok(si))
}

fn john_sleeps() -> Outcome {
    let pb = problem("john_sleeps.sem");
    let (cover, _, family) = family_for(&pb, "c");
    let expected = Section::new(cover.target().clone(), lits("John(z); sleeps(z); snores(z)")).unwrap();
    let result = glue(&cover, &family).map_err(|e| e.to_string())?;
    ensure(result.glued() == Some(&expected), || format!("got {:?}", result.outcome))?;
    ensure(restricts_back(&cover, &family, &expected), || "does not restrict back".into())?;
    Ok(format!("{expected}"))
}

fn donkey_beating() -> Outcome {
    let pb = problem("donkey.sem");
    let (cover, _, family) = family_for(&pb, "c");
    let expected =
        Section::new(cover.target().clone(), lits("John(a); donkey(b); owns(a,b); beats(a,b)")).unwrap();
    let result = glue(&cover, &family).map_err(|e| e.to_string())?;
    ensure(result.glued() == Some(&expected), || format!("got {:?}", result.outcome))?;
    let all = all_gluings_bruteforce(&cover, &family, DEFAULT_BRUTEFORCE_BOUND).map_err(|e| e.to_string())?;
    ensure(all == vec![expected.clone()], || format!("oracle found {} gluings", all.len()))?;
    ensure(restricts_back(&cover, &family, &expected), || "does not restrict back".into())?;
    Ok(format!("{expected}, unique by brute force"))
}

fn agreement() -> Outcome {
    let pb = problem("agreement.sem");
    let (merged, _, family) = family_for(&pb, "merged");
    match glue(&merged, &family).map_err(|e| e.to_string())?.outcome {
        GluingOutcome::Inconsistent { positive, negative }
            if positive.relation().name() == "Man" && negative.relation().name() == "Man" => {}
        other => return Err(format!("merged cover: {other:?}")),
    }
    let (apart, _, family) = family_for(&pb, "apart");
    let expected = Section::new(
        apart.target().clone(),
        lits("John(a); Man(a); donkey(b); ¬Man(b); grey(b)"),
    )
    .unwrap();
    let result = glue(&apart, &family).map_err(|e| e.to_string())?;
    ensure(result.glued() == Some(&expected), || format!("apart cover: {:?}", result.outcome))?;
    let all = all_gluings_bruteforce(&apart, &family, DEFAULT_BRUTEFORCE_BOUND).map_err(|e| e.to_string())?;
    ensure(all.len() == 1, || format!("oracle found {} gluings", all.len()))?;
    Ok(format!("merged rejected on Man; apart glues to {expected}"))
}

fn counterexample() -> Outcome {
    let pb = problem("counterexample.sem");
    let (cover, legs, family) = family_for(&pb, "c");
    match glue(&cover, &family).map_err(|e| e.to_string())?.outcome {
        GluingOutcome::RestrictionMismatch { leg, residue }
            if legs[leg] == "f1" && residue == lits("S(x); R(u)") => {}
        other => return Err(format!("got {other:?}")),
    }
    let all = all_gluings_bruteforce(&cover, &family, DEFAULT_BRUTEFORCE_BOUND).map_err(|e| e.to_string())?;
    ensure(all.is_empty(), || format!("oracle found {} gluings", all.len()))?;
    Ok("mismatch on f1 with residue {S(x), R(u)}; oracle finds none".into())
}

fn bananas() -> Outcome {
    let pb = problem("bananas.sem");
    let family: Vec<Section> = pb.sections.iter().map(|(_, s)| s.clone()).collect();
    let covers = enumerate_candidate_covers(&family[0], &family[1..], &pb.anaphors).map_err(|e| e.to_string())?;
    let counts: BTreeMap<&str, u64> =
        [("ripe banana", 14), ("ripe monkey", 0), ("cheeky banana", 0), ("cheeky monkey", 10)].into();
    let table: FrequencyTable = counts.iter().map(|(l, c)| (*l, *c)).collect();
    let res = resolve(&covers, &family, &pb.patterns, &table, Strictness::Strict).map_err(|e| e.to_string())?;

    // Weights straight from the covers' variable maps.
    let label = |a: &Var, b: &Var| match (a.as_str(), b.as_str()) {
        ("u", "y") => "ripe banana",
        ("u", "z") => "ripe monkey",
        ("v", "y") => "cheeky banana",
        ("v", "z") => "cheeky monkey",
        _ => "",
    };
    let oracle: Vec<u64> = covers
        .iter()
        .map(|c| c.legs()[1..].iter().flat_map(|m| m.varmap()).map(|(a, b)| counts[label(a, b)]).sum())
        .collect();
    let weights: Vec<u64> = res.ranking.candidates.iter().map(|c| c.weight).collect();
    ensure(oracle == [14, 24, 0, 10] && weights == oracle, || format!("weights {weights:?}, oracle {oracle:?}"))?;
    ensure(res.ranking.total == 48, || format!("total {}", res.ranking.total))?;
    let exact: Vec<Rational> = (0..4).map(|i| res.ranking.probability(i)).collect();
    let expected = [rational(14, 48), rational(24, 48), rational(0, 1), rational(10, 48)];
    ensure(exact == expected, || format!("probabilities {exact:?}"))?;
    let shown = [0.29, 0.5, 0.0, 0.205];
    for (p, d) in exact.iter().zip(shown) {
        let p = p.to_f64().unwrap();
        ensure((p - d).abs() <= 0.01, || format!("{p} is not within 0.01 of {d}"))?;
    }
    let t2 = &res.ranking.candidates[1].gluing;
    ensure(res.best == vec![t2.clone()], || format!("best {:?}", res.best))?;
    let want: BTreeSet<Literal> = lits("Ripe(y); Cheeky(z)");
    ensure(want.is_subset(t2.literals()), || format!("t2 is {t2}"))?;
    Ok(format!("14/48 24/48 0 10/48, argmax t2 = {t2}"))
}

fn functor_laws() -> Outcome {
    let report = laws::exhaustive_functor_suite(1, 2024);
    ensure(report.cases >= 10_000, || format!("only {} cases", report.cases))?;
    ensure(report.passed(), || format!("{} violations, first {:?}", report.violations.len(), report.violations[0]))?;
    Ok(format!("{} cases, 0 violations", report.cases))
}

fn uniqueness() -> Outcome {
    let r = laws::uniqueness_suite(1000, 7, DEFAULT_BRUTEFORCE_BOUND).map_err(|e| e.to_string())?;
    ensure(r.instances >= 1000 && r.glued > 0, || format!("{} instances, {} glued", r.instances, r.glued))?;
    ensure(r.passed(), || r.failures.join("; "))?;
    Ok(format!("{} instances, {} with a gluing, no second gluing", r.instances, r.glued))
}

fn disjoint_shortcut() -> Outcome {
    let r = laws::disjoint_shortcut_suite(1000, 11).map_err(|e| e.to_string())?;
    ensure(r.instances >= 1000 && r.glued > 0, || format!("{} instances, {} glued", r.instances, r.glued))?;
    ensure(r.passed(), || r.failures.join("; "))?;
    Ok(format!("{} instances, {} consistent unions, all glued", r.instances, r.glued))
}

fn counts_strategy() -> impl Strategy<Value = Vec<(u8, u64)>> {
    prop::collection::vec((0u8..16, 0u64..30), 1..10).prop_filter("nonzero", |v| v.iter().any(|(_, c)| *c > 0))
}

fn distributions() -> Outcome {
    let config = Config {
        cases: 500,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let mut checked = 0;
    runner
        .run(&(counts_strategy(), 1u8..6, 1u8..6), |(counts, k, j)| {
            let d = Distribution::<u8, Rational>::from_counts(counts.clone()).unwrap();
            let total: u64 = counts.iter().map(|(_, c)| c).sum();
            for (x, w) in d.iter() {
                let raw: u64 = counts.iter().filter(|(y, _)| y == x).map(|(_, c)| c).sum();
                prop_assert_eq!(w, &rational(raw, total));
            }
            prop_assert_eq!(d.total(), rational(1, 1));
            let step = d.pushforward(|x| Some(x / k)).unwrap().pushforward(|y| Some(y % j)).unwrap();
            let once = d.pushforward(|x| Some((x / k) % j)).unwrap();
            prop_assert_eq!(step.total(), rational(1, 1));
            prop_assert_eq!(step, once);
            let h = d.entropy();
            prop_assert!((-1e-12..=(d.len() as f64).log2() + 1e-9).contains(&h));
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    checked += 500;
    runner
        .run(&(prop::collection::btree_set(0u8..40, 1..12), 1u8..8), |(xs, k)| {
            let d = Distribution::<u8, bool>::from_subset(xs.clone()).unwrap();
            let image: BTreeSet<u8> = xs.iter().map(|x| x % k).collect();
            prop_assert_eq!(d.pushforward(|x| Some(x % k)).unwrap().to_subset(), image);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    checked += 500;
    let mut rng = laws::rng(5);
    for report in [
        laws::check_semiring_axioms(&laws::rational_samples(&mut rng, 8)),
        laws::check_semiring_axioms(&laws::real_samples(&mut rng, 8)),
        laws::check_semiring_axioms(&[false, true]),
    ] {
        ensure(report.passed(), || report.failures.join("; "))?;
    }
    Ok(format!("{checked} generated distributions; functoriality, normalization, direct image, entropy bounds"))
}

struct DrtInstance {
    k1: Drs,
    k2: Drs,
    eqs: Vec<(Var, Var)>,
}

/// Two basic DRSs and equations sending some of K2's referents to K1's.
/// `strict` keeps the vocabularies disjoint and the equations injective.
fn drt_instance(rng: &mut impl Rng, strict: bool) -> DrtInstance {
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=3);
    let xs: Vec<Var> = (0..n).map(|i| var(&format!("x{i}"))).collect();
    let vs: Vec<Var> = (0..m).map(|i| var(&format!("v{i}"))).collect();
    let conditions = |rng: &mut _, refs: &[Var], rels: &[(&str, usize)]| -> Vec<Literal> {
        let ctx = Context::parse(
            &rels.iter().map(|(r, a)| format!("{r}/{a}")).collect::<Vec<_>>().join(", "),
            refs.iter().map(Var::as_str),
        )
        .unwrap();
        let rng: &mut dyn rand::RngCore = rng;
        ctx.atoms()
            .into_iter()
            .filter_map(|a| match rng.gen_range(0..10) {
                0..=2 => Some(a),
                3 => Some(a.complement()),
                _ => None,
            })
            .collect()
    };
    let k1_rels = [("A", 1), ("B", 2)];
    let k2_rels: &[(&str, usize)] = if strict { &[("C", 1), ("D", 2)] } else { &[("A", 1), ("B", 2), ("C", 1)] };
    let k1 = Drs::new(xs.iter().cloned().collect(), conditions(rng, &xs, &k1_rels)).unwrap();
    let k2 = Drs::new(vs.iter().cloned().collect(), conditions(rng, &vs, k2_rels)).unwrap();
    let mut targets = xs.clone();
    targets.shuffle(rng);
    let mut eqs = Vec::new();
    for (j, v) in vs.iter().enumerate() {
        if !rng.gen_bool(0.8) {
            continue;
        }
        let x = if strict {
            match targets.get(j) {
                Some(x) => x.clone(),
                None => continue,
            }
        } else {
            xs[rng.gen_range(0..n)].clone()
        };
        eqs.push((v.clone(), x));
    }
    DrtInstance { k1, k2, eqs }
}

/// The cover that embeds K1 and sends each K2 referent to its antecedent or
/// to itself.
fn induced_cover(inst: &DrtInstance) -> (Cover, Vec<Section>) {
    let s1 = drs_to_section(&inst.k1).unwrap();
    let s2 = drs_to_section(&inst.k2).unwrap();
    let image: BTreeMap<Var, Var> = inst
        .k2
        .referents()
        .iter()
        .map(|v| {
            let x = inst.eqs.iter().find(|(a, _)| a == v).map_or(v, |(_, x)| x);
            (v.clone(), x.clone())
        })
        .collect();
    let mut vars = inst.k1.referents().clone();
    vars.extend(image.values().cloned());
    let vocab = s1.context().vocab().union(s2.context().vocab()).unwrap();
    let target = Context::new(vocab, vars);
    let cover = Cover::new(vec![
        Morphism::inclusion(s1.context(), &target).unwrap(),
        Morphism::new(s2.context().clone(), target, image).unwrap(),
    ])
    .unwrap();
    (cover, vec![s1, s2])
}

fn drt_agreement() -> Outcome {
    let mut rng = laws::rng(99);
    let mut exact = 0;
    for case in 0..600 {
        let inst = drt_instance(&mut rng, true);
        let drt = resolve_by_equations(&merge(&inst.k1, &inst.k2), &inst.eqs)
            .and_then(|k| drs_to_section(&k))
            .map_err(|e| format!("case {case}: {e}"))?;
        let (cover, family) = induced_cover(&inst);
        let result = glue(&cover, &family).map_err(|e| e.to_string())?;
        ensure(result.glued() == Some(&drt), || format!("case {case}: drt {drt}, glue {:?}", result.outcome))?;
        exact += 1;
    }

    // Shared vocabularies and non-injective equations: whatever glue
    // produces must still be the DRT result.
    let (mut glued, mut clashes, mut mismatches) = (0, 0, 0);
    for case in 0..600 {
        let inst = drt_instance(&mut rng, false);
        let drt = resolve_by_equations(&merge(&inst.k1, &inst.k2), &inst.eqs).and_then(|k| drs_to_section(&k));
        let (cover, family) = induced_cover(&inst);
        match (glue(&cover, &family).map_err(|e| e.to_string())?.outcome, drt) {
            (GluingOutcome::Glued(s), Ok(d)) if s == d => glued += 1,
            (GluingOutcome::Inconsistent { .. }, Err(semunify::Error::Inconsistent { .. })) => clashes += 1,
            (GluingOutcome::RestrictionMismatch { .. }, Ok(_)) => mismatches += 1,
            (g, d) => return Err(format!("case {case}: glue {g:?}, drt {d:?}")),
        }
    }
    Ok(format!(
        "{exact} disjoint instances equal; general: {glued} equal, {clashes} both inconsistent, {mismatches} not gluable"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 john sleeps, he snores: golden gluing", john_sleeps),
        ("2 john beats his donkey: unique gluing", donkey_beating),
        ("3 agreement: merged cover inconsistent, apart cover glues", agreement),
        ("4 consistent union without a gluing", counterexample),
        ("5 bananas and monkeys: frequency ranking", bananas),
        ("6 restriction functor laws, exhaustive", functor_laws),
        ("7 at most one gluing, equal to glue", uniqueness),
        ("8 disjoint vocabularies: consistent implies glued", disjoint_shortcut),
        ("9 distribution functor properties", distributions),
        ("10 DRS resolution agrees with gluing", drt_agreement),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
