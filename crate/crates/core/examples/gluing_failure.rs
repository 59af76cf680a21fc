//! The two ways gluing fails: an inconsistent union, and a consistent union
//! that restricts to more than a leg's section.

use semunify::{all_gluings_bruteforce, canonical_glue, glue, Context, Cover, GluingOutcome, Morphism, Section};

fn report(name: &str, cover: &Cover, family: &[Section]) -> semunify::Result<()> {
    println!("== {name}");
    match canonical_glue(cover, family) {
        Ok(s) => println!("canonical union: {s}"),
        Err(e) => println!("canonical union: {e}"),
    }
    let result = glue(cover, family)?;
    match &result.outcome {
        GluingOutcome::Glued(s) => println!("glued: {s}"),
        GluingOutcome::Inconsistent { positive, negative } => {
            println!("inconsistent: {positive} vs {negative}")
        }
        GluingOutcome::RestrictionMismatch { leg, residue } => {
            let residue: Vec<String> = residue.iter().map(ToString::to_string).collect();
            println!("leg {leg} sees extra literals: {}", residue.join(", "));
        }
    }
    println!("brute force: {} gluing(s)", all_gluings_bruteforce(cover, family, 20)?.len());
    Ok(())
}

fn main() -> semunify::Result<()> {
    let target = Context::parse("R/1, S/1", ["z", "w"])?;
    let c1 = Context::parse("R/1, S/1", ["x", "u"])?;
    let c2 = Context::parse("R/1, S/1", ["y", "v"])?;
    let cover = Cover::new(vec![
        Morphism::parse(c1.clone(), target.clone(), [("x", "z"), ("u", "w")])?,
        Morphism::parse(c2.clone(), target, [("y", "z"), ("v", "w")])?,
    ])?;
    let family = [
        Section::parse(c1, "R(x); S(u)")?,
        Section::parse(c2, "S(y); R(v)")?,
    ];
    report("shared vocabulary", &cover, &family)?;

    let target = Context::parse("John/1, Man/1, donkey/1, grey/1", ["a", "b"])?;
    let x1 = Context::parse("John/1, Man/1", ["x"])?;
    let x2 = Context::parse("donkey/1, Man/1", ["y"])?;
    let x3 = Context::parse("grey/1", ["z"])?;
    let merged = Cover::new(vec![
        Morphism::parse(x1.clone(), target.clone(), [("x", "a")])?,
        Morphism::parse(x2.clone(), target.clone(), [("y", "a")])?,
        Morphism::parse(x3.clone(), target, [("z", "b")])?,
    ])?;
    let family = [
        Section::parse(x1, "John(x); Man(x)")?,
        Section::parse(x2, "donkey(y); ¬Man(y)")?,
        Section::parse(x3, "grey(z)")?,
    ];
    report("man merged with donkey", &merged, &family)
}
