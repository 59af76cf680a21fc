//! "John sleeps. He snores." glued along `x ↦ z ← y`.

use semunify::{all_gluings_bruteforce, canonical_glue, glue, Context, Cover, Morphism, Section};

fn main() -> semunify::Result<()> {
    let c1 = Context::parse("John/1, sleeps/1", ["x"])?;
    let c2 = Context::parse("snores/1", ["y"])?;
    let target = Context::parse("John/1, sleeps/1, snores/1", ["z"])?;

    let s1 = Section::parse(c1.clone(), "John(x); sleeps(x)")?;
    let s2 = Section::parse(c2.clone(), "snores(y)")?;

    let cover = Cover::new(vec![
        Morphism::parse(c1, target.clone(), [("x", "z")])?,
        Morphism::parse(c2, target, [("y", "z")])?,
    ])?;
    cover.validate()?;
    let family = [s1, s2];

    println!("cover:     {cover}");
    println!("canonical: {}", canonical_glue(&cover, &family)?);
    match glue(&cover, &family)?.glued() {
        Some(s) => println!("gluing:    {s}"),
        None => println!("no gluing"),
    }
    let all = all_gluings_bruteforce(&cover, &family, 20)?;
    println!("brute force finds {} gluing(s)", all.len());
    Ok(())
}
