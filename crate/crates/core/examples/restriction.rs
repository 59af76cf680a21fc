//! Restriction pulls a section back along a morphism; it is contravariant.

use semunify::presheaf::check_functor_laws;
use semunify::{compose, restrict, Context, Morphism, Section};

fn main() -> semunify::Result<()> {
    let big = Context::parse("John/1, donkey/1, owns/2, beats/2", ["a", "b"])?;
    let s = Section::parse(big.clone(), "John(a); donkey(b); owns(a,b); ¬beats(b,a)")?;

    // Forget `donkey`, then forget `John` and rename the referents.
    let mid = Context::parse("John/1, owns/2, beats/2", ["p", "q"])?;
    let g = Morphism::parse(mid.clone(), big, [("p", "a"), ("q", "b")])?;
    let small = Context::parse("owns/2, beats/2", ["u", "w"])?;
    let f = Morphism::parse(small, mid, [("u", "p"), ("w", "q")])?;

    let via_g = restrict(&g, &s)?;
    println!("s             = {s}");
    println!("g             = {g}");
    println!("restrict(g,s) = {via_g}");
    println!("f             = {f}");
    println!("restrict(f,.) = {}", restrict(&f, &via_g)?);

    let gf = compose(&g, &f)?;
    println!("g∘f           = {gf}");
    println!("restrict(g∘f) = {}", restrict(&gf, &s)?);

    let report = check_functor_laws([(&g, &f, &s)]);
    println!("functor laws: {} case(s), {} violation(s)", report.cases, report.violations.len());
    Ok(())
}
