//! "John owns a donkey. He beats it." through DRS merge and equations, and
//! the same result as a gluing.

use semunify::drt::{drs_to_section, merge, resolve_by_equations, Drs};
use semunify::{glue, Context, Cover, Morphism, Var};

fn main() -> semunify::Result<()> {
    let k1 = Drs::parse(["x", "y"], "John(x); Donkey(y); Own(x,y)")?;
    let k2 = Drs::parse(["v", "w"], "Beat(v,w)")?;
    let merged = merge(&k1, &k2);
    println!("K1 ⊕ K2  = {merged}");

    let eqs = [(Var::new("v")?, Var::new("x")?), (Var::new("w")?, Var::new("y")?)];
    let resolved = resolve_by_equations(&merged, &eqs)?;
    println!("resolved = {resolved}");
    let drt = drs_to_section(&resolved)?;
    println!("section  = {drt}");

    let s1 = drs_to_section(&k1)?;
    let s2 = drs_to_section(&k2)?;
    let target = Context::new(
        k1.vocabulary()?.union(&k2.vocabulary()?)?,
        k1.referents().clone(),
    );
    let cover = Cover::new(vec![
        Morphism::inclusion(s1.context(), &target)?,
        Morphism::parse(s2.context().clone(), target, [("v", "x"), ("w", "y")])?,
    ])?;
    let sheaf = glue(&cover, &[s1, s2])?;
    println!("gluing   = {}", sheaf.glued().expect("disjoint vocabularies glue"));
    println!("agree: {}", sheaf.glued() == Some(&drt));
    Ok(())
}
