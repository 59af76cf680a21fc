//! "John owns a donkey. It is grey." Candidate covers for `it`, pruned by
//! the agreement constraint ¬Man.

use semunify::drt::{enumerate_candidate_covers, AnaphorSpec};
use semunify::logic::{parse_literals, vars};
use semunify::{glue, Context, Section};

fn main() -> semunify::Result<()> {
    let antecedent = Section::parse(
        Context::parse("John/1, Man/1, donkey/1", ["x", "y"])?,
        "John(x); Man(x); donkey(y); ¬Man(y)",
    )?;
    let grey = Section::parse(Context::parse("grey/1", ["z"])?, "grey(z)")?;
    let family = [antecedent.clone(), grey.clone()];

    let unconstrained = enumerate_candidate_covers(&antecedent, std::slice::from_ref(&grey), &[])?;
    println!("without agreement: {} candidate cover(s)", unconstrained.len());

    let it = AnaphorSpec::new(vars(["z"])?).with_constraints(parse_literals("¬Man(z)")?);
    for cover in enumerate_candidate_covers(&antecedent, &[grey], &[it])? {
        let gluing = glue(&cover, &family)?;
        println!("it = {} gives {}", cover.legs()[1], gluing.glued().expect("consistent"));
    }
    Ok(())
}
