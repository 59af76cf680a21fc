//! "John gave the bananas to the monkeys. They were ripe. They were cheeky."
//! Candidate gluings ranked by lemma-pair counts.

use semunify::drt::{enumerate_candidate_covers, AnaphorSpec};
use semunify::logic::vars;
use semunify::rank::{resolve, FrequencyTable, MergingPattern, Strictness};
use semunify::{Context, Section, Var};

fn pattern(anaphor: &str, antecedent: &str, label: &str) -> semunify::Result<MergingPattern> {
    Ok(MergingPattern::new(Var::new(anaphor)?, Var::new(antecedent)?, label))
}

fn main() -> semunify::Result<()> {
    let gave = Section::parse(
        Context::parse("John/1, Banana/1, Monkey/1, Gave/3", ["x", "y", "z"])?,
        "John(x); Banana(y); Monkey(z); Gave(x,y,z)",
    )?;
    let ripe = Section::parse(Context::parse("Ripe/1", ["u"])?, "Ripe(u)")?;
    let cheeky = Section::parse(Context::parse("Cheeky/1", ["v"])?, "Cheeky(v)")?;

    let plural = vars(["y", "z"])?;
    let specs = [
        AnaphorSpec::new(vars(["u"])?).allowing(plural.clone()),
        AnaphorSpec::new(vars(["v"])?).allowing(plural),
    ];
    let covers = enumerate_candidate_covers(&gave, &[ripe.clone(), cheeky.clone()], &specs)?;

    let patterns = [
        pattern("u", "y", "ripe banana")?,
        pattern("u", "z", "ripe monkey")?,
        pattern("v", "y", "cheeky banana")?,
        pattern("v", "z", "cheeky monkey")?,
    ];
    let table = FrequencyTable::from_iter([
        ("ripe banana", 14),
        ("ripe monkey", 0),
        ("cheeky banana", 0),
        ("cheeky monkey", 10),
    ]);

    let resolution = resolve(&covers, &[gave, ripe, cheeky], &patterns, &table, Strictness::Strict)?;
    let ranking = &resolution.ranking;
    for (i, c) in ranking.candidates.iter().enumerate() {
        println!(
            "t{}  {:>2}/{}  p = {:<5}  {}",
            i + 1,
            c.weight,
            ranking.total,
            ranking.probability(i).to_string(),
            c.gluing
        );
    }
    for best in &resolution.best {
        println!("most likely: {best}");
    }
    println!("entropy: {:.4} bits", resolution.entropy);
    Ok(())
}
