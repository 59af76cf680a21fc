//! Command-line front end.
//!
//! Every subcommand reads a problem file (see [`dsl`]) and prints either a
//! human-readable report or, with `--machine`, one JSON document with sorted
//! keys. Exit codes: 0 on success, 1 on a semantic failure (no gluing, an
//! inconsistency, a failed law), 2 on usage, input or parse errors.

pub mod dsl;
pub mod tsv;

use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::distribution::{Rational, Semiring as _};
use crate::drt::{drs_to_section, enumerate_candidate_covers, merge, resolve_by_equations, Drs};
use crate::gluing::{all_gluings_bruteforce, glue, Cover, GluingOutcome, DEFAULT_BRUTEFORCE_BOUND};
use crate::laws;
use crate::logic::{Literal, Section, Var};
use crate::presheaf::restrict;
use crate::rank::{resolve, Strictness};
use dsl::{parse_problem, DslError, Problem};

#[derive(Debug, Parser)]
#[command(name = "semunify", version, about = "Glue local meanings of discourse into global ones")]
struct Cli {
    /// Print one JSON document with sorted keys instead of a table.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Glue a family of sections along a declared cover.
    Glue {
        /// Problem file, or `-` for stdin.
        file: String,
        /// Cover to glue along; optional when the file declares exactly one.
        #[arg(long)]
        cover: Option<String>,
        /// Sections in leg order; by default the one section over each leg's source.
        #[arg(long, value_delimiter = ',')]
        sections: Vec<String>,
        /// Largest number of literal slots the brute-force cross-check will search.
        #[arg(long, default_value_t = DEFAULT_BRUTEFORCE_BOUND)]
        max_bruteforce: usize,
    },
    /// Restrict a section along a morphism.
    Restrict {
        file: String,
        #[arg(long)]
        morphism: String,
        #[arg(long)]
        section: String,
    },
    /// List the candidate covers for the declared anaphors.
    Covers {
        file: String,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Rank candidate gluings by merging-pattern frequencies.
    Rank {
        file: String,
        /// Frequency table: `label<TAB>count` per line.
        freqs: String,
        #[command(flatten)]
        family: FamilyArgs,
        /// Fail on a merging without a pattern or a count (default).
        #[arg(long, overrides_with = "no_strict")]
        strict: bool,
        /// Count mergings without a pattern or a count as zero.
        #[arg(long, overrides_with = "strict")]
        no_strict: bool,
    },
    /// Merge DRSs and resolve anaphora by equations.
    Resolve {
        file: String,
        /// DRSs to merge, in order; all declared DRSs by default.
        #[arg(long, value_delimiter = ',')]
        drs: Vec<String>,
        /// Equation `anaphor=antecedent`; repeatable.
        #[arg(long = "eq")]
        eqs: Vec<String>,
    },
    /// Run the functor-law, semiring and gluing property suites.
    LawsCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases per suite.
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        /// Also run the exhaustive functor-law enumeration.
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Debug, clap::Args)]
struct FamilyArgs {
    /// Antecedent section; the first declared section by default.
    #[arg(long)]
    antecedent: Option<String>,
    /// Anaphor sections; every other section by default.
    #[arg(long, value_delimiter = ',')]
    anaphors: Vec<String>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Dsl { path: String, source: DslError },
    #[error("{path}: {source}")]
    Tsv { path: String, source: tsv::TsvError },
    #[error(transparent)]
    Domain(#[from] crate::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        use crate::Error as E;
        match self {
            CliError::Domain(
                E::Inconsistent { .. }
                | E::InconsistentCover { .. }
                | E::NoGluing { .. }
                | E::AllZero,
            ) => 1,
            _ => 2,
        }
    }
}

/// A finished command: what to print and how to exit.
struct Report {
    json: Value,
    text: String,
    code: i32,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: &str) -> Result<String, CliError> {
        let io = |source| CliError::Io {
            path: path.to_string(),
            source,
        };
        if path == "-" {
            let mut text = String::new();
            self.stdin.read_to_string(&mut text).map_err(io)?;
            Ok(text)
        } else {
            std::fs::read_to_string(path).map_err(io)
        }
    }

    fn problem(&mut self, path: &str) -> Result<Problem, CliError> {
        let text = self.read(path)?;
        let dsl = |source| CliError::Dsl {
            path: path.to_string(),
            source,
        };
        parse_problem(&text).and_then(|f| f.elaborate()).map_err(dsl)
    }

    fn warn(&mut self, message: &str) {
        let _ = writeln!(self.stderr, "warning: {message}");
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let mut io = Io { stdin, stderr };
    let outcome = match cli.command {
        Command::Glue {
            file,
            cover,
            sections,
            max_bruteforce,
        } => cmd_glue(&mut io, &file, cover.as_deref(), &sections, max_bruteforce),
        Command::Restrict {
            file,
            morphism,
            section,
        } => cmd_restrict(&mut io, &file, &morphism, &section),
        Command::Covers { file, family } => cmd_covers(&mut io, &file, &family),
        Command::Rank {
            file,
            freqs,
            family,
            no_strict,
            ..
        } => {
            let strictness = if no_strict {
                Strictness::Lenient
            } else {
                Strictness::Strict
            };
            cmd_rank(&mut io, &file, &freqs, &family, strictness)
        }
        Command::Resolve { file, drs, eqs } => cmd_resolve(&mut io, &file, &drs, &eqs),
        Command::LawsCheck {
            seed,
            cases,
            exhaustive,
        } => cmd_laws(seed, cases, exhaustive),
    };
    match outcome {
        Ok(report) => {
            let written = if cli.machine {
                writeln!(stdout, "{}", report.json)
            } else {
                write!(stdout, "{}", report.text)
            };
            if written.is_err() {
                return 2;
            }
            report.code
        }
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    run(
        std::env::args_os(),
        &mut std::io::stdin().lock(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

fn literals_json<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> Value {
    Value::Array(lits.into_iter().map(|l| Value::String(l.to_string())).collect())
}

fn set_text<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> String {
    let parts: Vec<String> = lits.into_iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn section_json(s: &Section) -> Value {
    json!({
        "context": s.context().to_string(),
        "literals": literals_json(s.literals()),
    })
}

fn get_section<'a>(pb: &'a Problem, name: &str) -> Result<&'a Section, CliError> {
    pb.section(name)
        .ok_or_else(|| CliError::Usage(format!("no section named `{name}`")))
}

fn cmd_glue(
    io: &mut Io,
    path: &str,
    cover: Option<&str>,
    sections: &[String],
    bound: usize,
) -> Result<Report, CliError> {
    let pb = io.problem(path)?;
    let name = match cover {
        Some(n) => n.to_string(),
        None => match pb.covers.as_slice() {
            [(n, ..)] => n.clone(),
            [] => return Err(CliError::Usage(format!("{path} declares no cover"))),
            _ => return Err(CliError::Usage(format!("{path} declares several covers; pass --cover"))),
        },
    };
    let (c, legs) = pb
        .cover(&name)
        .ok_or_else(|| CliError::Usage(format!("no cover named `{name}`")))?;
    let section_names: Vec<String> = if sections.is_empty() {
        legs.iter()
            .map(|leg| match pb.sections_over_source(leg).as_slice() {
                [only] => Ok(only.to_string()),
                found => Err(CliError::Usage(format!(
                    "leg `{leg}` has {} candidate sections; pass --sections",
                    found.len()
                ))),
            })
            .collect::<Result<_, _>>()?
    } else {
        sections.to_vec()
    };
    let family: Vec<Section> = section_names
        .iter()
        .map(|n| get_section(&pb, n).cloned())
        .collect::<Result<_, _>>()?;
    let result = glue(c, &family)?;

    let mut text = format!("cover {name} on {} with {} legs\n", c.target(), legs.len());
    let mut json = json!({ "command": "glue", "cover": name });
    let mut code = 0;
    match &result.outcome {
        GluingOutcome::Glued(s) => {
            let _ = writeln!(text, "glued: {s}");
            json["outcome"] = json!("glued");
            json["section"] = section_json(s);
        }
        GluingOutcome::Inconsistent { positive, negative } => {
            code = 1;
            let _ = writeln!(text, "no gluing: {positive} clashes with {negative}");
            json["outcome"] = json!("inconsistent");
            json["clash"] = json!([positive.to_string(), negative.to_string()]);
        }
        GluingOutcome::RestrictionMismatch { leg, residue } => {
            code = 1;
            let _ = writeln!(
                text,
                "no gluing: restriction mismatch on leg {} (section {})",
                legs[*leg], section_names[*leg]
            );
            let _ = writeln!(text, "residue: {}", set_text(residue));
            json["outcome"] = json!("restriction_mismatch");
            json["leg"] = json!(legs[*leg]);
            json["residue"] = literals_json(residue);
        }
    }
    let mut residues = serde_json::Map::new();
    for (leg, residue) in &result.residues {
        if !matches!(&result.outcome, GluingOutcome::RestrictionMismatch { leg: first, .. } if first == leg) {
            let _ = writeln!(text, "also fails on leg {}: residue {}", legs[*leg], set_text(residue));
        }
        residues.insert(legs[*leg].clone(), literals_json(residue));
    }
    json["residues"] = Value::Object(residues);

    match all_gluings_bruteforce(c, &family, bound) {
        Ok(found) => {
            let agrees = match (found.as_slice(), result.glued()) {
                ([], None) => true,
                ([only], Some(s)) => only == s,
                _ => false,
            };
            let _ = writeln!(
                text,
                "oracle: {} gluing(s), {}",
                found.len(),
                if agrees { "agrees" } else { "DISAGREES" }
            );
            if !agrees {
                code = 1;
            }
            json["oracle"] = json!({ "gluings": found.len(), "agrees": agrees });
        }
        Err(crate::Error::TooLarge { slots, bound }) => {
            let _ = writeln!(text, "oracle: skipped ({slots} literal slots exceed {bound})");
            json["oracle"] = Value::Null;
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Report { json, text, code })
}

fn cmd_restrict(io: &mut Io, path: &str, morphism: &str, section: &str) -> Result<Report, CliError> {
    let pb = io.problem(path)?;
    let m = pb
        .morphism(morphism)
        .ok_or_else(|| CliError::Usage(format!("no morphism named `{morphism}`")))?;
    let s = get_section(&pb, section)?;
    let r = restrict(m, s)?;
    Ok(Report {
        text: format!("{r}\n"),
        json: json!({ "command": "restrict", "morphism": morphism, "section": section_json(&r) }),
        code: 0,
    })
}

fn family<'a>(pb: &'a Problem, args: &FamilyArgs) -> Result<Vec<&'a Section>, CliError> {
    let antecedent = match &args.antecedent {
        Some(n) => n.clone(),
        None => pb
            .sections
            .first()
            .map(|(n, _)| n.clone())
            .ok_or_else(|| CliError::Usage("the problem declares no sections".into()))?,
    };
    let anaphors: Vec<String> = if args.anaphors.is_empty() {
        pb.sections
            .iter()
            .map(|(n, _)| n.clone())
            .filter(|n| *n != antecedent)
            .collect()
    } else {
        args.anaphors.clone()
    };
    std::iter::once(&antecedent)
        .chain(&anaphors)
        .map(|n| get_section(pb, n))
        .collect()
}

fn candidate_covers(io: &mut Io, path: &str, args: &FamilyArgs) -> Result<(Problem, Vec<Section>, Vec<Cover>), CliError> {
    let pb = io.problem(path)?;
    let sections: Vec<Section> = family(&pb, args)?.into_iter().cloned().collect();
    let covers = enumerate_candidate_covers(&sections[0], &sections[1..], &pb.anaphors)?;
    Ok((pb, sections, covers))
}

fn legs_text(c: &Cover) -> String {
    c.legs()[1..]
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn legs_json(c: &Cover) -> Value {
    Value::Array(
        c.legs()
            .iter()
            .map(|m| {
                let map: serde_json::Map<String, Value> = m
                    .varmap()
                    .iter()
                    .map(|(a, b)| (a.to_string(), json!(b.to_string())))
                    .collect();
                Value::Object(map)
            })
            .collect(),
    )
}

fn cmd_covers(io: &mut Io, path: &str, args: &FamilyArgs) -> Result<Report, CliError> {
    let (_, sections, covers) = candidate_covers(io, path, args)?;
    let mut text = format!("{} candidate cover(s) on {}\n", covers.len(), covers.first().map_or_else(String::new, |c| c.target().to_string()));
    let mut items = Vec::new();
    for (i, c) in covers.iter().enumerate() {
        let result = glue(c, &sections)?;
        let gluing = result.glued();
        let _ = writeln!(
            text,
            "t{}  {}  {}",
            i + 1,
            legs_text(c),
            gluing.map_or_else(|| "no gluing".to_string(), ToString::to_string)
        );
        items.push(json!({
            "name": format!("t{}", i + 1),
            "legs": legs_json(c),
            "gluing": gluing.map(|s| literals_json(s.literals())),
        }));
    }
    Ok(Report {
        text,
        json: json!({ "command": "covers", "covers": items }),
        code: 0,
    })
}

fn decimal(r: &Rational) -> String {
    use num::ToPrimitive;
    format!("{:.4}", r.to_f64().unwrap_or(f64::NAN))
}

fn cmd_rank(
    io: &mut Io,
    path: &str,
    freqs: &str,
    args: &FamilyArgs,
    strictness: Strictness,
) -> Result<Report, CliError> {
    let (pb, sections, covers) = candidate_covers(io, path, args)?;
    let table_text = io.read(freqs)?;
    let table = tsv::parse_frequency_table(&table_text).map_err(|source| CliError::Tsv {
        path: freqs.to_string(),
        source,
    })?;
    for label in table.unused_labels(&pb.patterns) {
        io.warn(&format!("{freqs}: label \"{label}\" matches no pattern; ignored"));
    }
    let resolution = resolve(&covers, &sections, &pb.patterns, &table, strictness)?;
    let ranking = &resolution.ranking;

    let rows: Vec<[String; 5]> = ranking
        .candidates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let p = ranking.probability(i);
            let fraction = if p.is_zero() {
                "0".to_string()
            } else {
                format!("{}/{}", c.weight, ranking.total)
            };
            [format!("t{}", i + 1), legs_text(&c.cover), fraction, decimal(&p), c.gluing.to_string()]
        })
        .collect();
    let header = ["event", "mergings", "weight", "p", "gluing"].map(String::from);
    let widths: Vec<usize> = (0..5)
        .map(|k| {
            std::iter::once(&header)
                .chain(&rows)
                .map(|r| r[k].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut text = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}", w = *w))
            .collect();
        let _ = writeln!(text, "{}", cells.join("  ").trim_end());
    }
    let winners: Vec<String> = ranking
        .candidates
        .iter()
        .enumerate()
        .filter(|(_, c)| resolution.best.contains(&c.gluing))
        .map(|(i, _)| format!("t{}", i + 1))
        .collect();
    for s in &resolution.best {
        let _ = writeln!(text, "winner: {} {s}", winners.join(", "));
    }
    let _ = writeln!(text, "entropy: {:.4} bits", resolution.entropy);

    let candidates: Vec<Value> = ranking
        .candidates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let p = ranking.probability(i);
            json!({
                "name": format!("t{}", i + 1),
                "legs": legs_json(&c.cover),
                "gluing": literals_json(c.gluing.literals()),
                "weight": c.weight,
                "probability": p.to_string(),
                "decimal": decimal(&p),
            })
        })
        .collect();
    let json = json!({
        "command": "rank",
        "total": ranking.total,
        "candidates": candidates,
        "winners": winners,
        "best": resolution.best.iter().map(|s| literals_json(s.literals())).collect::<Vec<_>>(),
        "entropy": resolution.entropy,
    });
    Ok(Report { json, text, code: 0 })
}

fn parse_equation(s: &str) -> Result<(Var, Var), CliError> {
    let bad = || CliError::Usage(format!("equation `{s}` is not of the form anaphor=antecedent"));
    let (l, r) = s.split_once('=').ok_or_else(bad)?;
    let l = Var::new(l.trim()).map_err(|_| bad())?;
    let r = Var::new(r.trim()).map_err(|_| bad())?;
    Ok((l, r))
}

fn cmd_resolve(io: &mut Io, path: &str, names: &[String], eqs: &[String]) -> Result<Report, CliError> {
    let pb = io.problem(path)?;
    let parts: Vec<&Drs> = if names.is_empty() {
        pb.drs.iter().map(|(_, k)| k).collect()
    } else {
        names
            .iter()
            .map(|n| {
                pb.drs(n)
                    .ok_or_else(|| CliError::Usage(format!("no DRS named `{n}`")))
            })
            .collect::<Result<_, _>>()?
    };
    if parts.is_empty() {
        return Err(CliError::Usage(format!("{path} declares no DRS")));
    }
    let merged = parts[1..]
        .iter()
        .fold(parts[0].clone(), |acc, k| merge(&acc, k));
    let eqs: Vec<(Var, Var)> = eqs.iter().map(|e| parse_equation(e)).collect::<Result<_, _>>()?;
    let resolved = resolve_by_equations(&merged, &eqs)?;
    let section = drs_to_section(&resolved)?;
    let text = format!("merged:   {merged}\nresolved: {resolved}\nsection:  {section}\n");
    let json = json!({
        "command": "resolve",
        "merged": merged.to_string(),
        "resolved": {
            "referents": resolved.referents().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "conditions": literals_json(resolved.conditions()),
        },
        "section": section_json(&section),
    });
    Ok(Report { json, text, code: 0 })
}

fn cmd_laws(seed: u64, cases: usize, exhaustive: bool) -> Result<Report, CliError> {
    let mut text = String::new();
    let mut suites = serde_json::Map::new();
    let mut ok = true;
    let mut record = |name: &str, checked: usize, failures: Vec<String>| {
        let _ = writeln!(text, "{name}: {checked} checked, {} failure(s)", failures.len());
        for f in failures.iter().take(5) {
            let _ = writeln!(text, "  {f}");
        }
        ok &= failures.is_empty();
        suites.insert(
            name.to_string(),
            json!({ "checked": checked, "failures": failures }),
        );
    };

    let functor = laws::random_functor_suite(cases, seed);
    record(
        "functor laws",
        functor.cases,
        functor.violations.iter().map(|v| format!("{v:?}")).collect(),
    );
    if exhaustive {
        let all = laws::exhaustive_functor_suite(1, seed);
        record(
            "functor laws (exhaustive)",
            all.cases,
            all.violations.iter().map(|v| format!("{v:?}")).collect(),
        );
    }
    let mut rng = laws::rng(seed);
    let booleans = laws::check_semiring_axioms(&[false, true]);
    record("boolean semiring", booleans.checks, booleans.failures);
    let rationals = laws::check_semiring_axioms(&laws::rational_samples(&mut rng, 10));
    record("rational semiring", rationals.checks, rationals.failures);
    let reals = laws::check_semiring_axioms(&laws::real_samples(&mut rng, 10));
    record("real semiring", reals.checks, reals.failures);
    let unique = laws::uniqueness_suite(cases, seed, DEFAULT_BRUTEFORCE_BOUND)?;
    record("gluing uniqueness", unique.instances, unique.failures);
    let disjoint = laws::disjoint_shortcut_suite(cases, seed)?;
    record("disjoint shortcut", disjoint.instances, disjoint.failures);

    let json = json!({ "command": "laws-check", "seed": seed, "passed": ok, "suites": suites });
    Ok(Report {
        json,
        text,
        code: if ok { 0 } else { 1 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("semunify").chain(args.iter().copied()),
            &mut stdin.as_bytes(),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    const IDENTITY: &str = "vocab V { R/1, S/2 }\ncontext C = (V, {x, y})\n\
        section s over C { R(x); !S(x,y) }\nmorphism id : C -> C { x -> x, y -> y }\n";

    #[test]
    fn restrict_along_identity_echoes_the_section() {
        let (code, out, _) = run_str(&["restrict", "-", "--morphism", "id", "--section", "s"], IDENTITY);
        assert_eq!(code, 0);
        assert_eq!(out, "{R(x), ¬S(x,y)}\n");
    }

    #[test]
    fn usage_and_parse_errors_exit_2() {
        assert_eq!(run_str(&["frobnicate"], "").0, 2);
        let (code, _, err) = run_str(&["restrict", "-", "--morphism", "id", "--section", "s"], "vocab V {");
        assert_eq!(code, 2);
        assert!(err.contains("-:1:10: syntax error"), "{err}");
        assert_eq!(run_str(&["--help"], "").0, 0);
    }

    #[test]
    fn resolve_reports_inconsistency_with_exit_1() {
        let file = "drs K { refs {a, b} conds { Man(a); !Man(b) } }";
        let (code, _, err) = run_str(&["resolve", "-", "--eq", "b=a"], file);
        assert_eq!(code, 1);
        assert!(err.contains("inconsistent"));
        assert_eq!(run_str(&["resolve", "-", "--eq", "b"], file).0, 2);
    }

    #[test]
    fn machine_output_is_sorted_json() {
        let (code, out, _) = run_str(
            &["--machine", "restrict", "-", "--morphism", "id", "--section", "s"],
            IDENTITY,
        );
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["section"]["literals"], json!(["R(x)", "¬S(x,y)"]));
        assert!(out.find("\"command\"").unwrap() < out.find("\"morphism\"").unwrap());
    }

    #[test]
    fn small_laws_check_passes() {
        let (code, out, _) = run_str(&["laws-check", "--cases", "50", "--seed", "3"], "");
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("gluing uniqueness: 50 checked, 0 failure(s)"));
    }
}
