//! Problem files: parse, elaborate, print back, and drive the command line.

use semunify::cli::{self, dsl::parse_problem};

const COUNTEREXAMPLE: &str = include_str!("../data/counterexample.sem");

fn main() {
    let file = match parse_problem(COUNTEREXAMPLE) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    print!("{file}");
    assert_eq!(parse_problem(&file.to_string()).as_ref(), Ok(&file));

    let problem = file.elaborate().expect("well-formed");
    println!("{} sections, {} covers", problem.sections.len(), problem.covers.len());

    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        ["semunify", "glue", "-"],
        &mut COUNTEREXAMPLE.as_bytes(),
        &mut out,
        &mut err,
    );
    print!("{}", String::from_utf8_lossy(&out));
    println!("exit code {code}");
}
