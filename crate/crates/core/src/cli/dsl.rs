//! The problem-file language.
//!
//! ```text
//! # comments run to end of line
//! vocab V { John/1, owns/2 }
//! context C = (V, {x, y})
//! section s over C { John(x); ¬Man(y) }
//! morphism f : C1 -> C2 { x -> z, u -> w }
//! cover c on C = [f1, f2]
//! drs K { refs {x, y} conds { John(x) } }
//! anaphor u constraints { !Man(u) } allowed {y, z}
//! pattern u -> y label "ripe banana"
//! ```
//!
//! Whitespace, including newlines, only separates tokens. Names of vocabularies,
//! contexts, sections, morphisms, covers and DRS share one namespace and must
//! be declared before use.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::drt::{AnaphorSpec, Drs};
use crate::gluing::Cover;
use crate::logic::{is_relation_name, is_var_name, Context, Literal, Polarity, RelationSymbol, Section, Var, Vocabulary};
use crate::presheaf::Morphism;
use crate::rank::MergingPattern;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{pos}: syntax error: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        pos: Pos,
        expected: Vec<String>,
        found: String,
    },
    #[error("{pos}: {message}")]
    Name { pos: Pos, message: String },
    #[error("{pos}: {source}")]
    Semantic {
        pos: Pos,
        #[source]
        source: crate::Error,
    },
}

impl DslError {
    pub fn pos(&self) -> Pos {
        match self {
            DslError::Syntax { pos, .. } | DslError::Name { pos, .. } | DslError::Semantic { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Vocab {
        name: String,
        symbols: Vec<(String, usize)>,
    },
    Context {
        name: String,
        vocab: String,
        vars: Vec<Var>,
    },
    Section {
        name: String,
        context: String,
        literals: Vec<Literal>,
    },
    Morphism {
        name: String,
        source: String,
        target: String,
        pairs: Vec<(Var, Var)>,
    },
    Cover {
        name: String,
        target: String,
        legs: Vec<String>,
    },
    Drs {
        name: String,
        refs: Vec<Var>,
        conds: Vec<Literal>,
    },
    Anaphor {
        var: Var,
        constraints: Vec<Literal>,
        allowed: Option<Vec<Var>>,
    },
    Pattern {
        anaphor: Var,
        antecedent: Var,
        label: String,
    },
}

impl Decl {
    fn kind(&self) -> Kind {
        match self {
            Decl::Vocab { .. } => Kind::Vocab,
            Decl::Context { .. } => Kind::Context,
            Decl::Section { .. } => Kind::Section,
            Decl::Morphism { .. } => Kind::Morphism,
            Decl::Cover { .. } => Kind::Cover,
            Decl::Drs { .. } => Kind::Drs,
            Decl::Anaphor { .. } | Decl::Pattern { .. } => Kind::Other,
        }
    }

    fn name(&self) -> Option<&str> {
        match self {
            Decl::Vocab { name, .. }
            | Decl::Context { name, .. }
            | Decl::Section { name, .. }
            | Decl::Morphism { name, .. }
            | Decl::Cover { name, .. }
            | Decl::Drs { name, .. } => Some(name),
            Decl::Anaphor { .. } | Decl::Pattern { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Vocab,
    Context,
    Section,
    Morphism,
    Cover,
    Drs,
    Other,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Vocab => "vocabulary",
            Kind::Context => "context",
            Kind::Section => "section",
            Kind::Morphism => "morphism",
            Kind::Cover => "cover",
            Kind::Drs => "DRS",
            Kind::Other => "declaration",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Item {
    pub pos: Pos,
    pub decl: Decl,
}

/// A parsed problem file. Equality ignores source positions.
#[derive(Debug, Clone, Default)]
pub struct ProblemFile {
    pub items: Vec<Item>,
}

impl PartialEq for ProblemFile {
    fn eq(&self, other: &Self) -> bool {
        self.decls().eq(other.decls())
    }
}

impl ProblemFile {
    pub fn decls(&self) -> impl Iterator<Item = &Decl> {
        self.items.iter().map(|i| &i.decl)
    }

    pub fn count(&self, pred: impl Fn(&Decl) -> bool) -> usize {
        self.decls().filter(|d| pred(d)).count()
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Vocab { name, symbols } => {
                let syms: Vec<String> = symbols.iter().map(|(n, a)| format!("{n}/{a}")).collect();
                write!(f, "vocab {name} {{ {} }}", syms.join(", "))
            }
            Decl::Context { name, vocab, vars } => {
                write!(f, "context {name} = ({vocab}, {{{}}})", join(vars, ", "))
            }
            Decl::Section {
                name,
                context,
                literals,
            } => write!(f, "section {name} over {context} {{ {} }}", join(literals, "; ")),
            Decl::Morphism {
                name,
                source,
                target,
                pairs,
            } => {
                let pairs: Vec<String> = pairs.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
                write!(f, "morphism {name} : {source} -> {target} {{ {} }}", pairs.join(", "))
            }
            Decl::Cover { name, target, legs } => {
                write!(f, "cover {name} on {target} = [{}]", legs.join(", "))
            }
            Decl::Drs { name, refs, conds } => write!(
                f,
                "drs {name} {{ refs {{{}}} conds {{ {} }} }}",
                join(refs, ", "),
                join(conds, "; ")
            ),
            Decl::Anaphor {
                var,
                constraints,
                allowed,
            } => {
                write!(f, "anaphor {var}")?;
                if !constraints.is_empty() {
                    write!(f, " constraints {{ {} }}", join(constraints, "; "))?;
                }
                if let Some(allowed) = allowed {
                    write!(f, " allowed {{{}}}", join(allowed, ", "))?;
                }
                Ok(())
            }
            Decl::Pattern {
                anaphor,
                antecedent,
                label,
            } => write!(f, "pattern {anaphor} -> {antecedent} label {}", quote(label)),
        }
    }
}

impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for decl in self.decls() {
            writeln!(f, "{decl}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(u64),
    Str(String),
    Arrow,
    Not,
    Punct(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "`{n}`"),
            Tok::Str(s) => write!(f, "{}", quote(s)),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Not => f.write_str("`¬`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, DslError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '#' => {
                while !matches!(chars.peek(), None | Some('\n')) {
                    bump!();
                }
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    out.push((Tok::Arrow, pos));
                } else {
                    return Err(DslError::Syntax {
                        pos,
                        expected: vec!["`->`".into()],
                        found: "`-`".into(),
                    });
                }
            }
            '!' | '¬' => {
                bump!();
                out.push((Tok::Not, pos));
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        None | Some('\n') => {
                            return Err(DslError::Syntax {
                                pos,
                                expected: vec!["closing `\"`".into()],
                                found: "end of line".into(),
                            })
                        }
                        Some('"') => break,
                        Some('\\') => match bump!() {
                            Some(e) => s.push(e),
                            None => continue,
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                out.push((Tok::Str(s), pos));
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    bump!();
                }
                let n = s.parse().map_err(|_| DslError::Syntax {
                    pos,
                    expected: vec!["a number that fits in 64 bits".into()],
                    found: s.clone(),
                })?;
                out.push((Tok::Number(n), pos));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_') {
                        break;
                    }
                    s.push(d);
                    bump!();
                }
                while chars.peek() == Some(&'\'') {
                    s.push('\'');
                    bump!();
                }
                out.push((Tok::Ident(s), pos));
            }
            '{' | '}' | '(' | ')' | '[' | ']' | ',' | ';' | '/' | '=' | ':' => {
                bump!();
                out.push((Tok::Punct(c), pos));
            }
            other => {
                return Err(DslError::Syntax {
                    pos,
                    expected: vec!["a token".into()],
                    found: format!("`{other}`"),
                })
            }
        }
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    declared: BTreeMap<String, (Kind, Pos)>,
    anaphors: BTreeSet<Var>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, DslError> {
        Err(DslError::Syntax {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn punct(&mut self, c: char) -> Result<(), DslError> {
        if self.peek() == &Tok::Punct(c) {
            self.next();
            Ok(())
        } else {
            self.fail(&[&format!("`{c}`")])
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Punct(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn arrow(&mut self) -> Result<(), DslError> {
        if self.peek() == &Tok::Arrow {
            self.next();
            Ok(())
        } else {
            self.fail(&["`->`"])
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), DslError> {
        if matches!(self.peek(), Tok::Ident(s) if s == kw) {
            self.next();
            Ok(())
        } else {
            self.fail(&[&format!("`{kw}`")])
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn name(&mut self) -> Result<String, DslError> {
        match self.peek() {
            Tok::Ident(s) if is_relation_name(s) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            _ => self.fail(&["a name"]),
        }
    }

    fn var(&mut self) -> Result<Var, DslError> {
        match self.peek() {
            Tok::Ident(s) if is_var_name(s) => {
                let v = Var::new(s.clone()).expect("lexed identifier");
                self.next();
                Ok(v)
            }
            _ => self.fail(&["a variable"]),
        }
    }

    fn number(&mut self) -> Result<u64, DslError> {
        match self.peek() {
            Tok::Number(n) => {
                let n = *n;
                self.next();
                Ok(n)
            }
            _ => self.fail(&["a number"]),
        }
    }

    /// Comma-separated items up to `close`, trailing comma allowed.
    fn list<T>(
        &mut self,
        close: char,
        mut item: impl FnMut(&mut Self) -> Result<T, DslError>,
    ) -> Result<Vec<T>, DslError> {
        let mut out = Vec::new();
        while !self.eat_punct(close) {
            out.push(item(self)?);
            if !self.eat_punct(',') {
                self.punct(close)?;
                break;
            }
        }
        Ok(out)
    }

    fn var_set(&mut self) -> Result<Vec<Var>, DslError> {
        self.punct('{')?;
        self.list('}', Self::var)
    }

    fn literal(&mut self) -> Result<Literal, DslError> {
        let polarity = if self.peek() == &Tok::Not {
            self.next();
            Polarity::Negative
        } else {
            Polarity::Positive
        };
        let pos = self.pos();
        let name = self.name()?;
        self.punct('(')?;
        let args = self.list(')', Self::var)?;
        Literal::new(polarity, &name, args).map_err(|source| DslError::Semantic { pos, source })
    }

    /// Literals separated by `;` or `,` inside braces.
    fn literal_block(&mut self) -> Result<Vec<Literal>, DslError> {
        self.punct('{')?;
        let mut out = Vec::new();
        loop {
            if self.eat_punct('}') {
                return Ok(out);
            }
            out.push(self.literal()?);
            if !(self.eat_punct(';') || self.eat_punct(',')) {
                self.punct('}')?;
                return Ok(out);
            }
        }
    }

    fn reference(&mut self, kind: Kind) -> Result<String, DslError> {
        let pos = self.pos();
        let name = self.name()?;
        match self.declared.get(&name) {
            Some((k, _)) if *k == kind => Ok(name),
            Some((k, _)) => Err(DslError::Name {
                pos,
                message: format!("`{name}` is a {k}, expected a {kind}"),
            }),
            None => Err(DslError::Name {
                pos,
                message: format!("undeclared {kind} `{name}`"),
            }),
        }
    }

    fn decl(&mut self) -> Result<Decl, DslError> {
        let Tok::Ident(head) = self.peek().clone() else {
            return self.fail(&["a declaration"]);
        };
        match head.as_str() {
            "vocab" => {
                self.next();
                let name = self.name()?;
                self.punct('{')?;
                let symbols = self.list('}', |p| {
                    let n = p.name()?;
                    p.punct('/')?;
                    Ok((n, usize::try_from(p.number()?).unwrap_or(usize::MAX)))
                })?;
                Ok(Decl::Vocab { name, symbols })
            }
            "context" => {
                self.next();
                let name = self.name()?;
                self.punct('=')?;
                self.punct('(')?;
                let vocab = self.reference(Kind::Vocab)?;
                self.punct(',')?;
                let vars = self.var_set()?;
                self.punct(')')?;
                Ok(Decl::Context { name, vocab, vars })
            }
            "section" => {
                self.next();
                let name = self.name()?;
                self.keyword("over")?;
                let context = self.reference(Kind::Context)?;
                let literals = self.literal_block()?;
                Ok(Decl::Section {
                    name,
                    context,
                    literals,
                })
            }
            "morphism" => {
                self.next();
                let name = self.name()?;
                self.punct(':')?;
                let source = self.reference(Kind::Context)?;
                self.arrow()?;
                let target = self.reference(Kind::Context)?;
                self.punct('{')?;
                let pairs = self.list('}', |p| {
                    let a = p.var()?;
                    p.arrow()?;
                    Ok((a, p.var()?))
                })?;
                Ok(Decl::Morphism {
                    name,
                    source,
                    target,
                    pairs,
                })
            }
            "cover" => {
                self.next();
                let name = self.name()?;
                self.keyword("on")?;
                let target = self.reference(Kind::Context)?;
                self.punct('=')?;
                self.punct('[')?;
                let legs = self.list(']', |p| p.reference(Kind::Morphism))?;
                Ok(Decl::Cover { name, target, legs })
            }
            "drs" => {
                self.next();
                let name = self.name()?;
                self.punct('{')?;
                self.keyword("refs")?;
                let refs = self.var_set()?;
                self.keyword("conds")?;
                let conds = self.literal_block()?;
                self.punct('}')?;
                Ok(Decl::Drs { name, refs, conds })
            }
            "anaphor" => {
                self.next();
                let pos = self.pos();
                let var = self.var()?;
                if !self.anaphors.insert(var.clone()) {
                    return Err(DslError::Name {
                        pos,
                        message: format!("anaphor `{var}` declared twice"),
                    });
                }
                let mut constraints = Vec::new();
                if self.is_keyword("constraints") {
                    self.next();
                    constraints = self.literal_block()?;
                }
                let mut allowed = None;
                if self.is_keyword("allowed") {
                    self.next();
                    allowed = Some(self.var_set()?);
                }
                Ok(Decl::Anaphor {
                    var,
                    constraints,
                    allowed,
                })
            }
            "pattern" => {
                self.next();
                let anaphor = self.var()?;
                self.arrow()?;
                let antecedent = self.var()?;
                self.keyword("label")?;
                let label = match self.next() {
                    (Tok::Str(s), _) => s,
                    _ => {
                        self.at -= 1;
                        return self.fail(&["a quoted label"]);
                    }
                };
                Ok(Decl::Pattern {
                    anaphor,
                    antecedent,
                    label,
                })
            }
            _ => self.fail(&[
                "`vocab`", "`context`", "`section`", "`morphism`", "`cover`", "`drs`",
                "`anaphor`", "`pattern`",
            ]),
        }
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, DslError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        declared: BTreeMap::new(),
        anaphors: BTreeSet::new(),
    };
    let mut items = Vec::new();
    while p.peek() != &Tok::Eof {
        let pos = p.pos();
        let decl = p.decl()?;
        if let Some(name) = decl.name() {
            if let Some((kind, first)) = p.declared.get(name) {
                return Err(DslError::Name {
                    pos,
                    message: format!("`{name}` already declared as a {kind} at {first}"),
                });
            }
            p.declared.insert(name.to_string(), (decl.kind(), pos));
        }
        items.push(Item { pos, decl });
    }
    Ok(ProblemFile { items })
}

/// The domain values a problem file declares, in declaration order.
#[derive(Debug, Clone, Default)]
pub struct Problem {
    pub vocabs: Vec<(String, Vocabulary)>,
    pub contexts: Vec<(String, Context)>,
    pub sections: Vec<(String, Section)>,
    /// Morphisms with the names of their source and target contexts.
    pub morphisms: Vec<(String, Morphism, String, String)>,
    /// Covers with the names of their legs.
    pub covers: Vec<(String, Cover, Vec<String>)>,
    pub drs: Vec<(String, Drs)>,
    pub anaphors: Vec<AnaphorSpec>,
    pub patterns: Vec<MergingPattern>,
    /// Context name of each section.
    pub section_contexts: BTreeMap<String, String>,
}

fn lookup<'a, T>(items: &'a [(String, T)], name: &str) -> Option<&'a T> {
    items.iter().find(|(n, _)| n == name).map(|(_, t)| t)
}

impl Problem {
    pub fn vocab(&self, name: &str) -> Option<&Vocabulary> {
        lookup(&self.vocabs, name)
    }

    pub fn context(&self, name: &str) -> Option<&Context> {
        lookup(&self.contexts, name)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        lookup(&self.sections, name)
    }

    pub fn drs(&self, name: &str) -> Option<&Drs> {
        lookup(&self.drs, name)
    }

    pub fn morphism(&self, name: &str) -> Option<&Morphism> {
        self.morphisms
            .iter()
            .find(|(n, ..)| n == name)
            .map(|(_, m, ..)| m)
    }

    pub fn cover(&self, name: &str) -> Option<(&Cover, &[String])> {
        self.covers
            .iter()
            .find(|(n, ..)| n == name)
            .map(|(_, c, legs)| (c, legs.as_slice()))
    }

    /// Sections declared over the source context of `morphism`.
    pub fn sections_over_source(&self, morphism: &str) -> Vec<&str> {
        let Some((_, _, source, _)) = self.morphisms.iter().find(|(n, ..)| n == morphism) else {
            return Vec::new();
        };
        self.sections
            .iter()
            .filter(|(n, _)| self.section_contexts.get(n) == Some(source))
            .map(|(n, _)| n.as_str())
            .collect()
    }
}

impl ProblemFile {
    /// Builds and validates the declared values.
    pub fn elaborate(&self) -> Result<Problem, DslError> {
        let mut pb = Problem::default();
        for item in &self.items {
            let pos = item.pos;
            let sem = |source: crate::Error| DslError::Semantic { pos, source };
            match &item.decl {
                Decl::Vocab { name, symbols } => {
                    let symbols = symbols
                        .iter()
                        .map(|(n, a)| RelationSymbol::new(n.clone(), *a))
                        .collect::<crate::Result<Vec<_>>>()
                        .map_err(sem)?;
                    let mut vocab = Vocabulary::default();
                    for s in symbols {
                        if vocab.arity(s.name()).is_some() {
                            return Err(DslError::Name {
                                pos,
                                message: format!("relation `{}` listed twice in `{name}`", s.name()),
                            });
                        }
                        vocab.insert(s).map_err(sem)?;
                    }
                    pb.vocabs.push((name.clone(), vocab));
                }
                Decl::Context { name, vocab, vars } => {
                    let set: BTreeSet<Var> = vars.iter().cloned().collect();
                    if set.len() != vars.len() {
                        return Err(DslError::Name {
                            pos,
                            message: format!("context `{name}` repeats a variable"),
                        });
                    }
                    let vocab = pb.vocab(vocab).expect("checked by parser").clone();
                    pb.contexts.push((name.clone(), Context::new(vocab, set)));
                }
                Decl::Section {
                    name,
                    context,
                    literals,
                } => {
                    let ctx = pb.context(context).expect("checked by parser").clone();
                    let s = Section::new(ctx, literals.iter().cloned()).map_err(sem)?;
                    pb.section_contexts.insert(name.clone(), context.clone());
                    pb.sections.push((name.clone(), s));
                }
                Decl::Morphism {
                    name,
                    source,
                    target,
                    pairs,
                } => {
                    let mut varmap = BTreeMap::new();
                    for (a, b) in pairs {
                        if varmap.insert(a.clone(), b.clone()).is_some() {
                            return Err(DslError::Name {
                                pos,
                                message: format!("morphism `{name}` maps `{a}` twice"),
                            });
                        }
                    }
                    let src = pb.context(source).expect("checked by parser").clone();
                    let tgt = pb.context(target).expect("checked by parser").clone();
                    let m = Morphism::new(src, tgt, varmap).map_err(sem)?;
                    pb.morphisms
                        .push((name.clone(), m, source.clone(), target.clone()));
                }
                Decl::Cover { name, target, legs } => {
                    let morphisms: Vec<Morphism> = legs
                        .iter()
                        .map(|l| pb.morphism(l).expect("checked by parser").clone())
                        .collect();
                    let cover = Cover::new(morphisms).map_err(sem)?;
                    let tgt = pb.context(target).expect("checked by parser");
                    if cover.target() != tgt {
                        return Err(sem(crate::Error::ContextMismatch(format!(
                            "legs of `{name}` do not target `{target}`"
                        ))));
                    }
                    cover.validate().map_err(sem)?;
                    pb.covers.push((name.clone(), cover, legs.clone()));
                }
                Decl::Drs { name, refs, conds } => {
                    let drs = Drs::new(refs.iter().cloned().collect(), conds.iter().cloned())
                        .map_err(sem)?;
                    pb.drs.push((name.clone(), drs));
                }
                Decl::Anaphor {
                    var,
                    constraints,
                    allowed,
                } => {
                    let mut spec = AnaphorSpec::new(BTreeSet::from([var.clone()]))
                        .with_constraints(constraints.iter().cloned().collect());
                    if let Some(allowed) = allowed {
                        spec = spec.allowing(allowed.iter().cloned().collect());
                    }
                    pb.anaphors.push(spec);
                }
                Decl::Pattern {
                    anaphor,
                    antecedent,
                    label,
                } => pb.patterns.push(MergingPattern::new(
                    anaphor.clone(),
                    antecedent.clone(),
                    label.clone(),
                )),
            }
        }
        Ok(pb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const JOHN_SLEEPS: &str = r#"
# John sleeps. He snores.
vocab L1 { John/1, sleeps/1 }
vocab L2 { snores/1 }
vocab L { John/1, sleeps/1, snores/1 }
context C1 = (L1, {x})
context C2 = (L2, {y})
context C = (L, {z})
section s1 over C1 { John(x); sleeps(x) }
section s2 over C2 { snores(y) }
morphism f1 : C1 -> C { x -> z }
morphism f2 : C2 -> C { y -> z }
cover c on C = [f1, f2]
"#;

    #[test]
    fn parses_the_john_sleeps_file() {
        let file = parse_problem(JOHN_SLEEPS).unwrap();
        assert_eq!(file.count(|d| matches!(d, Decl::Section { .. })), 2);
        assert_eq!(file.count(|d| matches!(d, Decl::Cover { .. })), 1);
        assert_eq!(file.items[0].pos, Pos { line: 3, column: 1 });
        let pb = file.elaborate().unwrap();
        assert_eq!(pb.section("s1").unwrap().to_string(), "{John(x), sleeps(x)}");
        assert_eq!(pb.sections_over_source("f2"), vec!["s2"]);
    }

    #[test]
    fn empty_file() {
        assert_eq!(parse_problem("").unwrap(), ProblemFile::default());
        assert_eq!(parse_problem("# nothing\n\n").unwrap().items.len(), 0);
    }

    #[test]
    fn unclosed_paren_is_a_syntax_error() {
        let text = "vocab V { John/1 }\ncontext C = (V, {x})\nsection s over C { John(x } ";
        match parse_problem(text) {
            Err(DslError::Syntax { pos, expected, found }) => {
                assert_eq!(pos, Pos { line: 3, column: 27 });
                assert!(expected.iter().any(|e| e.contains(')')));
                assert_eq!(found, "`}`");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn name_errors() {
        let undeclared = parse_problem("context C = (V, {x})").unwrap_err();
        assert!(matches!(undeclared, DslError::Name { pos: Pos { line: 1, column: 14 }, .. }));
        let dup = parse_problem("vocab V {}\nvocab V {}").unwrap_err();
        assert!(matches!(dup, DslError::Name { pos: Pos { line: 2, column: 1 }, .. }));
        let wrong_kind = parse_problem("vocab V {}\nsection s over V {}").unwrap_err();
        assert!(wrong_kind.to_string().contains("expected a context"));
    }

    #[test]
    fn semantic_errors_carry_positions() {
        let text = "vocab V { Man/1 }\ncontext C = (V, {y})\nsection s over C { Man(y); !Man(y) }";
        let err = parse_problem(text).unwrap().elaborate().unwrap_err();
        assert!(matches!(
            err,
            DslError::Semantic { pos: Pos { line: 3, .. }, source: crate::Error::Inconsistent { .. } }
        ));
    }

    #[test]
    fn remaining_declarations() {
        let text = r#"
vocab V { John/1, Donkey/1, Own/2 }
drs K { refs {x, y} conds { John(x), Donkey(y); Own(x,y) } }
anaphor u constraints { ¬Man(u) } allowed {y, z}
anaphor v
pattern u -> y label "ripe \"banana\""
"#;
        let file = parse_problem(text).unwrap();
        let pb = file.elaborate().unwrap();
        assert_eq!(pb.drs("K").unwrap().conditions().len(), 3);
        assert_eq!(pb.anaphors.len(), 2);
        assert_eq!(pb.anaphors[0].allowed.as_ref().unwrap().len(), 2);
        assert_eq!(pb.patterns[0].label, "ripe \"banana\"");
        assert_eq!(parse_problem(&file.to_string()).unwrap(), file);
    }

    #[test]
    fn serialization_round_trips() {
        let file = parse_problem(JOHN_SLEEPS).unwrap();
        let again = parse_problem(&file.to_string()).unwrap();
        assert_eq!(again, file);
    }
}
