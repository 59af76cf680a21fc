//! Vocabularies, contexts, literals and sections.
//!
//! The language is relational: no constants, no function symbols and no
//! equality. In that fragment the literals entailed by a consistent finite set
//! of literals are exactly the members of the set, so a [`Section`] stores its
//! literal set verbatim and entailment is membership.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn is_relation_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_continue)
}

/// Variable names may carry trailing primes, which `merge` uses to freshen
/// clashing referents.
pub(crate) fn is_var_name(s: &str) -> bool {
    is_relation_name(s.trim_end_matches('\''))
}

/// A first-order variable, doubling as a discourse referent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_var_name(&name) {
            Ok(Var(name))
        } else {
            Err(Error::InvalidIdentifier(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The same name with one more prime appended.
    pub fn primed(&self) -> Var {
        Var(format!("{}'", self.0))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Var::new(s.trim())
    }
}

/// Collects variable names into a set, validating each.
pub fn vars<I, S>(names: I) -> Result<BTreeSet<Var>>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    names.into_iter().map(|n| Var::new(n.as_ref())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationSymbol {
    name: String,
    arity: usize,
}

impl RelationSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Result<Self> {
        let name = name.into();
        if !is_relation_name(&name) {
            return Err(Error::InvalidIdentifier(name));
        }
        if arity == 0 {
            return Err(Error::IllFormed(format!("relation `{name}` has arity 0")));
        }
        Ok(RelationSymbol { name, arity })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Display for RelationSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A finite set of relation symbols in which a name determines its arity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    symbols: BTreeMap<String, usize>,
}

impl Vocabulary {
    pub fn new<I>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = RelationSymbol>,
    {
        let mut vocab = Vocabulary::default();
        for symbol in symbols {
            vocab.insert(symbol)?;
        }
        Ok(vocab)
    }

    /// Adds a symbol. Re-adding an identical symbol is a no-op; reusing a name
    /// with a different arity is an error.
    pub fn insert(&mut self, symbol: RelationSymbol) -> Result<()> {
        match self.symbols.get(&symbol.name) {
            Some(&arity) if arity != symbol.arity => Err(Error::IllFormed(format!(
                "relation `{}` declared with arities {} and {}",
                symbol.name, arity, symbol.arity
            ))),
            Some(_) => Ok(()),
            None => {
                self.symbols.insert(symbol.name, symbol.arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.get(name).copied()
    }

    pub fn contains(&self, symbol: &RelationSymbol) -> bool {
        self.arity(&symbol.name) == Some(symbol.arity)
    }

    pub fn is_subset(&self, other: &Vocabulary) -> bool {
        self.symbols
            .iter()
            .all(|(name, &arity)| other.arity(name) == Some(arity))
    }

    pub fn is_disjoint(&self, other: &Vocabulary) -> bool {
        self.symbols.keys().all(|name| other.arity(name).is_none())
    }

    pub fn union(&self, other: &Vocabulary) -> Result<Vocabulary> {
        let mut out = self.clone();
        for symbol in other.symbols() {
            out.insert(symbol)?;
        }
        Ok(out)
    }

    pub fn symbols(&self) -> impl Iterator<Item = RelationSymbol> + '_ {
        self.symbols.iter().map(|(name, &arity)| RelationSymbol {
            name: name.clone(),
            arity,
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, symbol) in self.symbols().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{symbol}")?;
        }
        f.write_str("}")
    }
}

/// Parses `"John/1, owns/2"`.
impl FromStr for Vocabulary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut symbols = Vec::new();
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (name, arity) = item
                .split_once('/')
                .ok_or_else(|| Error::IllFormed(format!("expected name/arity, got `{item}`")))?;
            let arity = arity
                .trim()
                .parse()
                .map_err(|_| Error::IllFormed(format!("bad arity in `{item}`")))?;
            symbols.push(RelationSymbol::new(name.trim(), arity)?);
        }
        Vocabulary::new(symbols)
    }
}

/// An object `(L, X)`: a vocabulary together with a finite set of variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Context {
    vocab: Vocabulary,
    vars: BTreeSet<Var>,
}

impl Context {
    pub fn new(vocab: Vocabulary, vars: BTreeSet<Var>) -> Self {
        Context { vocab, vars }
    }

    /// Convenience constructor: `Context::parse("John/1, sleeps/1", ["x"])`.
    pub fn parse<I, S>(vocab: &str, var_names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Ok(Context::new(vocab.parse()?, vars(var_names)?))
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn vars(&self) -> &BTreeSet<Var> {
        &self.vars
    }

    /// Checks that `lit` uses a relation of this vocabulary at the right arity
    /// and only variables of this context.
    pub fn check_literal(&self, lit: &Literal) -> Result<()> {
        match self.vocab.arity(lit.relation.name()) {
            None => {
                return Err(Error::IllFormed(format!(
                    "relation `{}` not in vocabulary {}",
                    lit.relation.name(),
                    self.vocab
                )))
            }
            Some(arity) if arity != lit.relation.arity() => {
                return Err(Error::IllFormed(format!(
                    "`{lit}` applies `{}` to {} arguments, arity is {arity}",
                    lit.relation.name(),
                    lit.relation.arity()
                )))
            }
            Some(_) => {}
        }
        match lit.args.iter().find(|v| !self.vars.contains(v)) {
            Some(v) => Err(Error::IllFormed(format!(
                "`{lit}` uses variable `{v}` outside the context"
            ))),
            None => Ok(()),
        }
    }

    /// Number of atoms `A(x⃗)` over this context: Σ_A |X|^arity(A).
    pub fn literal_slots(&self) -> usize {
        self.vocab
            .symbols()
            .map(|s| {
                u32::try_from(s.arity())
                    .ok()
                    .and_then(|a| self.vars.len().checked_pow(a))
                    .unwrap_or(usize::MAX)
            })
            .fold(0usize, usize::saturating_add)
    }

    /// Every atom over this context, as positive literals, in a fixed order.
    pub fn atoms(&self) -> Vec<Literal> {
        let vars: Vec<&Var> = self.vars.iter().collect();
        let mut out = Vec::new();
        for symbol in self.vocab.symbols() {
            for args in tuples(&vars, symbol.arity()) {
                out.push(Literal {
                    polarity: Polarity::Positive,
                    relation: symbol.clone(),
                    args,
                });
            }
        }
        out
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {{", self.vocab)?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("})")
    }
}

/// All `arity`-tuples over `vars`, in lexicographic order.
pub(crate) fn tuples(vars: &[&Var], arity: usize) -> Vec<Vec<Var>> {
    let mut out: Vec<Vec<Var>> = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                vars.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push((*v).clone());
                    next
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// A signed atomic formula `±A(x⃗)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    relation: RelationSymbol,
    args: Vec<Var>,
    polarity: Polarity,
}

impl Literal {
    /// The relation's arity is the number of arguments.
    pub fn new(polarity: Polarity, relation: &str, args: Vec<Var>) -> Result<Self> {
        let relation = RelationSymbol::new(relation, args.len())?;
        Ok(Literal {
            relation,
            args,
            polarity,
        })
    }

    pub fn positive(relation: &str, args: Vec<Var>) -> Result<Self> {
        Literal::new(Polarity::Positive, relation, args)
    }

    pub fn negative(relation: &str, args: Vec<Var>) -> Result<Self> {
        Literal::new(Polarity::Negative, relation, args)
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn is_positive(&self) -> bool {
        self.polarity == Polarity::Positive
    }

    pub fn relation(&self) -> &RelationSymbol {
        &self.relation
    }

    pub fn args(&self) -> &[Var] {
        &self.args
    }

    pub fn complement(&self) -> Literal {
        Literal {
            relation: self.relation.clone(),
            args: self.args.clone(),
            polarity: self.polarity.flip(),
        }
    }

    pub fn with_polarity(&self, polarity: Polarity) -> Literal {
        Literal {
            polarity,
            ..self.clone()
        }
    }

    /// Substitutes every argument through `f`.
    pub fn rename(&self, mut f: impl FnMut(&Var) -> Var) -> Literal {
        Literal {
            relation: self.relation.clone(),
            args: self.args.iter().map(&mut f).collect(),
            polarity: self.polarity,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.polarity == Polarity::Negative {
            f.write_str("¬")?;
        }
        write!(f, "{}(", self.relation.name())?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Parses `John(x)`, `¬Man(y)`, `!Man(y)` or `owns(a, b)`.
impl FromStr for Literal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (polarity, rest) = if let Some(rest) = s.strip_prefix('¬') {
            (Polarity::Negative, rest)
        } else if let Some(rest) = s.strip_prefix('!') {
            (Polarity::Negative, rest)
        } else {
            (Polarity::Positive, s)
        };
        let bad = || Error::IllFormed(format!("cannot parse literal `{s}`"));
        let (name, args) = rest.trim_start().split_once('(').ok_or_else(bad)?;
        let args = args.trim_end().strip_suffix(')').ok_or_else(bad)?;
        let args = args
            .split(',')
            .map(|a| Var::new(a.trim()))
            .collect::<Result<Vec<_>>>()?;
        Literal::new(polarity, name.trim(), args)
    }
}

/// Parses a `;`-separated list of literals.
pub fn parse_literals(s: &str) -> Result<BTreeSet<Literal>> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

/// The first complementary pair in `lits`, reported as (positive, negative).
pub fn find_clash<'a, I>(lits: I) -> Option<(Literal, Literal)>
where
    I: IntoIterator<Item = &'a Literal>,
{
    let mut seen: BTreeSet<&Literal> = BTreeSet::new();
    let mut clashes = Vec::new();
    for lit in lits {
        if seen.contains(&lit.complement()) {
            clashes.push(lit.clone());
        }
        seen.insert(lit);
    }
    clashes
        .into_iter()
        .min_by(|a, b| (&a.relation, &a.args).cmp(&(&b.relation, &b.args)))
        .map(|lit| {
            let other = lit.complement();
            if lit.is_positive() {
                (lit, other)
            } else {
                (other, lit)
            }
        })
}

/// True iff no atom occurs with both polarities.
pub fn is_consistent<'a, I>(lits: I) -> bool
where
    I: IntoIterator<Item = &'a Literal>,
{
    find_clash(lits).is_none()
}

/// An element of 𝓕(L, X): a consistent finite set of literals over a context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Section {
    context: Context,
    literals: BTreeSet<Literal>,
}

impl Section {
    pub fn new<I>(context: Context, literals: I) -> Result<Self>
    where
        I: IntoIterator<Item = Literal>,
    {
        let literals: BTreeSet<Literal> = literals.into_iter().collect();
        for lit in &literals {
            context.check_literal(lit)?;
        }
        if let Some((positive, negative)) = find_clash(&literals) {
            return Err(Error::Inconsistent {
            positive: Box::new(positive),
            negative: Box::new(negative),
        });
        }
        Ok(Section { context, literals })
    }

    /// `Section::parse(ctx, "John(x); sleeps(x)")`.
    pub fn parse(context: Context, literals: &str) -> Result<Self> {
        Section::new(context, parse_literals(literals)?)
    }

    pub fn empty(context: Context) -> Self {
        Section {
            context,
            literals: BTreeSet::new(),
        }
    }

    /// Callers guarantee well-formedness and consistency.
    pub(crate) fn from_parts_unchecked(context: Context, literals: BTreeSet<Literal>) -> Self {
        debug_assert!(literals.iter().all(|l| context.check_literal(l).is_ok()));
        debug_assert!(is_consistent(&literals));
        Section { context, literals }
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn literals(&self) -> &BTreeSet<Literal> {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        self.literals.contains(lit)
    }

    pub fn entails(&self, lit: &Literal) -> Result<bool> {
        self.context.check_literal(lit)?;
        Ok(self.literals.contains(lit))
    }

    pub fn is_subset(&self, other: &Section) -> bool {
        self.literals.is_subset(&other.literals)
    }
}

/// Free-function form of [`Section::new`].
pub fn make_section<I>(context: &Context, literals: I) -> Result<Section>
where
    I: IntoIterator<Item = Literal>,
{
    Section::new(context.clone(), literals)
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{lit}")?;
        }
        f.write_str("}")
    }
}

/// Sections order lexicographically by their serialized form, then by context.
impl Ord for Section {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_string()
            .cmp(&other.to_string())
            .then_with(|| self.context.to_string().cmp(&other.context.to_string()))
    }
}

impl PartialOrd for Section {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
