//! The category of contexts and the restriction maps of the literal presheaf.
//!
//! A morphism `(L, X) -> (L', X')` is a vocabulary inclusion `L ⊆ L'` (kept as
//! a checked condition, not a separate map) plus a total function `X -> X'`.
//! The presheaf sends a morphism `f` to the restriction map that pulls a
//! section over the target back to the source:
//!
//! ```text
//! restrict(f, s) ∋ ±A(x⃗)  ⇔  ±A(f(x⃗)) ∈ s      for A ∈ L, x⃗ over X
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::logic::{Context, Literal, Section, Var};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    source: Context,
    target: Context,
    varmap: BTreeMap<Var, Var>,
}

impl Morphism {
    pub fn new(source: Context, target: Context, varmap: BTreeMap<Var, Var>) -> Result<Self> {
        if !source.vocab().is_subset(target.vocab()) {
            return Err(Error::IllFormed(format!(
                "source vocabulary {} is not included in target vocabulary {}",
                source.vocab(),
                target.vocab()
            )));
        }
        if let Some(v) = source.vars().iter().find(|v| !varmap.contains_key(*v)) {
            return Err(Error::IllFormed(format!("variable map undefined on `{v}`")));
        }
        if let Some(v) = varmap.keys().find(|v| !source.vars().contains(*v)) {
            return Err(Error::IllFormed(format!(
                "variable map defined on `{v}`, which is not a source variable"
            )));
        }
        if let Some(v) = varmap.values().find(|v| !target.vars().contains(*v)) {
            return Err(Error::IllFormed(format!(
                "variable map hits `{v}`, which is not a target variable"
            )));
        }
        Ok(Morphism {
            source,
            target,
            varmap,
        })
    }

    /// `Morphism::parse(src, tgt, [("x", "z"), ("u", "w")])`.
    pub fn parse<I, A, B>(source: Context, target: Context, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let varmap = pairs
            .into_iter()
            .map(|(a, b)| Ok((Var::new(a.as_ref())?, Var::new(b.as_ref())?)))
            .collect::<Result<_>>()?;
        Morphism::new(source, target, varmap)
    }

    pub fn identity(ctx: &Context) -> Self {
        Morphism {
            source: ctx.clone(),
            target: ctx.clone(),
            varmap: ctx.vars().iter().map(|v| (v.clone(), v.clone())).collect(),
        }
    }

    /// The identity on variables from `source` into a context with the same
    /// variables and a larger vocabulary.
    pub fn inclusion(source: &Context, target: &Context) -> Result<Self> {
        let varmap = source
            .vars()
            .iter()
            .map(|v| (v.clone(), v.clone()))
            .collect();
        Morphism::new(source.clone(), target.clone(), varmap)
    }

    pub fn source(&self) -> &Context {
        &self.source
    }

    pub fn target(&self) -> &Context {
        &self.target
    }

    pub fn varmap(&self) -> &BTreeMap<Var, Var> {
        &self.varmap
    }

    pub fn apply(&self, v: &Var) -> Option<&Var> {
        self.varmap.get(v)
    }

    pub fn image(&self) -> BTreeSet<&Var> {
        self.varmap.values().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.varmap.len()
    }

    /// Pushes a source literal forward along the variable map.
    pub fn push_literal(&self, lit: &Literal) -> Literal {
        lit.rename(|v| self.varmap.get(v).cloned().unwrap_or_else(|| v.clone()))
    }

    /// The preimage of every target variable.
    fn fibres(&self) -> BTreeMap<&Var, Vec<&Var>> {
        let mut fibres: BTreeMap<&Var, Vec<&Var>> = BTreeMap::new();
        for (x, y) in &self.varmap {
            fibres.entry(y).or_default().push(x);
        }
        fibres
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, y)) in self.varmap.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} ↦ {y}")?;
        }
        f.write_str("}")
    }
}

pub fn identity(ctx: &Context) -> Morphism {
    Morphism::identity(ctx)
}

/// `g ∘ f`, defined when `f.target == g.source`.
pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism> {
    if f.target != g.source {
        return Err(Error::TypeMismatch(format!(
            "target of f is {} but source of g is {}",
            f.target, g.source
        )));
    }
    let varmap = f
        .varmap
        .iter()
        .map(|(x, y)| (x.clone(), g.varmap[y].clone()))
        .collect();
    Ok(Morphism {
        source: f.source.clone(),
        target: g.target.clone(),
        varmap,
    })
}

/// Pulls `s` back along `m`.
///
/// Walks the literals of `s` and collects, for each one whose relation lies
/// in the source vocabulary, every source tuple mapping onto its arguments.
/// This touches only literals that can contribute, instead of enumerating all
/// Σ_A |X|^arity(A) candidate literals over the source.
pub fn restrict(m: &Morphism, s: &Section) -> Result<Section> {
    if s.context() != &m.target {
        return Err(Error::ContextMismatch(format!(
            "section lives over {} but the morphism targets {}",
            s.context(),
            m.target
        )));
    }
    let fibres = m.fibres();
    let mut out = BTreeSet::new();
    for lit in s.literals() {
        if !m.source.vocab().contains(lit.relation()) {
            continue;
        }
        let choices: Option<Vec<&Vec<&Var>>> = lit.args().iter().map(|a| fibres.get(a)).collect();
        let Some(choices) = choices else { continue };
        let mut tuples: Vec<Vec<Var>> = vec![Vec::new()];
        for choice in choices {
            tuples = tuples
                .into_iter()
                .flat_map(|prefix| {
                    choice.iter().map(move |x| {
                        let mut next = prefix.clone();
                        next.push((*x).clone());
                        next
                    })
                })
                .collect();
        }
        for args in tuples {
            let mut it = args.into_iter();
            out.insert(lit.rename(|_| it.next().expect("arity preserved")));
        }
    }
    Ok(Section::from_parts_unchecked(m.source.clone(), out))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawViolation {
    /// `restrict(id, s) != s`.
    Identity { case: usize, got: Section },
    /// `restrict(g∘f, s) != restrict(f, restrict(g, s))`.
    Composition {
        case: usize,
        composite: Section,
        stepwise: Section,
    },
    /// The case itself was malformed.
    Malformed { case: usize, error: Error },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FunctorLawReport {
    pub cases: usize,
    pub violations: Vec<LawViolation>,
}

impl FunctorLawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Checks one `(g, f, s)` case: identity laws at every object involved and
    /// contravariance for the composite.
    pub fn check(&mut self, g: &Morphism, f: &Morphism, s: &Section) {
        let case = self.cases;
        self.cases += 1;
        if let Err(error) = self.check_case(case, g, f, s) {
            self.violations.push(LawViolation::Malformed { case, error });
        }
    }

    fn check_case(&mut self, case: usize, g: &Morphism, f: &Morphism, s: &Section) -> Result<()> {
        let gf = compose(g, f)?;
        let via_g = restrict(g, s)?;
        let stepwise = restrict(f, &via_g)?;
        let composite = restrict(&gf, s)?;
        for section in [s, &via_g, &stepwise] {
            let got = restrict(&identity(section.context()), section)?;
            if &got != section {
                self.violations.push(LawViolation::Identity { case, got });
            }
        }
        if composite != stepwise {
            self.violations.push(LawViolation::Composition {
                case,
                composite,
                stepwise,
            });
        }
        Ok(())
    }
}

/// Runs the identity and composition laws over every `(g, f, s)` case.
pub fn check_functor_laws<'a, I>(cases: I) -> FunctorLawReport
where
    I: IntoIterator<Item = (&'a Morphism, &'a Morphism, &'a Section)>,
{
    let mut report = FunctorLawReport::default();
    for (g, f, s) in cases {
        report.check(g, f, s);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_literals;

    fn ctx(vocab: &str, vars: &[&str]) -> Context {
        Context::parse(vocab, vars).unwrap()
    }

    /// Enumerates every candidate literal over the source and tests its image.
    fn restrict_by_enumeration(m: &Morphism, s: &Section) -> BTreeSet<Literal> {
        m.source()
            .atoms()
            .into_iter()
            .flat_map(|a| [a.complement(), a])
            .filter(|l| s.contains(&m.push_literal(l)))
            .collect()
    }

    #[test]
    fn identity_maps_each_var_to_itself() {
        let c = ctx("R/1", &["x"]);
        let id = identity(&c);
        assert_eq!(id.varmap().len(), 1);
        assert_eq!(id.apply(&Var::new("x").unwrap()).unwrap().as_str(), "x");
    }

    #[test]
    fn composition_follows_variable_maps() {
        let a = ctx("R/1", &["x"]);
        let b = ctx("R/1", &["z", "w"]);
        let c = ctx("R/1", &["p"]);
        let f = Morphism::parse(a, b.clone(), [("x", "z")]).unwrap();
        let g = Morphism::parse(b, c, [("z", "p"), ("w", "p")]).unwrap();
        let gf = compose(&g, &f).unwrap();
        assert_eq!(gf.to_string(), "{x ↦ p}");
        assert_eq!(compose(&identity(g.target()), &g).unwrap(), g);
        assert_eq!(compose(&f, &identity(f.source())).unwrap(), f);
        assert!(matches!(compose(&f, &g), Err(Error::TypeMismatch(_))));
    }

    #[test]
    fn morphism_validation() {
        let a = ctx("R/1, S/1", &["x"]);
        let b = ctx("R/1", &["z"]);
        assert!(Morphism::parse(a.clone(), b.clone(), [("x", "z")]).is_err());
        assert!(Morphism::parse(b.clone(), a.clone(), Vec::<(&str, &str)>::new()).is_err());
        assert!(Morphism::parse(b.clone(), a.clone(), [("x", "q")]).is_err());
        assert!(Morphism::parse(b, a, [("z", "x")]).is_ok());
    }

    #[test]
    fn restriction_shrinks_vocabulary_and_renames() {
        let big = ctx("John/1, sleeps/1, snores/1", &["z"]);
        let s = Section::parse(big.clone(), "John(z); sleeps(z); snores(z)").unwrap();
        let m = Morphism::parse(ctx("John/1, sleeps/1", &["x"]), big, [("x", "z")]).unwrap();
        assert_eq!(restrict(&m, &s).unwrap().to_string(), "{John(x), sleeps(x)}");
    }

    #[test]
    fn restriction_duplicates_along_identified_variables() {
        let l = ctx("R/1, S/1", &["z", "w"]);
        let s = Section::parse(l.clone(), "R(z); S(z); R(w); S(w)").unwrap();
        let f1 = Morphism::parse(ctx("R/1, S/1", &["x", "u"]), l, [("x", "z"), ("u", "w")])
            .unwrap();
        let r = restrict(&f1, &s).unwrap();
        assert_eq!(r.literals(), &parse_literals("R(x); S(x); R(u); S(u)").unwrap());
    }

    #[test]
    fn restriction_through_non_injective_map() {
        let tgt = ctx("S/2", &["p"]);
        let s = Section::parse(tgt.clone(), "¬S(p,p)").unwrap();
        let m = Morphism::parse(ctx("S/2", &["x", "y"]), tgt, [("x", "p"), ("y", "p")]).unwrap();
        let r = restrict(&m, &s).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.literals(), &restrict_by_enumeration(&m, &s));
    }

    #[test]
    fn restriction_requires_matching_context() {
        let s = Section::empty(ctx("R/1", &["x"]));
        let m = identity(&ctx("R/1", &["y"]));
        assert!(matches!(restrict(&m, &s), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn identity_only_case_passes() {
        let c = ctx("R/1", &["x"]);
        let s = Section::parse(c.clone(), "R(x)").unwrap();
        let id = identity(&c);
        let report = check_functor_laws([(&id, &id, &s)]);
        assert!(report.passed());
        assert_eq!(report.cases, 1);
    }

    #[test]
    fn malformed_cases_are_reported_not_raised() {
        let c = ctx("R/1", &["x"]);
        let d = ctx("R/1", &["y"]);
        let s = Section::empty(c.clone());
        let report = check_functor_laws([(&identity(&d), &identity(&c), &s)]);
        assert!(matches!(report.violations[..], [LawViolation::Malformed { .. }]));
    }
}
