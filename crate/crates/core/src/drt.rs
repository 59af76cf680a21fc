//! Basic discourse representation structures.
//!
//! A basic DRS is a set of referents with a set of literal conditions. Two
//! consecutive discourses combine by [`merge`] (disjoint union) followed by
//! [`resolve_by_equations`], which equates anaphors with their antecedents. The
//! same resolution is expressed on the sheaf side as a cover; candidate covers
//! for a set of anaphors are produced by [`enumerate_candidate_covers`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::gluing::Cover;
use crate::logic::{find_clash, parse_literals, vars, Context, Literal, Section, Var, Vocabulary};
use crate::presheaf::Morphism;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Drs {
    referents: BTreeSet<Var>,
    conditions: BTreeSet<Literal>,
}

impl Drs {
    pub fn new<I>(referents: BTreeSet<Var>, conditions: I) -> Result<Self>
    where
        I: IntoIterator<Item = Literal>,
    {
        let conditions: BTreeSet<Literal> = conditions.into_iter().collect();
        for lit in &conditions {
            if let Some(v) = lit.args().iter().find(|v| !referents.contains(*v)) {
                return Err(Error::IllFormed(format!(
                    "condition `{lit}` mentions `{v}`, which is not a referent"
                )));
            }
        }
        if let Some((positive, negative)) = find_clash(&conditions) {
            return Err(Error::Inconsistent {
            positive: Box::new(positive),
            negative: Box::new(negative),
        });
        }
        Ok(Drs {
            referents,
            conditions,
        })
    }

    /// `Drs::parse(["x", "y"], "John(x); Donkey(y); Own(x,y)")`.
    pub fn parse<I, S>(referents: I, conditions: &str) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Drs::new(vars(referents)?, parse_literals(conditions)?)
    }

    pub fn referents(&self) -> &BTreeSet<Var> {
        &self.referents
    }

    pub fn conditions(&self) -> &BTreeSet<Literal> {
        &self.conditions
    }

    /// The relation symbols used by the conditions.
    pub fn vocabulary(&self) -> Result<Vocabulary> {
        Vocabulary::new(self.conditions.iter().map(|l| l.relation().clone()))
    }

    /// Renames referents through `f`, which must be injective on them.
    fn rename(&self, f: &BTreeMap<Var, Var>) -> Drs {
        let get = |v: &Var| f.get(v).cloned().unwrap_or_else(|| v.clone());
        Drs {
            referents: self.referents.iter().map(get).collect(),
            conditions: self.conditions.iter().map(|l| l.rename(get)).collect(),
        }
    }

    /// Equality up to a bijective renaming of referents.
    pub fn alpha_equivalent(&self, other: &Drs) -> bool {
        if self.referents.len() != other.referents.len()
            || self.conditions.len() != other.conditions.len()
        {
            return false;
        }
        let mine: Vec<&Var> = self.referents.iter().collect();
        let theirs: Vec<&Var> = other.referents.iter().collect();
        let mut used = vec![false; theirs.len()];
        let mut map = BTreeMap::new();
        self.find_bijection(other, &mine, &theirs, &mut used, &mut map)
    }

    fn find_bijection(
        &self,
        other: &Drs,
        mine: &[&Var],
        theirs: &[&Var],
        used: &mut [bool],
        map: &mut BTreeMap<Var, Var>,
    ) -> bool {
        let Some((v, rest)) = mine.split_first() else {
            return self.rename(map).conditions == other.conditions;
        };
        for (j, w) in theirs.iter().enumerate() {
            if used[j] {
                continue;
            }
            used[j] = true;
            map.insert((*v).clone(), (*w).clone());
            if self.find_bijection(other, rest, theirs, used, map) {
                return true;
            }
            map.remove(*v);
            used[j] = false;
        }
        false
    }
}

impl fmt::Display for Drs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("({")?;
        for (i, v) in self.referents.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}, {")?;
        for (i, l) in self.conditions.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("})")
    }
}

/// `k1 ⊕ k2`: referents of `k2` that clash with `k1` get primes appended until
/// fresh.
pub fn merge(k1: &Drs, k2: &Drs) -> Drs {
    let mut taken: BTreeSet<Var> = k1.referents.union(&k2.referents).cloned().collect();
    let mut renaming = BTreeMap::new();
    for v in &k2.referents {
        if k1.referents.contains(v) {
            let mut fresh = v.primed();
            while taken.contains(&fresh) {
                fresh = fresh.primed();
            }
            taken.insert(fresh.clone());
            renaming.insert(v.clone(), fresh);
        }
    }
    let k2 = k2.rename(&renaming);
    Drs {
        referents: k1.referents.union(&k2.referents).cloned().collect(),
        conditions: k1.conditions.union(&k2.conditions).cloned().collect(),
    }
}

/// The section over `(relations of k's conditions, k's referents)`.
pub fn drs_to_section(k: &Drs) -> Result<Section> {
    Section::new(Context::new(k.vocabulary()?, k.referents.clone()), k.conditions.clone())
}

/// As [`drs_to_section`], with `extra` added to the vocabulary.
pub fn drs_to_section_with(k: &Drs, extra: &Vocabulary) -> Result<Section> {
    let vocab = k.vocabulary()?.union(extra)?;
    Section::new(Context::new(vocab, k.referents.clone()), k.conditions.clone())
}

/// Collapses referents along the equivalence generated by `eqs`.
///
/// Each equation `(anaphor, antecedent)` keeps the antecedent. When a class
/// contains several candidates, the least variable that only ever appears on
/// the right is kept, falling back to the least right-hand variable.
pub fn resolve_by_equations(k: &Drs, eqs: &[(Var, Var)]) -> Result<Drs> {
    for (a, b) in eqs {
        for v in [a, b] {
            if !k.referents.contains(v) {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
    }
    let representative = representatives(&k.referents, eqs);
    let conditions: BTreeSet<Literal> = k
        .conditions
        .iter()
        .map(|l| l.rename(|v| representative[v].clone()))
        .collect();
    if let Some((positive, negative)) = find_clash(&conditions) {
        return Err(Error::Inconsistent {
            positive: Box::new(positive),
            negative: Box::new(negative),
        });
    }
    Ok(Drs {
        referents: representative.values().cloned().collect(),
        conditions,
    })
}

fn representatives(referents: &BTreeSet<Var>, eqs: &[(Var, Var)]) -> BTreeMap<Var, Var> {
    let index: BTreeMap<&Var, usize> = referents.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..referents.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (a, b) in eqs {
        let (ra, rb) = (find(&mut parent, index[a]), find(&mut parent, index[b]));
        parent[ra] = rb;
    }
    let lhs: BTreeSet<&Var> = eqs.iter().map(|(a, _)| a).collect();
    let rhs: BTreeSet<&Var> = eqs.iter().map(|(_, b)| b).collect();
    let mut classes: BTreeMap<usize, Vec<&Var>> = BTreeMap::new();
    for v in referents {
        classes.entry(find(&mut parent, index[v])).or_default().push(v);
    }
    let mut out = BTreeMap::new();
    for members in classes.values() {
        let rep = members
            .iter()
            .find(|v| rhs.contains(*v) && !lhs.contains(*v))
            .or_else(|| members.iter().find(|v| rhs.contains(*v)))
            .unwrap_or(&members[0]);
        for v in members {
            out.insert((*v).clone(), (*rep).clone());
        }
    }
    out
}

/// Agreement information for some anaphor variables: constraint literals the
/// resolution must stay consistent with, and optionally the antecedents they
/// may resolve to.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnaphorSpec {
    pub anaphor_vars: BTreeSet<Var>,
    pub constraints: BTreeSet<Literal>,
    pub allowed: Option<BTreeSet<Var>>,
}

impl AnaphorSpec {
    pub fn new(anaphor_vars: BTreeSet<Var>) -> Self {
        AnaphorSpec {
            anaphor_vars,
            ..AnaphorSpec::default()
        }
    }

    pub fn with_constraints(mut self, constraints: BTreeSet<Literal>) -> Self {
        self.constraints = constraints;
        self
    }

    pub fn allowing(mut self, allowed: BTreeSet<Var>) -> Self {
        self.allowed = Some(allowed);
        self
    }
}

/// Every cover that embeds the antecedent context identically and sends each
/// anaphor variable to an antecedent variable, keeping those whose pushed-forward
/// literals, together with the mapped constraints, are consistent.
///
/// Covers come out in lexicographic order of their assignments, taking the
/// anaphor variables in the order of `anaphors` and, within one anaphor, in
/// variable order.
pub fn enumerate_candidate_covers(
    antecedent: &Section,
    anaphors: &[Section],
    specs: &[AnaphorSpec],
) -> Result<Vec<Cover>> {
    let antecedent_vars = antecedent.context().vars();
    let mut seen: BTreeSet<&Var> = antecedent_vars.iter().collect();
    for (i, s) in anaphors.iter().enumerate() {
        for v in s.context().vars() {
            if !seen.insert(v) {
                return Err(Error::DisjointnessViolated(format!(
                    "variable `{v}` of anaphor section {i} is already in use"
                )));
            }
        }
    }

    let anaphor_vars: Vec<&Var> = anaphors.iter().flat_map(|s| s.context().vars()).collect();
    let mut choices: BTreeMap<&Var, BTreeSet<Var>> = anaphor_vars
        .iter()
        .map(|v| (*v, antecedent_vars.clone()))
        .collect();
    let mut constraints: Vec<&Literal> = Vec::new();
    for spec in specs {
        for v in &spec.anaphor_vars {
            if antecedent_vars.contains(v) {
                return Err(Error::DisjointnessViolated(format!(
                    "anaphor `{v}` is also an antecedent referent"
                )));
            }
            if !choices.contains_key(v) {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
        for lit in &spec.constraints {
            if let Some(v) = lit.args().iter().find(|v| !spec.anaphor_vars.contains(*v)) {
                return Err(Error::IllFormed(format!(
                    "constraint `{lit}` mentions `{v}`, which is not among its anaphors"
                )));
            }
            constraints.push(lit);
        }
        if let Some(allowed) = &spec.allowed {
            if let Some(v) = allowed.iter().find(|v| !antecedent_vars.contains(*v)) {
                return Err(Error::UnknownVariable(v.clone()));
            }
            for v in &spec.anaphor_vars {
                let narrowed = choices[v].intersection(allowed).cloned().collect();
                choices.insert(v, narrowed);
            }
        }
    }

    let mut vocab = antecedent.context().vocab().clone();
    for s in anaphors {
        vocab = vocab.union(s.context().vocab())?;
    }
    let target = Context::new(vocab, antecedent_vars.clone());
    let base = Morphism::inclusion(antecedent.context(), &target)?;

    let mut covers = Vec::new();
    let mut assignment: BTreeMap<Var, Var> = BTreeMap::new();
    let mut emit = |assignment: &BTreeMap<Var, Var>| -> Result<()> {
        let mut legs = vec![base.clone()];
        let mut lits: BTreeSet<Literal> = antecedent.literals().clone();
        for s in anaphors {
            let map = s
                .context()
                .vars()
                .iter()
                .map(|v| (v.clone(), assignment[v].clone()))
                .collect();
            let leg = Morphism::new(s.context().clone(), target.clone(), map)?;
            lits.extend(s.literals().iter().map(|l| leg.push_literal(l)));
            legs.push(leg);
        }
        for lit in &constraints {
            lits.insert(lit.rename(|v| assignment[v].clone()));
        }
        if find_clash(&lits).is_none() {
            covers.push(Cover::new(legs)?);
        }
        Ok(())
    };
    assign(&anaphor_vars, &choices, &mut assignment, &mut emit)?;
    Ok(covers)
}

fn assign(
    pending: &[&Var],
    choices: &BTreeMap<&Var, BTreeSet<Var>>,
    assignment: &mut BTreeMap<Var, Var>,
    emit: &mut dyn FnMut(&BTreeMap<Var, Var>) -> Result<()>,
) -> Result<()> {
    let Some((v, rest)) = pending.split_first() else {
        return emit(assignment);
    };
    for target in &choices[v] {
        assignment.insert((*v).clone(), target.clone());
        assign(rest, choices, assignment, emit)?;
    }
    assignment.remove(*v);
    Ok(())
}
