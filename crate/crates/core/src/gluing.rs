//! Covers and gluing of local sections.
//!
//! A cover is a jointly surjective family of morphisms `f_i : (L_i, X_i) ->
//! (L, X)` with `⋃ L_i = L`. A gluing of sections `s_i` over the legs is a
//! section `s` over `(L, X)` with `restrict(f_i, s) = s_i` for every leg, whose
//! literals all lie over atoms that some leg can see. The candidate is always
//! the union of the pushed-forward local literals; it either is the gluing or
//! no gluing exists.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::logic::{find_clash, tuples, Context, Literal, Polarity, Section, Var};
use crate::presheaf::{restrict, Morphism};

/// Default ceiling on Σ_A |X|^arity(A) for [`all_gluings_bruteforce`].
pub const DEFAULT_BRUTEFORCE_BOUND: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    target: Context,
    legs: Vec<Morphism>,
}

impl Cover {
    /// Builds a cover from legs that share a target. Joint surjectivity and
    /// vocabulary coverage are checked by [`Cover::validate`].
    pub fn new(legs: Vec<Morphism>) -> Result<Self> {
        let target = legs.first().ok_or(Error::EmptyCover)?.target().clone();
        if let Some((i, _)) = legs.iter().enumerate().find(|(_, l)| l.target() != &target) {
            return Err(Error::ContextMismatch(format!(
                "leg {i} does not target {target}"
            )));
        }
        Ok(Cover { target, legs })
    }

    pub fn target(&self) -> &Context {
        &self.target
    }

    pub fn legs(&self) -> &[Morphism] {
        &self.legs
    }

    pub fn validate(&self) -> Result<()> {
        validate_cover(self)
    }

    /// True when no two legs share a relation symbol.
    pub fn has_disjoint_vocabularies(&self) -> bool {
        self.legs.iter().enumerate().all(|(i, a)| {
            self.legs[i + 1..]
                .iter()
                .all(|b| a.source().vocab().is_disjoint(b.source().vocab()))
        })
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, leg) in self.legs.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{leg}")?;
        }
        f.write_str("]")
    }
}

pub fn validate_cover(c: &Cover) -> Result<()> {
    let covered: BTreeSet<&Var> = c.legs.iter().flat_map(Morphism::image).collect();
    let uncovered: Vec<Var> = c
        .target
        .vars()
        .iter()
        .filter(|v| !covered.contains(v))
        .cloned()
        .collect();
    if !uncovered.is_empty() {
        return Err(Error::NotSurjective { uncovered });
    }
    let missing: Vec<_> = c
        .target
        .vocab()
        .symbols()
        .filter(|s| !c.legs.iter().any(|l| l.source().vocab().contains(s)))
        .collect();
    if !missing.is_empty() {
        return Err(Error::VocabNotCovered { missing });
    }
    Ok(())
}

fn check_family(c: &Cover, sections: &[Section]) -> Result<()> {
    validate_cover(c)?;
    if sections.len() != c.legs.len() {
        return Err(Error::LengthMismatch {
            expected: c.legs.len(),
            found: sections.len(),
        });
    }
    for (i, (leg, s)) in c.legs.iter().zip(sections).enumerate() {
        if leg.source() != s.context() {
            return Err(Error::ContextMismatch(format!(
                "section {i} lives over {} but leg {i} starts at {}",
                s.context(),
                leg.source()
            )));
        }
    }
    Ok(())
}

/// `{ ±A(f_i(x⃗)) | ±A(x⃗) ∈ s_i }`, possibly inconsistent.
pub fn pushforward_literals(c: &Cover, sections: &[Section]) -> Result<BTreeSet<Literal>> {
    check_family(c, sections)?;
    Ok(c.legs
        .iter()
        .zip(sections)
        .flat_map(|(leg, s)| s.literals().iter().map(|l| leg.push_literal(l)))
        .collect())
}

/// The union of pushed-forward literals as a section over the cover's target,
/// or [`Error::Inconsistent`] with the clashing pair.
pub fn canonical_glue(c: &Cover, sections: &[Section]) -> Result<Section> {
    let lits = pushforward_literals(c, sections)?;
    if let Some((positive, negative)) = find_clash(&lits) {
        return Err(Error::Inconsistent {
            positive: Box::new(positive),
            negative: Box::new(negative),
        });
    }
    Ok(Section::from_parts_unchecked(c.target.clone(), lits))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GluingOutcome {
    Glued(Section),
    Inconsistent { positive: Literal, negative: Literal },
    /// The first leg whose restriction differs from its section, with the
    /// symmetric difference between the two.
    RestrictionMismatch { leg: usize, residue: BTreeSet<Literal> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingResult {
    pub outcome: GluingOutcome,
    /// Non-empty residues of every leg, keyed by leg index.
    pub residues: BTreeMap<usize, BTreeSet<Literal>>,
}

impl GluingResult {
    pub fn glued(&self) -> Option<&Section> {
        match &self.outcome {
            GluingOutcome::Glued(s) => Some(s),
            _ => None,
        }
    }
}

pub fn glue(c: &Cover, sections: &[Section]) -> Result<GluingResult> {
    let candidate = match canonical_glue(c, sections) {
        Ok(s) => s,
        Err(Error::Inconsistent { positive, negative }) => {
            return Ok(GluingResult {
                outcome: GluingOutcome::Inconsistent {
                    positive: *positive,
                    negative: *negative,
                },
                residues: BTreeMap::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let mut residues = BTreeMap::new();
    for (i, (leg, s)) in c.legs.iter().zip(sections).enumerate() {
        let back = restrict(leg, &candidate)?;
        let residue: BTreeSet<Literal> = back
            .literals()
            .symmetric_difference(s.literals())
            .cloned()
            .collect();
        if !residue.is_empty() {
            residues.insert(i, residue);
        }
    }
    let outcome = match residues.iter().next() {
        None => GluingOutcome::Glued(candidate),
        Some((&leg, residue)) => GluingOutcome::RestrictionMismatch {
            leg,
            residue: residue.clone(),
        },
    };
    Ok(GluingResult { outcome, residues })
}

/// Every gluing of the family, found by exhaustive search over the atoms of
/// the target.
///
/// Each atom visible through some leg is tried absent, positive and negative;
/// a choice survives when every leg sees the same value in its own section.
/// Atoms no leg can see stay absent. Sections are returned in lexicographic
/// order of their serialized form; by uniqueness there is at most one.
pub fn all_gluings_bruteforce(c: &Cover, sections: &[Section], bound: usize) -> Result<Vec<Section>> {
    check_family(c, sections)?;
    let slots = c.target.literal_slots();
    if slots > bound {
        return Err(Error::TooLarge { slots, bound });
    }

    // For each target atom, the (leg, source atom) pairs lying over it.
    let mut over: BTreeMap<Literal, Vec<(usize, Literal)>> = BTreeMap::new();
    for (i, leg) in c.legs.iter().enumerate() {
        let source_vars: Vec<&Var> = leg.source().vars().iter().collect();
        for symbol in leg.source().vocab().symbols() {
            for args in tuples(&source_vars, symbol.arity()) {
                let atom = Literal::positive(symbol.name(), args).expect("vocabulary symbol");
                over.entry(leg.push_literal(&atom)).or_default().push((i, atom));
            }
        }
    }

    let visible: Vec<(&Literal, &Vec<(usize, Literal)>)> = over.iter().collect();
    let mut found = Vec::new();
    let mut chosen = Vec::new();
    search(&visible, sections, &mut chosen, &mut |lits| {
        found.push(Section::from_parts_unchecked(
            c.target.clone(),
            lits.iter().cloned().collect(),
        ))
    });
    found.sort();
    Ok(found)
}

fn value_in(s: &Section, atom: &Literal) -> Option<Polarity> {
    [Polarity::Positive, Polarity::Negative]
        .into_iter()
        .find(|&p| s.contains(&atom.with_polarity(p)))
}

fn search(
    slots: &[(&Literal, &Vec<(usize, Literal)>)],
    sections: &[Section],
    chosen: &mut Vec<Literal>,
    emit: &mut dyn FnMut(&[Literal]),
) {
    let Some(((atom, witnesses), rest)) = slots.split_first() else {
        emit(chosen);
        return;
    };
    for value in [None, Some(Polarity::Positive), Some(Polarity::Negative)] {
        let agrees = witnesses
            .iter()
            .all(|(i, src)| value_in(&sections[*i], src) == value);
        if !agrees {
            continue;
        }
        match value {
            None => search(rest, sections, chosen, emit),
            Some(p) => {
                chosen.push(atom.with_polarity(p));
                search(rest, sections, chosen, emit);
                chosen.pop();
            }
        }
    }
}
