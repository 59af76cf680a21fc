//! Ranking candidate gluings by corpus frequencies of anaphor–antecedent
//! merging patterns.
//!
//! Every anaphor-to-antecedent assignment carries a pattern label (a lemma
//! pair such as `"ripe banana"`) whose corpus count is looked up in a
//! [`FrequencyTable`]. A candidate cover's weight is the sum of the counts of
//! its assignments, and normalizing over all candidates gives an exact
//! rational distribution over the gluings.

use std::collections::{BTreeMap, BTreeSet};

use crate::distribution::{rational, Distribution, Rational};
use crate::error::{Error, Result};
use crate::gluing::{glue, Cover, GluingOutcome};
use crate::logic::{Section, Var};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MergingPattern {
    pub anaphor: Var,
    pub antecedent: Var,
    pub label: String,
}

impl MergingPattern {
    pub fn new(anaphor: Var, antecedent: Var, label: impl Into<String>) -> Self {
        MergingPattern {
            anaphor,
            antecedent,
            label: label.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<String, u64>,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: impl Into<String>, count: u64) {
        self.counts.insert(label.into(), count);
    }

    pub fn get(&self, label: &str) -> Option<u64> {
        self.counts.get(label).copied()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Table labels that no pattern refers to.
    pub fn unused_labels(&self, patterns: &[MergingPattern]) -> Vec<&str> {
        let used: BTreeSet<&str> = patterns.iter().map(|p| p.label.as_str()).collect();
        self.labels().filter(|l| !used.contains(l)).collect()
    }
}

impl<S: Into<String>> FromIterator<(S, u64)> for FrequencyTable {
    fn from_iter<I: IntoIterator<Item = (S, u64)>>(iter: I) -> Self {
        FrequencyTable {
            counts: iter.into_iter().map(|(l, c)| (l.into(), c)).collect(),
        }
    }
}

/// What to do when a merging has no pattern or its label has no count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Strictness {
    #[default]
    Strict,
    /// Missing data counts as zero.
    Lenient,
}

fn index(patterns: &[MergingPattern]) -> Result<BTreeMap<(&Var, &Var), &str>> {
    let mut out = BTreeMap::new();
    for p in patterns {
        if out
            .insert((&p.anaphor, &p.antecedent), p.label.as_str())
            .is_some()
        {
            return Err(Error::DuplicatePattern {
                anaphor: p.anaphor.clone(),
                antecedent: p.antecedent.clone(),
            });
        }
    }
    Ok(out)
}

fn weigh(
    cover: &Cover,
    patterns: &BTreeMap<(&Var, &Var), &str>,
    table: &FrequencyTable,
    strictness: Strictness,
) -> Result<u64> {
    let mut total = 0u64;
    // The first leg embeds the antecedents; the rest carry anaphors.
    for leg in cover.legs().iter().skip(1) {
        for (anaphor, antecedent) in leg.varmap() {
            let count = match patterns.get(&(anaphor, antecedent)) {
                Some(label) => match (table.get(label), strictness) {
                    (Some(c), _) => c,
                    (None, Strictness::Lenient) => 0,
                    (None, Strictness::Strict) => return Err(Error::MissingCount(label.to_string())),
                },
                None if strictness == Strictness::Lenient => 0,
                None => {
                    return Err(Error::MissingPattern {
                        anaphor: anaphor.clone(),
                        antecedent: antecedent.clone(),
                    })
                }
            };
            total = total.saturating_add(count);
        }
    }
    Ok(total)
}

/// Sum of the counts of the cover's anaphor mergings.
pub fn event_weight(
    cover: &Cover,
    patterns: &[MergingPattern],
    table: &FrequencyTable,
    strictness: Strictness,
) -> Result<u64> {
    weigh(cover, &index(patterns)?, table, strictness)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub cover: Cover,
    pub gluing: Section,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    /// One entry per input cover, in input order, including zero weights.
    pub candidates: Vec<Candidate>,
    pub total: u64,
    /// Gluings produced by several covers carry their pooled weight.
    pub distribution: Distribution<Section, Rational>,
}

impl Ranking {
    /// The share of candidate `i` in the total weight.
    pub fn probability(&self, i: usize) -> Rational {
        rational(self.candidates[i].weight, self.total)
    }
}

pub fn distribution_over_gluings(
    covers: &[Cover],
    sections: &[Section],
    patterns: &[MergingPattern],
    table: &FrequencyTable,
    strictness: Strictness,
) -> Result<Ranking> {
    let patterns = index(patterns)?;
    let mut candidates = Vec::with_capacity(covers.len());
    for (index, cover) in covers.iter().enumerate() {
        let gluing = match glue(cover, sections)?.outcome {
            GluingOutcome::Glued(s) => s,
            GluingOutcome::Inconsistent { positive, negative } => {
                return Err(Error::InconsistentCover {
                    index,
                    positive: Box::new(positive),
                    negative: Box::new(negative),
                })
            }
            GluingOutcome::RestrictionMismatch { leg, .. } => {
                return Err(Error::NoGluing { index, leg })
            }
        };
        let weight = weigh(cover, &patterns, table, strictness)?;
        candidates.push(Candidate {
            cover: cover.clone(),
            gluing,
            weight,
        });
    }
    let total = candidates.iter().map(|c| c.weight).sum();
    let distribution =
        Distribution::from_counts(candidates.iter().map(|c| (c.gluing.clone(), c.weight)))?;
    Ok(Ranking {
        candidates,
        total,
        distribution,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolution {
    pub best: Vec<Section>,
    pub entropy: f64,
    pub ranking: Ranking,
}

pub fn resolve(
    covers: &[Cover],
    sections: &[Section],
    patterns: &[MergingPattern],
    table: &FrequencyTable,
    strictness: Strictness,
) -> Result<Resolution> {
    let ranking = distribution_over_gluings(covers, sections, patterns, table, strictness)?;
    Ok(Resolution {
        best: ranking.distribution.argmax().into_iter().cloned().collect(),
        entropy: ranking.distribution.entropy(),
        ranking,
    })
}
