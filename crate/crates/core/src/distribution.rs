//! Commutative semirings and finitely supported distributions over them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A commutative semiring `(R, +, 0, ·, 1)`.
pub trait Semiring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    /// Equality used when checking normalization and the semiring laws.
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
}

/// Booleans under disjunction and conjunction.
impl Semiring for bool {
    fn zero() -> Self {
        false
    }
    fn one() -> Self {
        true
    }
    fn add(&self, other: &Self) -> Self {
        *self || *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }
}

pub type Rational = BigRational;

impl Semiring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num::One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Absolute tolerance for comparing [`Real`] weights.
pub const REAL_TOLERANCE: f64 = 1e-9;

/// Floating-point reals. Equality in the semiring sense is up to
/// [`REAL_TOLERANCE`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Real(pub f64);

impl Semiring for Real {
    fn zero() -> Self {
        Real(0.0)
    }
    fn one() -> Self {
        Real(1.0)
    }
    fn add(&self, other: &Self) -> Self {
        Real(self.0 + other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Real(self.0 * other.0)
    }
    fn approx_eq(&self, other: &Self) -> bool {
        (self.0 - other.0).abs() <= REAL_TOLERANCE
    }
}

/// Ordered semirings with division, i.e. the ones probabilities live in.
pub trait Weight: Semiring + PartialOrd {
    fn div(&self, other: &Self) -> Self;
    fn to_f64(&self) -> f64;
    fn is_negative(&self) -> bool;
}

impl Weight for BigRational {
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Weight for Real {
    fn div(&self, other: &Self) -> Self {
        Real(self.0 / other.0)
    }
    fn to_f64(&self) -> f64 {
        self.0
    }
    fn is_negative(&self) -> bool {
        self.0 < 0.0
    }
}

pub fn rational(numer: u64, denom: u64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// A function `d : S -> R` of finite support with `Σ d(x) = 1`. Zero weights
/// are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T: Ord, R: Semiring> {
    weights: BTreeMap<T, R>,
}

impl<T: Ord + Clone, R: Semiring> Distribution<T, R> {
    /// Accepts weights that already sum to one. Repeated elements have their
    /// weights added.
    pub fn new<I>(weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, R)>,
    {
        let d = Self::collect(weights);
        if !d.total().approx_eq(&R::one()) {
            return Err(Error::NotNormalized);
        }
        Ok(d)
    }

    fn collect<I>(weights: I) -> Self
    where
        I: IntoIterator<Item = (T, R)>,
    {
        let mut out: BTreeMap<T, R> = BTreeMap::new();
        for (x, w) in weights {
            let sum = match out.remove(&x) {
                Some(prev) => prev.add(&w),
                None => w,
            };
            if !sum.is_zero() {
                out.insert(x, sum);
            }
        }
        Distribution { weights: out }
    }

    pub fn point(x: T) -> Self {
        Distribution {
            weights: BTreeMap::from([(x, R::one())]),
        }
    }

    pub fn weight(&self, x: &T) -> R {
        self.weights.get(x).cloned().unwrap_or_else(R::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.weights.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &R)> {
        self.weights.iter()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> R {
        self.weights.values().fold(R::zero(), |acc, w| acc.add(w))
    }

    /// `D_R(f)(y) = Σ_{f(x) = y} d(x)`.
    pub fn pushforward<U, F>(&self, mut f: F) -> Result<Distribution<U, R>>
    where
        U: Ord + Clone,
        F: FnMut(&T) -> Option<U>,
        T: fmt::Debug,
    {
        let mut images = Vec::with_capacity(self.weights.len());
        for (x, w) in &self.weights {
            let y = f(x).ok_or_else(|| Error::PartialMap(format!("{x:?}")))?;
            images.push((y, w.clone()));
        }
        Ok(Distribution::collect(images))
    }
}

/// Free-function form of [`Distribution::pushforward`].
pub fn pushforward<T, U, R, F>(f: F, d: &Distribution<T, R>) -> Result<Distribution<U, R>>
where
    T: Ord + Clone + fmt::Debug,
    U: Ord + Clone,
    R: Semiring,
    F: FnMut(&T) -> Option<U>,
{
    d.pushforward(f)
}

impl<T: Ord + Clone, R: Weight> Distribution<T, R> {
    /// Normalizes nonnegative weights by their total.
    pub fn from_weights<I>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, R)>,
    {
        let raw: Vec<(T, R)> = raw.into_iter().collect();
        if raw.iter().any(|(_, w)| w.is_negative()) {
            return Err(Error::NegativeWeight);
        }
        let total = raw.iter().fold(R::zero(), |acc, (_, w)| acc.add(w));
        if total.is_zero() {
            return Err(Error::AllZero);
        }
        Ok(Distribution::collect(
            raw.into_iter().map(|(x, w)| (x, w.div(&total))),
        ))
    }

    /// Shannon entropy in bits, with `0 · log 0 = 0`.
    pub fn entropy(&self) -> f64 {
        -self
            .weights
            .values()
            .map(Weight::to_f64)
            .filter(|&p| p > 0.0)
            .map(|p| p * p.log2())
            .sum::<f64>()
    }

    /// Every element of maximal weight, in element order.
    pub fn argmax(&self) -> Vec<&T> {
        let Some(best) = self
            .weights
            .values()
            .max_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
        else {
            return Vec::new();
        };
        self.weights
            .iter()
            .filter(|(_, w)| *w == best)
            .map(|(x, _)| x)
            .collect()
    }
}

impl<T: Ord + Clone> Distribution<T, Rational> {
    /// Normalizes integer counts exactly.
    pub fn from_counts<I>(counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, u64)>,
    {
        Distribution::from_weights(counts.into_iter().map(|(x, c)| (x, rational(c, 1))))
    }
}

impl<T: Ord + Clone> Distribution<T, bool> {
    /// A nonempty finite subset, viewed as a boolean distribution.
    pub fn from_subset<I>(items: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
    {
        let d = Distribution::collect(items.into_iter().map(|x| (x, true)));
        if d.is_empty() {
            return Err(Error::AllZero);
        }
        Ok(d)
    }

    pub fn to_subset(&self) -> BTreeSet<T> {
        self.weights.keys().cloned().collect()
    }
}

pub fn from_weights<T: Ord + Clone, R: Weight>(
    raw: impl IntoIterator<Item = (T, R)>,
) -> Result<Distribution<T, R>> {
    Distribution::from_weights(raw)
}

pub fn entropy<T: Ord + Clone, R: Weight>(d: &Distribution<T, R>) -> f64 {
    d.entropy()
}

pub fn argmax<T: Ord + Clone, R: Weight>(d: &Distribution<T, R>) -> Vec<&T> {
    d.argmax()
}

/// Orders distributions by entropy, higher first.
pub fn compare_by_entropy<T: Ord + Clone, R: Weight>(
    a: &Distribution<T, R>,
    b: &Distribution<T, R>,
) -> Ordering {
    b.entropy().total_cmp(&a.entropy())
}

/// Index of the maximal-entropy candidate; the earliest wins ties.
pub fn max_entropy<T: Ord + Clone, R: Weight>(candidates: &[Distribution<T, R>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, d) in candidates.iter().enumerate() {
        let h = d.entropy();
        if best.is_none_or(|(_, b)| h > b + REAL_TOLERANCE) {
            best = Some((i, h));
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_banana_counts() {
        let d = Distribution::from_counts([("c1", 14), ("c2", 24), ("c3", 0), ("c4", 10)]).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.weight(&"c1"), rational(14, 48));
        assert_eq!(d.weight(&"c2"), rational(1, 2));
        assert_eq!(d.weight(&"c3"), rational(0, 1));
        assert_eq!(d.weight(&"c4"), rational(10, 48));
        assert_eq!(d.total(), rational(1, 1));
        assert_eq!(d.argmax(), vec![&"c2"]);
    }

    #[test]
    fn from_weights_edge_cases() {
        let d = Distribution::from_counts([("a", 5)]).unwrap();
        assert_eq!(d, Distribution::point("a"));
        assert_eq!(
            Distribution::from_counts([("a", 0), ("b", 0)]),
            Err(Error::AllZero)
        );
        assert_eq!(
            Distribution::from_weights([("a", Real(-1.0)), ("b", Real(2.0))]),
            Err(Error::NegativeWeight)
        );
    }

    #[test]
    fn new_requires_normalization() {
        assert_eq!(
            Distribution::new([("a", rational(1, 3))]),
            Err(Error::NotNormalized)
        );
        let d = Distribution::new([("a", Real(0.1)), ("b", Real(0.2)), ("c", Real(0.7))]);
        assert!(d.is_ok());
    }

    #[test]
    fn boolean_pushforward_is_direct_image() {
        let d = Distribution::from_subset(["a", "b"]).unwrap();
        let image = d.pushforward(|_| Some("c")).unwrap();
        assert_eq!(image.to_subset(), BTreeSet::from(["c"]));
        assert!(Distribution::<&str, bool>::from_subset([]).is_err());
    }

    #[test]
    fn probabilistic_pushforward_sums_preimages() {
        let d = Distribution::new([
            ("x", rational(1, 4)),
            ("y", rational(1, 4)),
            ("w", rational(1, 2)),
        ])
        .unwrap();
        let image = pushforward(|v: &&str| Some(if *v == "w" { "w" } else { "z" }), &d).unwrap();
        assert_eq!(
            image,
            Distribution::new([("z", rational(1, 2)), ("w", rational(1, 2))]).unwrap()
        );
        assert_eq!(d.pushforward(|v| Some(*v)).unwrap(), d);
        assert!(matches!(
            d.pushforward(|v| (*v != "w").then_some(1)),
            Err(Error::PartialMap(_))
        ));
    }

    #[test]
    fn entropy_values() {
        let uniform = Distribution::from_counts([("a", 1), ("b", 1)]).unwrap();
        assert!((uniform.entropy() - 1.0).abs() < 1e-12);
        assert_eq!(Distribution::<_, Rational>::point("a").entropy(), 0.0);

        // -(14/48 log2 14/48 + 24/48 log2 24/48 + 10/48 log2 10/48)
        let expected = -[14.0f64, 24.0, 10.0]
            .iter()
            .map(|c| c / 48.0)
            .map(|p| p * p.log2())
            .sum::<f64>();
        let d = Distribution::from_counts([("t1", 14), ("t2", 24), ("t4", 10)]).unwrap();
        assert!((d.entropy() - expected).abs() < 1e-12);
        assert!((d.entropy() - 1.4899).abs() < 1e-4);
    }

    #[test]
    fn argmax_ties_and_points() {
        let uniform = Distribution::from_counts([("b", 1), ("a", 1)]).unwrap();
        assert_eq!(uniform.argmax(), vec![&"a", &"b"]);
        assert_eq!(Distribution::<_, Rational>::point("a").argmax(), vec![&"a"]);
    }

    #[test]
    fn max_entropy_prefers_the_flattest() {
        let peaked = Distribution::from_counts([("a", 9), ("b", 1)]).unwrap();
        let flat = Distribution::from_counts([("a", 1), ("b", 1)]).unwrap();
        assert_eq!(max_entropy(&[peaked.clone(), flat.clone()]), Some(1));
        assert_eq!(compare_by_entropy(&flat, &peaked), Ordering::Less);
        assert_eq!(max_entropy::<&str, Rational>(&[]), None);
    }
}
