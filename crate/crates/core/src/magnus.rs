//! Truncated Magnus expansion.
//!
//! The free group embeds into the ring of noncommutative integer power
//! series by x_i ↦ 1 + X_i. A word lies in the n-th lower central series
//! term exactly when its expansion is 1 plus terms of degree ≥ n, so the
//! first nonzero homogeneous layer of the expansion detects the weight of
//! a word and carries its image in γₙ/γₙ₊₁.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::words::FreeWord;

/// Noncommutative monomial: sequence of 1-based generator indices.
pub type Monomial = Vec<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series mismatch: rank {left_rank}/trunc {left_trunc} vs rank {right_rank}/trunc {right_trunc}")]
    Mismatch {
        left_rank: usize,
        left_trunc: usize,
        right_rank: usize,
        right_trunc: usize,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("word is trivial; it has no weight")]
    TrivialWord,
    #[error("no nonzero homogeneous layer up to degree {cap}; retry with a larger cap")]
    ExceedsCap { cap: usize },
}

/// Sparse ℤ-coefficient noncommutative polynomial truncated at a fixed
/// total degree. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    rank: usize,
    truncation: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl TruncatedSeries {
    pub fn one(rank: usize, truncation: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), BigInt::one());
        TruncatedSeries { rank, truncation, terms }
    }

    pub fn zero(rank: usize, truncation: usize) -> Self {
        TruncatedSeries { rank, truncation, terms: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, m: &[usize]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        debug_assert!(m.len() <= self.truncation);
        debug_assert!(m.iter().all(|&g| g >= 1 && g <= self.rank));
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(entry) => {
                *entry += c;
                if entry.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Product with all monomials of degree > truncation discarded.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        if self.rank != other.rank || self.truncation != other.truncation {
            return Err(SeriesError::Mismatch {
                left_rank: self.rank,
                left_trunc: self.truncation,
                right_rank: other.rank,
                right_trunc: other.truncation,
            });
        }
        let mut out = TruncatedSeries::zero(self.rank, self.truncation);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.len() + mb.len() > self.truncation {
                    continue;
                }
                let mut m = ma.clone();
                m.extend_from_slice(mb);
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    /// Lowest-degree nonzero layer among the non-constant terms, if any.
    pub fn lowest_nonconstant(&self) -> Option<HomogeneousComponent> {
        let degree = self
            .terms
            .keys()
            .filter(|m| !m.is_empty())
            .map(|m| m.len())
            .min()?;
        let terms: BTreeMap<Monomial, BigInt> = self
            .terms
            .iter()
            .filter(|(m, _)| m.len() == degree)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Some(HomogeneousComponent { rank: self.rank, degree, terms })
    }
}

/// Degree-n slice of a series; monomials all have length exactly n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousComponent {
    rank: usize,
    degree: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl HomogeneousComponent {
    pub fn zero(rank: usize, degree: usize) -> Self {
        HomogeneousComponent { rank, degree, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(rank: usize, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut out = HomogeneousComponent::zero(rank, degree);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[usize]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        assert_eq!(m.len(), self.degree, "monomial degree mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(entry) => {
                *entry += c;
                if entry.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// self -= scale * other
    pub fn sub_scaled(&mut self, scale: &BigInt, other: &HomogeneousComponent) {
        assert_eq!(self.degree, other.degree);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -(scale * c));
        }
    }

    /// Concatenation product of two homogeneous slices.
    pub fn mul(&self, other: &HomogeneousComponent) -> HomogeneousComponent {
        let mut out = HomogeneousComponent::zero(self.rank, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                m.extend_from_slice(mb);
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

/// Generalized binomial coefficient C(k, j) for integer k; integral for all
/// integer k, including negatives.
fn binomial(k: &BigInt, j: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..j {
        c *= k - BigInt::from(i);
        c /= BigInt::from(i + 1);
    }
    c
}

/// Series image of x_g^k: Σ_j C(k, j) X_g^j up to the truncation. For k = -1
/// this is the alternating geometric series 1 - X + X² - …
fn generator_power(rank: usize, truncation: usize, gen: usize, exp: &BigInt) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(rank, truncation);
    for j in 0..=truncation {
        s.add_term(vec![gen; j], binomial(exp, j));
    }
    s
}

/// Image of a word under the Magnus homomorphism, truncated at the given
/// degree. The constant term is always 1.
pub fn magnus_expand(w: &FreeWord, truncation: usize) -> TruncatedSeries {
    let mut acc = TruncatedSeries::one(w.rank(), truncation);
    for (gen, exp) in w.letters() {
        let factor = generator_power(w.rank(), truncation, *gen, exp);
        acc = acc.mul(&factor).expect("parameters match by construction");
    }
    acc
}

/// Smallest n with a nonzero degree-n layer in the expansion of `w`,
/// together with that layer. This is the lower-central-series weight of the
/// word: w ∈ γₙ \ γₙ₊₁.
///
/// The search expands at increasing truncation and stops at the first
/// nonzero layer, so shallow words never pay for a deep expansion.
pub fn weight(w: &FreeWord, cap: usize) -> Result<(usize, HomogeneousComponent), WeightError> {
    if w.is_empty() {
        return Err(WeightError::TrivialWord);
    }
    for n in 1..=cap {
        let s = magnus_expand(w, n);
        if let Some(layer) = s.lowest_nonconstant() {
            return Ok((layer.degree(), layer));
        }
    }
    Err(WeightError::ExceedsCap { cap })
}
