//! Lyndon basis of the free Lie ring and integer coordinates of
//! homogeneous Lie elements.
//!
//! The degree-n part of γₙ(F)/γₙ₊₁(F) is free abelian; the bracketings of
//! the Lyndon words of length n form a basis whose expansion is triangular
//! with unit leading coefficients, so coordinates can be extracted over ℤ
//! without division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::magnus::HomogeneousComponent;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("polynomial is not a Lie element (nonzero remainder after Lyndon elimination)")]
    NotLieElement,
    #[error("zero vector has no proper-power status; the element lies one layer deeper")]
    ZeroImage,
}

/// Lyndon word: strictly smaller than every proper rotation of itself.
pub type LyndonWord = Vec<usize>;

/// All Lyndon words of length `n` over the alphabet 1..=d, in lexicographic
/// order. Duval's iterative generation.
pub fn lyndon_words(d: usize, n: usize) -> Vec<LyndonWord> {
    let mut out = Vec::new();
    if n == 0 || d == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![1];
    loop {
        if w.len() == n {
            out.push(w.clone());
        }
        let m = w.len();
        w = (0..n).map(|i| w[i % m]).collect();
        while w.last() == Some(&d) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out
}

/// Standard factorization w = u·v of a Lyndon word of length ≥ 2: v is the
/// lexicographically smallest (equivalently, longest Lyndon) proper suffix.
fn standard_factorization(w: &[usize]) -> (Vec<usize>, Vec<usize>) {
    debug_assert!(w.len() >= 2);
    let mut best = 1;
    for i in 2..w.len() {
        if w[i..] < w[best..] {
            best = i;
        }
    }
    (w[..best].to_vec(), w[best..].to_vec())
}

/// Expansion of the standard bracketing of a Lyndon word as a homogeneous
/// noncommutative polynomial; the coefficient on the monomial `w` itself is
/// always +1 and every other monomial present is lexicographically greater.
pub fn bracketing(rank: usize, w: &[usize]) -> HomogeneousComponent {
    if w.len() == 1 {
        return HomogeneousComponent::from_terms(rank, 1, [(w.to_vec(), BigInt::one())]);
    }
    let (u, v) = standard_factorization(w);
    let a = bracketing(rank, &u);
    let b = bracketing(rank, &v);
    let mut out = a.mul(&b);
    let ba = b.mul(&a);
    out.sub_scaled(&BigInt::one(), &ba);
    out
}

/// Coordinates of a homogeneous Lie element over the Lyndon basis of its
/// degree, indexed in lexicographic basis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieVector {
    rank: usize,
    degree: usize,
    coords: Vec<BigInt>,
}

impl LieVector {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }
}

/// Triangular elimination over the Lyndon basis. Walks the basis in lex
/// order, reads each coordinate off the leading monomial, and subtracts;
/// a nonzero final remainder means the input was not a Lie element.
pub fn lie_coordinates(h: &HomogeneousComponent) -> Result<LieVector, LieError> {
    let rank = h.rank();
    let degree = h.degree();
    let basis = lyndon_words(rank, degree);
    let mut residual = h.clone();
    let mut coords = Vec::with_capacity(basis.len());
    for w in &basis {
        let c = residual.coeff(w);
        if !c.is_zero() {
            residual.sub_scaled(&c, &bracketing(rank, w));
        }
        coords.push(c);
    }
    if !residual.is_zero() {
        return Err(LieError::NotLieElement);
    }
    Ok(LieVector { rank, degree, coords })
}

/// A nonzero vector in a free abelian group is a proper power exactly when
/// the gcd of its entries is at least 2.
pub fn is_proper_power(v: &LieVector) -> Result<bool, LieError> {
    let g = v.content();
    if g.is_zero() {
        return Err(LieError::ZeroImage);
    }
    Ok(g > BigInt::one())
}
