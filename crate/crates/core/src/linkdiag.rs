//! Linking diagrams and the per-prime spanning-subtree primitivity check.
//!
//! A diagram with d components is primitive when, for every prime p, some
//! spanning subtree of the complete graph on the components has all its
//! linking numbers ≢ 0 mod p. Such a subtree exists iff the subgraph of
//! edges with label ≢ 0 mod p is connected, so connectivity decides the
//! condition. Only finitely many primes matter: any prime dividing no
//! label excludes exactly the zero-labeled edges, which is the separate
//! "nonzero-label" check reported under the symbol `inf`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::int::Int;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("linking matrix must be nonempty and square; got {rows} rows")]
    NotSquare { rows: usize },
    #[error("linking matrix row {row} has {len} entries, expected {expected}")]
    RaggedRow { row: usize, len: usize, expected: usize },
    #[error("linking matrix is not symmetric at ({i},{j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("diagonal entry ({i},{i}) must be zero")]
    NonzeroDiagonal { i: usize },
}

/// Complete graph on the link components with symmetric integer linking
/// numbers; the diagonal is required zero.
///
/// Labels are arbitrary precision; prime extraction uses trial division, so
/// labels far beyond 2⁶⁴ with large prime factors will be slow to factor.
///
/// Serializes as its matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Int>>", into = "Vec<Vec<Int>>")]
pub struct LinkingDiagram {
    components: usize,
    linking: Vec<Vec<BigInt>>,
}

impl LinkingDiagram {
    pub fn new(linking: Vec<Vec<BigInt>>) -> Result<Self, DiagramError> {
        let d = linking.len();
        if d == 0 {
            return Err(DiagramError::NotSquare { rows: 0 });
        }
        for (i, row) in linking.iter().enumerate() {
            if row.len() != d {
                return Err(DiagramError::RaggedRow { row: i, len: row.len(), expected: d });
            }
        }
        for i in 0..d {
            if !linking[i][i].is_zero() {
                return Err(DiagramError::NonzeroDiagonal { i });
            }
            for j in (i + 1)..d {
                if linking[i][j] != linking[j][i] {
                    return Err(DiagramError::NotSymmetric { i, j });
                }
            }
        }
        Ok(LinkingDiagram { components: d, linking })
    }

    pub fn from_int_matrix(rows: Vec<Vec<Int>>) -> Result<Self, DiagramError> {
        LinkingDiagram::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn label(&self, i: usize, j: usize) -> &BigInt {
        &self.linking[i][j]
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.linking
    }

    /// Edges (i, j) with i < j, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let d = self.components;
        (0..d).flat_map(move |i| ((i + 1)..d).map(move |j| (i, j)))
    }

    /// Primes dividing at least one nonzero linking number, ascending.
    pub fn relevant_primes(&self) -> Vec<BigInt> {
        let mut primes: Vec<BigInt> = Vec::new();
        for (i, j) in self.edges() {
            for p in prime_factors(&self.linking[i][j].abs()) {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
        primes.sort();
        primes
    }

    /// Decides primitivity and produces either a spanning-tree witness per
    /// relevant prime (plus the nonzero-label check) or the first failing
    /// prime with a disconnected vertex set. The `inf` check runs first,
    /// then primes in ascending order.
    pub fn is_primitive(&self) -> LinkVerdict {
        let mut trees = Vec::new();
        let checks = std::iter::once(PrimeLabel::Inf).chain(
            self.relevant_primes().into_iter().map(PrimeLabel::Prime),
        );
        for check in checks {
            let keep = |label: &BigInt| match &check {
                PrimeLabel::Inf => !label.is_zero(),
                PrimeLabel::Prime(p) => !label.mod_floor(p).is_zero(),
            };
            match self.spanning_tree(keep) {
                Ok(edges) => trees.push(TreeWitness { prime: check, edges }),
                Err(disconnected) => {
                    return LinkVerdict {
                        primitive: false,
                        failing_prime: Some(check),
                        trees: Vec::new(),
                        disconnected,
                    }
                }
            }
        }
        LinkVerdict { primitive: true, failing_prime: None, trees, disconnected: Vec::new() }
    }

    /// Union-find over the edges passing `keep`; on success the uniting
    /// edges are the witness tree, on failure the component of vertex 0 is
    /// one side of a disconnecting bipartition.
    fn spanning_tree<F>(&self, keep: F) -> Result<Vec<(usize, usize)>, Vec<usize>>
    where
        F: Fn(&BigInt) -> bool,
    {
        let d = self.components;
        let mut uf = UnionFind::new(d);
        let mut tree = Vec::new();
        for (i, j) in self.edges() {
            if keep(&self.linking[i][j]) && uf.union(i, j) {
                tree.push((i, j));
                if tree.len() == d - 1 {
                    break;
                }
            }
        }
        if tree.len() == d.saturating_sub(1) {
            Ok(tree)
        } else {
            let root = uf.find(0);
            Err((0..d).filter(|&v| uf.find(v) == root).collect())
        }
    }
}

impl TryFrom<Vec<Vec<Int>>> for LinkingDiagram {
    type Error = DiagramError;

    fn try_from(rows: Vec<Vec<Int>>) -> Result<Self, DiagramError> {
        LinkingDiagram::from_int_matrix(rows)
    }
}

impl From<LinkingDiagram> for Vec<Vec<Int>> {
    fn from(g: LinkingDiagram) -> Self {
        g.linking
            .into_iter()
            .map(|row| row.into_iter().map(Int).collect())
            .collect()
    }
}

/// `inf` denotes the nonzero-label check covering every prime that divides
/// no linking number.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PrimeLabel {
    Inf,
    Prime(BigInt),
}

impl fmt::Display for PrimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeLabel::Inf => f.write_str("inf"),
            PrimeLabel::Prime(p) => p.fmt(f),
        }
    }
}

impl Serialize for PrimeLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            PrimeLabel::Inf => serializer.serialize_str("inf"),
            PrimeLabel::Prime(p) => Int(p.clone()).serialize(serializer),
        }
    }
}

struct PrimeLabelVisitor;

impl Visitor<'_> for PrimeLabelVisitor {
    type Value = PrimeLabel;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"inf\", a prime number, or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<PrimeLabel, E> {
        Ok(PrimeLabel::Prime(BigInt::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<PrimeLabel, E> {
        Ok(PrimeLabel::Prime(BigInt::from(v)))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<PrimeLabel, E> {
        if v == "inf" {
            return Ok(PrimeLabel::Inf);
        }
        v.parse::<BigInt>()
            .map(PrimeLabel::Prime)
            .map_err(|_| E::custom(format!("invalid prime label: {v:?}")))
    }
}

impl<'de> Deserialize<'de> for PrimeLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<PrimeLabel, D::Error> {
        deserializer.deserialize_any(PrimeLabelVisitor)
    }
}

/// Spanning tree certified for one modular check; vertices are 0-based
/// component indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeWitness {
    pub prime: PrimeLabel,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkVerdict {
    pub primitive: bool,
    pub failing_prime: Option<PrimeLabel>,
    pub trees: Vec<TreeWitness>,
    pub disconnected: Vec<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns true when the edge united two distinct components.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut n = n.abs();
    if n <= BigInt::from(1) {
        return out;
    }
    let mut p = BigInt::from(2);
    while (&p * &p) <= n {
        if n.mod_floor(&p).is_zero() {
            out.push(p.clone());
            while n.mod_floor(&p).is_zero() {
                n /= &p;
            }
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::from(1) {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagram(rows: &[&[i64]]) -> LinkingDiagram {
        LinkingDiagram::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn validation_errors() {
        let asym = LinkingDiagram::new(vec![
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(2), BigInt::from(0)],
        ]);
        assert_eq!(asym.unwrap_err(), DiagramError::NotSymmetric { i: 0, j: 1 });
        let diag = LinkingDiagram::new(vec![vec![BigInt::from(3)]]);
        assert_eq!(diag.unwrap_err(), DiagramError::NonzeroDiagonal { i: 0 });
        assert_eq!(
            LinkingDiagram::new(vec![]).unwrap_err(),
            DiagramError::NotSquare { rows: 0 }
        );
    }

    #[test]
    fn relevant_primes_cases() {
        assert!(diagram(&[&[0, 1], &[1, 0]]).relevant_primes().is_empty());
        assert_eq!(
            diagram(&[&[0, 6], &[6, 0]]).relevant_primes(),
            vec![BigInt::from(2), BigInt::from(3)]
        );
        let d3 = diagram(&[&[0, 6, 10], &[6, 0, 15], &[10, 15, 0]]);
        assert_eq!(
            d3.relevant_primes(),
            vec![BigInt::from(2), BigInt::from(3), BigInt::from(5)]
        );
    }

    #[test]
    fn knot_is_primitive() {
        let v = diagram(&[&[0]]).is_primitive();
        assert!(v.primitive);
        assert!(v.trees.len() == 1 && v.trees[0].edges.is_empty());
    }

    #[test]
    fn two_components_label_two_fails_at_two() {
        let v = diagram(&[&[0, 2], &[2, 0]]).is_primitive();
        assert!(!v.primitive);
        assert_eq!(v.failing_prime, Some(PrimeLabel::Prime(BigInt::from(2))));
        assert!(!v.disconnected.is_empty());
    }

    #[test]
    fn triangle_2_3_5_is_primitive() {
        let v = diagram(&[&[0, 2, 5], &[2, 0, 3], &[5, 3, 0]]).is_primitive();
        assert!(v.primitive);
        // one tree for inf plus one per relevant prime 2, 3, 5
        assert_eq!(v.trees.len(), 4);
        for t in &v.trees {
            assert_eq!(t.edges.len(), 2);
        }
    }

    #[test]
    fn zero_label_disconnects_without_primes() {
        let v = diagram(&[&[0, 0], &[0, 0]]).is_primitive();
        assert!(!v.primitive);
        assert_eq!(v.failing_prime, Some(PrimeLabel::Inf));
        assert_eq!(v.disconnected, vec![0]);
    }

    #[test]
    fn prime_factor_helper() {
        assert_eq!(prime_factors(&BigInt::from(1)), Vec::<BigInt>::new());
        assert_eq!(
            prime_factors(&BigInt::from(-60)),
            vec![BigInt::from(2), BigInt::from(3), BigInt::from(5)]
        );
        assert_eq!(prime_factors(&BigInt::from(97)), vec![BigInt::from(97)]);
    }
}
