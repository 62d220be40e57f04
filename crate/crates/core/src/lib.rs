//! Primitivity checks for one-relator and link groups, plus a rule engine
//! that derives Baum-Connes conclusions from established closure theorems.
//!
//! The pipeline for one-relator groups: parse a presentation ([`words`]),
//! find the lower-central-series weight of the relator via truncated Magnus
//! expansion ([`magnus`]), read off its coordinates over the Lyndon basis of
//! the free Lie ring ([`lie`]), and test the coordinate gcd. Link groups go
//! through the per-prime spanning-subtree check on their linking diagram
//! ([`linkdiag`]). The [`certify`] module combines both with user-asserted
//! facts into citation-bearing reports.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so everything here is safe to share across threads.

pub mod certify;
pub mod int;
pub mod lie;
pub mod linkdiag;
pub mod magnus;
pub mod words;

pub use certify::{
    certify, certify_iterated, check_one_relator, CertOptions, CertReport, ChainEntry, Evidence,
    GroupDescriptor, PrimitivityReason, PrimitivityVerdict, Verdict, DEFAULT_WEIGHT_CAP,
};
pub use int::Int;
pub use lie::{bracketing, is_proper_power, lie_coordinates, lyndon_words, LieVector, LyndonWord};
pub use linkdiag::{LinkVerdict, LinkingDiagram, PrimeLabel, TreeWitness};
pub use magnus::{magnus_expand, weight, HomogeneousComponent, TruncatedSeries};
pub use words::{FreeWord, ParseError, Presentation};
