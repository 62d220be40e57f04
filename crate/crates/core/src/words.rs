//! Free-group words and one-relator presentations.
//!
//! A word is stored in syllable form: a sequence of (generator, exponent)
//! pairs with 1-based generator indices, kept freely reduced at all times.
//! Exponents are arbitrary-precision so relators like `x^(10^30) y` are
//! representable exactly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("generator index {index} out of range 1..={rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("parse error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("parse error at byte {pos}: generator `{name}` used but not declared")]
    UndeclaredGenerator { pos: usize, name: String },
    #[error("relator is trivial after free reduction")]
    TrivialRelator,
}

/// Freely reduced word in the free group of the given rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<(usize, BigInt)>,
}

impl FreeWord {
    pub fn identity(rank: usize) -> Self {
        FreeWord { rank, letters: Vec::new() }
    }

    /// Freely reduces an arbitrary syllable sequence.
    pub fn reduce<I>(rank: usize, raw: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let mut letters: Vec<(usize, BigInt)> = Vec::new();
        for (gen, exp) in raw {
            if gen == 0 || gen > rank {
                return Err(WordError::GeneratorOutOfRange { index: gen, rank });
            }
            if exp.is_zero() {
                continue;
            }
            match letters.last_mut() {
                Some((g, e)) if *g == gen => {
                    *e += exp;
                    if e.is_zero() {
                        letters.pop();
                    }
                }
                _ => letters.push((gen, exp)),
            }
        }
        Ok(FreeWord { rank, letters })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[(usize, BigInt)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of letters (syllables counted with absolute exponent) when the
    /// exponents fit a machine word; syllable count otherwise is available via
    /// `letters().len()`.
    pub fn letter_count(&self) -> Option<u64> {
        let mut total: u64 = 0;
        for (_, e) in &self.letters {
            let a = e.abs();
            let a = u64::try_from(a.to_biguint().unwrap()).ok()?;
            total = total.checked_add(a)?;
        }
        Some(total)
    }

    pub fn inverse(&self) -> Self {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|(g, e)| (*g, -e.clone()))
            .collect();
        FreeWord { rank: self.rank, letters }
    }

    pub fn concat(&self, other: &FreeWord) -> Result<Self, WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch { left: self.rank, right: other.rank });
        }
        FreeWord::reduce(
            self.rank,
            self.letters.iter().chain(other.letters.iter()).cloned(),
        )
    }

    /// Cyclic reduction. Returns `(conjugator, core)` with
    /// `self = conjugator · core · conjugator⁻¹` and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (FreeWord, FreeWord) {
        let mut core = self.letters.clone();
        let mut conj: Vec<(usize, BigInt)> = Vec::new();
        while core.len() >= 2 {
            let (fg, _) = core[0];
            let (lg, le) = core[core.len() - 1].clone();
            if fg != lg {
                break;
            }
            // w = x^a u x^b  =  x^{-b} (x^{a+b} u) x^{b}
            conj.push((lg, -le.clone()));
            core.pop();
            core[0].1 += le;
            if core[0].1.is_zero() {
                core.remove(0);
            }
        }
        let conjugator = FreeWord::reduce(self.rank, conj).expect("indices already validated");
        let core = FreeWord { rank: self.rank, letters: core };
        (conjugator, core)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some((f, _)), Some((l, _))) => self.letters.len() == 1 || f != l,
            _ => true,
        }
    }

    /// Image in the abelianization: entry i-1 is the exponent sum of x_i.
    pub fn exponent_sums(&self) -> Vec<BigInt> {
        let mut sums = vec![BigInt::zero(); self.rank];
        for (g, e) in &self.letters {
            sums[g - 1] += e;
        }
        sums
    }
}

/// One-relator presentation `< x_1, ..., x_d | r >` with r nontrivial and
/// cyclically reduced. Serializes as its text form.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Presentation {
    names: Vec<String>,
    relator: FreeWord,
}

impl Presentation {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Parser::new(text).parse_presentation()
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relator(&self) -> &FreeWord {
        &self.relator
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} | ", self.names.join(", "))?;
        for (i, (g, e)) in self.relator.letters().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let name = &self.names[g - 1];
            if *e == BigInt::from(1) {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        f.write_str(" >")
    }
}

impl TryFrom<String> for Presentation {
    type Error = ParseError;

    fn try_from(text: String) -> Result<Self, ParseError> {
        Presentation::parse(&text)
    }
}

impl From<Presentation> for String {
    fn from(p: Presentation) -> String {
        p.to_string()
    }
}

// Repeating a parenthesized subword materializes the repetitions, so the
// exponent of a grouped factor is capped; single-generator powers stay
// arbitrary precision.
const MAX_GROUP_EXPONENT: i64 = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lt,
    Gt,
    Bar,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Caret,
    Ident(String),
    Number(BigInt),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(n) => format!("number `{n}`"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, tokens: Vec::new(), pos: 0 }
    }

    fn lex(&mut self) -> Result<(), ParseError> {
        let bytes = self.src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let start = i;
            match c {
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                '<' => self.tokens.push((Tok::Lt, start)),
                '>' => self.tokens.push((Tok::Gt, start)),
                '|' => self.tokens.push((Tok::Bar, start)),
                ',' => self.tokens.push((Tok::Comma, start)),
                '[' => self.tokens.push((Tok::LBracket, start)),
                ']' => self.tokens.push((Tok::RBracket, start)),
                '(' => self.tokens.push((Tok::LParen, start)),
                ')' => self.tokens.push((Tok::RParen, start)),
                '^' => self.tokens.push((Tok::Caret, start)),
                c if c.is_ascii_alphabetic() => {
                    let mut j = i + 1;
                    while j < bytes.len()
                        && ((bytes[j] as char).is_ascii_alphanumeric() || bytes[j] == b'_')
                    {
                        j += 1;
                    }
                    self.tokens
                        .push((Tok::Ident(self.src[i..j].to_string()), start));
                    i = j;
                    continue;
                }
                c if c.is_ascii_digit() || c == '-' => {
                    let mut j = i + 1;
                    while j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        j += 1;
                    }
                    let lit = &self.src[i..j];
                    let n = lit.parse::<BigInt>().map_err(|_| ParseError::Syntax {
                        pos: start,
                        msg: format!("invalid integer literal `{lit}`"),
                    })?;
                    self.tokens.push((Tok::Number(n), start));
                    i = j;
                    continue;
                }
                other => {
                    return Err(ParseError::Syntax {
                        pos: start,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            }
            i += 1;
        }
        Ok(())
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.src.len())
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.next() {
            Some((t, _)) if t == want => Ok(()),
            Some((t, p)) => Err(ParseError::Syntax {
                pos: p,
                msg: format!("expected {}, found {}", want.describe(), t.describe()),
            }),
            None => Err(ParseError::Syntax {
                pos: self.src.len(),
                msg: format!("expected {}, found end of input", want.describe()),
            }),
        }
    }

    fn parse_presentation(mut self) -> Result<Presentation, ParseError> {
        self.lex()?;
        self.expect(Tok::Lt)?;
        let mut names: Vec<String> = Vec::new();
        loop {
            match self.next() {
                Some((Tok::Ident(name), p)) => {
                    if names.contains(&name) {
                        return Err(ParseError::Syntax {
                            pos: p,
                            msg: format!("generator `{name}` declared twice"),
                        });
                    }
                    names.push(name);
                }
                Some((t, p)) => {
                    return Err(ParseError::Syntax {
                        pos: p,
                        msg: format!("expected generator name, found {}", t.describe()),
                    })
                }
                None => {
                    return Err(ParseError::Syntax {
                        pos: self.src.len(),
                        msg: "expected generator name, found end of input".into(),
                    })
                }
            }
            match self.peek() {
                Some(Tok::Comma) => {
                    self.next();
                }
                _ => break,
            }
        }
        self.expect(Tok::Bar)?;
        let raw = self.parse_word(&names)?;
        self.expect(Tok::Gt)?;
        if let Some((t, p)) = self.next() {
            return Err(ParseError::Syntax {
                pos: p,
                msg: format!("trailing input: {}", t.describe()),
            });
        }
        let reduced =
            FreeWord::reduce(names.len(), raw).expect("parser only emits declared indices");
        if reduced.is_empty() {
            return Err(ParseError::TrivialRelator);
        }
        let (_, relator) = reduced.cyclic_reduce();
        Ok(Presentation { names, relator })
    }

    fn parse_word(&mut self, names: &[String]) -> Result<Vec<(usize, BigInt)>, ParseError> {
        let mut out: Vec<(usize, BigInt)> = Vec::new();
        let mut any = false;
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::LBracket) | Some(Tok::LParen) => {
                    let factor = self.parse_factor(names)?;
                    out.extend(factor);
                    any = true;
                }
                _ => break,
            }
        }
        if !any {
            return Err(ParseError::Syntax {
                pos: self.here(),
                msg: "expected a word".into(),
            });
        }
        Ok(out)
    }

    fn parse_factor(&mut self, names: &[String]) -> Result<Vec<(usize, BigInt)>, ParseError> {
        let (base, single) = self.parse_primary(names)?;
        let exp = if matches!(self.peek(), Some(Tok::Caret)) {
            self.next();
            match self.next() {
                Some((Tok::Number(n), _)) => Some((n, self.here())),
                Some((t, p)) => {
                    return Err(ParseError::Syntax {
                        pos: p,
                        msg: format!("expected integer exponent, found {}", t.describe()),
                    })
                }
                None => {
                    return Err(ParseError::Syntax {
                        pos: self.src.len(),
                        msg: "expected integer exponent, found end of input".into(),
                    })
                }
            }
        } else {
            None
        };
        match exp {
            None => Ok(base),
            Some((k, pos)) => {
                if k.is_zero() {
                    return Ok(Vec::new());
                }
                if single {
                    let (g, e) = base.into_iter().next().expect("single-letter primary");
                    return Ok(vec![(g, e * k)]);
                }
                let reps = i64::try_from(&k.abs()).ok().filter(|r| *r <= MAX_GROUP_EXPONENT);
                let reps = reps.ok_or_else(|| ParseError::Syntax {
                    pos,
                    msg: format!(
                        "exponent {k} on a grouped subword exceeds the supported bound {MAX_GROUP_EXPONENT}"
                    ),
                })? as usize;
                let unit: Vec<(usize, BigInt)> = if k.is_negative() {
                    base.iter().rev().map(|(g, e)| (*g, -e.clone())).collect()
                } else {
                    base
                };
                let mut out = Vec::with_capacity(unit.len() * reps);
                for _ in 0..reps {
                    out.extend(unit.iter().cloned());
                }
                Ok(out)
            }
        }
    }

    /// Returns the raw sequence and whether it is a single syllable (so a
    /// following exponent can be folded instead of repeated).
    fn parse_primary(
        &mut self,
        names: &[String],
    ) -> Result<(Vec<(usize, BigInt)>, bool), ParseError> {
        match self.next() {
            Some((Tok::Ident(name), p)) => {
                let idx = names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or(ParseError::UndeclaredGenerator { pos: p, name })?;
                Ok((vec![(idx + 1, BigInt::from(1))], true))
            }
            Some((Tok::LBracket, _)) => {
                let a = self.parse_word(names)?;
                self.expect(Tok::Comma)?;
                let b = self.parse_word(names)?;
                self.expect(Tok::RBracket)?;
                // [a, b] = a b a^-1 b^-1
                let mut out = Vec::new();
                out.extend(a.iter().cloned());
                out.extend(b.iter().cloned());
                out.extend(a.iter().rev().map(|(g, e)| (*g, -e.clone())));
                out.extend(b.iter().rev().map(|(g, e)| (*g, -e.clone())));
                Ok((out, false))
            }
            Some((Tok::LParen, _)) => {
                let w = self.parse_word(names)?;
                self.expect(Tok::RParen)?;
                Ok((w, false))
            }
            Some((t, p)) => Err(ParseError::Syntax {
                pos: p,
                msg: format!("expected a word factor, found {}", t.describe()),
            }),
            None => Err(ParseError::Syntax {
                pos: self.src.len(),
                msg: "expected a word factor, found end of input".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, raw: &[(usize, i64)]) -> FreeWord {
        FreeWord::reduce(rank, raw.iter().map(|(g, e)| (*g, BigInt::from(*e)))).unwrap()
    }

    #[test]
    fn reduce_cancellation() {
        assert!(w(1, &[(1, 1), (1, -1)]).is_empty());
        assert_eq!(w(1, &[(1, 2), (1, 3)]).letters(), &[(1, BigInt::from(5))]);
        assert_eq!(
            w(2, &[(1, 1), (2, 1), (2, -1), (1, 1)]).letters(),
            &[(1, BigInt::from(2))]
        );
    }

    #[test]
    fn reduce_rejects_bad_index() {
        let err = FreeWord::reduce(2, vec![(3, BigInt::from(1))]).unwrap_err();
        assert_eq!(err, WordError::GeneratorOutOfRange { index: 3, rank: 2 });
    }

    #[test]
    fn cyclic_reduce_strips_conjugation() {
        // x y x^-1 -> y
        let word = w(2, &[(1, 1), (2, 1), (1, -1)]);
        let (g, core) = word.cyclic_reduce();
        assert_eq!(core, w(2, &[(2, 1)]));
        assert_eq!(g, w(2, &[(1, 1)]));
        // x^2 y x^-2 -> y
        let word = w(2, &[(1, 2), (2, 1), (1, -2)]);
        let (_, core) = word.cyclic_reduce();
        assert_eq!(core, w(2, &[(2, 1)]));
        // [x, y] is already cyclically reduced
        let word = w(2, &[(1, 1), (2, 1), (1, -1), (2, -1)]);
        let (g, core) = word.cyclic_reduce();
        assert!(g.is_empty());
        assert_eq!(core, word);
    }

    #[test]
    fn exponent_sums_counts() {
        let comm = w(2, &[(1, 1), (2, 1), (1, -1), (2, -1)]);
        assert_eq!(comm.exponent_sums(), vec![BigInt::zero(), BigInt::zero()]);
        let trefoil = w(2, &[(1, 2), (2, -3)]);
        assert_eq!(
            trefoil.exponent_sums(),
            vec![BigInt::from(2), BigInt::from(-3)]
        );
    }

    #[test]
    fn parse_commutator() {
        let p = Presentation::parse("< x, y | [x,y] >").unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.relator(), &w(2, &[(1, 1), (2, 1), (1, -1), (2, -1)]));
    }

    #[test]
    fn parse_genus_two_surface() {
        let p = Presentation::parse("< x1,y1,x2,y2 | [x1,y1][x2,y2] >").unwrap();
        assert_eq!(p.rank(), 4);
        assert_eq!(p.relator().letters().len(), 8);
        let sums = p.relator().exponent_sums();
        assert!(sums.iter().all(|s| s.is_zero()));
    }

    #[test]
    fn parse_rejects_trivial_relator() {
        assert_eq!(
            Presentation::parse("< x, y | x x^-1 >").unwrap_err(),
            ParseError::TrivialRelator
        );
    }

    #[test]
    fn parse_rejects_undeclared_generator() {
        match Presentation::parse("< x | x y >").unwrap_err() {
            ParseError::UndeclaredGenerator { name, .. } => assert_eq!(name, "y"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_reports_position() {
        match Presentation::parse("< x | x ? >").unwrap_err() {
            ParseError::Syntax { pos, .. } => assert_eq!(pos, 8),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_nested_and_powers() {
        let p = Presentation::parse("< x, y | ([x,y])^2 >").unwrap();
        assert_eq!(p.relator().letters().len(), 8);
        let q = Presentation::parse("< x, y | x^3 y^-2 >").unwrap();
        assert_eq!(
            q.relator(),
            &w(2, &[(1, 3), (2, -2)])
        );
    }

    #[test]
    fn parse_huge_generator_power() {
        let p = Presentation::parse("< x, y | x^123456789012345678901 y >").unwrap();
        let expect: BigInt = "123456789012345678901".parse().unwrap();
        assert_eq!(p.relator().letters()[0], (1, expect));
    }

    #[test]
    fn relator_is_cyclically_reduced_after_parse() {
        let p = Presentation::parse("< x, y | x y x^-1 >").unwrap();
        assert_eq!(p.relator(), &w(2, &[(2, 1)]));
        assert!(p.relator().is_cyclically_reduced());
    }

    #[test]
    fn display_round_trip() {
        for text in [
            "< x, y | [x,y] >",
            "< x1,y1,x2,y2 | [x1,y1][x2,y2] >",
            "< a, b | a^2 b^-3 >",
        ] {
            let p = Presentation::parse(text).unwrap();
            let printed = p.to_string();
            let again = Presentation::parse(&printed).unwrap();
            assert_eq!(p, again, "round trip failed for {text}");
        }
    }
}
