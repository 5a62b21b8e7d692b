//! Series-parallel composition terms and their text syntax.
//!
//! ```text
//! term := "Q" INT | "S(" term ("," term)+ ")" | "P(" term "," term ["," term] ")"
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An ordered series-parallel composition. Parallel children are listed
/// left to right in the plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SpTerm {
    /// A path of `len` edges.
    Chain(u32),
    Series(Vec<SpTerm>),
    Parallel(Vec<SpTerm>),
}

impl SpTerm {
    pub fn edge_count(&self) -> usize {
        match self {
            SpTerm::Chain(l) => *l as usize,
            SpTerm::Series(c) | SpTerm::Parallel(c) => c.iter().map(SpTerm::edge_count).sum(),
        }
    }

    pub fn children(&self) -> &[SpTerm] {
        match self {
            SpTerm::Chain(_) => &[],
            SpTerm::Series(c) | SpTerm::Parallel(c) => c,
        }
    }

    /// The same plane graph seen with source and sink exchanged.
    pub fn reversed(&self) -> SpTerm {
        match self {
            SpTerm::Chain(l) => SpTerm::Chain(*l),
            SpTerm::Series(c) => SpTerm::Series(c.iter().rev().map(SpTerm::reversed).collect()),
            SpTerm::Parallel(c) => SpTerm::Parallel(c.iter().rev().map(SpTerm::reversed).collect()),
        }
    }

    /// Normal form: no series inside series, no parallel inside parallel,
    /// adjacent chains merged. A flattened parallel with more than three
    /// children is regrouped as `P(P(c1..ck-1), ck)`.
    pub fn canonical(&self) -> SpTerm {
        match self {
            SpTerm::Chain(l) => SpTerm::Chain(*l),
            SpTerm::Series(c) => {
                let mut out: Vec<SpTerm> = Vec::with_capacity(c.len());
                let push = |t: SpTerm, out: &mut Vec<SpTerm>| match (out.last_mut(), t) {
                    (Some(SpTerm::Chain(a)), SpTerm::Chain(b)) => *a += b,
                    (_, t) => out.push(t),
                };
                for child in c {
                    match child.canonical() {
                        SpTerm::Series(inner) => inner.into_iter().for_each(|t| push(t, &mut out)),
                        t => push(t, &mut out),
                    }
                }
                if out.len() == 1 {
                    out.pop().unwrap()
                } else {
                    SpTerm::Series(out)
                }
            }
            SpTerm::Parallel(c) => {
                let mut flat = Vec::with_capacity(c.len());
                for child in c {
                    match child.canonical() {
                        SpTerm::Parallel(inner) => flat.extend(inner),
                        t => flat.push(t),
                    }
                }
                group_parallel(flat)
            }
        }
    }

    /// Checks that every vertex of the realized graph has degree at most 4.
    pub fn validate_degrees(&self) -> Result<()> {
        crate::graph::realize(self).map(|_| ())
    }
}

pub(crate) fn group_parallel(mut flat: Vec<SpTerm>) -> SpTerm {
    if flat.len() <= 3 {
        SpTerm::Parallel(flat)
    } else {
        let last = flat.pop().unwrap();
        SpTerm::Parallel(vec![group_parallel(flat), last])
    }
}

impl fmt::Display for SpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, children) = match self {
            SpTerm::Chain(l) => return write!(f, "Q{l}"),
            SpTerm::Series(c) => ('S', c),
            SpTerm::Parallel(c) => ('P', c),
        };
        write!(f, "{tag}(")?;
        for (i, c) in children.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for SpTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spterm(s)
    }
}

/// Parses the SPT text syntax. Whitespace is allowed between tokens.
pub fn parse_spterm(text: &str) -> Result<SpTerm> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let term = p.term()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Syntax { offset: p.pos, expected: "end of input" });
    }
    Ok(term)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8, expected: &'static str) -> Result<()> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Syntax { offset: self.pos, expected })
        }
    }

    fn term(&mut self) -> Result<SpTerm> {
        let start = self.pos;
        match self.peek() {
            Some(b'Q') => {
                self.pos += 1;
                let digits = self.src[self.pos..].iter().take_while(|b| b.is_ascii_digit()).count();
                if digits == 0 {
                    return Err(Error::Syntax { offset: self.pos, expected: "chain length" });
                }
                let text = std::str::from_utf8(&self.src[self.pos..self.pos + digits]).unwrap();
                let len: u32 = text
                    .parse()
                    .map_err(|_| Error::Syntax { offset: self.pos, expected: "chain length below 2^32" })?;
                if len == 0 {
                    return Err(Error::ZeroLength { offset: start });
                }
                self.pos += digits;
                Ok(SpTerm::Chain(len))
            }
            Some(tag @ (b'S' | b'P')) => {
                let offset = self.pos;
                self.pos += 1;
                self.expect(b'(', "'('")?;
                let mut children = vec![self.term()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    children.push(self.term()?);
                }
                self.expect(b')', "',' or ')'")?;
                if tag == b'S' {
                    if children.len() < 2 {
                        return Err(Error::Syntax { offset: self.pos - 1, expected: "a second series child" });
                    }
                    Ok(SpTerm::Series(children))
                } else {
                    if !(2..=3).contains(&children.len()) {
                        return Err(Error::Arity { offset, count: children.len() });
                    }
                    Ok(SpTerm::Parallel(children))
                }
            }
            _ => Err(Error::Syntax { offset: self.pos, expected: "'Q', 'S' or 'P'" }),
        }
    }
}
