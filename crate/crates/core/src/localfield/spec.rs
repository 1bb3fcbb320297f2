//! Text form of field specifications.
//!
//! ```text
//! field    := "mixed" p q [eis] | "equal" q [eis]
//! eis      := "eisenstein" coeff+          (coefficients c_0 .. c_{e-1} of E, lowest first)
//! coeff    := integer | "[" digit* "]"     (integer, or ϖ-adic Teichmüller digits)
//! digit    := integer | "(" integer* ")"   (residue element: index Σ c_i p^i, or coordinates)
//! ```

use serde::{Deserialize, Serialize};

use super::{AElem, Field, Kind, LocalField, UnramRing};
use crate::error::{Error, Result};
use crate::ffield::{is_prime, FiniteField, Fq};

/// One coefficient of an Eisenstein polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffSpec {
    Int(i64),
    /// Teichmüller digits, each in polynomial-basis coordinates.
    Digits(Vec<Vec<u64>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub kind: Kind,
    pub p: u64,
    /// Residue degree over `F_p`.
    pub degree: usize,
    pub eisenstein: Vec<CoeffSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Word(String),
    Int(i64),
    Open(char),
    Close(char),
}

/// Split a line into tokens with their 1-based columns.
pub(crate) fn tokenize(s: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() || c == ',' {
            i += 1;
        } else if c == '[' || c == '(' {
            out.push((Tok::Open(c), col));
            i += 1;
        } else if c == ']' || c == ')' {
            out.push((Tok::Close(c), col));
            i += 1;
        } else if c == '-' || c.is_ascii_digit() {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<i64>().map_err(|_| Error::Parse {
                line,
                column: col,
                message: format!("bad integer '{text}'"),
            })?;
            out.push((Tok::Int(v), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                i += 1;
            }
            out.push((Tok::Word(chars[start..i].iter().collect()), col));
        } else {
            return Err(Error::Parse {
                line,
                column: col,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

pub(crate) struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(toks: &'a [(Tok, usize)], line: usize, end_col: usize) -> Self {
        Cursor {
            toks,
            pos: 0,
            line,
            end_col,
        }
    }

    pub(crate) fn err(&self, msg: impl Into<String>) -> Error {
        let column = self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col);
        Error::Parse {
            line: self.line,
            column,
            message: msg.into(),
        }
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    pub(crate) fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    pub(crate) fn int(&mut self, what: &str) -> Result<i64> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    pub(crate) fn word(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn digit(&mut self) -> Result<Vec<u64>> {
        match self.next() {
            // residue index, expanded later against the field
            Some(Tok::Int(v)) if v >= 0 => Ok(vec![u64::MAX, v as u64]),
            Some(Tok::Open('(')) => {
                let mut c = Vec::new();
                loop {
                    match self.next() {
                        Some(Tok::Int(v)) if v >= 0 => c.push(v as u64),
                        Some(Tok::Close(')')) => return Ok(c),
                        _ => {
                            self.pos -= 1;
                            return Err(self.err("expected coordinate or ')'"));
                        }
                    }
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected a residue digit"))
            }
        }
    }

    /// Coefficient: integer or bracketed digit list.
    pub(crate) fn coeff(&mut self) -> Result<CoeffSpec> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(CoeffSpec::Int(v))
            }
            Some(Tok::Open('[')) => {
                self.pos += 1;
                let mut ds = Vec::new();
                loop {
                    if let Some(Tok::Close(']')) = self.peek() {
                        self.pos += 1;
                        return Ok(CoeffSpec::Digits(ds));
                    }
                    if self.done() {
                        return Err(self.err("unterminated digit list"));
                    }
                    ds.push(self.digit()?);
                }
            }
            _ => Err(self.err("expected an integer or a digit list")),
        }
    }

    pub(crate) fn coeffs(&mut self) -> Result<Vec<CoeffSpec>> {
        let mut out = Vec::new();
        while matches!(self.peek(), Some(Tok::Int(_)) | Some(Tok::Open('['))) {
            out.push(self.coeff()?);
        }
        Ok(out)
    }
}

/// Parse a field specification; `line` is used for error positions.
pub fn parse_field_spec(text: &str, line: usize, col0: usize) -> Result<FieldSpec> {
    let toks = tokenize(text, line, col0)?;
    let mut c = Cursor::new(&toks, line, col0 + text.chars().count());
    let kind = match c.word("'mixed' or 'equal'")?.as_str() {
        "mixed" => Kind::Mixed,
        "equal" => Kind::Equal,
        other => {
            c.pos -= 1;
            return Err(c.err(format!("unknown field kind '{other}'")));
        }
    };
    let p_pos = c.pos;
    let (p, q) = match kind {
        Kind::Mixed => {
            let p = c.int("prime p")?;
            let q = c.int("residue order q")?;
            (p, q)
        }
        Kind::Equal => {
            let q = c.int("residue order q")?;
            let p = smallest_prime_factor(q.max(0) as u64) as i64;
            (p, q)
        }
    };
    if p < 2 || !is_prime(p as u64) {
        c.pos = p_pos;
        return Err(c.err(format!("{p} is not prime")));
    }
    let (p, mut qq, mut degree) = (p as u64, q.max(0) as u64, 0usize);
    while qq > 1 && qq % p == 0 {
        qq /= p;
        degree += 1;
    }
    if qq != 1 || degree == 0 {
        c.pos -= 1;
        return Err(c.err(format!("residue order {q} is not a power of {p}")));
    }
    let mut eisenstein = Vec::new();
    if !c.done() {
        let w = c.word("'eisenstein'")?;
        if w != "eisenstein" {
            c.pos -= 1;
            return Err(c.err(format!("unexpected '{w}'")));
        }
        eisenstein = c.coeffs()?;
        if eisenstein.is_empty() {
            return Err(c.err("eisenstein needs at least one coefficient"));
        }
    }
    if !c.done() {
        return Err(c.err("trailing input"));
    }
    Ok(FieldSpec {
        kind,
        p,
        degree,
        eisenstein,
    })
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..=n).find(|d| n.is_multiple_of(*d)).unwrap_or(n)
}

/// Residue element from parsed digit coordinates (index form marked by a
/// leading `u64::MAX`).
pub(crate) fn residue_digit(k: &Fq, d: &[u64]) -> Result<crate::ffield::Fe> {
    if d.first() == Some(&u64::MAX) {
        let idx = d[1];
        if idx >= k.order() {
            return Err(Error::Validation(format!(
                "residue index {idx} out of range for F_{}",
                k.order()
            )));
        }
        return Ok(k.from_index(idx));
    }
    if d.len() > k.degree() || d.iter().any(|&c| c >= k.characteristic()) {
        return Err(Error::Validation(format!(
            "residue coordinates {d:?} invalid for F_{}",
            k.order()
        )));
    }
    Ok(k.from_coeffs(d))
}

/// Element of the coefficient ring described by a coefficient spec.
pub(crate) fn coeff_to_a(a: &UnramRing, c: &CoeffSpec) -> Result<AElem> {
    match c {
        CoeffSpec::Int(v) => Ok(a.from_i64(*v)),
        CoeffSpec::Digits(ds) => {
            let k = a.residue().clone();
            let mut acc = a.zero();
            for d in ds.iter().rev() {
                acc = a.add(&a.mul_varpi(&acc, 1), &a.teichmuller(&residue_digit(&k, d)?));
            }
            Ok(acc)
        }
    }
}

impl FieldSpec {
    pub fn residue_field(&self) -> Result<Fq> {
        FiniteField::standard(self.p, self.degree)
    }

    pub fn build(&self, precision: usize) -> Result<Field> {
        let k = self.residue_field()?;
        let coeffs = self.eisenstein.clone();
        LocalField::eisenstein_with(self.kind, k, precision, move |a| {
            coeffs.iter().map(|c| coeff_to_a(a, c)).collect()
        })
    }
}
