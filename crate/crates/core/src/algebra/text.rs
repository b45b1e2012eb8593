//! Text form of Laurent polynomials.
//!
//! Grammar (whitespace ignored between tokens):
//!
//! ```text
//! poly     := term { ("+" | "-") term }
//! term     := coeff "*" monomial | monomial | coeff
//! monomial := var { "*" var }
//! var      := "u" INDEX [ "^" INT ]
//! coeff    := DIGITS
//! INT      := [ "-" ] DIGITS
//! ```
//!
//! `INDEX` is 1-based and must not exceed the ambient dimension; repeated
//! variables inside a monomial multiply (exponents add); a `-` separator
//! negates the following term's coefficient mod `p`. Coefficients are reduced
//! mod `p` during parsing, so `2*u1 + 1` over `F_2` parses to `1`.
//!
//! Printing ([`LaurentPoly`]'s `Display`) emits terms in the canonical
//! lexicographic order with reduced coefficients; parsing that text
//! reproduces the polynomial exactly.

use crate::algebra::expvec::{ExpVec, EXPONENT_BOUND};
use crate::algebra::poly::LaurentPoly;
use crate::algebra::scalar::validate_modulus;
use crate::error::{Error, Result};

/// Parses the polynomial grammar over `F_p` in variables `u1..u{dim}`.
///
/// Errors carry the byte offset of the offending token.
pub fn parse_poly(text: &str, modulus: u64, dim: usize) -> Result<LaurentPoly> {
    validate_modulus(modulus)?;
    Parser::new(text, modulus as u16, dim)?.parse()
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    /// Digit run: the residue mod p (for coefficient use) plus the raw value
    /// when it is small enough to serve as an exponent (`None` = oversized,
    /// which only matters after a `^`).
    Number {
        raw: Option<i64>,
        residue: u16,
    },
    /// `u` followed by a 1-based variable index.
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    modulus: u16,
    dim: usize,
}

impl Parser {
    fn new(text: &str, modulus: u16, dim: usize) -> Result<Self> {
        let mut toks = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0usize;
        while i < bytes.len() {
            let b = bytes[i];
            match b {
                b' ' | b'\t' | b'\r' | b'\n' => i += 1,
                b'+' => {
                    toks.push((Tok::Plus, i));
                    i += 1;
                }
                b'-' => {
                    toks.push((Tok::Minus, i));
                    i += 1;
                }
                b'*' => {
                    toks.push((Tok::Star, i));
                    i += 1;
                }
                b'^' => {
                    toks.push((Tok::Caret, i));
                    i += 1;
                }
                b'0'..=b'9' => {
                    let start = i;
                    let mut raw: Option<i64> = Some(0);
                    let mut residue: u32 = 0;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        let d = (bytes[i] - b'0') as i64;
                        raw = raw
                            .and_then(|r| r.checked_mul(10))
                            .and_then(|r| r.checked_add(d))
                            .filter(|&r| r <= EXPONENT_BOUND);
                        residue = (residue * 10 + d as u32) % modulus as u32;
                        i += 1;
                    }
                    toks.push((
                        Tok::Number {
                            raw,
                            residue: residue as u16,
                        },
                        start,
                    ));
                }
                b'u' => {
                    let start = i;
                    i += 1;
                    let digits_start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == digits_start {
                        return Err(err(start, "expected variable index after 'u'"));
                    }
                    let idx: usize = text[digits_start..i]
                        .parse()
                        .map_err(|_| err(digits_start, "variable index too large"))?;
                    if idx == 0 || idx > dim {
                        return Err(err(
                            start,
                            format!("unknown variable u{idx} (dimension is {dim})"),
                        ));
                    }
                    toks.push((Tok::Var(idx), start));
                }
                _ => {
                    return Err(err(i, format!("unexpected character {:?}", b as char)));
                }
            }
        }
        Ok(Self {
            toks,
            at: 0,
            end: text.len(),
            modulus,
            dim,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn parse(mut self) -> Result<LaurentPoly> {
        let mut terms: Vec<(ExpVec, i64)> = Vec::new();
        let mut negate = false;
        if self.peek().is_none() {
            return Err(err(self.pos(), "expected a term"));
        }
        loop {
            let (exp, coeff) = self.term()?;
            let signed = if negate {
                -(coeff as i64)
            } else {
                coeff as i64
            };
            terms.push((exp, signed));
            match self.bump() {
                None => break,
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                Some(_) => {
                    return Err(err(
                        self.toks[self.at - 1].1,
                        "expected '+', '-', or end of input",
                    ))
                }
            }
            if self.peek().is_none() {
                return Err(err(self.pos(), "expected a term after the sign"));
            }
        }
        LaurentPoly::from_terms(self.modulus as u64, self.dim, terms)
    }

    /// One grammar `term`; returns its exponent vector and coefficient residue.
    fn term(&mut self) -> Result<(ExpVec, u16)> {
        let mut coeff: u16 = 1 % self.modulus;
        let mut have_monomial = false;
        match self.peek() {
            Some(Tok::Number { residue, .. }) => {
                coeff = *residue;
                self.bump();
                // A coefficient alone is a complete term; "c * monomial"
                // continues only through an explicit star.
                if matches!(self.peek(), Some(Tok::Star)) {
                    self.bump();
                    if !matches!(self.peek(), Some(Tok::Var(_))) {
                        return Err(err(self.pos(), "expected a variable after '*'"));
                    }
                } else {
                    return Ok((ExpVec::zero(self.dim), coeff));
                }
            }
            Some(Tok::Var(_)) => {}
            _ => return Err(err(self.pos(), "expected a coefficient or a variable")),
        }
        let mut exps = vec![0i64; self.dim];
        loop {
            match self.peek() {
                Some(Tok::Var(idx)) => {
                    let idx = *idx;
                    self.bump();
                    let e = if matches!(self.peek(), Some(Tok::Caret)) {
                        self.bump();
                        self.exponent()?
                    } else {
                        1
                    };
                    exps[idx - 1] += e;
                    have_monomial = true;
                }
                _ if !have_monomial => {
                    return Err(err(self.pos(), "expected a variable"));
                }
                _ => break,
            }
            if matches!(self.peek(), Some(Tok::Star)) {
                self.bump();
                if !matches!(self.peek(), Some(Tok::Var(_))) {
                    return Err(err(self.pos(), "expected a variable after '*'"));
                }
            } else {
                break;
            }
        }
        let coords = exps
            .into_iter()
            .map(|e| {
                if e.abs() > EXPONENT_BOUND {
                    Err(Error::ExponentOverflow(e))
                } else {
                    Ok(e as i32)
                }
            })
            .collect::<Result<Vec<i32>>>()?;
        Ok((ExpVec::new(coords)?, coeff))
    }

    /// A signed integer exponent after `^`.
    fn exponent(&mut self) -> Result<i64> {
        let neg = if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            true
        } else {
            false
        };
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Number { raw: Some(raw), .. }) => Ok(if neg { -raw } else { raw }),
            Some(Tok::Number { raw: None, .. }) => {
                Err(err(pos, "exponent exceeds the bound ±2^20"))
            }
            _ => Err(err(pos, "expected an integer exponent after '^'")),
        }
    }
}
