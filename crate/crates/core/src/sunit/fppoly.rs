//! Dense univariate polynomials over `F_p`, the coefficient engine for
//! rational functions in characteristic `p`.

use std::fmt;

use crate::algebra::{
    add_mod, inv_mod, mul_mod, sub_mod, validate_modulus, FpScalar, EXPONENT_BOUND,
};
use crate::error::{Error, Result};

/// A polynomial in one variable `t` over `F_p`.
///
/// Stored dense, lowest degree first, with no trailing zeros; the zero
/// polynomial stores nothing. Degrees are capped at `2^20` so Frobenius
/// powering cannot silently explode.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct FpPoly {
    modulus: u16,
    coeffs: Vec<u16>,
}

fn trim(coeffs: &mut Vec<u16>) {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
}

impl FpPoly {
    pub fn zero(modulus: u64) -> Result<Self> {
        Ok(Self {
            modulus: validate_modulus(modulus)?,
            coeffs: Vec::new(),
        })
    }

    pub fn one(modulus: u64) -> Result<Self> {
        Self::from_coeffs(modulus, &[1])
    }

    /// The variable `t`.
    pub fn variable(modulus: u64) -> Result<Self> {
        Self::from_coeffs(modulus, &[0, 1])
    }

    /// Builds from coefficients in increasing degree, reduced mod `p`.
    pub fn from_coeffs(modulus: u64, coeffs: &[i64]) -> Result<Self> {
        let p = validate_modulus(modulus)?;
        let mut reduced: Vec<u16> = coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u16)
            .collect();
        trim(&mut reduced);
        if reduced.len() as i64 - 1 > EXPONENT_BOUND {
            return Err(Error::ExponentOverflow(reduced.len() as i64 - 1));
        }
        Ok(Self {
            modulus: p,
            coeffs: reduced,
        })
    }

    pub fn modulus(&self) -> u16 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FpScalar {
        FpScalar::from_raw(self.coeffs.get(i).copied().unwrap_or(0), self.modulus)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let p = self.modulus;
        let mut coeffs = vec![0u16; self.coeffs.len().max(other.coeffs.len())];
        for (i, slot) in coeffs.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = add_mod(a, b, p);
        }
        trim(&mut coeffs);
        Ok(Self { modulus: p, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let p = self.modulus;
        let mut coeffs = vec![0u16; self.coeffs.len().max(other.coeffs.len())];
        for (i, slot) in coeffs.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = sub_mod(a, b, p);
        }
        trim(&mut coeffs);
        Ok(Self { modulus: p, coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let p = self.modulus;
        if self.is_zero() || other.is_zero() {
            return Self::zero(p as u64);
        }
        let degree = (self.coeffs.len() - 1 + other.coeffs.len() - 1) as i64;
        if degree > EXPONENT_BOUND {
            return Err(Error::ExponentOverflow(degree));
        }
        let mut coeffs = vec![0u16; degree as usize + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = add_mod(coeffs[i + j], mul_mod(a, b, p), p);
            }
        }
        trim(&mut coeffs);
        Ok(Self { modulus: p, coeffs })
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_compatible(divisor)?;
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p = self.modulus;
        let dlen = divisor.coeffs.len();
        if self.coeffs.len() < dlen {
            return Ok((
                Self {
                    modulus: p,
                    coeffs: Vec::new(),
                },
                self.clone(),
            ));
        }
        let lead_inv = inv_mod(*divisor.coeffs.last().expect("nonzero"), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u16; self.coeffs.len() - dlen + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dlen - 1];
            if top == 0 {
                continue;
            }
            let q = mul_mod(top, lead_inv, p);
            quot[k] = q;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = sub_mod(rem[k + i], mul_mod(q, d, p), p);
            }
        }
        trim(&mut rem);
        trim(&mut quot);
        Ok((
            Self {
                modulus: p,
                coeffs: quot,
            },
            Self {
                modulus: p,
                coeffs: rem,
            },
        ))
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Scaled to leading coefficient `1` (zero stays zero).
    pub fn monic(&self) -> Self {
        let Some(&lead) = self.coeffs.last() else {
            return self.clone();
        };
        if lead == 1 {
            return self.clone();
        }
        let inv = inv_mod(lead, self.modulus);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| mul_mod(c, inv, self.modulus))
            .collect();
        Self {
            modulus: self.modulus,
            coeffs,
        }
    }

    /// The Frobenius power `self^(p^n)`.
    ///
    /// In characteristic `p` raising to the `p^n` is coefficient-preserving
    /// exponent dilation: `(Σ c_i t^i)^(p^n) = Σ c_i t^(i·p^n)`.
    pub fn frobenius(&self, n: u32) -> Result<Self> {
        if n == 0 || self.is_zero() {
            return Ok(self.clone());
        }
        let q = (self.modulus as i64)
            .checked_pow(n)
            .ok_or(Error::ExponentOverflow(i64::MAX))?;
        let degree = (self.coeffs.len() as i64 - 1)
            .checked_mul(q)
            .ok_or(Error::ExponentOverflow(i64::MAX))?;
        if degree > EXPONENT_BOUND {
            return Err(Error::ExponentOverflow(degree));
        }
        let mut coeffs = vec![0u16; degree as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * q as usize] = c;
        }
        Ok(Self {
            modulus: self.modulus,
            coeffs,
        })
    }

    /// Parses a polynomial in `t`, e.g. `t^3 + 2*t + 1`.
    ///
    /// Same conventions as the multivariate grammar: `+`/`-` separate terms,
    /// an explicit coefficient needs `*` before the variable, repeated
    /// factors accumulate (`t*t` is `t^2`), exponents are nonnegative.
    pub fn parse(text: &str, modulus: u64) -> Result<Self> {
        let p = validate_modulus(modulus)?;
        let toks = lex(text, p)?;
        Parser {
            toks,
            at: 0,
            end: text.len(),
            modulus: p,
        }
        .parse()
    }
}

impl fmt::Display for FpPoly {
    /// Highest degree first: `t^3 + 2*t + 1`; `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (_, 1) => {}
                _ => write!(f, "{c}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Number { raw: Option<i64>, residue: u16 },
    Var,
    Plus,
    Minus,
    Star,
    Caret,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str, p: u16) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' => i += 1,
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                let mut raw: Option<i64> = Some(0);
                let mut residue: u16 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    let d = i64::from(bytes[i] - b'0');
                    raw = raw.and_then(|r| {
                        r.checked_mul(10)
                            .and_then(|r| r.checked_add(d))
                            .filter(|&r| r <= EXPONENT_BOUND)
                    });
                    residue = add_mod(mul_mod(residue, 10 % p, p), (d % i64::from(p)) as u16, p);
                    i += 1;
                }
                toks.push((start, Tok::Number { raw, residue }));
            }
            b't' => {
                toks.push((i, Tok::Var));
                i += 1;
            }
            _ => return Err(err(i, format!("unexpected character {:?}", b as char))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    modulus: u16,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn parse(mut self) -> Result<FpPoly> {
        let p = self.modulus;
        let mut acc = FpPoly::zero(p as u64)?;
        let mut negate = false;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            negate = true;
        }
        loop {
            let term = self.term(negate)?;
            acc = acc.add(&term)?;
            match self.bump() {
                None => return Ok(acc),
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                Some(_) => {
                    return Err(err(
                        self.toks[self.at - 1].0,
                        "expected '+' or '-' between terms",
                    ))
                }
            }
            if self.peek().is_none() {
                return Err(err(self.end, "dangling term separator"));
            }
        }
    }

    fn term(&mut self, negate: bool) -> Result<FpPoly> {
        let p = self.modulus;
        let mut coeff = 1u16;
        let mut exponent: i64 = 0;
        let mut saw_factor = false;
        match self.peek() {
            Some(Tok::Number { residue, .. }) => {
                coeff = *residue;
                self.bump();
                saw_factor = true;
                if matches!(self.peek(), Some(Tok::Star)) {
                    self.bump();
                    if !matches!(self.peek(), Some(Tok::Var)) {
                        return Err(err(self.pos(), "expected 't' after '*'"));
                    }
                } else if matches!(self.peek(), Some(Tok::Var)) {
                    return Err(err(self.pos(), "missing '*' between coefficient and 't'"));
                }
            }
            Some(Tok::Var) => {}
            _ => return Err(err(self.pos(), "expected a coefficient or 't'")),
        }
        while matches!(self.peek(), Some(Tok::Var)) {
            self.bump();
            saw_factor = true;
            let mut e: i64 = 1;
            if matches!(self.peek(), Some(Tok::Caret)) {
                self.bump();
                let at = self.pos();
                match self.bump() {
                    Some(Tok::Number { raw: Some(v), .. }) => e = v,
                    Some(Tok::Number { raw: None, .. }) => {
                        return Err(err(at, "exponent exceeds the bound ±2^20"))
                    }
                    Some(Tok::Minus) => {
                        return Err(err(at, "negative exponents are not allowed here"))
                    }
                    _ => return Err(err(at, "expected an exponent")),
                }
            }
            exponent += e;
            if exponent > EXPONENT_BOUND {
                return Err(err(self.pos(), "exponent exceeds the bound ±2^20"));
            }
            if matches!(self.peek(), Some(Tok::Star)) {
                self.bump();
                if !matches!(self.peek(), Some(Tok::Var)) {
                    return Err(err(self.pos(), "expected 't' after '*'"));
                }
            }
        }
        if !saw_factor {
            return Err(err(self.pos(), "expected a coefficient or 't'"));
        }
        let signed = if negate {
            i64::from(p - coeff % p)
        } else {
            i64::from(coeff)
        };
        let mut coeffs = vec![0i64; exponent as usize + 1];
        coeffs[exponent as usize] = signed;
        FpPoly::from_coeffs(p as u64, &coeffs)
    }
}
