//! Textual polynomial grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' integer)?
//! atom   := integer ['/' integer] | variable | '(' expr ')'
//! ```
//!
//! This is also the grammar produced by `Display`, so printed polynomials parse back.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::Field;
use super::poly::{Polynomial, Ring};
use super::AlgError;

struct Parser<'a, F: Field> {
    ring: &'a Arc<Ring<F>>,
    src: &'a [u8],
    pos: usize,
}

impl<F: Field> Parser<'_, F> {
    fn err(&self, msg: &str) -> AlgError {
        AlgError::Parse {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt, AlgError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    fn expr(&mut self) -> Result<Polynomial<F>, AlgError> {
        let mut acc = Polynomial::zero(self.ring);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial<F>, AlgError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial<F>, AlgError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial<F>, AlgError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut value = BigRational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.integer()?;
                    if den == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                }
                let c = self
                    .ring
                    .field()
                    .from_rational(&value)
                    .ok_or_else(|| self.err("denominator not invertible in the coefficient field"))?;
                Ok(Polynomial::constant(self.ring, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let i = self.ring.var_index(name).ok_or_else(|| {
                    self.pos = start;
                    self.err(&format!("unknown variable '{name}'"))
                })?;
                Ok(Polynomial::var(self.ring, i))
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

pub fn parse_polynomial<F: Field>(ring: &Arc<Ring<F>>, text: &str) -> Result<Polynomial<F>, AlgError> {
    let mut p = Parser {
        ring,
        src: text.as_bytes(),
        pos: 0,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::{PrimeField, Rationals};
    use crate::exactalg::monomial::MonomialOrder;

    #[test]
    fn parses_and_prints() {
        let ring = Ring::new(&["x", "y"], Rationals, MonomialOrder::DegRevLex);
        let p = parse_polynomial(&ring, "3*x^2*y - 1/2*y + 7 - x*x*y").unwrap();
        assert_eq!(p.to_string(), "2*x^2*y - 1/2*y + 7");
        let q = parse_polynomial(&ring, "-(x + y)^2").unwrap();
        assert_eq!(q.to_string(), "-x^2 - 2*x*y - y^2");
        assert_eq!(parse_polynomial(&ring, &q.to_string()).unwrap(), q);
    }

    #[test]
    fn errors_carry_positions() {
        let ring = Ring::new(&["x", "y"], Rationals, MonomialOrder::DegRevLex);
        match parse_polynomial(&ring, "x + z") {
            Err(AlgError::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial(&ring, "x +").is_err());
        assert!(parse_polynomial(&ring, "(x").is_err());
        assert!(parse_polynomial(&ring, "x/0").is_err());
    }

    #[test]
    fn prime_field_reduction() {
        let ring = Ring::new(&["x"], PrimeField::new(7).unwrap(), MonomialOrder::DegRevLex);
        let p = parse_polynomial(&ring, "1/2*x + 8").unwrap();
        assert_eq!(p.to_string(), "-3*x + 1");
        assert!(parse_polynomial(&ring, "1/7*x").is_err());
    }
}
