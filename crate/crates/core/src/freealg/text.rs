//! Text form `"1 - 1*x*y"`: terms in canonical order, each `coeff` or
//! `coeff*letter*...`. Non-real coefficients are written `(a+bi)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{FreeAlgError, FreePoly, Letter, Word};
use crate::scalar::{fmt_gq, Gq};

pub(super) fn format_poly(p: &FreePoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (word, c)) in p.terms().enumerate() {
        let negative_real = c.im.is_zero() && c.re.is_negative();
        let shown = if negative_real { -c.clone() } else { c.clone() };
        match (i, negative_real) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&fmt_gq(&shown));
        for l in &word.0 {
            out.push('*');
            out.push(l.as_char());
        }
    }
    out
}

/// Parses the text form. Bare letters (`x*y`) imply coefficient 1.
pub fn parse_poly(src: &str) -> Result<FreePoly, FreeAlgError> {
    let mut p = Parser { s: src.as_bytes(), pos: 0 };
    let mut poly = FreePoly::zero();
    p.skip_ws();
    let mut sign = 1i64;
    if p.eat(b'-') {
        sign = -1;
    } else {
        p.eat(b'+');
    }
    loop {
        let (c, w) = p.term()?;
        poly.add_term(w, if sign < 0 { -c } else { c });
        p.skip_ws();
        if p.pos == p.s.len() {
            break;
        }
        sign = if p.eat(b'+') {
            1
        } else if p.eat(b'-') {
            -1
        } else {
            return Err(p.err("expected '+' or '-'"));
        };
    }
    Ok(poly)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> FreeAlgError {
        FreeAlgError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn term(&mut self) -> Result<(Gq, Word), FreeAlgError> {
        let mut letters = Vec::new();
        let coeff = match self.peek() {
            Some(b'x') | Some(b'y') => Gq::new(BigRational::from_integer(1.into()), BigRational::zero()),
            Some(b'(') => self.complex()?,
            Some(b) if b.is_ascii_digit() => Gq::new(self.rational()?, BigRational::zero()),
            _ => return Err(self.err("expected coefficient or letter")),
        };
        let mut need_letter = matches!(self.peek(), Some(b'x') | Some(b'y'));
        loop {
            if need_letter {
                match self.peek() {
                    Some(b'x') => letters.push(Letter::X),
                    Some(b'y') => letters.push(Letter::Y),
                    _ => return Err(self.err("expected 'x' or 'y'")),
                }
                self.pos += 1;
            }
            if !self.eat(b'*') {
                break;
            }
            need_letter = true;
        }
        Ok((coeff, Word(letters)))
    }

    fn complex(&mut self) -> Result<Gq, FreeAlgError> {
        self.eat(b'(');
        let neg_re = self.eat(b'-');
        let mut re = self.rational()?;
        if neg_re {
            re = -re;
        }
        let neg_im = if self.eat(b'+') {
            false
        } else if self.eat(b'-') {
            true
        } else {
            return Err(self.err("expected sign of imaginary part"));
        };
        let mut im = self.rational()?;
        if neg_im {
            im = -im;
        }
        if !self.eat(b'i') {
            return Err(self.err("expected 'i'"));
        }
        if !self.eat(b')') {
            return Err(self.err("expected ')'"));
        }
        Ok(Gq::new(re, im))
    }

    fn rational(&mut self) -> Result<BigRational, FreeAlgError> {
        let num = self.integer()?;
        if self.eat(b'/') {
            let den = self.integer()?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn integer(&mut self) -> Result<BigInt, FreeAlgError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| self.err("bad integer"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for src in ["1 - 1*x*y", "0", "-2*x + (1/2-3i)*x*y*x", "7/3", "1*y + 1*x*x"] {
            let p = parse_poly(src).unwrap();
            let again = parse_poly(&p.to_string()).unwrap();
            assert_eq!(p, again, "{src}");
        }
        assert_eq!(FreePoly::v().to_string(), "1 - 1*x*y");
    }

    #[test]
    fn parse_errors_report_position() {
        let e = parse_poly("1 + z").unwrap_err();
        assert!(matches!(e, FreeAlgError::Parse { pos: 4, .. }));
        assert!(parse_poly("1/0").is_err());
        assert!(parse_poly("2*").is_err());
    }
}
