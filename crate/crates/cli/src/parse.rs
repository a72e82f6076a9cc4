//! Text form of algebra elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*'? unary)*          juxtaposition multiplies
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? int)?
//! atom   := int ('/' int)? | name | '(' expr ')' | '[' expr ',' expr ']'
//! name   := x0..x3 | P0..P3 | xh0..xh3 | ph0..ph3 | M[a,b] | L[m,n] | i | hbar | lam
//! ```
//!
//! Products are free (no normal ordering); `[a, b]` is `a b - b a`. Negative powers are
//! accepted for `hbar` and `lam` only.

use kappa_double::ncalg::{Gen, NCPoly};
use kappa_double::scalars::Scalar;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Rational(i64, i64),
    Name(String),
    Gen(Gen),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    offset: usize,
}

struct Lexer<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn error_at(src: &str, offset: usize, message: impl Into<String>) -> ParseError {
    let (line, column) = position(src, offset);
    ParseError { line, column, message: message.into() }
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, chars: src.char_indices().collect(), pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |c| c.0)
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let start = self.offset();
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.offset()].parse().map_err(|_| error_at(self.src, start, "integer literal out of range"))
    }

    /// `[a,b]` directly after `M` or `L`.
    fn index_pair(&mut self) -> Result<(u8, u8), ParseError> {
        let mut digits = Vec::new();
        for expect in ['[', 'd', ',', 'd', ']'] {
            while self.peek().is_some_and(char::is_whitespace) {
                self.pos += 1;
            }
            let c = self.peek();
            let ok = match expect {
                'd' => c.is_some_and(|c| ('0'..='3').contains(&c)),
                e => c == Some(e),
            };
            if !ok {
                return Err(error_at(self.src, self.offset(), "expected index pair [a,b] with indices 0..3"));
            }
            if expect == 'd' {
                digits.push(c.unwrap() as u8 - b'0');
            }
            self.pos += 1;
        }
        Ok((digits[0], digits[1]))
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            let offset = self.offset();
            if c.is_whitespace() {
                self.pos += 1;
                continue;
            }
            let tok = if c.is_ascii_digit() {
                let n = self.int()?;
                // `p/q` is one literal only when a digit follows the slash
                if self.peek() == Some('/') && self.chars.get(self.pos + 1).is_some_and(|c| c.1.is_ascii_digit()) {
                    self.pos += 1;
                    let d_at = self.offset();
                    let d = self.int()?;
                    if d == 0 {
                        return Err(error_at(self.src, d_at, "zero denominator"));
                    }
                    Tok::Rational(n, d)
                } else {
                    Tok::Int(n)
                }
            } else if c.is_ascii_alphabetic() {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                match word.as_str() {
                    "M" | "L" => {
                        let (a, b) = self.index_pair()?;
                        if word == "L" {
                            Tok::Gen(Gen::Lambda(a, b))
                        } else if a == b {
                            return Err(error_at(self.src, offset, "M[a,a] is not a generator"));
                        } else {
                            Tok::Name(format!("M{a}{b}"))
                        }
                    }
                    "i" | "hbar" | "lam" => Tok::Name(word),
                    _ => Tok::Gen(generator(&word).ok_or_else(|| error_at(self.src, offset, format!("unknown token `{word}`")))?),
                }
            } else if "+-*^()[],".contains(c) {
                self.pos += 1;
                Tok::Sym(c)
            } else {
                return Err(error_at(self.src, offset, format!("unexpected character `{c}`")));
            };
            out.push(Spanned { tok, offset });
        }
        Ok(out)
    }
}

fn generator(word: &str) -> Option<Gen> {
    let (head, idx) = word.split_at(word.find(|c: char| c.is_ascii_digit())?);
    let m: u8 = idx.parse().ok().filter(|m| *m < 4)?;
    match head {
        "x" => Some(Gen::X(m)),
        "P" => Some(Gen::P(m)),
        "xh" => Some(Gen::Xh(m)),
        "ph" => Some(Gen::Ph(m)),
        _ => None,
    }
}

/// Parsed value: scalars are kept apart so `hbar^-1` stays possible.
#[derive(Debug, Clone)]
enum Value {
    Scalar(Scalar),
    Poly(NCPoly),
}

impl Value {
    fn poly(self) -> NCPoly {
        match self {
            Value::Scalar(s) => NCPoly::scalar(s),
            Value::Poly(p) => p,
        }
    }

    fn mul(self, o: Value) -> Value {
        match (self, o) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(&a * &b),
            (Value::Scalar(a), Value::Poly(p)) | (Value::Poly(p), Value::Scalar(a)) => Value::Poly(p.scale(&a)),
            (Value::Poly(a), Value::Poly(b)) => Value::Poly(a.multiply(&b)),
        }
    }

    fn add(self, o: Value, negate: bool) -> Value {
        match (self, o) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(if negate { &a - &b } else { &a + &b }),
            (a, b) => {
                let (a, b) = (a.poly(), b.poly());
                Value::Poly(if negate { &a - &b } else { &a + &b })
            }
        }
    }

    fn neg(self) -> Value {
        match self {
            Value::Scalar(s) => Value::Scalar(-s),
            Value::Poly(p) => Value::Poly(-p),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |t| t.offset)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        error_at(self.src, self.offset(), message)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?, false);
            } else if self.eat('-') {
                acc = acc.add(self.term()?, true);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_) | Tok::Rational(..) | Tok::Name(_) | Tok::Gen(_) | Tok::Sym('(' | '[')))
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(self.unary()?);
            } else if self.starts_factor() {
                acc = acc.mul(self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Value, ParseError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.offset();
        let negative = self.eat('-');
        let Some(Tok::Int(e)) = self.peek().cloned() else {
            return Err(self.err("expected integer exponent"));
        };
        self.pos += 1;
        let e = u32::try_from(e).map_err(|_| error_at(self.src, at, "exponent too large"))?;
        match base {
            Value::Scalar(s) if negative => {
                let inv = s.try_inverse().map_err(|e| error_at(self.src, at, e.to_string()))?;
                Ok(Value::Scalar(inv.pow(e)))
            }
            Value::Scalar(s) => Ok(Value::Scalar(s.pow(e))),
            Value::Poly(_) if negative => Err(error_at(self.src, at, "negative power of a non-scalar")),
            Value::Poly(p) => Ok(Value::Poly(p.pow(e))),
        }
    }

    fn atom(&mut self) -> Result<Value, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.err("unexpected end of input"));
        };
        let at = self.offset();
        self.pos += 1;
        Ok(match tok {
            Tok::Int(n) => Value::Scalar(Scalar::int(n)),
            Tok::Rational(n, d) => Value::Scalar(Scalar::ratio(n, d)),
            Tok::Name(n) => match n.as_str() {
                "i" => Value::Scalar(Scalar::i()),
                "hbar" => Value::Scalar(Scalar::hbar()),
                "lam" => Value::Scalar(Scalar::lam()),
                _ => {
                    let b = n.as_bytes();
                    Value::Poly(Gen::m_poly(b[1] - b'0', b[2] - b'0'))
                }
            },
            Tok::Gen(g) => Value::Poly(NCPoly::gen(g)),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                v
            }
            Tok::Sym('[') => {
                let a = self.expr()?.poly();
                self.expect(',')?;
                let b = self.expr()?.poly();
                self.expect(']')?;
                Value::Poly(&a.multiply(&b) - &b.multiply(&a))
            }
            Tok::Sym(c) => return Err(error_at(self.src, at, format!("unexpected `{c}`"))),
        })
    }
}

/// Parses `text` into a free-algebra polynomial under the active truncation.
pub fn parse(text: &str) -> Result<NCPoly, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { src: text, toks, pos: 0 };
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v.poly())
}

/// Parses a single scalar (an expression without generators).
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseError> {
    let p = parse(text)?;
    if p.terms().any(|(w, _)| !w.is_empty()) {
        return Err(error_at(text, 0, "expected a scalar"));
    }
    Ok(p.constant())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_term() {
        let p = parse("hbar^2 * lam * P0^2").unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.to_string(), "hbar^2 lam P0^2");
    }

    #[test]
    fn juxtaposition_and_rationals() {
        let a = parse("1/2 hbar^-1 lam^2 x0^2 P1").unwrap();
        let b = parse("(1/2)*hbar^-1*lam^2*x0*x0*P1").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1/2 hbar^-1 lam^2 x0^2 P1");
    }

    #[test]
    fn commutator_sugar_is_free() {
        let p = parse("[x1, P1]").unwrap();
        assert_eq!(p.to_string(), "x1 P1 - P1 x1");
    }

    #[test]
    fn lorentz_names() {
        assert_eq!(parse("M[1,0]").unwrap(), -NCPoly::gen(Gen::M(0, 1)));
        assert_eq!(parse("L[2,3]").unwrap(), NCPoly::gen(Gen::Lambda(2, 3)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("x1 + y2").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        let e = parse("x1 +\n  (P0").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse("x4").is_err());
        assert!(parse("x1^-1").is_err());
        assert!(parse("M[1,1]").is_err());
    }

    #[test]
    fn mixed_coefficient() {
        let p = parse("(1 - 2 i) lam x3 - i").unwrap();
        assert_eq!(p.to_string(), "-i + (1 - 2 i) lam x3");
        assert_eq!(parse(&p.to_string()).unwrap(), p);
    }
}
