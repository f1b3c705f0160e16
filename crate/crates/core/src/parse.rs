//! Infix polynomial syntax: integers, declared variable names, `+ - * ^`, parentheses,
//! and division by nonzero constants.

use num_bigint::BigInt;

use crate::field::Field;
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based character column inside the parsed text.
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((start + 1, Tok::Num(text.parse().unwrap())));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((start + 1, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*^()/".contains(c) || c == '\u{2212}' {
            out.push((i + 1, Tok::Sym(if c == '\u{2212}' { '-' } else { c })));
            i += 1;
        } else {
            return Err(ParseError { column: i + 1, message: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    names: &'a [String],
    field: Field,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end_col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column: self.col(), message: msg.into() })
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = Poly::zero(self.field, self.names.len());
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(Tok::Sym('+')) => {
                    self.pos += 1;
                    1
                }
                Some(Tok::Sym('-')) => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Sym('/')) => {
                    self.pos += 1;
                    let col = self.col();
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(ParseError { column: col, message: "division only by nonzero constants".into() });
                    }
                    acc = acc.scale(&d.constant_term().inv());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| ParseError { column: self.col(), message: "exponent too large".into() })?;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let n = self.names.len();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Poly::constant(self.field, n, self.field.from_bigint(&v)))
            }
            Some(Tok::Ident(name)) => match self.names.iter().position(|x| *x == name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Poly::var(self.field, n, i))
                }
                None => self.err(format!("undeclared variable {name}")),
            },
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Sym(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses one polynomial over `field` in the variables `names`.
pub fn parse_poly(text: &str, names: &[String], field: Field) -> Result<Poly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, names, field, end_col: text.chars().count() + 1 };
    if p.toks.is_empty() {
        return p.err("empty polynomial");
    }
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_and_prints() {
        let n = names(&["x", "y", "z"]);
        let f = parse_poly("x^2 - y^2*z", &n, Field::Rational).unwrap();
        assert_eq!(f.fmt_with(&n), "-y^2*z + x^2");
        let g = parse_poly("(x+y)^2 - 2*x*y - y^2", &n, Field::Rational).unwrap();
        assert_eq!(g.fmt_with(&n), "x^2");
        let h = parse_poly("x/2", &n, Field::Prime(7)).unwrap();
        assert_eq!(h.fmt_with(&n), "4*x");
    }

    #[test]
    fn reports_positions() {
        let e = parse_poly("x + w", &names(&["x"]), Field::Rational).unwrap_err();
        assert_eq!(e.column, 5);
        assert!(e.message.contains("undeclared variable w"));
        assert!(parse_poly("x^", &names(&["x"]), Field::Rational).is_err());
        assert!(parse_poly("x / y", &names(&["x", "y"]), Field::Rational).is_err());
    }
}
