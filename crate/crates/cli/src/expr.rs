//! Parsing and printing of `A_{d,r}` expressions such as `x1*x2 + 2*t1^-1`.

use polyptych::detrop::{alg_mul, AlgebraElement, Adr};
use polyptych::families::MdrElement;
use polyptych::polyhedra::rat::{fmt_rat, parse_rat};
use polyptych::polyhedra::Rat;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Var(char, usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, CliError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            'x' | 't' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let idx: usize = chars[i + 1..j]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| CliError::parse_at(format!("variable `{c}` needs an index"), 1, start + 1))?;
                out.push((start, Tok::Var(c, idx)));
                i = j;
                continue;
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '/') {
                    j += 1;
                }
                out.push((start, Tok::Num(chars[i..j].iter().collect())));
                i = j;
                continue;
            }
            other => return Err(CliError::parse_at(format!("unexpected character `{other}`"), 1, start + 1)),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    alg: &'a Adr,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

type Elem = AlgebraElement<MdrElement>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(c, _)| *c) + 1
    }

    fn err(&self, msg: &str) -> CliError {
        CliError::parse_at(msg.to_string(), 1, self.col())
    }

    fn expr(&mut self) -> Result<Elem, CliError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.term()?.scale(&Rat::from_integer((-1).into()))
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.scale(&Rat::from_integer((-1).into())));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Elem, CliError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = alg_mul(self.alg, &acc, &f);
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<i64, CliError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let e: i64 = n.parse().map_err(|_| self.err("exponent must be an integer"))?;
                Ok(if neg { -e } else { e })
            }
            _ => Err(self.err("expected an exponent")),
        }
    }

    fn factor(&mut self) -> Result<Elem, CliError> {
        let one = Elem::basis(MdrElement::zero(self.alg.d(), self.alg.r()));
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let c = parse_rat(&n).ok_or_else(|| self.err("bad number"))?;
                Ok(one.scale(&c))
            }
            Some(Tok::Var(v, i)) => {
                let col = self.col();
                self.pos += 1;
                let e = if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    self.exponent()?
                } else {
                    1
                };
                let (d, r) = (self.alg.d(), self.alg.r());
                match v {
                    'x' if (1..=d).contains(&i) => {
                        if e < 0 {
                            return Err(CliError::parse_at("x variables are not invertible".into(), 1, col));
                        }
                        let mut u = vec![0; d];
                        u[i - 1] = e;
                        self.alg.monomial(&u, &vec![0; r]).map_err(CliError::from)
                    }
                    't' if (1..=r).contains(&i) => Ok(self.alg.t(i - 1, e)),
                    _ => Err(CliError::parse_at(format!("unknown variable {v}{i}"), 1, col)),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    let e = self.exponent()?;
                    if e < 0 {
                        return Err(self.err("negative powers of sums are not supported"));
                    }
                    let mut acc = one;
                    for _ in 0..e {
                        acc = alg_mul(self.alg, &acc, &inner);
                    }
                    return Ok(acc);
                }
                Ok(inner)
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

/// Parses an expression into the normal form of `A_{d,r}`.
pub fn parse_expr(alg: &Adr, s: &str) -> Result<Elem, CliError> {
    let toks = lex(s)?;
    let mut p = Parser { alg, toks, pos: 0, len: s.chars().count() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

fn monomial_string(k: &MdrElement) -> String {
    let mut parts = Vec::new();
    for (name, exps) in [("x", &k.u), ("t", &k.w)] {
        for (i, &e) in exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("{name}{}", i + 1)),
                _ => parts.push(format!("{name}{}^{e}", i + 1)),
            }
        }
    }
    parts.join("*")
}

/// Terms in descending lex order of `(u, w)`; unit coefficients are omitted.
pub fn format_expr(e: &Elem) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (k, c)) in e.terms().iter().rev().enumerate() {
        let neg = c < &Rat::from_integer(0.into());
        let mag = if neg { -c.clone() } else { c.clone() };
        let mono = monomial_string(k);
        let body = match (mono.is_empty(), mag == Rat::from_integer(1.into())) {
            (true, _) => fmt_rat(&mag),
            (false, true) => mono,
            (false, false) => format!("{}*{mono}", fmt_rat(&mag)),
        };
        if i == 0 {
            out.push_str(if neg { "-" } else { "" });
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_and_printing() {
        let a = Adr::new(2, 2).unwrap();
        assert_eq!(format_expr(&parse_expr(&a, "x1*x2").unwrap()), "t1 + t2");
        assert_eq!(format_expr(&parse_expr(&a, "x1*t1*x2").unwrap()), "t1^2 + t1*t2");
        assert_eq!(format_expr(&parse_expr(&a, "2*t1^-1 - 3").unwrap()), "-3 + 2*t1^-1");
        assert_eq!(format_expr(&parse_expr(&a, "(x1 + 1)^2").unwrap()), "x1^2 + 2*x1 + 1");
        assert_eq!(format_expr(&parse_expr(&a, "x1 - x1").unwrap()), "0");
    }

    #[test]
    fn parse_errors_carry_columns() {
        let a = Adr::new(2, 2).unwrap();
        let e = parse_expr(&a, "x1 * y").unwrap_err();
        assert_eq!(e.column, Some(6));
        assert!(parse_expr(&a, "x3").is_err());
        assert!(parse_expr(&a, "x1^-1").is_err());
    }
}
