//! Expression syntax for polynomials: integers and decimals, registry
//! names, `i`, `+ - * /`, `^n`, parentheses, and the functions `conj`,
//! `re`, `im`, `abs2`. Division is by nonzero rational constants only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use super::{MPoly, PolyComplex, VarRegistry};
use crate::error::{Error, Result};
use crate::scalar::{ComplexRing, Ring};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let src =
        src.replace('λ', "lam").replace('α', "alpha").replace('β', "beta").replace('γ', "gamma").replace('−', "-");
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            out.push(Tok::Num(decimal(&chars[start..k].iter().collect::<String>())?));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push(Tok::Ident(chars[start..k].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Sym(ch));
            k += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

fn decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad number `{s}`"));
    match s.split_once('.') {
        None => Ok(BigRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((int, frac)) => {
            if frac.contains('.') {
                return Err(bad());
            }
            let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
            let denom = BigInt::from(10).pow(frac.len() as u32);
            Ok(BigRational::new(digits, denom))
        }
    }
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    reg: &'a VarRegistry,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}` at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<PolyComplex> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<PolyComplex> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                let c =
                    d.re.as_constant()
                        .filter(|c| d.im.is_zero() && !Zero::is_zero(c))
                        .ok_or_else(|| Error::Parse("division by a non-constant or zero".into()))?;
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<PolyComplex> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) if n.is_integer() => n.to_integer(),
            _ => return Err(Error::Parse("exponent must be a nonnegative integer".into())),
        };
        self.pos += 1;
        let e: u32 = e.try_into().map_err(|_| Error::Parse("exponent out of range".into()))?;
        let mut out = PolyComplex::one();
        for _ in 0..e {
            out = &out * &base;
        }
        Ok(out)
    }

    fn unary(&mut self) -> Result<PolyComplex> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn atom(&mut self) -> Result<PolyComplex> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(PolyComplex::real(MPoly::constant(n)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return match name.as_str() {
                        "conj" => Ok(arg.conj()),
                        "re" => Ok(arg.re_part()),
                        "im" => Ok(arg.im_part()),
                        "abs2" => Ok(PolyComplex::real(arg.norm_sqr())),
                        _ => Err(Error::Parse(format!("unknown function `{name}`"))),
                    };
                }
                if name == "i" {
                    return Ok(PolyComplex::i());
                }
                if self.reg.is_complex(&name) {
                    let (re, im) = self.reg.complex(&name)?;
                    return Ok(PolyComplex::new(MPoly::var(re), MPoly::var(im)));
                }
                Ok(PolyComplex::real(MPoly::var(self.reg.lookup(&name)?)))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub(super) fn parse_complex(src: &str) -> Result<PolyComplex> {
    let mut p = Parser { toks: lex(src)?, pos: 0, reg: VarRegistry::standard() };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(e)
}

pub(super) fn parse_real(src: &str) -> Result<MPoly> {
    let z = parse_complex(src)?;
    if !z.im.is_zero() {
        return Err(Error::Parse(format!("`{src}` is not real")));
    }
    Ok(z.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_errors() {
        assert_eq!(parse_real("2*3^2 - -1").unwrap(), MPoly::int(19));
        assert_eq!(parse_real("(1+a1)^2").unwrap(), parse_real("1 + 2*a1 + a1^2").unwrap());
        assert_eq!(parse_real("0.25*4").unwrap(), MPoly::int(1));
        assert_eq!(parse_real("abs2(1 + 2*i)").unwrap(), MPoly::int(5));
        assert_eq!(parse_real("λ").unwrap(), MPoly::named("lam").unwrap());
        assert!(matches!(parse_real("i"), Err(Error::Parse(_))));
        assert!(matches!(parse_real("a1/a2"), Err(Error::Parse(_))));
        assert!(matches!(parse_real("zz"), Err(Error::UnregisteredVariable(_))));
        assert!(parse_real("(a1").is_err());
        assert!(parse_real("a1 a2").is_err());
        assert!(parse_real("").is_err());
    }
}
