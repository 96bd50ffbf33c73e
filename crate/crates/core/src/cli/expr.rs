//! Expressions over `x`, `t`, `z`: recursive descent parsing, printing and
//! evaluation into the quadratic extension.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

use super::InputError;
use crate::field::Field;
use crate::qtx::{t_func, x_func, DiffField, Derivation};
use crate::{AlgElem, RatFunc, Q};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    X,
    T,
    Z,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Dt(Box<Expr>),
    Dx(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(s: &str) -> Result<Vec<Token>, InputError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            column += i - start;
            Tok::Int(digits.parse().expect("digits"))
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            column += i - start;
            Tok::Ident(chars[start..i].iter().collect())
        } else if "+-*/^()".contains(c) {
            i += 1;
            column += 1;
            Tok::Sym(c)
        } else {
            return Err(InputError::syntax(l0, c0, format!("unexpected character '{c}'")));
        };
        out.push(Token { tok, line: l0, column: c0 });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: &str) -> Result<T, InputError> {
        let t = self.peek();
        let found = match &t.tok {
            Tok::Int(n) => format!("'{n}'"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".into(),
        };
        Err(InputError::syntax(t.line, t.column, format!("{msg}, found {found}")))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, InputError> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, InputError> {
        let mut e = self.unary()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat('/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, InputError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, InputError> {
        let b = self.base()?;
        if !self.eat('^') {
            return Ok(b);
        }
        let neg = self.eat('-');
        let paren = !neg && self.eat('(');
        let neg = neg || (paren && self.eat('-'));
        let Tok::Int(n) = self.peek().tok.clone() else {
            return self.error("expected an integer exponent");
        };
        let e: i64 = match i64::try_from(n) {
            Ok(e) => e,
            Err(_) => return self.error("exponent too large"),
        };
        self.bump();
        if paren && !self.eat(')') {
            return self.error("expected ')'");
        }
        Ok(Expr::Pow(Box::new(b), if neg { -e } else { e }))
    }

    fn base(&mut self) -> Result<Expr, InputError> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => match s.as_str() {
                "x" => {
                    self.bump();
                    Ok(Expr::X)
                }
                "t" => {
                    self.bump();
                    Ok(Expr::T)
                }
                "z" => {
                    self.bump();
                    Ok(Expr::Z)
                }
                "Dt" | "Dx" => {
                    self.bump();
                    if !self.eat('(') {
                        return self.error("expected '('");
                    }
                    let inner = Box::new(self.expr()?);
                    if !self.eat(')') {
                        return self.error("expected ')'");
                    }
                    Ok(if s == "Dt" { Expr::Dt(inner) } else { Expr::Dx(inner) })
                }
                _ => self.error("unknown identifier"),
            },
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.error("expected ')'");
                }
                Ok(e)
            }
            _ => self.error("expected a number, variable or '('"),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, InputError> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    pub fn uses_z(&self) -> bool {
        match self {
            Expr::Z => true,
            Expr::Int(_) | Expr::X | Expr::T => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Dt(a) | Expr::Dx(a) => a.uses_z(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.uses_z() || b.uses_z(),
        }
    }

    /// Evaluates in Q(t)(x), or in Q(t)(x)(z) when `ext` is given.
    pub fn eval(&self, ext: Option<&Arc<RatFunc>>) -> Result<AlgElem, InputError> {
        Ok(match self {
            Expr::Int(n) => AlgElem::from_base(RatFunc::from_rational(&Q::from_integer(n.clone()))),
            Expr::X => AlgElem::from_base(x_func()),
            Expr::T => AlgElem::from_base(t_func()),
            Expr::Z => AlgElem::z(ext.ok_or(InputError::UndeclaredExtension)?),
            Expr::Neg(a) => -a.eval(ext)?,
            Expr::Add(a, b) => a.eval(ext)? + b.eval(ext)?,
            Expr::Sub(a, b) => a.eval(ext)? - b.eval(ext)?,
            Expr::Mul(a, b) => a.eval(ext)? * b.eval(ext)?,
            Expr::Div(a, b) => {
                let d = b.eval(ext)?;
                if d.is_zero() {
                    return Err(InputError::DivisionByZero);
                }
                a.eval(ext)? / d
            }
            Expr::Pow(a, e) => {
                let v = a.eval(ext)?;
                if *e < 0 && v.is_zero() {
                    return Err(InputError::DivisionByZero);
                }
                let mut acc = AlgElem::one();
                for _ in 0..e.unsigned_abs() {
                    acc = &acc * &v;
                }
                if *e < 0 {
                    AlgElem::one() / acc
                } else {
                    acc
                }
            }
            Expr::Dt(a) => a.eval(ext)?.derive(Derivation::Dt),
            Expr::Dx(a) => a.eval(ext)?.derive(Derivation::Dx),
        })
    }

    /// Evaluates an expression that must lie in Q(t)(x).
    pub fn eval_base(&self) -> Result<RatFunc, InputError> {
        if self.uses_z() {
            return Err(InputError::UndeclaredExtension);
        }
        Ok(self.eval(None)?.even().clone())
    }
}

fn wrap(e: &Expr, f: &mut fmt::Formatter<'_>, paren: bool) -> fmt::Result {
    if paren {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prec();
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::X => write!(f, "x"),
            Expr::T => write!(f, "t"),
            Expr::Z => write!(f, "z"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                wrap(a, f, a.prec() < 3)
            }
            Expr::Add(a, b) | Expr::Mul(a, b) => {
                wrap(a, f, a.prec() < p)?;
                write!(f, "{}", if matches!(self, Expr::Add(..)) { " + " } else { "*" })?;
                // a leading minus on the right would read as a binary operator
                wrap(b, f, b.prec() < p || matches!(**b, Expr::Neg(_)))
            }
            Expr::Sub(a, b) | Expr::Div(a, b) => {
                wrap(a, f, a.prec() < p)?;
                write!(f, "{}", if matches!(self, Expr::Sub(..)) { " - " } else { "/" })?;
                wrap(b, f, b.prec() <= p || matches!(**b, Expr::Neg(_)))
            }
            Expr::Pow(a, e) => {
                wrap(a, f, a.prec() < 5)?;
                if *e < 0 {
                    write!(f, "^({e})")
                } else {
                    write!(f, "^{e}")
                }
            }
            Expr::Dt(a) => write!(f, "Dt({a})"),
            Expr::Dx(a) => write!(f, "Dx({a})"),
        }
    }
}

/// Parses `"z^2 = q"` and declares the extension.
pub fn parse_extension(s: &str) -> Result<Arc<RatFunc>, InputError> {
    let Some((lhs, rhs)) = s.split_once('=') else {
        return Err(InputError::Document("extension must read \"z^2 = <expr>\"".into()));
    };
    let lhs: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
    if lhs != "z^2" {
        return Err(InputError::Document("extension must read \"z^2 = <expr>\"".into()));
    }
    let q = parse_expr(rhs)?.eval_base()?;
    if q.num().deg() < 1 && q.den().deg() < 1 {
        return Err(InputError::Document("extension modulus must involve x".into()));
    }
    AlgElem::modulus(q).map_err(|e| InputError::Document(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_printing() {
        let e = parse_expr("t/x + 1/(x+1)").unwrap();
        assert_eq!(e.to_string(), "t/x + 1/(x + 1)");
        let again = parse_expr(&e.to_string()).unwrap();
        assert_eq!(again, e);
    }

    #[test]
    fn syntax_error_position() {
        match parse_expr("x^^2") {
            Err(InputError::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 3)),
            other => panic!("{other:?}"),
        }
        match parse_expr("x +\n  )") {
            Err(InputError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn picard_fuchs_coefficient() {
        let p = parse_expr("-1/2*(1/x + 1/(x-1) + 1/(x-t))").unwrap().eval_base().unwrap();
        let x = x_func();
        let one = RatFunc::one();
        let q = &(&x * &(&x - &one)) * &(&x - &t_func());
        let half = RatFunc::from_rational(&crate::field::q(1, 2));
        assert_eq!(p, -&(&half * &(&q.derivative() / &q)));
    }

    #[test]
    fn z_needs_extension() {
        let e = parse_expr("1/z").unwrap();
        assert_eq!(e.eval(None), Err(InputError::UndeclaredExtension));
        let m = parse_extension("z^2 = x*(x-1)*(x-t)").unwrap();
        let v = e.eval(Some(&m)).unwrap();
        assert_eq!(&v * &AlgElem::z(&m), AlgElem::one());
    }

    #[test]
    fn derivative_operators() {
        let e = parse_expr("Dt(t^2/x) - Dx(x^(-1))").unwrap().eval_base().unwrap();
        let x = x_func();
        let expect = &(&RatFunc::from_i64(2) * &t_func()) / &x + &RatFunc::one() / &(&x * &x);
        assert_eq!(e, expect);
        assert_eq!(parse_expr("1/(x-x)").unwrap().eval_base(), Err(InputError::DivisionByZero));
    }
}
