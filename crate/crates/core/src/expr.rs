//! Hand-written recursive-descent parser and evaluator for potential
//! expressions in the grid variable `n`, e.g. `1/sqrt(n)` or `2/n - 6/n^2`.
//!
//! Grammar (`^` is right-associative, unary minus binds looser than `^`):
//!
//! ```text
//! expr   := term  (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'n' | func '(' expr ')' | '(' expr ')'
//! func   := sqrt | sin | cos | exp | log
//! ```
//!
//! Syntax errors carry the byte offset of the failure and the expected
//! token set. Parsed expressions print back to text that reparses to a
//! structurally equal tree.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Sin,
    Cos,
    Exp,
    Log,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }
}

/// Abstract syntax tree of a potential expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    /// The grid variable `n`.
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// A parsed potential expression q(n), evaluable per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialExpr {
    root: Expr,
    text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    /// Byte offset into the source text where parsing failed.
    pub offset: usize,
    /// Human-readable description of what was expected there.
    pub expected: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at offset {}: expected {}",
            self.offset, self.expected
        )
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    DivisionByZero {
        n: i64,
    },
    /// sqrt of a negative number, log of a non-positive number, or a
    /// fractional power of a negative base.
    Domain {
        what: &'static str,
        n: i64,
    },
    NonFinite {
        n: i64,
    },
    /// Exact rational evaluation is impossible (irrational function or
    /// non-integer exponent).
    NotRational {
        reason: &'static str,
    },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DivisionByZero { n } => write!(f, "division by zero at n = {n}"),
            EvalError::Domain { what, n } => write!(f, "domain error ({what}) at n = {n}"),
            EvalError::NonFinite { n } => write!(f, "non-finite result at n = {n}"),
            EvalError::NotRational { reason } => {
                write!(f, "not exactly representable as a rational: {reason}")
            }
        }
    }
}

impl std::error::Error for EvalError {}

impl PotentialExpr {
    /// Parse an expression from text.
    pub fn parse(text: &str) -> Result<Self, SyntaxError> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        p.skip_ws();
        let root = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("end of input or an operator"));
        }
        Ok(PotentialExpr {
            root,
            text: text.to_owned(),
        })
    }

    /// The source text this expression was parsed from.
    pub fn source(&self) -> &str {
        &self.text
    }

    pub fn ast(&self) -> &Expr {
        &self.root
    }

    /// Evaluate at integer n (promoted to f64).
    pub fn eval(&self, n: i64) -> Result<f64, EvalError> {
        eval_node(&self.root, n)
    }

    /// Evaluate exactly over the rationals. Fails with `NotRational` when
    /// the expression uses irrational functions or non-integer exponents.
    pub fn eval_rational(&self, n: i64) -> Result<BigRational, EvalError> {
        eval_rational_node(&self.root, n)
    }
}

impl fmt::Display for PotentialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print_node(&self.root, f)
    }
}

// Printing with minimal parentheses. Precedence levels: Add/Sub 1,
// Mul/Div 2, unary minus 3, Pow 4, atoms 5.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(..) => 3,
        Expr::Binary(BinOp::Pow, ..) => 4,
        Expr::Number(_) | Expr::Var | Expr::Call(..) => 5,
    }
}

fn print_node(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Number(v) => write!(f, "{v}"),
        Expr::Var => write!(f, "n"),
        Expr::Neg(x) => {
            write!(f, "-")?;
            print_child(x, prec(e), f)
        }
        Expr::Binary(op, l, r) => {
            let p = prec(e);
            let (sym, spaced) = match op {
                BinOp::Add => ("+", true),
                BinOp::Sub => ("-", true),
                BinOp::Mul => ("*", false),
                BinOp::Div => ("/", false),
                BinOp::Pow => ("^", false),
            };
            // '^' is right-associative, everything else left-associative;
            // the non-associative side needs parens at equal precedence.
            let (lmin, rmin) = match op {
                BinOp::Pow => (p + 1, p),
                BinOp::Add | BinOp::Mul => (p, p),
                BinOp::Sub | BinOp::Div => (p, p + 1),
            };
            print_child(l, lmin, f)?;
            if spaced {
                write!(f, " {sym} ")?;
            } else {
                write!(f, "{sym}")?;
            }
            print_child(r, rmin, f)
        }
        Expr::Call(func, arg) => {
            write!(f, "{}(", func.name())?;
            print_node(arg, f)?;
            write!(f, ")")
        }
    }
}

fn print_child(e: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(e) < min {
        write!(f, "(")?;
        print_node(e, f)?;
        write!(f, ")")
    } else {
        print_node(e, f)
    }
}

fn eval_node(e: &Expr, n: i64) -> Result<f64, EvalError> {
    let v = match e {
        Expr::Number(v) => *v,
        Expr::Var => n as f64,
        Expr::Neg(x) => -eval_node(x, n)?,
        Expr::Binary(op, l, r) => {
            let a = eval_node(l, n)?;
            let b = eval_node(r, n)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(EvalError::DivisionByZero { n });
                    }
                    a / b
                }
                BinOp::Pow => {
                    let v = a.powf(b);
                    if v.is_nan() && !a.is_nan() && !b.is_nan() {
                        return Err(EvalError::Domain { what: "power", n });
                    }
                    v
                }
            }
        }
        Expr::Call(func, arg) => {
            let a = eval_node(arg, n)?;
            match func {
                Func::Sqrt => {
                    if a < 0.0 {
                        return Err(EvalError::Domain {
                            what: "sqrt of negative",
                            n,
                        });
                    }
                    a.sqrt()
                }
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Exp => a.exp(),
                Func::Log => {
                    if a <= 0.0 {
                        return Err(EvalError::Domain {
                            what: "log of non-positive",
                            n,
                        });
                    }
                    a.ln()
                }
            }
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { n })
    }
}

fn eval_rational_node(e: &Expr, n: i64) -> Result<BigRational, EvalError> {
    match e {
        Expr::Number(v) => BigRational::from_float(*v).ok_or(EvalError::NotRational {
            reason: "non-finite literal",
        }),
        Expr::Var => Ok(BigRational::from_integer(BigInt::from(n))),
        Expr::Neg(x) => Ok(-eval_rational_node(x, n)?),
        Expr::Binary(op, l, r) => {
            let a = eval_rational_node(l, n)?;
            let b = eval_rational_node(r, n)?;
            match op {
                BinOp::Add => Ok(a + b),
                BinOp::Sub => Ok(a - b),
                BinOp::Mul => Ok(a * b),
                BinOp::Div => {
                    if b.is_zero() {
                        return Err(EvalError::DivisionByZero { n });
                    }
                    Ok(a / b)
                }
                BinOp::Pow => {
                    if !b.is_integer() {
                        return Err(EvalError::NotRational {
                            reason: "non-integer exponent",
                        });
                    }
                    let exp = b.to_integer().to_i32().ok_or(EvalError::NotRational {
                        reason: "exponent too large",
                    })?;
                    if a.is_zero() && exp < 0 {
                        return Err(EvalError::DivisionByZero { n });
                    }
                    if a.is_zero() && exp == 0 {
                        return Ok(BigRational::from_integer(BigInt::from(1)));
                    }
                    Ok(num_traits::pow::Pow::pow(a, exp))
                }
            }
        }
        Expr::Call(..) => Err(EvalError::NotRational {
            reason: "irrational function",
        }),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, expected: &str) -> SyntaxError {
        SyntaxError {
            offset: self.pos,
            expected: expected.to_owned(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn accept(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            if self.accept(b'+') {
                lhs = Expr::Binary(BinOp::Add, Box::new(lhs), Box::new(self.term()?));
            } else if self.accept(b'-') {
                lhs = Expr::Binary(BinOp::Sub, Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            if self.accept(b'*') {
                lhs = Expr::Binary(BinOp::Mul, Box::new(lhs), Box::new(self.unary()?));
            } else if self.accept(b'/') {
                lhs = Expr::Binary(BinOp::Div, Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.accept(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if self.accept(b'^') {
            // right-associative
            let exp = self.unary()?;
            Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let inner = self.expr()?;
                if !self.accept(b')') {
                    return Err(self.error("')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            _ => Err(self.error("a number, 'n', a function call, or '('")),
        }
    }

    fn number(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                // "2e" is the number 2 followed by a stray identifier; back off
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value: f64 = text.parse().map_err(|_| SyntaxError {
            offset: start,
            expected: "a numeric literal".to_owned(),
        })?;
        self.skip_ws();
        Ok(Expr::Number(value))
    }

    fn ident(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_owned();
        self.skip_ws();
        if name == "n" {
            return Ok(Expr::Var);
        }
        let func = match name.as_str() {
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            _ => {
                return Err(SyntaxError {
                    offset: start,
                    expected: "'n' or one of sqrt, sin, cos, exp, log".to_owned(),
                })
            }
        };
        if !self.accept(b'(') {
            return Err(self.error("'(' after function name"));
        }
        let arg = self.expr()?;
        if !self.accept(b')') {
            return Err(self.error("')'"));
        }
        Ok(Expr::Call(func, Box::new(arg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(t: &str) -> PotentialExpr {
        PotentialExpr::parse(t).unwrap()
    }

    #[test]
    fn tabulated_potentials_evaluate() {
        assert_eq!(parse("1/sqrt(n)").eval(4).unwrap(), 0.5);
        assert_eq!(parse("2/n - 6/n^2").eval(1).unwrap(), -4.0);
        assert_eq!(parse("1/(n+1)").eval(0).unwrap(), 1.0);
        assert_eq!(parse("1/sqrt(n+1)").eval(3).unwrap(), 0.5);
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("2+3*4").eval(0).unwrap(), 14.0);
        assert_eq!(parse("2^3^2").eval(0).unwrap(), 512.0);
        assert_eq!(parse("-n^2").eval(3).unwrap(), -9.0);
        assert_eq!(parse("(2+3)*4").eval(0).unwrap(), 20.0);
        assert_eq!(parse("2-3-4").eval(0).unwrap(), -5.0);
        assert_eq!(parse("16/4/2").eval(0).unwrap(), 2.0);
    }

    #[test]
    fn unbalanced_paren_offset() {
        let err = PotentialExpr::parse("1/(").unwrap_err();
        assert_eq!(err.offset, 3);
        let err = PotentialExpr::parse("1/").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn reports_unknown_identifier() {
        let err = PotentialExpr::parse("foo(n)").unwrap_err();
        assert_eq!(err.offset, 0);
        assert!(err.expected.contains("sqrt"));
    }

    #[test]
    fn eval_errors() {
        assert_eq!(
            parse("1/sqrt(n)").eval(0).unwrap_err(),
            EvalError::DivisionByZero { n: 0 }
        );
        assert!(matches!(
            parse("sqrt(n-9)").eval(4),
            Err(EvalError::Domain { .. })
        ));
        assert!(matches!(
            parse("log(n)").eval(0),
            Err(EvalError::Domain { .. })
        ));
    }

    #[test]
    fn print_parse_roundtrip_corpus() {
        let corpus = [
            "1/sqrt(n)",
            "1/(n+1)",
            "1/sqrt(n+1)",
            "2/n - 6/n^2",
            "n",
            "0",
            "1",
            "3.25",
            "1e-3",
            "2.5e4",
            "-n",
            "--n",
            "-(n+1)",
            "-n^2",
            "(-n)^2",
            "2^3^2",
            "(2^3)^2",
            "2^-3",
            "n*(n+1)",
            "n*n+1",
            "2-3-4",
            "2-(3-4)",
            "16/4/2",
            "16/(4/2)",
            "sin(n)",
            "cos(n)",
            "exp(-n)",
            "log(n+1)",
            "sqrt(sqrt(n))",
            "sin(cos(n))",
            "1 + 2*n - 3/n",
            "n^2 + 2*n + 1",
            "1/(n*(n+1))",
            "(n+1)*(n+2)",
            "-1/(n+1)",
            "n/2 + n/3",
            "0.5*n^3",
            "sqrt(n)/n",
            "exp(n)/exp(n+1)",
            "2*sin(n)*cos(n)",
            "1 - 1/(n+1)",
            "n - -n",
            "-(n*(n+1))",
            "n^(n+1)",
            "sqrt(n^2)",
            "(1+n)^2",
            "3e2",
            "1.5",
            "log(exp(n))",
            "cos(3.14159*n)",
        ];
        assert!(corpus.len() >= 50);
        for text in corpus {
            let first = PotentialExpr::parse(text).unwrap();
            let printed = first.to_string();
            let second = PotentialExpr::parse(&printed)
                .unwrap_or_else(|e| panic!("reparse of {printed:?} (from {text:?}): {e}"));
            assert_eq!(first.ast(), second.ast(), "{text:?} -> {printed:?}");
        }
    }

    #[test]
    fn rational_evaluation() {
        use num_traits::ToPrimitive;
        let e = parse("1/(n+1)");
        let v = e.eval_rational(3).unwrap();
        assert_eq!(v.to_f64().unwrap(), 0.25);
        assert!(matches!(
            parse("1/sqrt(n)").eval_rational(4),
            Err(EvalError::NotRational { .. })
        ));
        let p = parse("n^2").eval_rational(5).unwrap();
        assert_eq!(p.to_f64().unwrap(), 25.0);
        let neg = parse("2^-2").eval_rational(0).unwrap();
        assert_eq!(neg.to_f64().unwrap(), 0.25);
        assert!(matches!(
            parse("n^0.5").eval_rational(4),
            Err(EvalError::NotRational { .. })
        ));
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse("1/( n + 1 )");
        let b = parse("1/(n+1)");
        assert_eq!(a.ast(), b.ast());
    }
}
