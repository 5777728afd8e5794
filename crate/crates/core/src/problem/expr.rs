//! Arithmetic expressions over decision variables `x1..xn`.
//!
//! Supports `+ - * / ^`, the Unicode forms `− × ÷`, unary signs, parentheses
//! and decimal literals. `^` binds tighter than unary minus and is
//! right-associative, so `-x1^2` is `-(x1^2)` and `2^3^2` is `2^9`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("unexpected character '{ch}' at offset {pos} in \"{src}\"")]
    UnexpectedChar { src: String, pos: usize, ch: char },
    #[error("unexpected end of expression \"{0}\"")]
    UnexpectedEnd(String),
    #[error("variable x{index} out of range (problem has {n_var} variables) in \"{src}\"")]
    UnknownVariable {
        src: String,
        index: usize,
        n_var: usize,
    },
    #[error("bad number literal \"{0}\"")]
    BadNumber(String),
    #[error("trailing input at offset {pos} in \"{src}\"")]
    Trailing { src: String, pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// Zero-based variable index.
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str, n_var: usize) -> Result<Expr, ExprError> {
        let mut p = Parser {
            src,
            chars: src.char_indices().collect(),
            pos: 0,
            n_var,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(ExprError::Trailing {
                src: src.to_string(),
                pos: p.chars[p.pos].0,
            });
        }
        Ok(e)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => x[*i],
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => {
                let base = a.eval(x);
                let e = b.eval(x);
                if e.fract() == 0.0 && e.abs() <= 64.0 {
                    base.powi(e as i32)
                } else {
                    base.powf(e)
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    n_var: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn unexpected(&self) -> ExprError {
        match self.chars.get(self.pos) {
            Some(&(pos, ch)) => ExprError::UnexpectedChar {
                src: self.src.to_string(),
                pos,
                ch,
            },
            None => ExprError::UnexpectedEnd(self.src.to_string()),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some('-' | '−') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some('*' | '×') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some('/' | '÷') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some('-' | '−') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(e)
            }
            Some('x' | 'X') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.unexpected());
                }
                let digits: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                let index: usize = digits
                    .parse()
                    .map_err(|_| ExprError::BadNumber(digits.clone()))?;
                if index == 0 || index > self.n_var {
                    return Err(ExprError::UnknownVariable {
                        src: self.src.to_string(),
                        index,
                        n_var: self.n_var,
                    });
                }
                Ok(Expr::Var(index - 1))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.pos < self.chars.len() {
                    let c = self.chars[self.pos].1;
                    let exp_sign = (c == '+' || c == '-')
                        && matches!(self.chars[self.pos - 1].1, 'e' | 'E');
                    if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || exp_sign {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let lit: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                lit.parse::<f64>()
                    .map(Expr::Const)
                    .map_err(|_| ExprError::BadNumber(lit))
            }
            _ => Err(self.unexpected()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, x: &[f64]) -> f64 {
        Expr::parse(src, x.len()).unwrap().eval(x)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("1 + 2 * 3", &[]), 7.0);
        assert_eq!(eval("(1 + 2) * 3", &[]), 9.0);
        assert_eq!(eval("2^3^2", &[]), 512.0);
        assert_eq!(eval("-x1^2", &[3.0]), -9.0);
        assert_eq!(eval("2^-1", &[]), 0.5);
        assert_eq!(eval("8 / 4 / 2", &[]), 1.0);
        assert_eq!(eval("1 - 2 - 3", &[]), -4.0);
    }

    #[test]
    fn unicode_operators() {
        assert_eq!(eval("3 × x1 − 4 ÷ x2", &[2.0, 4.0]), 5.0);
    }

    #[test]
    fn table_formulas() {
        let x = [1.0, 0.0];
        assert_eq!(eval("(x1 - 1)^3 + x2", &x), 0.0);
        assert_eq!(eval("(1 + x2)/x1", &x), 1.0);
        assert_eq!(eval("(x1-5)^2 + (x2-5)^2", &[0.0, 0.0]), 50.0);
        assert_eq!(eval("0.5e1 * x1", &[2.0]), 10.0);
    }

    #[test]
    fn negative_base_integer_power() {
        assert_eq!(eval("(x1 - 1)^3", &[0.0]), -1.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            Expr::parse("x3 + 1", 2),
            Err(ExprError::UnknownVariable { index: 3, .. })
        ));
        assert!(matches!(Expr::parse("x0", 2), Err(ExprError::UnknownVariable { .. })));
        assert!(matches!(Expr::parse("1 +", 1), Err(ExprError::UnexpectedEnd(_))));
        assert!(matches!(Expr::parse("(1", 1), Err(ExprError::UnexpectedEnd(_))));
        assert!(matches!(Expr::parse("1 2", 1), Err(ExprError::Trailing { .. })));
        assert!(matches!(Expr::parse("y1", 1), Err(ExprError::UnexpectedChar { .. })));
        assert!(matches!(Expr::parse("1..2", 1), Err(ExprError::BadNumber(_))));
    }
}
