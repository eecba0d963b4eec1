//! Manifold expressions.
//!
//! ```text
//! expr := sum
//! sum  := prod ('#' prod)*
//! prod := atom ('x' atom)*
//! atom := 'CP' int | 'S' int | 'SpinBott(' int ',' int ')' | '~' atom | '(' expr ')'
//! ```

use std::fmt;

use spincalc_core::mancat::{self, ManifoldError};
use spincalc_core::ManifoldModel;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ManifoldExpr {
    Cp(usize),
    Sphere(usize),
    SpinBott { dim: usize, ahat: i64 },
    Reverse(Box<ManifoldExpr>),
    Product(Vec<ManifoldExpr>),
    Sum(Vec<ManifoldExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("connected sum needs equal even dimensions, got {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
}

impl ManifoldExpr {
    pub fn dim(&self) -> usize {
        match self {
            ManifoldExpr::Cp(n) => 2 * n,
            ManifoldExpr::Sphere(n) => *n,
            ManifoldExpr::SpinBott { dim, .. } => *dim,
            ManifoldExpr::Reverse(e) => e.dim(),
            ManifoldExpr::Product(fs) => fs.iter().map(ManifoldExpr::dim).sum(),
            ManifoldExpr::Sum(ss) => ss[0].dim(),
        }
    }

    pub fn build(&self) -> Result<ManifoldModel, ExprError> {
        Ok(match self {
            ManifoldExpr::Cp(n) => mancat::cp(*n)?,
            ManifoldExpr::Sphere(n) => mancat::sphere(*n)?,
            ManifoldExpr::SpinBott { dim, ahat } => mancat::synthetic_spin(*dim, *ahat)?,
            ManifoldExpr::Reverse(e) => mancat::reverse(&e.build()?),
            ManifoldExpr::Product(fs) => fold(fs, mancat::product)?,
            ManifoldExpr::Sum(ss) => fold(ss, mancat::connected_sum)?,
        })
    }
}

fn fold(
    items: &[ManifoldExpr],
    op: fn(&ManifoldModel, &ManifoldModel) -> Result<ManifoldModel, ManifoldError>,
) -> Result<ManifoldModel, ExprError> {
    let mut acc = items[0].build()?;
    for e in &items[1..] {
        acc = op(&acc, &e.build()?)?;
    }
    Ok(acc)
}

impl fmt::Display for ManifoldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldExpr::Cp(n) => write!(f, "CP{n}"),
            ManifoldExpr::Sphere(n) => write!(f, "S{n}"),
            ManifoldExpr::SpinBott { dim, ahat } => write!(f, "SpinBott({dim},{ahat})"),
            ManifoldExpr::Reverse(e) => match **e {
                ManifoldExpr::Product(_) | ManifoldExpr::Sum(_) => write!(f, "~({e})"),
                _ => write!(f, "~{e}"),
            },
            ManifoldExpr::Product(fs) => join(f, fs, " x ", |e| matches!(e, ManifoldExpr::Product(_) | ManifoldExpr::Sum(_))),
            ManifoldExpr::Sum(ss) => join(f, ss, " # ", |e| matches!(e, ManifoldExpr::Sum(_))),
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, items: &[ManifoldExpr], sep: &str, wrap: fn(&ManifoldExpr) -> bool) -> fmt::Result {
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        if wrap(e) {
            write!(f, "({e})")?;
        } else {
            write!(f, "{e}")?;
        }
    }
    Ok(())
}

pub fn parse_manifold(text: &str) -> Result<ManifoldExpr, ExprError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ExprError {
        ExprError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
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

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ExprError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{token}'")))
        }
    }

    fn int(&mut self) -> Result<i64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("expected an integer")
        })
    }

    fn uint(&mut self) -> Result<usize, ExprError> {
        let start = self.pos;
        let v = self.int()?;
        usize::try_from(v).map_err(|_| ExprError::Syntax {
            pos: start,
            msg: "expected a nonnegative integer".into(),
        })
    }

    fn sum(&mut self) -> Result<ManifoldExpr, ExprError> {
        let mut items = vec![self.prod()?];
        while self.eat("#") {
            let rhs = self.prod()?;
            let (a, b) = (items[0].dim(), rhs.dim());
            if a != b || a % 2 == 1 || a == 0 {
                return Err(ExprError::DimensionMismatch(a, b));
            }
            items.push(rhs);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { ManifoldExpr::Sum(items) })
    }

    fn prod(&mut self) -> Result<ManifoldExpr, ExprError> {
        let mut items = vec![self.atom()?];
        while self.eat("x") {
            items.push(self.atom()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            ManifoldExpr::Product(items)
        })
    }

    fn atom(&mut self) -> Result<ManifoldExpr, ExprError> {
        match self.peek() {
            Some(b'~') => {
                self.pos += 1;
                Ok(ManifoldExpr::Reverse(Box::new(self.atom()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(")")?;
                Ok(e)
            }
            _ if self.eat("SpinBott") => {
                self.expect("(")?;
                let dim = self.uint()?;
                self.expect(",")?;
                let ahat = self.int()?;
                self.expect(")")?;
                Ok(ManifoldExpr::SpinBott { dim, ahat })
            }
            _ if self.eat("CP") => Ok(ManifoldExpr::Cp(self.uint()?)),
            _ if self.eat("S") => Ok(ManifoldExpr::Sphere(self.uint()?)),
            None => Err(self.error("unexpected end of input")),
            Some(_) => Err(self.error("expected CPn, Sn, SpinBott(d,a), '~' or '('")),
        }
    }
}
