//! Readers for printed brackets (`[x1,[x1,x2]]`), Lie combinations
//! (`+1*[x1,x2] + -2*[x1,x3]`) and tensors (`+1*x1 (x) [x1,x2]`).
//! A missing coefficient means `+1`.

use num_traits::One;

use super::{LieElement, TensorElement};
use crate::error::{Error, Result};
use crate::forest::{Label, Rooted};
use crate::zmat::Int;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    m: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&mut self) -> Option<char> {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                return Some(c);
            }
            self.pos += c.len_utf8();
        }
        None
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn eat(&mut self, s: &str) -> bool {
        self.peek();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}'"))
        }
    }

    fn digits(&mut self) -> &'a str {
        self.peek();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn generator(&mut self) -> Result<Label> {
        self.expect("x")?;
        let at = self.pos;
        let d = self.digits();
        match d.parse::<Label>() {
            Ok(l) if l >= 1 && l <= self.m => Ok(l),
            Ok(l) if l >= 1 => Err(Error::LabelOutOfRange { label: l, m: self.m }),
            _ => Err(Error::Syntax { pos: at, msg: format!("invalid generator index '{d}'") }),
        }
    }

    fn bracket(&mut self) -> Result<Rooted> {
        if self.eat("[") {
            let a = self.bracket()?;
            self.expect(",")?;
            let b = self.bracket()?;
            self.expect("]")?;
            Ok(Rooted::node(a, b))
        } else {
            Ok(Rooted::Leaf(self.generator()?))
        }
    }

    fn coefficient(&mut self) -> Result<Int> {
        let save = self.pos;
        let neg = if self.eat("-") {
            true
        } else {
            self.eat("+");
            false
        };
        let d = self.digits();
        if d.is_empty() {
            if self.pos != save && neg {
                return Ok(-Int::one());
            }
            return Ok(Int::one());
        }
        let v: Int = d.parse().expect("digits");
        self.expect("*")?;
        Ok(if neg { -v } else { v })
    }

    fn end(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok(())
    }

    fn is_zero_literal(&mut self) -> bool {
        let save = self.pos;
        if self.eat("0") && self.peek().is_none() {
            return true;
        }
        self.pos = save;
        false
    }
}

pub fn parse_bracket(text: &str, m: u32) -> Result<Rooted> {
    let mut c = Cursor { src: text, pos: 0, m };
    let t = c.bracket()?;
    c.end()?;
    Ok(t)
}

/// Parses a homogeneous combination of brackets and rewrites it in the basis.
pub fn parse_lie(text: &str, m: u32) -> Result<LieElement> {
    let mut c = Cursor { src: text, pos: 0, m };
    if c.is_zero_literal() {
        return Ok(LieElement::zero(1));
    }
    let mut out: Option<LieElement> = None;
    loop {
        let k = c.coefficient()?;
        let at = c.pos;
        let t = c.bracket()?;
        let e = LieElement::from_bracket(&t).scale(&k);
        out = Some(match out {
            None => e,
            Some(acc) if acc.degree() == e.degree() => acc.add(&e),
            Some(_) => return Err(Error::Syntax { pos: at, msg: "inhomogeneous combination".into() }),
        });
        if c.peek().is_none() {
            break;
        }
        c.expect("+")?;
    }
    c.end()?;
    Ok(out.expect("at least one term"))
}

/// Parses a combination of `x_i (x) bracket` terms.
pub fn parse_tensor(text: &str, m: u32) -> Result<TensorElement> {
    let mut c = Cursor { src: text, pos: 0, m };
    if c.is_zero_literal() {
        return Ok(TensorElement::zero(1));
    }
    let mut out: Option<TensorElement> = None;
    loop {
        let k = c.coefficient()?;
        let i = c.generator()?;
        c.expect("(x)")?;
        let at = c.pos;
        let t = c.bracket()?;
        let e = TensorElement::simple(i, &LieElement::from_bracket(&t)).scale(&k);
        out = Some(match out {
            None => e,
            Some(acc) if acc.degree() == e.degree() => acc.add(&e),
            Some(_) => return Err(Error::Syntax { pos: at, msg: "inhomogeneous combination".into() }),
        });
        if c.peek().is_none() {
            break;
        }
        c.expect("+")?;
    }
    c.end()?;
    Ok(out.expect("at least one term"))
}
