//! Recursive-descent reader for the forest grammar:
//!
//! ```text
//! forest  := term ( "+" term )* | "0"
//! term    := int "*" tree
//! tree    := "<" rooted "," rooted ">" | rooted "^inf"
//! rooted  := label | "(" rooted "," rooted ")"
//! ```

use num_bigint::BigInt;

use super::{DecoratedTree, IntersectionForest, Label, Rooted};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(x) => self.err(format!("expected '{c}', found '{x}'")),
            None => self.err(format!("expected '{c}', found end of input")),
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn int(&mut self) -> Result<BigInt> {
        let neg = match self.peek() {
            Some('+') => {
                self.pos += 1;
                false
            }
            Some('-') => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        let d = self.digits();
        if d.is_empty() {
            return self.err("expected an integer");
        }
        let v: BigInt = d.parse().expect("digits");
        Ok(if neg { -v } else { v })
    }

    fn label(&mut self) -> Result<Label> {
        let start = self.pos;
        let d = self.digits();
        if d.is_empty() {
            return self.err("expected a label");
        }
        match d.parse::<Label>() {
            Ok(0) | Err(_) => Err(Error::Syntax { pos: start, msg: format!("invalid label '{d}'") }),
            Ok(l) => Ok(l),
        }
    }

    fn check_no_inf(&mut self) -> Result<()> {
        let save = self.pos;
        if self.eat_str("^inf") {
            return Err(Error::MalformedTwisted { pos: save });
        }
        Ok(())
    }

    fn nested_rooted(&mut self) -> Result<Rooted> {
        let t = if self.peek() == Some('(') {
            self.pos += 1;
            let a = self.nested_rooted()?;
            self.check_no_inf()?;
            self.expect(',')?;
            let b = self.nested_rooted()?;
            self.check_no_inf()?;
            self.expect(')')?;
            Rooted::node(a, b)
        } else {
            Rooted::Leaf(self.label()?)
        };
        Ok(t)
    }

    fn tree(&mut self) -> Result<DecoratedTree> {
        if self.peek() == Some('<') {
            self.pos += 1;
            let a = self.nested_rooted()?;
            self.check_no_inf()?;
            self.expect(',')?;
            let b = self.nested_rooted()?;
            self.check_no_inf()?;
            self.expect('>')?;
            return Ok(DecoratedTree::Framed(a, b));
        }
        let j = self.nested_rooted()?;
        if self.eat_str("^inf") {
            Ok(DecoratedTree::Twisted(j))
        } else {
            self.err("expected '^inf' after a rooted tree (rooted trees are not forest terms)")
        }
    }
}

/// Parses one framed or twisted tree (no coefficient).
pub fn parse_tree(text: &str) -> Result<DecoratedTree> {
    let mut c = Cursor::new(text);
    let t = c.tree()?;
    if !c.at_end() {
        return c.err("trailing input");
    }
    Ok(t)
}

/// Parses a bare rooted tree such as `((1,2),3)`.
pub fn parse_rooted(text: &str) -> Result<Rooted> {
    let mut c = Cursor::new(text);
    let t = c.nested_rooted()?;
    if c.peek() == Some('^') {
        return Err(Error::MalformedTwisted { pos: c.pos });
    }
    if !c.at_end() {
        return c.err("trailing input");
    }
    Ok(t)
}

/// Parses and canonicalizes a forest over labels `1..=m`.
pub fn parse_forest(text: &str, m: u32) -> Result<IntersectionForest> {
    let mut c = Cursor::new(text);
    let mut f = IntersectionForest::new(m);
    if c.peek() == Some('0') {
        let save = c.pos;
        c.pos += 1;
        if c.at_end() {
            return Ok(f);
        }
        c.pos = save;
    }
    loop {
        let coeff = c.int()?;
        c.expect('*')?;
        let t = c.tree()?;
        f.add_term(coeff, &t)?;
        if c.at_end() {
            break;
        }
        c.expect('+')?;
    }
    Ok(f)
}
