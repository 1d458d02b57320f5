//! Decorated trees and intersection forests.

mod parse;
mod tree;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

pub use parse::{parse_forest, parse_rooted, parse_tree};
pub(crate) use tree::Graph;
pub use tree::{inner_product, rooted_product, Canonical, Convention, DecoratedTree, Kind, Label, Rooted, TreeStats};

use crate::error::{Error, Result};
use crate::zmat::Int;

/// An integer combination of canonical framed trees and ∞-trees.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntersectionForest {
    m: u32,
    terms: BTreeMap<DecoratedTree, Int>,
}

impl IntersectionForest {
    pub fn new(m: u32) -> Self {
        IntersectionForest { m, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(m: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Int, DecoratedTree)>,
    {
        let mut f = IntersectionForest::new(m);
        for (c, t) in terms {
            f.add_term(c, &t)?;
        }
        Ok(f)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DecoratedTree, &Int)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &DecoratedTree) -> Int {
        let c = t.canonicalize();
        self.terms.get(&c.tree).map(|x| x * Int::from(c.sign)).unwrap_or_default()
    }

    /// Adds `coeff · t`, canonicalizing `t` and merging with an existing term.
    pub fn add_term(&mut self, coeff: Int, t: &DecoratedTree) -> Result<()> {
        if t.kind() == Kind::Rooted {
            return Err(Error::RootedInForest(t.to_string()));
        }
        t.validate_labels(self.m)?;
        if coeff.is_zero() {
            return Ok(());
        }
        let c = t.canonicalize();
        let e = self.terms.entry(c.tree.clone()).or_default();
        *e += coeff * Int::from(c.sign);
        if e.is_zero() {
            self.terms.remove(&c.tree);
        }
        Ok(())
    }

    pub fn add(&self, other: &IntersectionForest) -> Result<IntersectionForest> {
        if self.m != other.m {
            return Err(Error::IndexCountMismatch(self.m, other.m));
        }
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(c.clone(), t)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Int) -> IntersectionForest {
        let mut out = IntersectionForest::new(self.m);
        if k.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(t, c)| (t.clone(), c * k)).collect();
        out
    }

    /// Terms kept by `keep`.
    pub fn filter<F: Fn(&DecoratedTree) -> bool>(&self, keep: F) -> IntersectionForest {
        IntersectionForest {
            m: self.m,
            terms: self.terms.iter().filter(|(t, _)| keep(t)).map(|(t, c)| (t.clone(), c.clone())).collect(),
        }
    }
}

fn format_coeff(c: &Int) -> String {
    if c.is_negative() {
        c.to_string()
    } else {
        format!("+{c}")
    }
}

pub(crate) fn format_terms<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (String, &'a Int)>,
{
    let mut parts: Vec<(String, &Int)> = terms.into_iter().collect();
    if parts.is_empty() {
        return "0".into();
    }
    parts.sort_by(|a, b| a.0.cmp(&b.0));
    parts.iter().map(|(t, c)| format!("{}*{}", format_coeff(c), t)).collect::<Vec<_>>().join(" + ")
}

impl fmt::Display for IntersectionForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(self.terms.iter().map(|(t, c)| (t.to_string(), c))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_single_generator() {
        let f = parse_forest("+1*<1,2>", 2).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.coefficient(&parse_tree("<1,2>").unwrap()), Int::from(1));
    }

    #[test]
    fn parse_cancels() {
        assert!(parse_forest("+1*<1,2> + -1*<1,2>", 2).unwrap().is_empty());
        assert!(parse_forest("+1*<2,1> + -1*<1,2>", 2).unwrap().is_empty());
        assert!(parse_forest("0", 5).unwrap().is_empty());
    }

    #[test]
    fn parse_twisted() {
        let f = parse_forest("+2*((1,2),3)^inf", 3).unwrap();
        let (t, c) = f.terms().next().unwrap();
        assert_eq!(t.kind(), Kind::Twisted);
        assert_eq!(t.order(), 2);
        assert_eq!(*c, Int::from(2));
        assert_eq!(f.to_string(), "+2*((1,2),3)^inf");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_forest("+1*<1,3>", 2), Err(Error::LabelOutOfRange { label: 3, m: 2 })));
        assert!(matches!(parse_forest("+1*<1,2", 2), Err(Error::Syntax { .. })));
        assert!(matches!(parse_forest("+1*((1,2)^inf,1)^inf", 2), Err(Error::MalformedTwisted { .. })));
        assert!(matches!(parse_forest("+1*(1,2)", 2), Err(Error::Syntax { .. })));
        assert!(matches!(parse_forest("+1*<0,1>", 2), Err(Error::Syntax { .. })));
    }

    #[test]
    fn addition() {
        let a = parse_forest("+1*<1,2>", 2).unwrap();
        let b = parse_forest("-1*<1,2>", 2).unwrap();
        assert!(a.add(&b).unwrap().is_empty());
        assert_eq!(a.add(&a).unwrap().to_string(), "+2*<1,2>");
        let c = parse_forest("+1*(1,2)^inf", 2).unwrap();
        assert_eq!(a.add(&c).unwrap().len(), 2);
        let d = parse_forest("+1*<1,2>", 3).unwrap();
        assert!(matches!(a.add(&d), Err(Error::IndexCountMismatch(2, 3))));
    }

    #[test]
    fn printing_is_sorted_and_reparses() {
        let f = parse_forest("-3*<(2,1),3> + +1*<1,2> + +1*(2,1)^inf", 3).unwrap();
        let s = f.to_string();
        assert_eq!(s, "+1*(1,2)^inf + +3*<(1,2),3> + +1*<1,2>");
        assert_eq!(parse_forest(&s, 3).unwrap(), f);
    }
}
