//! Magnus expansions of longitude words and the Milnor invariants they carry.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forest::Label;
use crate::lie::{poly_add, rooted_multiplicity, tensor_to_lie, Poly, TensorElement, Word};
use crate::zmat::Int;

use super::bracket_value;

/// A generator `x_i` or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Letter {
    pub generator: Label,
    pub inverse: bool,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.inverse { 'X' } else { 'x' }, self.generator)
    }
}

/// A truncated series in the noncommuting variables `X₁,…,X_m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MagnusSeries {
    m: u32,
    truncation: usize,
    coeffs: Poly,
}

impl MagnusSeries {
    pub fn one(m: u32, truncation: usize) -> Self {
        MagnusSeries { m, truncation, coeffs: Poly::from([(Word::new(), Int::one())]) }
    }

    /// `1 + X_i`, or `1 - X_i + X_i² - …` for the inverse.
    pub fn letter(m: u32, truncation: usize, l: Letter) -> Self {
        let mut s = MagnusSeries::one(m, truncation);
        let top = if l.inverse { truncation } else { truncation.min(1) };
        for d in 1..=top {
            let c = if l.inverse && d % 2 == 1 { -Int::one() } else { Int::one() };
            s.coeffs.insert(vec![l.generator; d], c);
        }
        s
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn coeffs(&self) -> &Poly {
        &self.coeffs
    }

    pub fn coefficient(&self, w: &[Label]) -> Int {
        self.coeffs.get(w).cloned().unwrap_or_default()
    }

    /// The homogeneous part of the given degree.
    pub fn degree_part(&self, d: usize) -> Poly {
        self.coeffs.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| (w.clone(), c.clone())).collect()
    }

    pub fn mul(&self, other: &MagnusSeries) -> MagnusSeries {
        let truncation = self.truncation.min(other.truncation);
        let mut coeffs = Poly::new();
        for (u, a) in &self.coeffs {
            for (v, b) in &other.coeffs {
                if u.len() + v.len() > truncation {
                    continue;
                }
                let mut uv = u.clone();
                uv.extend_from_slice(v);
                poly_add(&mut coeffs, &uv, &(a * b));
            }
        }
        MagnusSeries { m: self.m, truncation, coeffs }
    }
}

impl fmt::Display for MagnusSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&Word, &Int)> = self.coeffs.iter().collect();
        terms.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0)));
        if terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|(w, c)| {
                let mono = if w.is_empty() { "1".to_string() } else { w.iter().map(|l| format!("X{l}")).collect() };
                format!("{}{c}*{mono}", if c.sign() == num_bigint::Sign::Minus { "" } else { "+" })
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn magnus_expand(word: &[Letter], m: u32, truncation: usize) -> MagnusSeries {
    word.iter().fold(MagnusSeries::one(m, truncation), |acc, &l| acc.mul(&MagnusSeries::letter(m, truncation, l)))
}

/// Reads a space-separated word such as `x1 X2 x3` (uppercase is the inverse).
pub fn parse_word(text: &str, m: u32) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    let mut pos = 0;
    for tok in text.split(' ') {
        if tok.is_empty() {
            pos += 1;
            continue;
        }
        let inverse = match tok.as_bytes()[0] {
            b'x' => false,
            b'X' => true,
            _ => return Err(Error::Syntax { pos, msg: format!("bad letter '{tok}'") }),
        };
        let generator: Label = tok[1..]
            .parse()
            .ok()
            .filter(|&g| g >= 1)
            .ok_or_else(|| Error::Syntax { pos, msg: format!("bad letter '{tok}'") })?;
        if generator > m {
            return Err(Error::LabelOutOfRange { label: generator, m });
        }
        out.push(Letter { generator, inverse });
        pos += tok.len() + 1;
    }
    Ok(out)
}

/// Longitude words `w_i`, one per component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LongitudeData {
    pub m: u32,
    pub words: Vec<Vec<Letter>>,
}

impl LongitudeData {
    pub fn new(m: u32, words: Vec<Vec<Letter>>) -> Result<Self> {
        if words.len() != m as usize {
            return Err(Error::IndexCountMismatch(words.len() as u32, m));
        }
        for l in words.iter().flatten() {
            if l.generator == 0 || l.generator > m {
                return Err(Error::LabelOutOfRange { label: l.generator, m });
            }
        }
        Ok(LongitudeData { m, words })
    }

    pub fn from_strs(m: u32, words: &[&str]) -> Result<Self> {
        LongitudeData::new(m, words.iter().map(|w| parse_word(w, m)).collect::<Result<_>>()?)
    }
}

/// Reads the longitude file format: `m = <int>` then one `l<i>: <word>` line
/// per component. Blank lines and lines starting with `#` are skipped.
pub fn parse_longitudes(text: &str) -> Result<LongitudeData> {
    let mut m: Option<u32> = None;
    let mut words: BTreeMap<u32, Vec<Letter>> = BTreeMap::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let at = offset;
        offset += line.len();
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let syntax = |msg: &str| Error::Syntax { pos: at, msg: msg.into() };
        match m {
            None => {
                let rest = body.strip_prefix('m').ok_or_else(|| syntax("expected 'm = <int>'"))?;
                let rest = rest.trim_start().strip_prefix('=').ok_or_else(|| syntax("expected 'm = <int>'"))?;
                let v: u32 = rest.trim().parse().map_err(|_| syntax("bad component count"))?;
                if v == 0 {
                    return Err(syntax("component count must be positive"));
                }
                m = Some(v);
            }
            Some(m) => {
                let (head, word) = body.split_once(':').ok_or_else(|| syntax("expected 'l<i>: <word>'"))?;
                let i: u32 = head
                    .trim()
                    .strip_prefix('l')
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| syntax("expected 'l<i>'"))?;
                if i == 0 || i > m {
                    return Err(Error::LabelOutOfRange { label: i, m });
                }
                let w = parse_word(word.trim(), m).map_err(|e| match e {
                    Error::Syntax { pos, msg } => Error::Syntax { pos: at + pos, msg },
                    other => other,
                })?;
                if words.insert(i, w).is_some() {
                    return Err(syntax("duplicate longitude"));
                }
            }
        }
    }
    let m = m.ok_or_else(|| Error::Syntax { pos: 0, msg: "missing 'm = <int>'".into() })?;
    if words.len() != m as usize {
        return Err(Error::Syntax { pos: offset, msg: format!("expected {m} longitudes, found {}", words.len()) });
    }
    LongitudeData::new(m, words.into_values().collect())
}

/// A nonvanishing first Milnor invariant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MilnorValue {
    pub order: usize,
    pub value: TensorElement,
    /// `μ(I j)`: the coefficient of the word `I` in the expansion of `w_j`.
    pub table: Vec<(Word, Int)>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MilnorOutcome {
    Found(MilnorValue),
    /// No nonzero coefficient up to this degree.
    AllVanishing(usize),
}

impl MilnorValue {
    pub fn format_table(&self) -> String {
        self.table
            .iter()
            .map(|(w, c)| format!("mu({})={c}", w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(if w.iter().any(|&l| l > 9) { "," } else { "" })))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// First nonvanishing (`k`-repeating) Milnor invariant, searched through
/// Magnus degree `cap`.
pub fn milnor_from_longitudes(l: &LongitudeData, k: Option<usize>, cap: usize) -> Result<MilnorOutcome> {
    let series: Vec<MagnusSeries> = l.words.iter().map(|w| magnus_expand(w, l.m, cap)).collect();
    for d in 1..=cap {
        let parts: Vec<Poly> = series
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let root = i as Label + 1;
                let mut p = s.degree_part(d);
                if let Some(k) = k {
                    p.retain(|w, _| rooted_multiplicity(root, w) <= k);
                }
                p
            })
            .collect();
        if parts.iter().all(Poly::is_empty) {
            continue;
        }
        let mut value = TensorElement::zero(d);
        let mut table = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            let root = i as Label + 1;
            value.add_simple(root, &tensor_to_lie(p, d)?, &Int::one());
            for (w, c) in p {
                let mut key = w.clone();
                key.push(root);
                table.push((key, c.clone()));
            }
        }
        table.sort();
        if !bracket_value(&value, k).is_zero() {
            return Err(Error::BracketNonzero);
        }
        debug_assert!(table.iter().all(|(_, c)| !c.is_zero()));
        return Ok(MilnorOutcome::Found(MilnorValue { order: d - 1, value, table }));
    }
    Ok(MilnorOutcome::AllVanishing(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::parse_tensor;

    fn series(w: &str, m: u32, n: usize) -> MagnusSeries {
        magnus_expand(&parse_word(w, m).unwrap(), m, n)
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(series("x1 x2", 2, 2).to_string(), "+1*1 +1*X1 +1*X2 +1*X1X2");
        assert_eq!(series("X1", 1, 2).to_string(), "+1*1 -1*X1 +1*X1X1");
        assert_eq!(series("x1 x2 X1 X2", 2, 2).to_string(), "+1*1 +1*X1X2 -1*X2X1");
        assert_eq!(series("", 3, 4), MagnusSeries::one(3, 4));
    }

    #[test]
    fn hopf_and_borromean() {
        let hopf = LongitudeData::from_strs(2, &["x2", "x1"]).unwrap();
        let MilnorOutcome::Found(v) = milnor_from_longitudes(&hopf, None, 8).unwrap() else { panic!() };
        assert_eq!(v.order, 0);
        assert_eq!(v.value, parse_tensor("x1 (x) x2 + x2 (x) x1", 2).unwrap());
        assert_eq!(v.format_table(), "mu(12)=1 mu(21)=1");

        let bor = LongitudeData::from_strs(3, &["x2 x3 X2 X3", "x3 x1 X3 X1", "x1 x2 X1 X2"]).unwrap();
        let MilnorOutcome::Found(v) = milnor_from_longitudes(&bor, None, 8).unwrap() else { panic!() };
        assert_eq!(v.order, 1);
        assert!(v.table.iter().any(|(w, c)| w == &vec![1, 2, 3] && !c.is_zero()));

        let unlink = LongitudeData::from_strs(2, &["", ""]).unwrap();
        assert_eq!(milnor_from_longitudes(&unlink, None, 5).unwrap(), MilnorOutcome::AllVanishing(5));
    }

    #[test]
    fn leading_terms() {
        // the lowest nonvanishing part of a group element is always Lie, so a
        // failure here can only come from the cyclic condition
        let l = LongitudeData::from_strs(2, &["x2 x2", "x1"]).unwrap();
        assert_eq!(milnor_from_longitudes(&l, None, 3), Err(Error::BracketNonzero));
        let l = LongitudeData::from_strs(2, &["x1 x2 x1 X2", ""]).unwrap();
        let MilnorOutcome::Found(v) = milnor_from_longitudes(&l, None, 3).unwrap() else { panic!() };
        assert_eq!(v.value, parse_tensor("2*x1 (x) x1", 2).unwrap());
    }

    #[test]
    fn longitude_file() {
        let l = parse_longitudes("m = 2\nl1: x2\nl2: x1\n").unwrap();
        assert_eq!(l, LongitudeData::from_strs(2, &["x2", "x1"]).unwrap());
        let l = parse_longitudes("m = 2\nl2:\nl1: \n").unwrap();
        assert!(l.words.iter().all(Vec::is_empty));
        assert!(matches!(parse_longitudes("m = 2\nl1: x3\nl2:\n"), Err(Error::LabelOutOfRange { .. })));
        assert!(matches!(parse_longitudes("m = 2\nl1: y1\nl2:\n"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_longitudes("l1: x1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_longitudes("m = 2\nl1: x1\n"), Err(Error::Syntax { .. })));
    }
}
