//! The free Lie algebra over ℤ in the Lyndon basis.
//!
//! A basis element of degree `n` is identified with a Lyndon word of length
//! `n` and stands for its standard bracketing. Arithmetic goes through the
//! tensor algebra: brackets are expanded into noncommutative polynomials and
//! read back with [`tensor_to_lie`], which peels off leading Lyndon words.

mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use once_cell::sync::Lazy;
use parking_lot::Mutex;

pub use parse::{parse_bracket, parse_lie, parse_tensor};

use crate::error::{Error, Result};
use crate::forest::{format_terms, Label, Rooted};
use crate::zmat::{self, Int, Lattice, Mat};

pub type Word = Vec<Label>;

/// A homogeneous noncommutative polynomial: word → coefficient.
pub type Poly = BTreeMap<Word, Int>;

pub fn poly_add(p: &mut Poly, w: &[Label], c: &Int) {
    if c.is_zero() {
        return;
    }
    match p.get_mut(w) {
        Some(e) => {
            *e += c;
            if e.is_zero() {
                p.remove(w);
            }
        }
        None => {
            p.insert(w.to_vec(), c.clone());
        }
    }
}

/// `ab - ba`.
pub fn poly_commutator(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (u, x) in a {
        for (v, y) in b {
            let c = x * y;
            let mut uv = u.clone();
            uv.extend_from_slice(v);
            poly_add(&mut out, &uv, &c);
            let mut vu = v.clone();
            vu.extend_from_slice(u);
            poly_add(&mut out, &vu, &-c);
        }
    }
    out
}

pub fn is_lyndon(w: &[Label]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Lyndon words of length `n` over `1..=m`, in lexicographic order (Duval).
pub fn lyndon_words(m: u32, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if m == 0 || n == 0 {
        return out;
    }
    let mut w: Vec<Label> = vec![1];
    while !w.is_empty() {
        if w.len() == n {
            out.push(w.clone());
        }
        let k = w.len();
        while w.len() < n {
            let x = w[w.len() - k];
            w.push(x);
        }
        while w.last() == Some(&m) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

/// Standard bracketing: `w = uv` with `v` the longest proper Lyndon suffix.
pub fn standard_bracket(w: &[Label]) -> Rooted {
    debug_assert!(is_lyndon(w));
    if w.len() == 1 {
        return Rooted::Leaf(w[0]);
    }
    let split = (1..w.len()).find(|&i| is_lyndon(&w[i..])).expect("Lyndon word has a Lyndon suffix");
    Rooted::node(standard_bracket(&w[..split]), standard_bracket(&w[split..]))
}

/// Expansion of a bracket tree in the tensor algebra, `[a,b] = ab - ba`.
pub fn expand(t: &Rooted) -> Poly {
    match t {
        Rooted::Leaf(l) => Poly::from([(vec![*l], Int::from(1))]),
        Rooted::Node(a, b) => poly_commutator(&expand(a), &expand(b)),
    }
}

static BASIS_EXPANSIONS: Lazy<Mutex<HashMap<Word, Poly>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Cached expansion of the standard bracketing of a Lyndon word.
pub fn basis_expansion(w: &[Label]) -> Poly {
    if let Some(p) = BASIS_EXPANSIONS.lock().get(w) {
        return p.clone();
    }
    let p = expand(&standard_bracket(w));
    BASIS_EXPANSIONS.lock().insert(w.to_vec(), p.clone());
    p
}

pub fn lyndon_basis(m: u32, n: usize) -> Vec<Rooted> {
    lyndon_words(m, n).iter().map(|w| standard_bracket(w)).collect()
}

/// Largest letter count of a word.
pub fn word_multiplicity(w: &[Label]) -> usize {
    let mut counts: BTreeMap<Label, usize> = BTreeMap::new();
    for l in w {
        *counts.entry(*l).or_default() += 1;
    }
    counts.values().copied().max().unwrap_or(0)
}

/// Multiplicity of `X_root ⊗ w` (the root label counts).
pub fn rooted_multiplicity(root: Label, w: &[Label]) -> usize {
    let mut counts: BTreeMap<Label, usize> = BTreeMap::new();
    *counts.entry(root).or_default() += 1;
    for l in w {
        *counts.entry(*l).or_default() += 1;
    }
    counts.values().copied().max().unwrap_or(0)
}

pub fn format_bracket(t: &Rooted) -> String {
    match t {
        Rooted::Leaf(l) => format!("x{l}"),
        Rooted::Node(a, b) => format!("[{},{}]", format_bracket(a), format_bracket(b)),
    }
}

/// A homogeneous element of `Lₙ`, coordinates over Lyndon words.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct LieElement {
    degree: usize,
    coeffs: BTreeMap<Word, Int>,
}

impl LieElement {
    pub fn zero(degree: usize) -> Self {
        LieElement { degree, coeffs: BTreeMap::new() }
    }

    pub fn generator(label: Label) -> Self {
        LieElement { degree: 1, coeffs: BTreeMap::from([(vec![label], Int::from(1))]) }
    }

    /// The basis element for a Lyndon word.
    pub fn basis(w: &[Label]) -> Self {
        assert!(is_lyndon(w), "not a Lyndon word");
        LieElement { degree: w.len(), coeffs: BTreeMap::from([(w.to_vec(), Int::from(1))]) }
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Word, Int)>) -> Self {
        let mut e = LieElement::zero(degree);
        for (w, c) in terms {
            assert!(is_lyndon(&w) && w.len() == degree, "bad basis word");
            poly_add(&mut e.coeffs, &w, &c);
        }
        e
    }

    /// Reads a bracket tree in the basis.
    pub fn from_bracket(t: &Rooted) -> Self {
        tensor_to_lie(&expand(t), t.order() + 1).expect("brackets are Lie elements")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<Word, Int> {
        &self.coeffs
    }

    pub fn coefficient(&self, w: &[Label]) -> Int {
        self.coeffs.get(w).cloned().unwrap_or_default()
    }

    /// Expansion in the tensor algebra.
    pub fn to_tensor(&self) -> Poly {
        let mut out = Poly::new();
        for (w, c) in &self.coeffs {
            for (u, x) in basis_expansion(w) {
                poly_add(&mut out, &u, &(c * x));
            }
        }
        out
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        assert_eq!(self.degree, other.degree, "inhomogeneous sum");
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            poly_add(&mut out.coeffs, w, c);
        }
        out
    }

    pub fn scale(&self, k: &Int) -> LieElement {
        let mut out = LieElement::zero(self.degree);
        for (w, c) in &self.coeffs {
            poly_add(&mut out.coeffs, w, &(c * k));
        }
        out
    }

    /// Drops basis terms of multiplicity `> k` (the quotient `Lⁿ → L^k`).
    pub fn k_project(&self, k: usize) -> LieElement {
        LieElement {
            degree: self.degree,
            coeffs: self.coeffs.iter().filter(|(w, _)| word_multiplicity(w) <= k).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(self.coeffs.iter().map(|(w, c)| (format_bracket(&standard_bracket(w)), c))))
    }
}

/// Solves `t = Σ c_w · P_w` over Lyndon words `w`. The expansion `P_w` is `w`
/// plus lexicographically larger words, so the smallest word of what is left
/// always names the next basis coefficient.
pub fn tensor_to_lie(t: &Poly, degree: usize) -> Result<LieElement> {
    let mut rest = t.clone();
    let mut out = LieElement::zero(degree);
    while let Some((w, c)) = rest.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
        if w.len() != degree || !is_lyndon(&w) {
            return Err(Error::NotPrimitive { degree });
        }
        for (u, x) in basis_expansion(&w) {
            poly_add(&mut rest, &u, &-(&c * x));
        }
        out.coeffs.insert(w, c);
    }
    Ok(out)
}

pub fn lie_bracket(a: &LieElement, b: &LieElement) -> LieElement {
    let t = poly_commutator(&a.to_tensor(), &b.to_tensor());
    tensor_to_lie(&t, a.degree + b.degree).expect("bracket of Lie elements is Lie")
}

/// A homogeneous element of `L₁ ⊗ Lₙ₊₁`: coordinates over `(i, w)` standing
/// for `X_i ⊗ P_w`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct TensorElement {
    degree: usize,
    coeffs: BTreeMap<(Label, Word), Int>,
}

impl TensorElement {
    pub fn zero(degree: usize) -> Self {
        TensorElement { degree, coeffs: BTreeMap::new() }
    }

    /// `X_i ⊗ x`.
    pub fn simple(i: Label, x: &LieElement) -> Self {
        TensorElement {
            degree: x.degree,
            coeffs: x.coeffs.iter().map(|(w, c)| ((i, w.clone()), c.clone())).collect(),
        }
    }

    /// Degree of the right factor.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<(Label, Word), Int> {
        &self.coeffs
    }

    pub fn coefficient(&self, i: Label, w: &[Label]) -> Int {
        self.coeffs.get(&(i, w.to_vec())).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, i: Label, w: &[Label], c: &Int) {
        assert_eq!(w.len(), self.degree);
        if c.is_zero() {
            return;
        }
        let key = (i, w.to_vec());
        let e = self.coeffs.entry(key.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        assert_eq!(self.degree, other.degree, "inhomogeneous sum");
        let mut out = self.clone();
        for ((i, w), c) in &other.coeffs {
            out.add_term(*i, w, c);
        }
        out
    }

    pub fn add_simple(&mut self, i: Label, x: &LieElement, k: &Int) {
        for (w, c) in &x.coeffs {
            self.add_term(i, w, &(c * k));
        }
    }

    pub fn scale(&self, k: &Int) -> TensorElement {
        let mut out = TensorElement::zero(self.degree);
        for ((i, w), c) in &self.coeffs {
            out.add_term(*i, w, &(c * k));
        }
        out
    }

    /// Drops root-labeled terms of multiplicity `> k`.
    pub fn k_project(&self, k: usize) -> TensorElement {
        TensorElement {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .filter(|((i, w), _)| rooted_multiplicity(*i, w) <= k)
                .map(|(key, c)| (key.clone(), c.clone()))
                .collect(),
        }
    }

    /// The right factor of each `X_i ⊗ ·` component.
    pub fn components(&self) -> BTreeMap<Label, LieElement> {
        let mut out: BTreeMap<Label, LieElement> = BTreeMap::new();
        for ((i, w), c) in &self.coeffs {
            let e = out.entry(*i).or_insert_with(|| LieElement::zero(self.degree));
            poly_add(&mut e.coeffs, w, c);
        }
        out
    }

    /// Every coefficient is even.
    pub fn is_even(&self) -> bool {
        self.coeffs.values().all(|c| c.is_even())
    }

    pub fn halve(&self) -> TensorElement {
        TensorElement {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c / 2)).collect(),
        }
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(
            self.coeffs.iter().map(|((i, w), c)| (format!("x{i} (x) {}", format_bracket(&standard_bracket(w))), c)),
        ))
    }
}

/// `X_i ⊗ B ↦ [X_i, B]`.
pub fn bracket_map(x: &TensorElement) -> LieElement {
    let mut out = LieElement::zero(x.degree + 1);
    for (i, comp) in x.components() {
        out = out.add(&lie_bracket(&LieElement::generator(i), &comp));
    }
    out
}

/// An integer basis of the kernel `𝒟ₙ` of `L₁⊗Lₙ₊₁ → Lₙ₊₂`, or of its
/// multiplicity-restricted version `𝒟ₙ^k`.
#[derive(Clone, Debug)]
pub struct BracketKernel {
    pub m: u32,
    pub n: usize,
    pub k: Option<usize>,
    /// Coordinate order of the domain: pairs `(i, w)` for `X_i ⊗ P_w`.
    pub domain: Vec<(Label, Word)>,
    /// Hermite-reduced basis, one element per row.
    pub basis: Vec<TensorElement>,
    /// Invariant factors of the cokernel of the (restricted) bracket map.
    pub cokernel: (usize, Vec<Int>),
    lattice: Lattice,
}

impl BracketKernel {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn vector(&self, x: &TensorElement) -> Vec<Int> {
        self.domain.iter().map(|(i, w)| x.coefficient(*i, w)).collect()
    }

    /// Coordinates of `x` in the kernel basis, if `x ∈ 𝒟`.
    pub fn coordinates(&self, x: &TensorElement) -> Option<Vec<Int>> {
        if x.degree != self.n + 1 || x.coeffs.keys().any(|key| !self.domain.contains(key)) {
            return None;
        }
        self.lattice.solve(&self.vector(x))
    }

    pub fn contains(&self, x: &TensorElement) -> bool {
        self.coordinates(x).is_some()
    }
}

pub fn tensor_domain(m: u32, n: usize, k: Option<usize>) -> Vec<(Label, Word)> {
    let words = lyndon_words(m, n + 1);
    let mut out = Vec::new();
    for i in 1..=m {
        for w in &words {
            if k.map_or(true, |k| rooted_multiplicity(i, w) <= k) {
                out.push((i, w.clone()));
            }
        }
    }
    out
}

pub fn bracket_kernel(m: u32, n: usize, k: Option<usize>) -> BracketKernel {
    let domain = tensor_domain(m, n, k);
    let target: Vec<Word> =
        lyndon_words(m, n + 2).into_iter().filter(|w| k.map_or(true, |k| word_multiplicity(w) <= k)).collect();
    let index: BTreeMap<&Word, usize> = target.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let rows: Vec<Vec<Int>> = domain
        .iter()
        .map(|(i, w)| {
            let mut x = TensorElement::zero(n + 1);
            x.add_term(*i, w, &Int::from(1));
            let mut y = bracket_map(&x);
            if let Some(k) = k {
                y = y.k_project(k);
            }
            let mut row = vec![Int::zero(); target.len()];
            for (u, c) in y.coeffs() {
                row[index[u]] = c.clone();
            }
            row
        })
        .collect();
    let a = Mat::from_rows(target.len(), rows);
    let kernel = zmat::left_kernel(&a);
    let cokernel = zmat::invariant_factors(&a);
    let basis = kernel
        .rows()
        .map(|r| {
            let mut x = TensorElement::zero(n + 1);
            for ((i, w), c) in domain.iter().zip(r) {
                x.add_term(*i, w, c);
            }
            x
        })
        .collect();
    let lattice = Lattice::new(&kernel);
    BracketKernel { m, n, k, domain, basis, cokernel, lattice }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[Label]) -> Word {
        s.to_vec()
    }

    #[test]
    fn small_bases() {
        assert_eq!(lyndon_words(2, 2), vec![w(&[1, 2])]);
        assert_eq!(lyndon_words(2, 3), vec![w(&[1, 1, 2]), w(&[1, 2, 2])]);
        assert!(lyndon_words(1, 2).is_empty());
        assert_eq!(format_bracket(&standard_bracket(&[1, 1, 2])), "[x1,[x1,x2]]");
    }

    #[test]
    fn bracket_examples() {
        let x1 = LieElement::generator(1);
        let x2 = LieElement::generator(2);
        assert_eq!(lie_bracket(&x2, &x1), LieElement::basis(&[1, 2]).scale(&Int::from(-1)));
        assert!(lie_bracket(&x1, &x1).is_zero());
        let inner = lie_bracket(&x1, &x2);
        assert_eq!(lie_bracket(&x1, &inner), LieElement::basis(&[1, 1, 2]));
    }

    #[test]
    fn tensor_to_lie_examples() {
        let p = Poly::from([(w(&[1, 2]), Int::from(1)), (w(&[2, 1]), Int::from(-1))]);
        assert_eq!(tensor_to_lie(&p, 2).unwrap(), LieElement::basis(&[1, 2]));
        let q = Poly::from([(w(&[1, 2]), Int::from(1))]);
        assert_eq!(tensor_to_lie(&q, 2), Err(Error::NotPrimitive { degree: 2 }));
        let r = Poly::from([
            (w(&[1, 1, 2]), Int::from(1)),
            (w(&[1, 2, 1]), Int::from(-2)),
            (w(&[2, 1, 1]), Int::from(1)),
        ]);
        assert_eq!(tensor_to_lie(&r, 3).unwrap(), LieElement::basis(&[1, 1, 2]));
    }

    #[test]
    fn bracket_map_examples() {
        let mut a = TensorElement::zero(2);
        a.add_term(1, &[1, 2], &Int::from(1));
        assert_eq!(bracket_map(&a), LieElement::basis(&[1, 1, 2]));
        let mut b = TensorElement::zero(1);
        b.add_term(1, &[2], &Int::from(1));
        b.add_term(2, &[1], &Int::from(1));
        assert!(bracket_map(&b).is_zero());
        let mut c = TensorElement::zero(1);
        c.add_term(1, &[1], &Int::from(1));
        assert!(bracket_map(&c).is_zero());
    }

    #[test]
    fn kernel_ranks() {
        let d = bracket_kernel(2, 0, None);
        assert_eq!(d.rank(), 3);
        let mut sym = TensorElement::zero(1);
        sym.add_term(1, &[2], &Int::from(1));
        sym.add_term(2, &[1], &Int::from(1));
        assert!(d.contains(&sym));
        assert_eq!(bracket_kernel(2, 1, None).rank(), 0);
        assert_eq!(bracket_kernel(3, 1, None).rank(), 1);
    }

    #[test]
    fn k_projection_examples() {
        let e = LieElement::basis(&[1, 1, 2]);
        assert!(e.k_project(1).is_zero());
        assert_eq!(e.k_project(2), e);
        let mut t = TensorElement::zero(2);
        t.add_term(1, &[1, 2], &Int::from(1));
        t.add_term(2, &[1, 3], &Int::from(1));
        let mut expect = TensorElement::zero(2);
        expect.add_term(2, &[1, 3], &Int::from(1));
        assert_eq!(t.k_project(1), expect);
    }
}
