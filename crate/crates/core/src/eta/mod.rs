//! Summation maps `ηₙ`, `ηₙ^k` and the Milnor invariants they compute.

mod kernel;
mod magnus;

use crate::error::{Error, Result};
use crate::forest::{Convention, DecoratedTree, Graph, IntersectionForest, Kind};
use crate::lie::{bracket_map, LieElement, TensorElement};
use crate::zmat::Int;

pub use kernel::{arf_classes, eta_kernel, ArfClass, EtaKernel, KernelGenerator};
pub use magnus::{
    magnus_expand, milnor_from_longitudes, parse_longitudes, parse_word, Letter, LongitudeData, MagnusSeries,
    MilnorOutcome, MilnorValue,
};

/// `Σ_v X_{ℓ(v)} ⊗ B_v` over the univalent vertices of a framed tree.
fn eta_framed(t: &DecoratedTree, conv: Convention) -> TensorElement {
    let g = Graph::from_tree(t);
    let mut out = TensorElement::zero(t.order() + 1);
    for &v in &g.leaves {
        let b = g.branch(v, g.stem(v), conv);
        let label = g.label(v).expect("leaf");
        out.add_simple(label, &LieElement::from_bracket(&b), &Int::from(1));
    }
    out
}

/// `η` of a single framed tree or ∞-tree, `η(J^∞) = ½·η(⟨J,J⟩)`.
pub fn eta_tree(t: &DecoratedTree, conv: Convention) -> Result<TensorElement> {
    match t {
        DecoratedTree::Framed(..) => Ok(eta_framed(t, conv)),
        DecoratedTree::Twisted(j) => {
            let doubled = eta_framed(&DecoratedTree::Framed(j.clone(), j.clone()), conv);
            if !doubled.is_even() {
                return Err(Error::OddCoefficient(t.to_string()));
            }
            Ok(doubled.halve())
        }
        DecoratedTree::Rooted(_) => Err(Error::RootedInForest(t.to_string())),
    }
}

fn expected_order(t: &DecoratedTree, n: usize) -> Option<usize> {
    match t.kind() {
        Kind::Twisted if n % 2 == 0 => Some(n / 2),
        Kind::Twisted => None,
        _ => Some(n),
    }
}

fn has_order(t: &DecoratedTree, n: usize) -> bool {
    expected_order(t, n) == Some(t.order())
}

pub fn eta_with(f: &IntersectionForest, n: usize, conv: Convention) -> Result<TensorElement> {
    let mut out = TensorElement::zero(n + 1);
    for (t, c) in f.terms() {
        if !has_order(t, n) {
            return Err(Error::OrderMismatch {
                tree: t.to_string(),
                found: t.order(),
                expected: expected_order(t, n).unwrap_or(n),
            });
        }
        out = out.add(&eta_tree(t, conv)?.scale(c));
    }
    Ok(out)
}

pub fn eta(f: &IntersectionForest, n: usize) -> Result<TensorElement> {
    eta_with(f, n, Convention::Standard)
}

/// `ηₙ^k`: trees of multiplicity `> k` are dropped, the rest summed and
/// projected to `L₁ ⊗ L^k_{n+1}`.
pub fn eta_k_with(f: &IntersectionForest, n: usize, k: usize, conv: Convention) -> Result<TensorElement> {
    let kept = f.filter(|t| t.multiplicity() <= k);
    Ok(eta_with(&kept, n, conv)?.k_project(k))
}

pub fn eta_k(f: &IntersectionForest, n: usize, k: usize) -> Result<TensorElement> {
    eta_k_with(f, n, k, Convention::Standard)
}

/// The bracket of a tensor, projected to `L^k` when a bound is given.
pub fn bracket_value(x: &TensorElement, k: Option<usize>) -> LieElement {
    let b = bracket_map(x);
    match k {
        Some(k) => b.k_project(k),
        None => b,
    }
}

/// `μₙ = ηₙ ∘ τₙ^∞` (or its `k`-repeating version) of a forest playing the
/// role of `t(𝒲)`; trees of other orders are ignored.
pub fn milnor_from_forest(
    f: &IntersectionForest,
    n: usize,
    k: Option<usize>,
    conv: Convention,
) -> Result<TensorElement> {
    let selected = f.filter(|t| has_order(t, n));
    let value = match k {
        Some(k) => eta_k_with(&selected, n, k, conv)?,
        None => eta_with(&selected, n, conv)?,
    };
    if !bracket_value(&value, k).is_zero() {
        return Err(Error::BracketNonzero);
    }
    Ok(value)
}
