//! Edge collapses on trees and the mono-labeling of forests.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest::{format_terms, DecoratedTree, Graph, IntersectionForest, Kind, Label, Rooted};
use crate::forest::Convention;
use crate::zmat::Int;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollapseCase {
    Framed,
    TwistedAdjacentRoot,
    TwistedNonAdjacent,
}

impl fmt::Display for CollapseCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CollapseCase::Framed => "framed",
            CollapseCase::TwistedAdjacentRoot => "twisted-adjacent-root",
            CollapseCase::TwistedNonAdjacent => "twisted-non-adjacent",
        })
    }
}

/// One collapse of an `i`-labeled edge; `output` is the raw term list before
/// coefficients are merged.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CollapseStep {
    pub input: DecoratedTree,
    pub coefficient: Int,
    pub label: Label,
    /// Position of the collapsed univalent vertex among the leaves, left to right.
    pub vertex: usize,
    pub case: CollapseCase,
    pub output: Vec<(Int, DecoratedTree)>,
}

impl CollapseStep {
    /// The output terms merged into a forest.
    pub fn forest(&self, m: u32) -> Result<IntersectionForest> {
        IntersectionForest::from_terms(m, self.output.iter().cloned())
    }
}

impl fmt::Display for CollapseStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let input = format_terms([(self.input.to_string(), &self.coefficient)]);
        let out: Vec<String> = self.output.iter().map(|(c, t)| format_terms([(t.to_string(), c)])).collect();
        let out = if out.is_empty() { "0".to_string() } else { out.join(" + ") };
        write!(f, "{input} --collapse {}--> {out}", self.label)
    }
}

fn canonical_term(c: &Int, t: DecoratedTree) -> (Int, DecoratedTree) {
    let can = t.canonicalize();
    (c * Int::from(can.sign), can.tree)
}

fn leaf_label(t: &DecoratedTree, vertex: usize) -> Result<(Graph, usize, Label)> {
    let g = Graph::from_tree(t);
    let v = *g.leaves.get(vertex).ok_or_else(|| Error::NoSuchVertex { tree: t.to_string(), vertex, label: 0 })?;
    let label = g.label(v).expect("leaf");
    Ok((g, v, label))
}

/// `⟨(J₁,J₂),i⟩ ↦ ±⟨J₁,J₂⟩` about the edge of the given univalent vertex.
pub fn collapse_framed_edge(t: &DecoratedTree, vertex: usize, coefficient: &Int) -> Result<CollapseStep> {
    if t.kind() != Kind::Framed {
        return Err(Error::InvalidParameter(format!("{t} is not a framed tree")));
    }
    if t.order() == 0 {
        return Err(Error::CollapseOrderZero(t.to_string()));
    }
    let (g, v, label) = leaf_label(t, vertex)?;
    let Rooted::Node(j1, j2) = g.branch(v, g.stem(v), Convention::Standard) else {
        unreachable!("the stem of a leaf in a positive-order tree is trivalent")
    };
    let q = DecoratedTree::Framed(*j1, *j2);
    let output = vec![canonical_term(coefficient, q.clone()), canonical_term(&-coefficient, q)];
    Ok(CollapseStep { input: t.clone(), coefficient: coefficient.clone(), label, vertex, case: CollapseCase::Framed, output })
}

/// Removes the `idx`-th leaf (in printed order) from a rooted tree of positive
/// order; reports whether the leaf hung directly off the root.
fn remove_leaf(t: &Rooted, idx: usize) -> (Rooted, bool) {
    fn go(t: &Rooted, idx: &mut usize, depth: usize) -> Option<(Rooted, bool)> {
        match t {
            Rooted::Leaf(_) => None,
            Rooted::Node(a, b) => {
                for (this, other, left) in [(a, b, true), (b, a, false)] {
                    let count = this.labels().len();
                    if *idx >= count {
                        *idx -= count;
                        continue;
                    }
                    if this.is_leaf() {
                        return Some(((**other).clone(), depth == 0));
                    }
                    let (sub, adj) = go(this, idx, depth + 1)?;
                    let node = if left { Rooted::node(sub, (**other).clone()) } else { Rooted::node((**other).clone(), sub) };
                    return Some((node, adj));
                }
                None
            }
        }
    }
    let mut i = idx;
    go(t, &mut i, 0).expect("leaf index in range")
}

/// Collapse of an `i`-labeled edge of `J^∞` with coefficient `ω`.
///
/// Adjacent to the root, `J = (I,i)` gives `ω⟨I,I⟩`. Otherwise the result is
/// two copies of `ω·I^∞` plus `ω⟨I,I⟩`; in `strict` mode the copies carry
/// opposite signs.
pub fn collapse_twisted_edge(t: &DecoratedTree, vertex: usize, omega: &Int, strict: bool) -> Result<CollapseStep> {
    let DecoratedTree::Twisted(j) = t else {
        return Err(Error::InvalidParameter(format!("{t} is not an ∞-tree")));
    };
    if j.order() == 0 {
        return Err(Error::CollapseOrderZero(t.to_string()));
    }
    let labels = j.labels();
    let label = *labels.get(vertex).ok_or_else(|| Error::NoSuchVertex { tree: t.to_string(), vertex, label: 0 })?;
    let (i, adjacent) = remove_leaf(j, vertex);
    let inner = DecoratedTree::Framed(i.clone(), i.clone());
    let (case, output) = if adjacent {
        (CollapseCase::TwistedAdjacentRoot, vec![canonical_term(omega, inner)])
    } else {
        let inf = DecoratedTree::Twisted(i);
        let second = if strict { -omega } else { omega.clone() };
        (
            CollapseCase::TwistedNonAdjacent,
            vec![canonical_term(omega, inf.clone()), canonical_term(&second, inf), canonical_term(omega, inner)],
        )
    };
    Ok(CollapseStep { input: t.clone(), coefficient: omega.clone(), label, vertex, case, output })
}

/// Dispatches on the tree kind.
pub fn collapse(t: &DecoratedTree, vertex: usize, coefficient: &Int, strict: bool) -> Result<CollapseStep> {
    match t.kind() {
        Kind::Framed => collapse_framed_edge(t, vertex, coefficient),
        Kind::Twisted => collapse_twisted_edge(t, vertex, coefficient, strict),
        Kind::Rooted => Err(Error::RootedInForest(t.to_string())),
    }
}

/// The leftmost univalent vertex carrying `label`.
pub fn find_vertex(t: &DecoratedTree, label: Label) -> Result<usize> {
    t.labels()
        .iter()
        .position(|&l| l == label)
        .ok_or_else(|| Error::NoSuchVertex { tree: t.to_string(), vertex: 0, label })
}

/// The label a tree is mono-labeled towards: the smallest label of maximal
/// multiplicity. Collapsing other labels never changes this choice.
pub fn target_label(t: &DecoratedTree) -> Label {
    let labels = t.labels();
    let mut best = (0, Label::MAX);
    for &l in &labels {
        let r = labels.iter().filter(|&&x| x == l).count();
        if r > best.0 || (r == best.0 && l < best.1) {
            best = (r, l);
        }
    }
    best.1
}

/// Off-label univalent vertices, doubled on ∞-trees; bounds the number of
/// steps `monoize_forest` spends on a term.
pub fn off_label_weight(t: &DecoratedTree) -> usize {
    let j = target_label(t);
    let off = t.labels().iter().filter(|&&l| l != j).count();
    if t.kind() == Kind::Twisted {
        2 * off
    } else {
        off
    }
}

#[derive(Clone, Debug)]
pub struct Monoized {
    pub forest: IntersectionForest,
    pub trace: Vec<CollapseStep>,
}

impl Monoized {
    pub fn trace_text(&self) -> String {
        self.trace.iter().map(|s| format!("{s}\n")).collect()
    }
}

/// Collapses off-label edges until every tree is mono-labeled. Every tree must
/// have a label of multiplicity at least `k+1`.
pub fn monoize_forest(f: &IntersectionForest, k: usize, strict: bool) -> Result<Monoized> {
    for (t, _) in f.terms() {
        if t.multiplicity() < k + 1 {
            return Err(Error::HypothesisViolation { tree: t.to_string(), k });
        }
    }
    let mut forest = f.clone();
    let mut trace = Vec::new();
    loop {
        let next = forest.terms().find(|(t, _)| !t.stats(f.m()).mono_labeled).map(|(t, c)| (t.clone(), c.clone()));
        let Some((t, c)) = next else { break };
        let j = target_label(&t);
        let vertex = t.labels().iter().position(|&l| l != j).expect("not mono-labeled");
        let step = collapse(&t, vertex, &c, strict)?;
        forest.add_term(-c, &t)?;
        for (a, s) in &step.output {
            forest.add_term(a.clone(), s)?;
        }
        trace.push(step);
    }
    Ok(Monoized { forest, trace })
}

/// Whether the merged output of a step is the zero forest.
pub fn output_is_zero(step: &CollapseStep, m: u32) -> bool {
    step.forest(m).map(|f| f.is_empty()).unwrap_or(false)
}
