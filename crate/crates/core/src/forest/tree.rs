use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Label = u32;

/// A rooted unitrivalent tree written as a non-associative bracketing.
///
/// The left/right order of the two children encodes the cyclic orientation
/// `(parent, left, right)` at the trivalent vertex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Rooted {
    Leaf(Label),
    Node(Box<Rooted>, Box<Rooted>),
}

// Brackets sort before leaves, so `((1,2),3)` is preferred over `(3,(1,2))`.
impl Ord for Rooted {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rooted::Leaf(a), Rooted::Leaf(b)) => a.cmp(b),
            (Rooted::Node(..), Rooted::Leaf(_)) => Ordering::Less,
            (Rooted::Leaf(_), Rooted::Node(..)) => Ordering::Greater,
            (Rooted::Node(a1, b1), Rooted::Node(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
        }
    }
}

impl PartialOrd for Rooted {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Rooted {
    pub fn leaf(label: Label) -> Self {
        Rooted::Leaf(label)
    }

    pub fn node(a: Rooted, b: Rooted) -> Self {
        Rooted::Node(Box::new(a), Box::new(b))
    }

    /// Number of trivalent vertices.
    pub fn order(&self) -> usize {
        match self {
            Rooted::Leaf(_) => 0,
            Rooted::Node(a, b) => 1 + a.order() + b.order(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Rooted::Leaf(_) => 0,
            Rooted::Node(a, b) => 1 + a.height().max(b.height()),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Rooted::Leaf(_))
    }

    /// Labels in left-to-right order.
    pub fn labels(&self) -> Vec<Label> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut Vec<Label>) {
        match self {
            Rooted::Leaf(l) => out.push(*l),
            Rooted::Node(a, b) => {
                a.collect_labels(out);
                b.collect_labels(out);
            }
        }
    }

    pub fn max_label(&self) -> Label {
        self.labels().into_iter().max().unwrap_or(0)
    }

    /// Sorts children at every vertex; returns the sign `(-1)^{#swaps}` and
    /// whether some vertex has two equal branches.
    pub fn canonical(&self) -> (Rooted, i8, bool) {
        match self {
            Rooted::Leaf(_) => (self.clone(), 1, false),
            Rooted::Node(a, b) => {
                let (ca, sa, ta) = a.canonical();
                let (cb, sb, tb) = b.canonical();
                let torsion = ta || tb || ca == cb;
                match ca.cmp(&cb) {
                    Ordering::Greater => (Rooted::node(cb, ca), -sa * sb, torsion),
                    _ => (Rooted::node(ca, cb), sa * sb, torsion),
                }
            }
        }
    }

    /// Mirror image: every cyclic orientation reversed.
    pub fn mirror(&self) -> Rooted {
        match self {
            Rooted::Leaf(_) => self.clone(),
            Rooted::Node(a, b) => Rooted::node(b.mirror(), a.mirror()),
        }
    }
}

impl fmt::Display for Rooted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rooted::Leaf(l) => write!(f, "{l}"),
            Rooted::Node(a, b) => write!(f, "({a},{b})"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Framed,
    Rooted,
    Twisted,
}

/// A framed tree `⟨I,J⟩`, a rooted tree `J`, or an ∞-tree `J^∞`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum DecoratedTree {
    Framed(Rooted, Rooted),
    Rooted(Rooted),
    Twisted(Rooted),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Canonical {
    pub tree: DecoratedTree,
    pub sign: i8,
    /// Some orientation-reversing symmetry fixes the tree, so AS forces `2t = 0`.
    pub two_torsion: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TreeStats {
    pub order: usize,
    pub degree: usize,
    /// `r[i-1]` is the multiplicity of label `i`.
    pub r: Vec<usize>,
    pub r_max: usize,
    pub mono_labeled: bool,
}

/// Reading order used when a tree is re-rooted at a vertex.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Children follow the stored cyclic order after the new parent edge.
    #[default]
    Standard,
    /// Children follow the reversed cyclic order.
    Mirror,
}

impl DecoratedTree {
    pub fn kind(&self) -> Kind {
        match self {
            DecoratedTree::Framed(..) => Kind::Framed,
            DecoratedTree::Rooted(_) => Kind::Rooted,
            DecoratedTree::Twisted(_) => Kind::Twisted,
        }
    }

    pub fn order(&self) -> usize {
        match self {
            DecoratedTree::Framed(a, b) => a.order() + b.order(),
            DecoratedTree::Rooted(j) | DecoratedTree::Twisted(j) => j.order(),
        }
    }

    /// Labels in printed order (for `J^∞`, the labels of `J` once).
    pub fn labels(&self) -> Vec<Label> {
        match self {
            DecoratedTree::Framed(a, b) => {
                let mut l = a.labels();
                l.extend(b.labels());
                l
            }
            DecoratedTree::Rooted(j) | DecoratedTree::Twisted(j) => j.labels(),
        }
    }

    pub fn max_label(&self) -> Label {
        self.labels().into_iter().max().unwrap_or(0)
    }

    pub fn stats(&self, m: u32) -> TreeStats {
        let labels = self.labels();
        let width = (m as usize).max(labels.iter().copied().max().unwrap_or(0) as usize);
        let mut r = vec![0usize; width];
        for l in &labels {
            r[*l as usize - 1] += 1;
        }
        if let DecoratedTree::Twisted(_) = self {
            for x in &mut r {
                *x *= 2;
            }
        }
        let order = self.order();
        TreeStats {
            order,
            degree: order + 1,
            r_max: r.iter().copied().max().unwrap_or(0),
            mono_labeled: labels.windows(2).all(|w| w[0] == w[1]),
            r,
        }
    }

    /// Multiplicity `r(T)`: the largest label multiplicity (doubled on ∞-trees).
    pub fn multiplicity(&self) -> usize {
        let labels = self.labels();
        let mut counts = std::collections::BTreeMap::new();
        for l in labels {
            *counts.entry(l).or_insert(0usize) += 1;
        }
        let r = counts.values().copied().max().unwrap_or(0);
        if matches!(self, DecoratedTree::Twisted(_)) {
            2 * r
        } else {
            r
        }
    }

    pub fn canonicalize(&self) -> Canonical {
        match self {
            DecoratedTree::Rooted(j) => {
                let (c, s, t) = j.canonical();
                Canonical { tree: DecoratedTree::Rooted(c), sign: if t { 1 } else { s }, two_torsion: t }
            }
            // (-J)^∞ = J^∞: the orientation of an ∞-tree carries no sign.
            DecoratedTree::Twisted(j) => {
                let (c, _, _) = j.canonical();
                Canonical { tree: DecoratedTree::Twisted(c), sign: 1, two_torsion: false }
            }
            DecoratedTree::Framed(..) => canonical_framed(&Graph::from_tree(self)),
        }
    }

    pub fn validate_labels(&self, m: u32) -> Result<()> {
        match self.labels().into_iter().find(|&l| l == 0 || l > m) {
            Some(label) => Err(Error::LabelOutOfRange { label, m }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoratedTree::Framed(a, b) => write!(f, "<{a},{b}>"),
            DecoratedTree::Rooted(j) => write!(f, "{j}"),
            DecoratedTree::Twisted(j) => write!(f, "{j}^inf"),
        }
    }
}

fn as_rooted(t: &DecoratedTree) -> Result<&Rooted> {
    match t {
        DecoratedTree::Rooted(j) => Ok(j),
        other => Err(Error::NotRooted(other.to_string())),
    }
}

/// `(I,J)`: identify the two roots and attach a new root edge.
pub fn rooted_product(i: &DecoratedTree, j: &DecoratedTree) -> Result<DecoratedTree> {
    Ok(DecoratedTree::Rooted(Rooted::node(as_rooted(i)?.clone(), as_rooted(j)?.clone())))
}

/// `⟨I,J⟩`: glue the two root edges at a non-vertex point.
pub fn inner_product(i: &DecoratedTree, j: &DecoratedTree) -> Result<DecoratedTree> {
    Ok(DecoratedTree::Framed(as_rooted(i)?.clone(), as_rooted(j)?.clone()))
}

#[derive(Clone, Debug)]
pub(crate) enum Vertex {
    Leaf(Label, usize),
    /// Root or ∞ vertex.
    Root(usize),
    /// Neighbours in cyclic order.
    Tri([usize; 3]),
}

/// Adjacency form of a decorated tree, used for re-rooting.
#[derive(Clone, Debug)]
pub(crate) struct Graph {
    pub verts: Vec<Vertex>,
    /// Leaf vertices in printed left-to-right order.
    pub leaves: Vec<usize>,
}

const UNSET: usize = usize::MAX;

impl Graph {
    pub fn from_tree(t: &DecoratedTree) -> Graph {
        let mut g = Graph { verts: Vec::new(), leaves: Vec::new() };
        match t {
            DecoratedTree::Framed(a, b) => {
                let ra = g.attach(a, UNSET);
                let rb = g.attach(b, ra);
                g.set_parent(ra, rb);
            }
            DecoratedTree::Rooted(j) | DecoratedTree::Twisted(j) => {
                g.verts.push(Vertex::Root(UNSET));
                let r = g.attach(j, 0);
                g.verts[0] = Vertex::Root(r);
            }
        }
        g
    }

    fn attach(&mut self, t: &Rooted, parent: usize) -> usize {
        let idx = self.verts.len();
        match t {
            Rooted::Leaf(l) => {
                self.verts.push(Vertex::Leaf(*l, parent));
                self.leaves.push(idx);
            }
            Rooted::Node(a, b) => {
                self.verts.push(Vertex::Tri([parent, UNSET, UNSET]));
                let ia = self.attach(a, idx);
                let ib = self.attach(b, idx);
                self.verts[idx] = Vertex::Tri([parent, ia, ib]);
            }
        }
        idx
    }

    fn set_parent(&mut self, v: usize, p: usize) {
        match &mut self.verts[v] {
            Vertex::Leaf(_, n) | Vertex::Root(n) => *n = p,
            Vertex::Tri(n) => n[0] = p,
        }
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        match &self.verts[v] {
            Vertex::Leaf(_, n) | Vertex::Root(n) => vec![*n],
            Vertex::Tri(n) => n.to_vec(),
        }
    }

    pub fn label(&self, v: usize) -> Option<Label> {
        match self.verts[v] {
            Vertex::Leaf(l, _) => Some(l),
            _ => None,
        }
    }

    /// The rooted tree hanging at `to`, seen along the edge from `from`.
    pub fn branch(&self, from: usize, to: usize, conv: Convention) -> Rooted {
        match &self.verts[to] {
            Vertex::Leaf(l, _) => Rooted::Leaf(*l),
            Vertex::Root(_) => panic!("branch runs into the root vertex"),
            Vertex::Tri(n) => {
                let k = n.iter().position(|&x| x == from).expect("not adjacent");
                let (a, b) = match conv {
                    Convention::Standard => (n[(k + 1) % 3], n[(k + 2) % 3]),
                    Convention::Mirror => (n[(k + 2) % 3], n[(k + 1) % 3]),
                };
                Rooted::node(self.branch(to, a, conv), self.branch(to, b, conv))
            }
        }
    }

    /// Undirected edges not touching a root vertex.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (v, vert) in self.verts.iter().enumerate() {
            if matches!(vert, Vertex::Root(_)) {
                continue;
            }
            for u in self.neighbors(v) {
                if u > v && !matches!(self.verts[u], Vertex::Root(_)) {
                    out.push((v, u));
                }
            }
        }
        out
    }

    /// The neighbour of a univalent vertex.
    pub fn stem(&self, leaf: usize) -> usize {
        self.neighbors(leaf)[0]
    }
}

fn canonical_framed(g: &Graph) -> Canonical {
    let mut best: Option<((usize, Rooted, Rooted), i8)> = None;
    let mut sign_conflict = false;
    for (u, v) in g.edges() {
        let (a, sa, _) = g.branch(v, u, Convention::Standard).canonical();
        let (b, sb, _) = g.branch(u, v, Convention::Standard).canonical();
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let key = (a.height().max(b.height()), a, b);
        let sign = sa * sb;
        match &best {
            Some((k, s)) if *k == key => sign_conflict |= *s != sign,
            Some((k, _)) if *k < key => {}
            _ => best = Some((key, sign)),
        }
    }
    let ((_, a, b), sign) = best.expect("framed tree has an edge");
    let torsion = sign_conflict || has_equal_branches(g);
    Canonical { tree: DecoratedTree::Framed(a, b), sign: if torsion { 1 } else { sign }, two_torsion: torsion }
}

fn has_equal_branches(g: &Graph) -> bool {
    g.verts.iter().enumerate().any(|(w, vert)| match vert {
        Vertex::Tri(n) => {
            let br: Vec<Rooted> = n.iter().map(|&x| g.branch(w, x, Convention::Standard).canonical().0).collect();
            br[0] == br[1] || br[1] == br[2] || br[0] == br[2]
        }
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::parse_tree;

    fn t(s: &str) -> DecoratedTree {
        parse_tree(s).unwrap()
    }

    #[test]
    fn framed_halves_carry_no_sign() {
        let c = t("<2,1>").canonicalize();
        assert_eq!(c.tree, t("<1,2>"));
        assert_eq!(c.sign, 1);
        assert!(!c.two_torsion);
    }

    #[test]
    fn one_as_swap() {
        let c = t("<(2,1),3>").canonicalize();
        assert_eq!(c.tree, t("<(1,2),3>"));
        assert_eq!(c.sign, -1);
    }

    #[test]
    fn fixed_by_a_swap_is_torsion() {
        let c = t("<(1,1),1>").canonicalize();
        assert_eq!(c.tree, t("<(1,1),1>"));
        assert_eq!(c.sign, 1);
        assert!(c.two_torsion);
        assert!(t("<(1,1),(2,2)>").canonicalize().two_torsion);
        assert!(!t("<(1,2),(1,2)>").canonicalize().two_torsion);
    }

    #[test]
    fn splitting_edge_is_irrelevant() {
        // the Y-tree written from each leaf edge
        let a = t("<(1,2),3>").canonicalize();
        let b = t("<(2,3),1>").canonicalize();
        let c = t("<(3,1),2>").canonicalize();
        assert_eq!((a.tree.clone(), a.sign), (b.tree.clone(), b.sign));
        assert_eq!((a.tree, a.sign), (c.tree, c.sign));
        // H-tree prefers the central edge
        let h = t("<((1,2),2),1>").canonicalize();
        assert_eq!(h.tree, t("<(1,2),(1,2)>"));
    }

    #[test]
    fn stats_examples() {
        let s = t("<(1,2),2>").stats(2);
        assert_eq!((s.order, s.degree, s.r.clone(), s.r_max, s.mono_labeled), (1, 2, vec![1, 2], 2, false));
        let s = t("(1,2)^inf").stats(2);
        assert_eq!((s.order, s.r.clone(), s.r_max), (1, vec![2, 2], 2));
        let s = t("<1,2>").stats(2);
        assert_eq!((s.order, s.degree, s.r_max, s.mono_labeled), (0, 1, 1, false));
        assert!(t("<(3,3),3>").stats(3).mono_labeled);
    }

    #[test]
    fn products() {
        let one = DecoratedTree::Rooted(Rooted::leaf(1));
        let two = DecoratedTree::Rooted(Rooted::leaf(2));
        let p = rooted_product(&one, &two).unwrap();
        assert_eq!(p.to_string(), "(1,2)");
        assert_eq!(p.order(), 1);
        let pp = rooted_product(&p, &p).unwrap();
        assert_eq!(pp.order(), 3);
        let f = inner_product(&p, &p).unwrap();
        assert_eq!(f.to_string(), "<(1,2),(1,2)>");
        assert_eq!(f.order(), 2);
        assert_eq!(inner_product(&one, &two).unwrap().order(), 0);
        assert!(matches!(inner_product(&f, &one), Err(Error::NotRooted(_))));
    }

    #[test]
    fn twisted_orientation_is_ignored() {
        let a = t("((2,1),3)^inf").canonicalize();
        assert_eq!(a.tree, t("((1,2),3)^inf"));
        assert_eq!(a.sign, 1);
    }
}
