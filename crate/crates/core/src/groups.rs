//! The tree groups `𝒯ₙ`, `𝒯ₙ^∞` and `𝒯ₙ^{k,∞}` as presented abelian groups.
//!
//! Generators are canonical trees, so AS is already built into the
//! generator set; what is left of it is `2t = 0` for trees fixed by an
//! orientation-reversing symmetry. The remaining relation families are
//! enumerated instance by instance and deduplicated up to sign.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};
use once_cell::sync::Lazy;
use parking_lot::Mutex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest::{DecoratedTree, Graph, IntersectionForest, Kind, Label, Rooted};
use crate::forest::Convention;
use crate::zmat::{sparse_add, Int, PresentedGroup, SparseVec, Summand};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Framed,
    Twisted,
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "framed" => Ok(Flavor::Framed),
            "twisted" => Ok(Flavor::Twisted),
            other => Err(Error::InvalidParameter(format!("unknown flavor '{other}'"))),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Framed => "framed",
            Flavor::Twisted => "twisted",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct GroupSpec {
    pub m: u32,
    pub n: usize,
    pub flavor: Flavor,
    /// Multiplicity bound; `None` for the full group.
    pub k: Option<usize>,
}

impl GroupSpec {
    pub fn new(m: u32, n: usize, flavor: Flavor, k: Option<usize>) -> Self {
        GroupSpec { m, n, flavor, k }
    }

    fn admits_multiplicity(&self, r: usize) -> bool {
        self.k.map_or(true, |k| r <= k)
    }

    /// The τ selection rule: trees of the generating orders (and multiplicity
    /// at most `k`) count, everything else is ignored.
    pub fn selects(&self, t: &DecoratedTree) -> bool {
        let order_ok = match t.kind() {
            Kind::Framed => t.order() == self.n,
            Kind::Twisted => self.flavor == Flavor::Twisted && self.n % 2 == 0 && 2 * t.order() == self.n,
            Kind::Rooted => false,
        };
        order_ok && self.admits_multiplicity(t.multiplicity())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    /// `2t = 0` for a tree fixed by an orientation-reversing symmetry.
    AsTorsion,
    Ihx,
    BoundaryTwist,
    TwistedIhx,
    InteriorTwist,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub row: SparseVec,
}

static ROOTED_TREES: Lazy<Mutex<HashMap<(usize, u32), Vec<Rooted>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// All canonical rooted trees of the given order with labels in `1..=m`.
pub fn rooted_trees(order: usize, m: u32) -> Vec<Rooted> {
    if let Some(v) = ROOTED_TREES.lock().get(&(order, m)) {
        return v.clone();
    }
    let out: Vec<Rooted> = if order == 0 {
        (1..=m).map(Rooted::Leaf).collect()
    } else {
        let mut set = BTreeSet::new();
        for a in 0..order {
            let left = rooted_trees(a, m);
            let right = rooted_trees(order - 1 - a, m);
            for x in &left {
                for y in &right {
                    if x <= y {
                        set.insert(Rooted::node(x.clone(), y.clone()));
                    }
                }
            }
        }
        set.into_iter().collect()
    };
    ROOTED_TREES.lock().insert((order, m), out.clone());
    out
}

pub fn framed_trees(order: usize, m: u32) -> Vec<DecoratedTree> {
    let mut set = BTreeSet::new();
    for r in rooted_trees(order, m) {
        for l in 1..=m {
            set.insert(DecoratedTree::Framed(r.clone(), Rooted::Leaf(l)).canonicalize().tree);
        }
    }
    set.into_iter().collect()
}

pub fn enumerate_generators(spec: &GroupSpec) -> Vec<DecoratedTree> {
    let mut out: Vec<DecoratedTree> =
        framed_trees(spec.n, spec.m).into_iter().filter(|t| spec.admits_multiplicity(t.multiplicity())).collect();
    if spec.flavor == Flavor::Twisted && spec.n % 2 == 0 {
        out.extend(
            rooted_trees(spec.n / 2, spec.m)
                .into_iter()
                .map(DecoratedTree::Twisted)
                .filter(|t| spec.admits_multiplicity(t.multiplicity())),
        );
    }
    out
}

/// Jacobi rewrites at every position of a rooted tree: triples `(I, H, X)`
/// of trees with `I = H + X` in the free Lie algebra, where locally
/// `I = (A,(C,D))`, `H = ((A,C),D)`, `X = (C,(A,D))`.
///
/// When the bracket sits as `((C,D),A)` the triple is taken for the negated
/// tree; callers only use it where the overall sign is immaterial.
pub fn jacobi_triples(t: &Rooted) -> Vec<(Rooted, Rooted, Rooted)> {
    let mut out = Vec::new();
    if let Rooted::Node(l, r) = t {
        let local = |a: &Rooted, q: &Rooted| {
            if let Rooted::Node(c, d) = q {
                let i = Rooted::node(a.clone(), q.clone());
                let h = Rooted::node(Rooted::node(a.clone(), (**c).clone()), (**d).clone());
                let x = Rooted::node((**c).clone(), Rooted::node(a.clone(), (**d).clone()));
                Some((i, h, x))
            } else {
                None
            }
        };
        out.extend(local(l, r));
        out.extend(local(r, l));
        for (i, h, x) in jacobi_triples(l) {
            out.push((Rooted::node(i, (**r).clone()), Rooted::node(h, (**r).clone()), Rooted::node(x, (**r).clone())));
        }
        for (i, h, x) in jacobi_triples(r) {
            out.push((Rooted::node((**l).clone(), i), Rooted::node((**l).clone(), h), Rooted::node((**l).clone(), x)));
        }
    }
    out
}

/// IHX instances of a framed tree, one per oriented internal edge, as signed
/// combinations of (uncanonicalized) framed trees.
fn ihx_instances(t: &DecoratedTree) -> Vec<Vec<(i64, DecoratedTree)>> {
    let g = Graph::from_tree(t);
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        for (x, y) in [(u, v), (v, u)] {
            let r = g.branch(x, y, Convention::Standard);
            let Rooted::Node(a, q) = &r else { continue };
            let Rooted::Node(c, d) = q.as_ref() else { continue };
            let p = g.branch(y, x, Convention::Standard);
            let (a, c, d) = (a.as_ref().clone(), c.as_ref().clone(), d.as_ref().clone());
            out.push(vec![
                (1, DecoratedTree::Framed(p.clone(), Rooted::node(a.clone(), Rooted::node(c.clone(), d.clone())))),
                (-1, DecoratedTree::Framed(p.clone(), Rooted::node(Rooted::node(a.clone(), c.clone()), d.clone()))),
                (-1, DecoratedTree::Framed(p, Rooted::node(c, Rooted::node(a, d)))),
            ]);
        }
    }
    out
}

/// A presented tree group with its normal form.
#[derive(Clone, Debug)]
pub struct PresentedAbelianGroup {
    spec: GroupSpec,
    generators: Vec<DecoratedTree>,
    index: HashMap<DecoratedTree, usize>,
    relations: Vec<Relation>,
    presentation: PresentedGroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    /// Normal-form coordinates, one per nontrivial summand.
    pub coords: Vec<Int>,
    /// Summand orders (`0` = ℤ).
    pub moduli: Vec<Int>,
}

impl GroupElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `(summand, coordinate, modulus)` for the nonzero coordinates.
    pub fn witness(&self) -> Vec<(usize, Int, Int)> {
        self.coords
            .iter()
            .zip(&self.moduli)
            .enumerate()
            .filter(|(_, (c, _))| !c.is_zero())
            .map(|(i, (c, d))| (i, c.clone(), d.clone()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub rank: usize,
    #[serde(serialize_with = "crate::serialize_ints")]
    pub torsion: Vec<Int>,
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.rank)?;
        for d in &self.torsion {
            write!(f, " + Z/{d}")?;
        }
        Ok(())
    }
}

impl PresentedAbelianGroup {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn generators(&self) -> &[DecoratedTree] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn generator_index(&self, t: &DecoratedTree) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn presentation(&self) -> &PresentedGroup {
        &self.presentation
    }

    pub fn invariants(&self) -> Invariants {
        let mut torsion = self.presentation.torsion();
        torsion.sort();
        Invariants { rank: self.presentation.free_rank(), torsion }
    }

    pub fn summands(&self) -> Vec<Summand> {
        self.presentation.summands()
    }

    /// Coordinates over the generators of the selected part of a forest.
    pub fn generator_vector(&self, f: &IntersectionForest) -> Result<SparseVec> {
        let mut v = SparseVec::new();
        for (t, c) in f.terms() {
            if !self.spec.selects(t) {
                continue;
            }
            let i = self.index.get(t).ok_or_else(|| Error::GeneratorMissing(t.to_string()))?;
            sparse_add(&mut v, *i, c);
        }
        Ok(v)
    }

    pub fn reduce_vector(&self, v: &SparseVec) -> GroupElement {
        GroupElement { coords: self.presentation.reduce(v), moduli: self.presentation.moduli() }
    }

    /// The class of a forest in the group (τ of the forest).
    pub fn reduce_element(&self, f: &IntersectionForest) -> Result<GroupElement> {
        Ok(self.reduce_vector(&self.generator_vector(f)?))
    }

    /// Forest spelled out by a vector over the generators.
    pub fn forest_of(&self, v: &[(usize, Int)]) -> IntersectionForest {
        let mut f = IntersectionForest::new(self.spec.m);
        for (i, c) in v {
            f.add_term(c.clone(), &self.generators[*i]).expect("generators are forest trees");
        }
        f
    }
}

struct RelationBuilder<'a> {
    spec: &'a GroupSpec,
    index: &'a HashMap<DecoratedTree, usize>,
    seen: BTreeSet<Vec<(usize, Int)>>,
    out: Vec<Relation>,
}

impl RelationBuilder<'_> {
    /// Canonicalizes the terms and records the row; rows outside the
    /// multiplicity bound are skipped (relations are multiplicity-homogeneous).
    fn push(&mut self, kind: RelationKind, terms: &[(i64, DecoratedTree)]) -> Result<()> {
        let mut row = SparseVec::new();
        for (c, t) in terms {
            let can = t.canonicalize();
            match self.index.get(&can.tree) {
                Some(&i) => sparse_add(&mut row, i, &Int::from(c * can.sign as i64)),
                None if !self.spec.admits_multiplicity(can.tree.multiplicity()) => return Ok(()),
                None => return Err(Error::GeneratorMissing(can.tree.to_string())),
            }
        }
        if row.is_empty() {
            return Ok(());
        }
        let mut key: Vec<(usize, Int)> = row.iter().map(|(i, c)| (*i, c.clone())).collect();
        if key[0].1.is_negative() {
            for e in &mut key {
                e.1 = -std::mem::take(&mut e.1);
            }
        }
        if self.seen.insert(key) {
            self.out.push(Relation { kind, row });
        }
        Ok(())
    }
}

pub fn build_group(spec: GroupSpec) -> Result<PresentedAbelianGroup> {
    if spec.m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    if spec.k == Some(0) {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let generators = enumerate_generators(&spec);
    let index: HashMap<DecoratedTree, usize> = generators.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let mut b = RelationBuilder { spec: &spec, index: &index, seen: BTreeSet::new(), out: Vec::new() };

    for t in &generators {
        if t.kind() != Kind::Framed {
            continue;
        }
        if t.canonicalize().two_torsion {
            b.push(RelationKind::AsTorsion, &[(2, t.clone())])?;
        }
        for inst in ihx_instances(t) {
            b.push(RelationKind::Ihx, &inst)?;
        }
    }

    if spec.flavor == Flavor::Twisted {
        if spec.n % 2 == 1 {
            let j = (spec.n + 1) / 2;
            for sub in rooted_trees(j - 1, spec.m) {
                for i in 1..=spec.m {
                    let t = DecoratedTree::Framed(Rooted::node(sub.clone(), sub.clone()), Rooted::Leaf(i));
                    b.push(RelationKind::BoundaryTwist, &[(1, t)])?;
                }
            }
        } else {
            for t in &generators {
                let DecoratedTree::Twisted(j) = t else { continue };
                for (i, h, x) in jacobi_triples(j) {
                    b.push(
                        RelationKind::TwistedIhx,
                        &[
                            (1, DecoratedTree::Twisted(i)),
                            (-1, DecoratedTree::Twisted(h.clone())),
                            (-1, DecoratedTree::Twisted(x.clone())),
                            (-1, DecoratedTree::Framed(h, x)),
                        ],
                    )?;
                }
                b.push(RelationKind::InteriorTwist, &[(2, t.clone()), (-1, DecoratedTree::Framed(j.clone(), j.clone()))])?;
            }
        }
    }

    let relations = b.out;
    let rows: Vec<SparseVec> = relations.iter().map(|r| r.row.clone()).collect();
    let presentation = PresentedGroup::new(generators.len(), &rows);
    Ok(PresentedAbelianGroup { spec, generators, index, relations, presentation })
}

/// Whether the forest's τ vanishes, i.e. the forest bounds one order higher.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub zero: bool,
    pub element: GroupElement,
}

pub fn obstruction_is_zero(f: &IntersectionForest, spec: GroupSpec) -> Result<Obstruction> {
    if f.m() != spec.m {
        return Err(Error::IndexCountMismatch(f.m(), spec.m));
    }
    let g = build_group(spec)?;
    let element = g.reduce_element(f)?;
    Ok(Obstruction { zero: element.is_zero(), element })
}

/// Labels with their multiplicities, for diagnostics.
pub fn label_profile(t: &DecoratedTree) -> BTreeMap<Label, usize> {
    let mut out = BTreeMap::new();
    for l in t.labels() {
        *out.entry(l).or_insert(0) += 1;
    }
    out
}
