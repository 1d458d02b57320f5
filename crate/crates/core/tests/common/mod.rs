#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use wtower::forest::{DecoratedTree, IntersectionForest, Label, Rooted};
use wtower::zmat::Int;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rooted<R: Rng>(rng: &mut R, order: usize, m: u32) -> Rooted {
    if order == 0 {
        return Rooted::Leaf(rng.gen_range(1..=m));
    }
    let a = rng.gen_range(0..order);
    Rooted::node(random_rooted(rng, a, m), random_rooted(rng, order - 1 - a, m))
}

pub fn random_framed<R: Rng>(rng: &mut R, order: usize, m: u32) -> DecoratedTree {
    let a = rng.gen_range(0..=order);
    DecoratedTree::Framed(random_rooted(rng, a, m), random_rooted(rng, order - a, m))
}

pub fn random_twisted<R: Rng>(rng: &mut R, order: usize, m: u32) -> DecoratedTree {
    DecoratedTree::Twisted(random_rooted(rng, order, m))
}

/// A forest of order-`n` framed trees and, for even `n`, order-`n/2` ∞-trees.
pub fn random_forest<R: Rng>(rng: &mut R, m: u32, n: usize, terms: usize) -> IntersectionForest {
    let mut f = IntersectionForest::new(m);
    for _ in 0..terms {
        let t = if n % 2 == 0 && rng.gen_bool(0.3) { random_twisted(rng, n / 2, m) } else { random_framed(rng, n, m) };
        let c: i64 = *[-3, -2, -1, 1, 2, 3].choose(rng).unwrap();
        f.add_term(Int::from(c), &t).unwrap();
    }
    f
}

/// Multiplicity of each label, doubled on ∞-trees.
pub fn label_counts(t: &DecoratedTree, m: u32) -> Vec<usize> {
    t.stats(m).r
}

pub fn all_rooted(order: usize, m: u32) -> Vec<Rooted> {
    wtower::groups::rooted_trees(order, m)
}

pub fn leaf(l: Label) -> Rooted {
    Rooted::Leaf(l)
}
