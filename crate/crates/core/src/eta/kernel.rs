//! Kernel and cokernel of the induced map `𝒯ₙ^∞ → 𝒟ₙ`, and the Arf classes
//! that account for the kernel in orders `4j-2`.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest::{Convention, DecoratedTree, IntersectionForest, Kind, Rooted};
use crate::groups::{build_group, Flavor, GroupSpec, Invariants, PresentedAbelianGroup};
use crate::lie::{bracket_kernel, lyndon_words, standard_bracket, word_multiplicity, BracketKernel, TensorElement, Word};
use crate::zmat::{finite_subgroup_order, invariant_factors, left_kernel, Int, Mat, SparseVec};

use super::eta_tree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelGenerator {
    pub forest: IntersectionForest,
    /// Order of the class, `0` if infinite.
    pub order: Int,
}

#[derive(Clone, Debug)]
pub struct EtaKernel {
    pub spec: GroupSpec,
    pub group: Invariants,
    pub target_rank: usize,
    pub kernel: Invariants,
    pub cokernel: Invariants,
    pub generators: Vec<KernelGenerator>,
}

fn eta_vector(
    g: &PresentedAbelianGroup,
    d: &BracketKernel,
    v: &[(usize, Int)],
    conv: Convention,
) -> Result<(TensorElement, Vec<Int>)> {
    let n = g.spec().n;
    let mut x = TensorElement::zero(n + 1);
    for (i, c) in v {
        x = x.add(&eta_tree(&g.generators()[*i], conv)?.scale(c));
    }
    if let Some(k) = g.spec().k {
        x = x.k_project(k);
    }
    let coords = d.coordinates(&x).ok_or(Error::BracketNonzero)?;
    Ok((x, coords))
}

fn class_order(coords: &[Int], moduli: &[Int]) -> Int {
    let mut order = Int::one();
    for (c, d) in coords.iter().zip(moduli) {
        if c.is_zero() {
            continue;
        }
        if d.is_zero() {
            return Int::zero();
        }
        order = order.lcm(&(d / c.gcd(d)));
    }
    order
}

/// Kernel of `η: 𝒯ₙ^∞ → 𝒟ₙ` (or of `ηₙ^k` on the `k`-repeating group), with
/// generators preferably given by single trees.
pub fn eta_kernel(m: u32, n: usize, k: Option<usize>, conv: Convention) -> Result<EtaKernel> {
    let spec = GroupSpec::new(m, n, Flavor::Twisted, k);
    let g = build_group(spec)?;
    let d = bracket_kernel(m, n, k);
    let summands = g.summands();
    let moduli: Vec<Int> = summands.iter().map(|s| s.modulus.clone()).collect();
    let mut free_rows = Vec::new();
    let mut free_idx = Vec::new();
    for (s_i, s) in summands.iter().enumerate() {
        let (x, coords) = eta_vector(&g, &d, &s.lift, conv)?;
        if s.modulus.is_zero() {
            free_rows.push(coords);
            free_idx.push(s_i);
        } else if !x.is_zero() {
            return Err(Error::BracketNonzero);
        }
    }
    let f = Mat::from_rows(d.rank(), free_rows);
    let ker_free = left_kernel(&f);
    let (coker_rank, coker_torsion) = invariant_factors(&f);
    let torsion_idx: Vec<usize> = (0..summands.len()).filter(|&i| !moduli[i].is_zero()).collect();
    let torsion_moduli: Vec<Int> = torsion_idx.iter().map(|&i| moduli[i].clone()).collect();

    let mut generators = Vec::new();
    if ker_free.nrows() == 0 && !torsion_idx.is_empty() {
        // Try single trees with vanishing η, ∞-trees first.
        let target: Int = torsion_moduli.iter().product();
        let mut order_idx: Vec<usize> = (0..g.generators().len()).collect();
        order_idx.sort_by_key(|&i| g.generators()[i].kind() != Kind::Twisted);
        let mut chosen: Vec<Vec<Int>> = Vec::new();
        let mut reached = Int::one();
        for i in order_idx {
            if reached == target {
                break;
            }
            let (x, _) = eta_vector(&g, &d, &[(i, Int::one())], conv)?;
            if !x.is_zero() {
                continue;
            }
            let coords = g.reduce_vector(&SparseVec::from([(i, Int::one())])).coords;
            let tors: Vec<Int> = torsion_idx.iter().map(|&j| coords[j].clone()).collect();
            let mut trial = chosen.clone();
            trial.push(tors.clone());
            let o = finite_subgroup_order(&torsion_moduli, &trial);
            if o > reached {
                reached = o;
                chosen = trial;
                generators.push(KernelGenerator {
                    forest: g.forest_of(&[(i, Int::one())]),
                    order: class_order(&tors, &torsion_moduli),
                });
            }
        }
        if reached != target {
            generators.clear();
        }
    }
    if generators.is_empty() {
        for &i in &torsion_idx {
            generators.push(KernelGenerator { forest: g.forest_of(&summands[i].lift), order: moduli[i].clone() });
        }
        for row in ker_free.rows() {
            let mut v = SparseVec::new();
            for (c, &s_i) in row.iter().zip(&free_idx) {
                for (j, a) in &summands[s_i].lift {
                    crate::zmat::sparse_add(&mut v, *j, &(c * a));
                }
            }
            let lift: Vec<(usize, Int)> = v.into_iter().collect();
            generators.push(KernelGenerator { forest: g.forest_of(&lift), order: Int::zero() });
        }
    }
    let mut kernel_torsion = torsion_moduli;
    kernel_torsion.sort();
    Ok(EtaKernel {
        spec,
        group: g.invariants(),
        target_rank: d.rank(),
        kernel: Invariants { rank: ker_free.nrows(), torsion: kernel_torsion },
        cokernel: Invariants {
            rank: coker_rank,
            torsion: coker_torsion.into_iter().filter(|x| !x.is_one()).collect(),
        },
        generators,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArfClass {
    pub word: Word,
    /// Standard bracketing of the Lyndon word.
    pub bracket: String,
    /// The ∞-tree `(J,J)^∞` in `𝒯_{4j-2}^∞`.
    pub representative: String,
}

/// A basis of `ℤ₂ ⊗ L_j` (or `ℤ₂ ⊗ L_j^{⌊k/4⌋}`) with ∞-tree representatives.
pub fn arf_classes(m: u32, j: usize, k: Option<usize>) -> Result<Vec<ArfClass>> {
    if j == 0 {
        return Err(Error::InvalidParameter("j must be at least 1".into()));
    }
    if let Some(k) = k {
        if k < 4 {
            return Err(Error::InvalidParameter(format!("k-repeating Arf classes need k >= 4, got {k}")));
        }
    }
    let bound = k.map(|k| k / 4);
    Ok(lyndon_words(m, j)
        .into_iter()
        .filter(|w| bound.map_or(true, |b| word_multiplicity(w) <= b))
        .map(|w| {
            let b = standard_bracket(&w);
            let rep = DecoratedTree::Twisted(Rooted::node(b.clone(), b.clone())).canonicalize().tree;
            ArfClass { bracket: crate::lie::format_bracket(&b), representative: rep.to_string(), word: w }
        })
        .collect())
}
