//! Exact linear algebra over ℤ: Hermite and Smith normal forms, lattice
//! kernels, integer solves and finitely presented abelian groups.
//!
//! Matrices act on row vectors: a map `ℤ^r → ℤ^c` is stored as an `r × c`
//! matrix whose `i`-th row is the image of the `i`-th basis vector.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Int>>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![vec![Int::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Int::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Int>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Mat { rows: rows.len(), cols, data: rows }
    }

    pub fn from_i64(cols: usize, rows: &[Vec<i64>]) -> Self {
        Mat::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &Vec<Int>> {
        self.data.iter()
    }

    pub fn into_rows(self) -> Vec<Vec<Int>> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i][j] = v;
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (k, a) in self.data[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.data {
            r.swap(a, b);
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &Int) {
        if f.is_zero() {
            return;
        }
        let (d, s) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src);
            (&mut lo[dst], &hi[0])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst);
            (&mut hi[0], &lo[src])
        };
        for (x, y) in d.iter_mut().zip(s.iter()) {
            if !y.is_zero() {
                *x += f * y;
            }
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &Int) {
        if f.is_zero() {
            return;
        }
        for r in &mut self.data {
            if !r[src].is_zero() {
                let v = f * &r[src];
                r[dst] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i] {
            *x = -std::mem::take(x);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in &mut self.data {
            r[j] = -std::mem::take(&mut r[j]);
        }
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.data {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Row-style Hermite normal form `H = U·A`.
///
/// The first `rank` rows of `H` are in echelon form with positive pivots and
/// entries above each pivot reduced into `[0, pivot)`; the remaining rows are
/// zero, so the matching rows of `U` form a basis of the left kernel.
#[derive(Clone, Debug)]
pub struct Hermite {
    pub h: Mat,
    pub u: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn hermite(a: &Mat) -> Hermite {
    let mut h = a.clone();
    let mut u = Mat::identity(a.rows);
    let mut pivots = Vec::new();
    let mut p = 0;
    for c in 0..a.cols {
        if p == a.rows {
            break;
        }
        loop {
            let best = (p..a.rows)
                .filter(|&r| !h.data[r][c].is_zero())
                .min_by(|&x, &y| h.data[x][c].abs().cmp(&h.data[y][c].abs()));
            let Some(best) = best else { break };
            h.swap_rows(p, best);
            u.swap_rows(p, best);
            let mut done = true;
            for r in p + 1..a.rows {
                if h.data[r][c].is_zero() {
                    continue;
                }
                let q = -h.data[r][c].div_floor(&h.data[p][c]);
                h.add_row(r, p, &q);
                u.add_row(r, p, &q);
                if !h.data[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.data[p][c].is_zero() {
            continue;
        }
        if h.data[p][c].is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        for r in 0..p {
            let q = -h.data[r][c].div_floor(&h.data[p][c]);
            h.add_row(r, p, &q);
            u.add_row(r, p, &q);
        }
        pivots.push(c);
        p += 1;
    }
    Hermite { h, u, rank: p, pivots }
}

/// Basis of the left kernel `{x : x·A = 0}`, Hermite-reduced.
pub fn left_kernel(a: &Mat) -> Mat {
    let herm = hermite(a);
    let rows: Vec<Vec<Int>> = herm.u.data[herm.rank..].to_vec();
    let k = Mat::from_rows(a.rows, rows);
    hermite_basis(&k)
}

/// The nonzero rows of the Hermite form: a canonical basis of the row lattice.
pub fn hermite_basis(a: &Mat) -> Mat {
    let herm = hermite(a);
    Mat::from_rows(a.cols, herm.h.data[..herm.rank].to_vec())
}

pub fn rank(a: &Mat) -> usize {
    hermite(a).rank
}

/// A sublattice of `ℤ^n` given by generators, prepared for membership and
/// coordinate queries.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    herm: Hermite,
}

impl Lattice {
    pub fn new(generators: &Mat) -> Self {
        Lattice { dim: generators.cols, herm: hermite(generators) }
    }

    pub fn rank(&self) -> usize {
        self.herm.rank
    }

    /// Coefficients `c` with `c·generators = v`, if `v` lies in the lattice.
    pub fn solve(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.dim);
        let mut rem = v.to_vec();
        let mut coeffs = vec![Int::zero(); self.herm.rank];
        for (i, &c) in self.herm.pivots.iter().enumerate() {
            if rem[c].is_zero() {
                continue;
            }
            let (q, r) = rem[c].div_rem(&self.herm.h.data[i][c]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in rem.iter_mut().zip(self.herm.h.data[i].iter()) {
                if !y.is_zero() {
                    *x -= &q * y;
                }
            }
            coeffs[i] = q;
        }
        if rem.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut out = vec![Int::zero(); self.herm.u.rows];
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(self.herm.u.data[i].iter()) {
                if !y.is_zero() {
                    *o += c * y;
                }
            }
        }
        Some(out)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.solve(v).is_some()
    }
}

/// Smith normal form `P·A·Q = D` with the column transform `Q` and its
/// inverse retained. `diag` has one entry per column of `A`; columns past the
/// rank carry `0` (free summands).
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<Int>,
    pub q: Mat,
    pub q_inv: Mat,
}

pub fn smith(a: &Mat) -> Smith {
    let mut m = a.clone();
    let n = a.cols;
    let mut q = Mat::identity(n);
    let mut qi = Mat::identity(n);
    let limit = a.rows.min(a.cols);
    let mut t = 0;
    while t < limit {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m.rows {
            for j in t..n {
                let x = &m.data[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| x.abs() < m.data[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        break;
                    }
                }
            }
            if matches!(best, Some((bi, bj)) if m.data[bi][bj].abs().is_one()) {
                break;
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap_rows(t, bi);
        swap_cols_tracked(&mut m, &mut q, &mut qi, t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..m.rows {
                if m.data[i][t].is_zero() {
                    continue;
                }
                let f = -m.data[i][t].div_floor(&m.data[t][t]);
                m.add_row(i, t, &f);
                if !m.data[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if m.data[t][j].is_zero() {
                    continue;
                }
                let f = -m.data[t][j].div_floor(&m.data[t][t]);
                add_col_tracked(&mut m, &mut q, &mut qi, j, t, &f);
                if !m.data[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // divisibility of the trailing block
                let p = m.data[t][t].clone();
                let bad = (t + 1..m.rows).find(|&i| (t + 1..n).any(|j| !m.data[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => {
                        m.add_row(t, i, &Int::one());
                    }
                    None => break,
                }
            } else {
                // move the smallest remaining entry of row/col t onto the diagonal
                let mut bi = t;
                let mut bj = t;
                let mut bv = m.data[t][t].abs();
                for i in t + 1..m.rows {
                    let x = m.data[i][t].abs();
                    if !x.is_zero() && x < bv {
                        bv = x;
                        bi = i;
                        bj = t;
                    }
                }
                for j in t + 1..n {
                    let x = m.data[t][j].abs();
                    if !x.is_zero() && x < bv {
                        bv = x;
                        bi = t;
                        bj = j;
                    }
                }
                m.swap_rows(t, bi);
                swap_cols_tracked(&mut m, &mut q, &mut qi, t, bj);
            }
        }
        if m.data[t][t].is_negative() {
            m.negate_col(t);
            q.negate_col(t);
            qi.negate_row(t);
        }
        t += 1;
    }
    let diag = (0..n)
        .map(|j| if j < t { m.data[j][j].clone() } else { Int::zero() })
        .collect();
    Smith { diag, q, q_inv: qi }
}

fn swap_cols_tracked(m: &mut Mat, q: &mut Mat, qi: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    m.swap_cols(a, b);
    q.swap_cols(a, b);
    qi.swap_rows(a, b);
}

/// col[dst] += f * col[src] on `m` and `q`; the inverse row operation on `qi`.
fn add_col_tracked(m: &mut Mat, q: &mut Mat, qi: &mut Mat, dst: usize, src: usize, f: &Int) {
    m.add_col(dst, src, f);
    q.add_col(dst, src, f);
    qi.add_row(src, dst, &-f);
}

/// Invariant factors of `ℤ^cols / rowspace(A)`: `(free rank, torsion)` with
/// torsion coefficients `> 1` in divisibility order.
pub fn invariant_factors(a: &Mat) -> (usize, Vec<Int>) {
    let s = smith(a);
    split_diag(&s.diag)
}

fn split_diag(diag: &[Int]) -> (usize, Vec<Int>) {
    let free = diag.iter().filter(|d| d.is_zero()).count();
    let torsion = diag.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
    (free, torsion)
}

pub type SparseVec = BTreeMap<usize, Int>;

pub fn sparse_add(v: &mut SparseVec, idx: usize, x: &Int) {
    if x.is_zero() {
        return;
    }
    let e = v.entry(idx).or_insert_with(Int::zero);
    *e += x;
    if e.is_zero() {
        v.remove(&idx);
    }
}

/// One summand of a presented abelian group in Smith coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    /// `0` for a free summand, otherwise the order of the cyclic factor.
    pub modulus: Int,
    /// A representative over the original generators.
    pub lift: Vec<(usize, Int)>,
}

/// `ℤ^ngens / ⟨relations⟩` reduced to Smith coordinates.
///
/// Relations with a unit entry are first used as substitutions on a sparse
/// copy of the matrix; the dense Smith form is only taken of what remains.
#[derive(Clone, Debug)]
pub struct PresentedGroup {
    ngens: usize,
    substitutions: Vec<(usize, SparseVec)>,
    remaining: Vec<usize>,
    smith: Smith,
    summands: Vec<usize>,
}

impl PresentedGroup {
    pub fn new(ngens: usize, relations: &[SparseVec]) -> Self {
        let mut rows: Vec<Option<SparseVec>> = relations
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                assert!(r.keys().all(|&k| k < ngens), "relation out of range");
                Some(r.clone())
            })
            .collect();
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ngens];
        for (i, r) in rows.iter().enumerate() {
            for &c in r.as_ref().unwrap().keys() {
                col_rows[c].insert(i);
            }
        }
        let mut eliminated = vec![false; ngens];
        let mut substitutions = Vec::new();
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, r) in rows.iter().enumerate() {
                let Some(r) = r else { continue };
                for (&c, x) in r {
                    if !x.abs().is_one() {
                        continue;
                    }
                    let cost = (r.len() - 1) * (col_rows[c].len() - 1);
                    if best.map_or(true, |b| cost < b.0) {
                        best = Some((cost, i, c));
                    }
                }
            }
            let Some((_, pr, pc)) = best else { break };
            let prow = rows[pr].take().unwrap();
            for &c in prow.keys() {
                col_rows[c].remove(&pr);
            }
            let unit = prow[&pc].clone();
            let others: Vec<usize> = col_rows[pc].iter().copied().collect();
            for s in others {
                let row = rows[s].as_mut().unwrap();
                let f = -(&row[&pc] * &unit);
                for (&c, x) in &prow {
                    let had = row.contains_key(&c);
                    sparse_add(row, c, &(&f * x));
                    let has = row.contains_key(&c);
                    if had && !has {
                        col_rows[c].remove(&s);
                    } else if !had && has {
                        col_rows[c].insert(s);
                    }
                }
                if row.is_empty() {
                    rows[s] = None;
                }
            }
            // gen_c = -unit * Σ_{j≠c} a_j gen_j
            let mut sub = SparseVec::new();
            for (&c, x) in &prow {
                if c != pc {
                    sub.insert(c, -(x * &unit));
                }
            }
            eliminated[pc] = true;
            substitutions.push((pc, sub));
        }
        let remaining: Vec<usize> = (0..ngens).filter(|&c| !eliminated[c]).collect();
        let pos: BTreeMap<usize, usize> = remaining.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let dense: Vec<Vec<Int>> = rows
            .into_iter()
            .flatten()
            .map(|r| {
                let mut d = vec![Int::zero(); remaining.len()];
                for (c, x) in r {
                    d[pos[&c]] = x;
                }
                d
            })
            .collect();
        let smith = smith(&Mat::from_rows(remaining.len(), dense));
        let summands = (0..remaining.len()).filter(|&i| !smith.diag[i].is_one()).collect();
        PresentedGroup { ngens, substitutions, remaining, smith, summands }
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn free_rank(&self) -> usize {
        self.summands.iter().filter(|&&i| self.smith.diag[i].is_zero()).count()
    }

    pub fn torsion(&self) -> Vec<Int> {
        self.summands.iter().map(|&i| &self.smith.diag[i]).filter(|d| !d.is_zero()).cloned().collect()
    }

    pub fn summands(&self) -> Vec<Summand> {
        self.summands
            .iter()
            .map(|&i| Summand {
                modulus: self.smith.diag[i].clone(),
                lift: self
                    .smith
                    .q_inv
                    .row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (self.remaining[j], x.clone()))
                    .collect(),
            })
            .collect()
    }

    pub fn moduli(&self) -> Vec<Int> {
        self.summands.iter().map(|&i| self.smith.diag[i].clone()).collect()
    }

    /// Normal-form coordinates of a vector over the generators: one entry per
    /// summand, reduced into `[0, d)` on cyclic factors.
    pub fn reduce(&self, v: &SparseVec) -> Vec<Int> {
        let mut x = v.clone();
        for (c, sub) in &self.substitutions {
            if let Some(xc) = x.remove(c) {
                for (&j, a) in sub {
                    sparse_add(&mut x, j, &(&xc * a));
                }
            }
        }
        let mut dense = vec![Int::zero(); self.remaining.len()];
        for (i, &c) in self.remaining.iter().enumerate() {
            if let Some(a) = x.get(&c) {
                dense[i] = a.clone();
            }
        }
        self.summands
            .iter()
            .map(|&k| {
                let mut y = Int::zero();
                for (i, a) in dense.iter().enumerate() {
                    if !a.is_zero() {
                        y += a * self.smith.q.get(i, k);
                    }
                }
                let d = &self.smith.diag[k];
                if d.is_zero() {
                    y
                } else {
                    y.mod_floor(d)
                }
            })
            .collect()
    }
}

/// Order of the subgroup of `⊕ ℤ/d_i` (all `d_i > 0`) generated by `vectors`.
pub fn finite_subgroup_order(moduli: &[Int], vectors: &[Vec<Int>]) -> Int {
    let n = moduli.len();
    let mut rows: Vec<Vec<Int>> = vectors.to_vec();
    for (i, d) in moduli.iter().enumerate() {
        let mut r = vec![Int::zero(); n];
        r[i] = d.clone();
        rows.push(r);
    }
    let h = hermite_basis(&Mat::from_rows(n, rows));
    let total: Int = moduli.iter().product();
    let index: Int = (0..h.nrows()).map(|i| h.get(i, i).clone()).product();
    total / index
}
