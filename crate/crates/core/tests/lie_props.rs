use proptest::prelude::*;
use wtower::lie::*;
use wtower::zmat::Int;

fn mobius(n: usize) -> i64 {
    let (mut n, mut out, mut p) = (n, 1i64, 2);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            out = -out;
        }
        p += 1;
    }
    if n > 1 {
        out = -out;
    }
    out
}

/// Necklace count `(1/n) Σ_{d|n} μ(d) m^{n/d}`.
fn witt(m: u32, n: usize) -> usize {
    let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(d) * (m as i64).pow((n / d) as u32)).sum();
    (s / n as i64) as usize
}

fn basis_elements(m: u32, max_degree: usize) -> Vec<LieElement> {
    (1..=max_degree).flat_map(|d| lyndon_words(m, d)).map(|w| LieElement::basis(&w)).collect()
}

#[test]
fn lyndon_counts_match_necklace_formula() {
    for m in 1..=3 {
        for n in 1..=6 {
            assert_eq!(lyndon_basis(m, n).len(), witt(m, n), "m={m} n={n}");
        }
    }
}

#[test]
fn antisymmetry_and_jacobi() {
    let basis = basis_elements(2, 4);
    for a in &basis {
        for b in &basis {
            if a.degree() + b.degree() > 6 {
                continue;
            }
            assert!(lie_bracket(a, b).add(&lie_bracket(b, a)).is_zero());
            assert!(lie_bracket(a, a).is_zero());
            for c in &basis {
                if a.degree() + b.degree() + c.degree() > 6 {
                    continue;
                }
                let j = lie_bracket(a, &lie_bracket(b, c))
                    .add(&lie_bracket(b, &lie_bracket(c, a)))
                    .add(&lie_bracket(c, &lie_bracket(a, b)));
                assert!(j.is_zero());
            }
        }
    }
}

#[test]
fn tensor_to_lie_inverts_expansion() {
    for m in 1..=3 {
        for d in 1..=5 {
            for w in lyndon_words(m, d) {
                let e = LieElement::basis(&w);
                assert_eq!(tensor_to_lie(&e.to_tensor(), d).unwrap(), e);
                assert_eq!(tensor_to_lie(&expand(&standard_bracket(&w)), d).unwrap(), e);
            }
        }
    }
}

#[test]
fn kernel_basis_is_in_the_kernel() {
    for m in 1..=3 {
        for n in 0..=3 {
            for k in [None, Some(1), Some(2)] {
                let d = bracket_kernel(m, n, k);
                for x in &d.basis {
                    let b = bracket_map(x);
                    let b = match k {
                        Some(k) => b.k_project(k),
                        None => b,
                    };
                    assert!(b.is_zero());
                    assert!(d.contains(x));
                }
            }
        }
    }
}

fn random_lie(coeffs: &[i64], m: u32, degree: usize) -> LieElement {
    let words = lyndon_words(m, degree);
    LieElement::from_terms(degree, words.into_iter().zip(coeffs.iter().map(|&c| Int::from(c))))
}

proptest! {
    #[test]
    fn k_project_is_an_idempotent_module_map(
        a in prop::collection::vec(-3i64..=3, 12),
        b in prop::collection::vec(-3i64..=3, 12),
        d in 2usize..=4,
        k in 1usize..=3,
    ) {
        let x = random_lie(&a, 3, d);
        let y = random_lie(&b, 3, d);
        prop_assert_eq!(x.k_project(k).k_project(k), x.k_project(k));
        prop_assert_eq!(x.add(&y).k_project(k), x.k_project(k).add(&y.k_project(k)));
    }

    #[test]
    fn k_project_commutes_with_bracket_map(c in prop::collection::vec(-3i64..=3, 24), n in 0usize..=2, k in 1usize..=3) {
        let mut x = TensorElement::zero(n + 1);
        for (((i, w), v), _) in tensor_domain(3, n, None).into_iter().zip(c.iter()).zip(0..) {
            x.add_term(i, &w, &Int::from(*v));
        }
        prop_assert_eq!(bracket_map(&x.k_project(k)).k_project(k), bracket_map(&x).k_project(k));
    }
}
