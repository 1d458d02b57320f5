mod common;

use proptest::prelude::*;
use rand::Rng;
use wtower::eta::*;
use wtower::forest::{DecoratedTree, IntersectionForest};
use wtower::groups::{build_group, Flavor, GroupSpec};
use wtower::lie::{bracket_map, tensor_to_lie};
use wtower::zmat::Int;

use common::*;

#[test]
fn eta_kills_relations() {
    for m in 1..=2 {
        for n in 0..=4 {
            let g = build_group(GroupSpec::new(m, n, Flavor::Twisted, None)).unwrap();
            for r in g.relations() {
                let lift: Vec<(usize, Int)> = r.row.iter().map(|(i, c)| (*i, c.clone())).collect();
                let f = g.forest_of(&lift);
                assert!(eta(&f, n).unwrap().is_zero(), "{:?}: {f}", r.kind);
            }
        }
    }
}

#[test]
fn half_rule_matches_interior_twist() {
    for m in 1..=3 {
        for j in 0..=2 {
            for t in all_rooted(j, m) {
                let twice = IntersectionForest::from_terms(m, [(Int::from(2), DecoratedTree::Twisted(t.clone()))]).unwrap();
                let inner = IntersectionForest::from_terms(m, [(Int::from(1), DecoratedTree::Framed(t.clone(), t))]).unwrap();
                assert_eq!(eta(&twice, 2 * j).unwrap(), eta(&inner, 2 * j).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eta_lands_in_the_bracket_kernel(seed in any::<u64>(), m in 1u32..=3, n in 0usize..=3) {
        let f = random_forest(&mut rng(seed), m, n, 4);
        prop_assert!(bracket_map(&eta(&f, n).unwrap()).is_zero());
    }

    #[test]
    fn eta_k_is_a_restriction(seed in any::<u64>(), m in 1u32..=3, n in 0usize..=3, k in 1usize..=3) {
        let f = random_forest(&mut rng(seed), m, n, 5);
        let kept = f.filter(|t| t.multiplicity() <= k);
        prop_assert_eq!(eta_k(&f, n, k).unwrap(), eta(&kept, n).unwrap().k_project(k));
    }

    #[test]
    fn conjugated_longitudes_keep_their_leading_term(seed in any::<u64>(), power in 1i64..=3, borromean: bool) {
        let mut r = rng(seed);
        let (m, base): (u32, Vec<String>) = if borromean {
            (3, vec!["x2 x3 X2 X3".into(), "x3 x1 X3 X1".into(), "x1 x2 X1 X2".into()])
        } else {
            (2, vec![vec!["x2"; power as usize].join(" "), vec!["x1"; power as usize].join(" ")])
        };
        let words: Vec<String> = base
            .iter()
            .map(|w| {
                let g: Vec<String> = (0..r.gen_range(0..3)).map(|_| format!("x{}", r.gen_range(1..=m))).collect();
                let inv: Vec<String> = g.iter().rev().map(|l| l.to_uppercase()).collect();
                [g.join(" "), w.clone(), inv.join(" ")].join(" ")
            })
            .collect();
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let l = LongitudeData::from_strs(m, &refs).unwrap();
        let plain = LongitudeData::from_strs(m, &base.iter().map(String::as_str).collect::<Vec<_>>()).unwrap();
        let MilnorOutcome::Found(v) = milnor_from_longitudes(&l, None, 6).unwrap() else { panic!("vanishing") };
        let MilnorOutcome::Found(p) = milnor_from_longitudes(&plain, None, 6).unwrap() else { panic!("vanishing") };
        prop_assert_eq!(&v.value, &p.value);
        // oracle: read the leading Magnus term directly
        let d = v.order + 1;
        for (i, w) in l.words.iter().enumerate() {
            let lead = tensor_to_lie(&magnus_expand(w, m, d).degree_part(d), d).unwrap();
            let comp = v.value.components().get(&(i as u32 + 1)).cloned().unwrap_or_else(|| wtower::lie::LieElement::zero(d));
            prop_assert_eq!(comp, lead);
        }
    }
}
