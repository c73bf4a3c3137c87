use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use fqbound_core::arcs::{exhaustive_subset_check, s_degree, PointSet};
use fqbound_core::bounds::{comb_bound, cor33_bound, geometric, lemma_rhs, sziklai_bound, thm32_bound};
use fqbound_core::curves::{catalog_instances, count_points, count_points_ext, nondegeneracy_heuristic, Nondegeneracy};
use fqbound_core::gf::{FieldElement, FieldSpec};
use fqbound_core::projspace::ProjSpace;

const ORDERS: [u64; 12] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27];

fn order() -> impl Strategy<Value = u64> {
    prop::sample::select(ORDERS.to_vec())
}

proptest! {
    #[test]
    fn bound_formulas_agree(q in order(), r in 1u64..=8, d in 1u64..1_000_000) {
        let t = thm32_bound(d, q, r).unwrap();
        let c = cor33_bound(d, q, r).unwrap();
        prop_assert_eq!(t, c.bound);
    }

    #[test]
    fn comb_at_least_sziklai(q in order(), r in 2usize..=6, d in 1u64..10_000) {
        let c = comb_bound(d, q, r).unwrap();
        let s = sziklai_bound(d, q);
        prop_assert!(c >= s);
        prop_assert_eq!(c == s, BigInt::from(d - 1) < geometric(q, r as i64 - 2));
    }

    #[test]
    fn lemma_forms_agree(q in 2u64..=64, r in 1u64..=12) {
        // lemma_rhs asserts the two closed forms agree
        prop_assert!(lemma_rhs(q, r).is_ok());
    }

    #[test]
    fn distributivity(q in order(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = FieldSpec::of_order(q).unwrap();
        let [a, b, c] = [a, b, c].map(|x| FieldElement::from_index_unchecked(x % f.q()));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
    }

    #[test]
    fn normalization_ignores_scalars(q in order(), idx in any::<u64>(), s in 1u32..1000) {
        let space = ProjSpace::new(3, Arc::new(FieldSpec::of_order(q).unwrap()));
        let f = space.field().clone();
        let p = space.point_at(idx % space.num_points());
        let scale = FieldElement::from_index_unchecked(1 + s % (f.q() - 1));
        let scaled: Vec<FieldElement> = p.coords().iter().map(|&x| f.mul(x, scale)).collect();
        prop_assert_eq!(space.normalize(&scaled).unwrap(), p);
    }
}

#[test]
fn every_small_subset_of_pg32() {
    let space = ProjSpace::new(3, Arc::new(FieldSpec::of_order(2).unwrap()));
    let (examined, failure) = exhaustive_subset_check(&space, 6).unwrap();
    assert_eq!(examined, 9949);
    assert_eq!(failure, None);
}

#[test]
fn point_sets_nest_under_extension() {
    for c in catalog_instances() {
        let n1 = count_points(&c).count;
        let n2 = count_points_ext(&c, 2).unwrap().count;
        assert!(n1 <= n2, "{}", c.label());
    }
}

#[test]
fn curve_s_degree_at_most_degree() {
    for c in catalog_instances().iter().filter(|c| c.ambient_dim() >= 3) {
        if nondegeneracy_heuristic(c, 2).unwrap() != Nondegeneracy::LikelyNondegenerate {
            continue;
        }
        let points = count_points(c).points.unwrap();
        let set = PointSet::new(c.space(), points).unwrap();
        assert!(s_degree(&set).unwrap() <= u64::from(c.degree()), "{}", c.label());
    }
}
