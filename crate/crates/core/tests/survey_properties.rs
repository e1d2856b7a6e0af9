use proptest::prelude::*;
use xreval_core::survey::{score_sus, score_tlx_raw, score_tlx_weighted};

fn weights() -> impl Strategy<Value = [u8; 6]> {
    // Tally 15 pairwise winners among the 15 subscale pairs.
    prop::collection::vec(any::<bool>(), 15).prop_map(|wins| {
        let mut w = [0u8; 6];
        let mut k = 0;
        for i in 0..6 {
            for j in (i + 1)..6 {
                w[if wins[k] { i } else { j }] += 1;
                k += 1;
            }
        }
        w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sus_in_bounds_on_the_grid(items in prop::array::uniform10(1u8..=5)) {
        let s = score_sus(&items).unwrap();
        prop_assert!((0.0..=100.0).contains(&s.to_f64()));
        prop_assert_eq!(s.hundredths() % 250, 0);
    }

    #[test]
    fn sus_moves_by_two_and_a_half(items in prop::array::uniform10(1u8..=5), i in 0usize..10) {
        let base = score_sus(&items).unwrap().to_f64();
        let mut up = items;
        if up[i] < 5 {
            up[i] += 1;
            let moved = score_sus(&up).unwrap().to_f64();
            // raising an odd item helps, raising an even item hurts
            let expected = if i % 2 == 0 { base + 2.5 } else { base - 2.5 };
            prop_assert_eq!(moved, expected);
        }
    }

    #[test]
    fn tlx_in_bounds(r in prop::array::uniform6(0u8..=100), w in weights()) {
        let raw = score_tlx_raw(&r).unwrap().to_f64();
        let weighted = score_tlx_weighted(&r, &w).unwrap().to_f64();
        prop_assert!((0.0..=100.0).contains(&raw));
        prop_assert!((0.0..=100.0).contains(&weighted));
        let lo = f64::from(*r.iter().min().unwrap());
        let hi = f64::from(*r.iter().max().unwrap());
        prop_assert!(lo <= weighted && weighted <= hi);
    }

    #[test]
    fn equal_ratings_make_weights_irrelevant(v in 0u8..=100, w in weights()) {
        let r = [v; 6];
        prop_assert_eq!(score_tlx_raw(&r).unwrap(), score_tlx_weighted(&r, &w).unwrap());
        prop_assert_eq!(score_tlx_raw(&r).unwrap().to_f64(), f64::from(v));
    }

    #[test]
    fn weighted_tlx_ignores_pair_order(r in prop::array::uniform6(0u8..=100), w in weights(), rot in 0usize..6) {
        let mut r2 = r;
        let mut w2 = w;
        r2.rotate_left(rot);
        w2.rotate_left(rot);
        r2.swap(0, 5);
        w2.swap(0, 5);
        prop_assert_eq!(score_tlx_weighted(&r, &w).unwrap(), score_tlx_weighted(&r2, &w2).unwrap());
    }
}

#[test]
fn sus_extremes() {
    assert_eq!(score_sus(&[5, 1, 5, 1, 5, 1, 5, 1, 5, 1]).unwrap().to_f64(), 100.0);
    assert_eq!(score_sus(&[1, 5, 1, 5, 1, 5, 1, 5, 1, 5]).unwrap().to_f64(), 0.0);
    assert_eq!(score_sus(&[3; 10]).unwrap().to_f64(), 50.0);
}
