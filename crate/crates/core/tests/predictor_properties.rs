mod support;

use proptest::prelude::*;
use support::{expansion_total, OracleTable};
use xreval_core::catalog::{Catalog, Duration, Ident, OperatorCategory, OperatorDef};
use xreval_core::model::{Mode, ModelSet, OperatorTerm};
use xreval_core::predictor::{predict, rank, Bindings};

/// Symbols O0..On with fixed durations, or parameter A/B when `None`.
fn table() -> impl Strategy<Value = Vec<Option<u64>>> {
    prop::collection::vec(prop::option::weighted(0.8, 0u64..5_000), 1..8)
}

fn build(durations: &[Option<u64>]) -> (Catalog, OracleTable) {
    let mut c = Catalog::new();
    let mut t = OracleTable::new();
    for (i, d) in durations.iter().enumerate() {
        let sym = format!("O{i}");
        let param = if i % 2 == 0 { "A" } else { "B" };
        let duration = match d {
            Some(ms) => Duration::Fixed(*ms),
            None => Duration::param(param).unwrap(),
        };
        c.insert(OperatorDef::new(&sym, &sym, OperatorCategory::ALL[i % 4], duration, "test").unwrap())
            .unwrap();
        t.insert(sym, (d.unwrap_or(0), d.is_none().then(|| param.to_string())));
    }
    (c, t)
}

fn terms(n_ops: usize) -> impl Strategy<Value = Vec<(u32, String)>> {
    prop::collection::vec((1u32..6, (0..n_ops).prop_map(|i| format!("O{i}"))), 1..10)
}

fn mode(name: &str, terms: &[(u32, String)]) -> Mode {
    let terms = terms
        .iter()
        .map(|(n, s)| OperatorTerm::new(*n, Ident::new(s.clone()).unwrap()).unwrap())
        .collect();
    Mode::new(name.to_string(), terms).unwrap()
}

type Terms = Vec<(u32, String)>;

fn case() -> impl Strategy<Value = (Vec<Option<u64>>, Terms, Terms)> {
    table().prop_flat_map(|t| {
        let n = t.len();
        (Just(t), terms(n), terms(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn matches_unit_expansion((durations, t, _) in case(), repeat in 1u32..4) {
        let (catalog, oracle) = build(&durations);
        let p = predict(&mode("m", &t), &catalog, repeat).unwrap();
        let (constant, coeffs) = expansion_total(&t, &oracle, repeat);
        prop_assert_eq!(p.constant_ms(), constant);
        let got: std::collections::BTreeMap<String, u64> =
            p.param_coeffs().iter().map(|(k, v)| (k.to_string(), *v)).collect();
        prop_assert_eq!(got, coeffs);
        let count: u64 = p.per_operator.iter().map(|o| o.count).sum();
        prop_assert_eq!(count, u64::from(repeat) * t.iter().map(|(n, _)| u64::from(*n)).sum::<u64>());
    }

    #[test]
    fn concatenation_is_additive((durations, t1, t2) in case()) {
        let (catalog, _) = build(&durations);
        let a = predict(&mode("a", &t1), &catalog, 1).unwrap();
        let b = predict(&mode("b", &t2), &catalog, 1).unwrap();
        let joined: Vec<_> = t1.iter().chain(&t2).cloned().collect();
        let ab = predict(&mode("ab", &joined), &catalog, 1).unwrap();
        prop_assert_eq!(ab.total, a.total.checked_add(&b.total).unwrap());
        for (cat, sub) in &ab.per_category {
            prop_assert_eq!(sub, &a.per_category[cat].checked_add(&b.per_category[cat]).unwrap());
        }
    }

    #[test]
    fn term_order_is_irrelevant((durations, t, _) in case(), seed in any::<u64>()) {
        let (catalog, _) = build(&durations);
        let mut shuffled = t.clone();
        // Fisher-Yates driven by a simple LCG
        let mut s = seed;
        for i in (1..shuffled.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = predict(&mode("m", &t), &catalog, 1).unwrap();
        let b = predict(&mode("m", &shuffled), &catalog, 1).unwrap();
        prop_assert_eq!(a.total, b.total);
        prop_assert_eq!(a.per_category, b.per_category);
    }

    #[test]
    fn repeat_is_linear((durations, t, _) in case(), r in 1u32..50) {
        let (catalog, _) = build(&durations);
        let m = mode("m", &t);
        let one = predict(&m, &catalog, 1).unwrap();
        let many = predict(&m, &catalog, r).unwrap();
        prop_assert_eq!(many.total, one.total.checked_scale(u64::from(r)).unwrap());
    }

    #[test]
    fn scaling_fixed_durations_keeps_ranking(
        fixed in prop::collection::vec(0u64..5_000, 1..8),
        modes in prop::collection::vec(prop::collection::vec((1u32..6, 0usize..8), 1..8), 1..6),
        factor in 1u64..1_000,
    ) {
        let durations: Vec<_> = fixed.iter().copied().map(Some).collect();
        let (catalog, _) = build(&durations);
        let set = ModelSet::new(
            modes
                .iter()
                .enumerate()
                .map(|(i, ts)| {
                    let ts: Vec<_> = ts.iter().map(|(n, j)| (*n, format!("O{}", j % fixed.len()))).collect();
                    mode(&format!("mode{i}"), &ts)
                })
                .collect(),
        )
        .unwrap();
        let base: Vec<_> = set.modes().iter().map(|m| predict(m, &catalog, 1).unwrap()).collect();
        let scaled_catalog = catalog.scale_fixed(factor);
        let scaled: Vec<_> = set.modes().iter().map(|m| predict(m, &scaled_catalog, 1).unwrap()).collect();
        for (b, s) in base.iter().zip(&scaled) {
            prop_assert_eq!(s.constant_ms(), b.constant_ms() * factor);
        }
        let none = Bindings::new();
        let (before, after) = (rank(&base, &none).unwrap(), rank(&scaled, &none).unwrap());
        prop_assert_eq!(before.names(), after.names());
    }
}
