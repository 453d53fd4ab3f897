use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polymat::catalog::{base_matroids, random_compression, CatalogEntry};
use polymat::chains::{find_admissible_chain, has_labeled_minor};
use polymat::construct::{compress, natural_matroid};
use polymat::format::{from_json, to_json};
use polymat::{submasks, Polymatroid};

fn bases() -> &'static [CatalogEntry] {
    static BASES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    BASES.get_or_init(|| base_matroids(7).unwrap())
}

/// Seeded compressions of small uniform and graphic matroids.
fn polymatroid(max_k: usize) -> impl Strategy<Value = Polymatroid> {
    (any::<u64>(), 1..=max_k, 1usize..=5).prop_map(|(seed, k, blocks)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_compression(&mut rng, bases(), k, blocks).unwrap()
    })
}

/// A polymatroid with two disjoint subsets, as raw bit patterns.
fn with_masks(max_k: usize) -> impl Strategy<Value = (Polymatroid, u32, u32)> {
    (polymatroid(max_k), any::<u32>(), any::<u32>()).prop_map(|(p, a, b)| {
        let full = p.full_mask();
        let a = a & full;
        (p, a, b & full & !a)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_tables_are_valid(p in polymatroid(3)) {
        prop_assert!(p.validate().is_empty());
        prop_assert!(p.effective_k() <= 3);
    }

    #[test]
    fn minor_order_does_not_matter((p, d, c) in with_masks(3)) {
        let both = p.minor(d, c).unwrap();
        let del_first = p.delete(d).unwrap();
        let labels = p.labels_of(c);
        let del_first = del_first.contract(del_first.subset(&labels).unwrap()).unwrap();
        let con_first = p.contract(c).unwrap();
        let labels = p.labels_of(d);
        let con_first = con_first.delete(con_first.subset(&labels).unwrap()).unwrap();
        prop_assert!(both.equals(&del_first));
        prop_assert!(both.equals(&con_first));
        prop_assert!(both.validate().is_empty());
    }

    #[test]
    fn lambda_is_symmetric((p, x, _) in with_masks(3)) {
        prop_assert_eq!(p.lambda(x), p.lambda(p.full_mask() & !x));
        prop_assert_eq!(p.lambda(0), 0);
    }

    #[test]
    fn local_connectivity_is_monotone((p, x, y) in with_masks(3)) {
        for xs in submasks(x) {
            for ys in submasks(y) {
                prop_assert!(p.local_connectivity(xs, ys) <= p.local_connectivity(x, y));
            }
        }
    }

    #[test]
    fn modular_identity((p, x, y) in with_masks(3)) {
        // ⊓(X, Y ∪ Z) = ⊓(X, Y) + ⊓(X ∪ Y, Z) − ⊓(Y, Z), with Z the rest
        let z = p.full_mask() & !(x | y);
        let l = |a, b| p.local_connectivity_raw(a, b);
        prop_assert_eq!(l(x, y | z), l(x, y) + l(x | y, z) - l(y, z));
    }

    #[test]
    fn json_round_trip(p in polymatroid(3)) {
        let text = to_json(&p);
        let back = from_json(&text).unwrap();
        prop_assert!(back.equals(&p));
        prop_assert_eq!(back.k_bound(), p.k_bound());
        prop_assert_eq!(to_json(&back), text);
    }

    #[test]
    fn canonical_form_ignores_order(p in polymatroid(3)) {
        let mut order = p.ground_set().to_vec();
        order.reverse();
        let q = p.reordered(&order).unwrap();
        prop_assert!(q.equals(&p));
        prop_assert_eq!(q.canonical_key(), p.canonical_key());
    }

    #[test]
    fn components_partition_the_ground_set(p in polymatroid(3)) {
        let blocks = p.components();
        let total: usize = blocks.iter().map(Vec::len).sum();
        prop_assert_eq!(total, p.len());
        let mut union = 0;
        for b in &blocks {
            let m = p.subset(b).unwrap();
            prop_assert_eq!(union & m, 0);
            union |= m;
            prop_assert!(p.restrict(m).unwrap().is_connected());
            prop_assert_eq!(p.lambda(m), 0);
        }
        prop_assert_eq!(blocks.len() == 1 || p.is_empty(), p.is_connected());
    }

    #[test]
    fn natural_matroid_compresses_back(p in polymatroid(2)) {
        let nat = natural_matroid(&p).unwrap();
        prop_assert!(nat.matroid.effective_k() <= 1);
        prop_assert!(nat.matroid.validate().is_empty());
        let back = compress(&nat.compression_map()).unwrap();
        prop_assert!(back.equals(&p));
    }

    #[test]
    fn chains_replay_to_the_minor((p, d, c) in with_masks(2)) {
        let n = p.minor(d, c).unwrap();
        prop_assume!(p.is_connected() && !n.is_empty() && n.is_connected());
        prop_assert!(has_labeled_minor(&p, &n).unwrap().is_some());
        let chain = find_admissible_chain(&p, &n).unwrap();
        prop_assert_eq!(chain.steps.len(), p.len() - n.len());
        let states = chain.replay(&p).unwrap();
        for s in &states {
            prop_assert!(s.is_connected());
            prop_assert!(has_labeled_minor(s, &n).unwrap().is_some());
        }
        let end = states.last().unwrap_or(&p);
        prop_assert!(end.equals(&n));
    }
}
