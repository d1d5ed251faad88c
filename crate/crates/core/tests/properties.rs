mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use enriques_monodromy::catalog::embedded_default;
use enriques_monodromy::morse::derive_dag;
use enriques_monodromy::permgroup::{
    generate, partition_stabilizer, young_group, PermGroup, Permutation, UnorderedPartition,
};
use enriques_monodromy::real_scheme::{parse_scheme, SchemeFamily};
use enriques_monodromy::root_scheme::{
    canonical_form, parse_root_scheme, remove_segments, RootScheme,
};
use enriques_monodromy::topology::{
    homeomorphism_classes, parse_half, surface_kind, Half, HalfDecomposition, SurfaceComponent,
};

fn component() -> impl Strategy<Value = SurfaceComponent> {
    prop_oneof![
        Just(SurfaceComponent::Sphere),
        (1u32..5).prop_map(SurfaceComponent::Orientable),
        (1u32..8).prop_map(SurfaceComponent::Nonorientable),
    ]
}

fn half() -> impl Strategy<Value = Half> {
    prop::collection::vec(component(), 0..7).prop_map(Half::new)
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

proptest! {
    #[test]
    fn half_format_parse_identity(h in half()) {
        let text = h.to_string();
        let back = parse_half(&text).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn scrambled_half_text_parses_to_same(h in half(), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let text = common::scrambled_half_text(&mut rng, &h);
        prop_assert_eq!(parse_half(&text).unwrap(), h);
    }

    #[test]
    fn betti_identity(h in half()) {
        let chi_defect: i64 = h.components().iter().map(|c| 2 - c.euler_characteristic()).sum();
        prop_assert_eq!(h.total_betti(), chi_defect + 2 * h.len() as i64);
    }

    #[test]
    fn kind_symmetric_in_halves(a in half(), b in half()) {
        let d1 = HalfDecomposition::new(a.clone(), b.clone());
        let d2 = HalfDecomposition::new(b, a);
        prop_assert_eq!(surface_kind(&d1), surface_kind(&d2));
    }

    #[test]
    fn classes_partition_labels(h in half()) {
        let labeled = h.labeled();
        let classes = homeomorphism_classes(&labeled);
        let mut all: Vec<String> = classes.iter().flatten().cloned().collect();
        all.sort();
        let mut expected: Vec<String> = labeled.entries().iter().map(|(l, _)| l.clone()).collect();
        expected.sort();
        prop_assert_eq!(all, expected);
        for class in &classes {
            let first = labeled.entries()[labeled.position(&class[0]).unwrap()].1;
            for l in class {
                prop_assert_eq!(labeled.entries()[labeled.position(l).unwrap()].1, first);
            }
        }
    }

    #[test]
    fn morse_edges_drop_betti(h1 in half(), h2 in prop::collection::vec(component(), 0..5).prop_map(Half::new)) {
        let dag = derive_dag(&HalfDecomposition::new(h1.clone(), h2));
        let nodes = dag.nodes();
        for e in dag.edges() {
            prop_assert_eq!(nodes[e.from].half2.total_betti() - nodes[e.to].half2.total_betti(), 2);
        }
        for n in dag.nodes() {
            prop_assert_eq!(&n.half1, &h1);
        }
    }

    #[test]
    fn young_order_is_product_of_factorials(h in prop::collection::vec(component(), 0..6).prop_map(Half::new)) {
        let g = young_group(&h.labeled());
        let expected: usize = h.classes().iter().map(|&(_, n)| common::factorial(n)).product();
        prop_assert_eq!(g.order(), expected);
        prop_assert_eq!(g.order(), common::brute_force_young(&h).len());
    }

    #[test]
    fn generate_is_idempotent(gens in prop::collection::vec(perm(5), 0..3)) {
        let g = generate(5, &gens).unwrap();
        let again = generate(5, &g.generators()).unwrap();
        prop_assert_eq!(&again, &g);
        prop_assert!(g.is_closed());
    }

    #[test]
    fn stabilizer_is_closed_subgroup(gens in prop::collection::vec(perm(5), 0..3), cut in 1usize..5) {
        let g = generate(5, &gens).unwrap();
        let p = UnorderedPartition::new(vec![(0..cut).collect::<Vec<_>>(), (cut..5).collect()]).unwrap();
        let s = partition_stabilizer(&g, &p).unwrap();
        prop_assert!(s.is_closed());
        prop_assert!(s.is_subgroup_of(&g));
        for x in s.elements() {
            prop_assert!(p.is_preserved_by(x));
        }
    }

    // Blocks are unordered, so singletons may be exchanged freely.
    #[test]
    fn stabilizer_extremes(gens in prop::collection::vec(perm(4), 0..3)) {
        let g = generate(4, &gens).unwrap();
        let singletons = UnorderedPartition::new((0..4).map(|i| vec![i])).unwrap();
        let whole = UnorderedPartition::new(vec![(0..4).collect::<Vec<_>>()]).unwrap();
        prop_assert_eq!(partition_stabilizer(&g, &singletons).unwrap(), g.clone());
        prop_assert_eq!(partition_stabilizer(&g, &whole).unwrap(), g);
    }

    #[test]
    fn scheme_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (text, ovals) = common::random_scheme_text(&mut rng);
        let s = parse_scheme(&text).unwrap();
        prop_assert_eq!(s.oval_count(), ovals);
        let canon = s.to_string();
        let back = parse_scheme(&canon).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_string(), canon);
    }

    #[test]
    fn root_canonical_form_idempotent(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = common::random_root_scheme(&mut rng, 6);
        let c = canonical_form(&s);
        prop_assert_eq!(canonical_form(&c), c.clone());
        prop_assert_eq!(c.segment_count(), s.segment_count());
        prop_assert_eq!(parse_root_scheme(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn remove_segments_keeps_grade_and_alternation(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = common::random_root_scheme(&mut rng, 6);
        let removable: BTreeSet<usize> = s
            .segment_positions()
            .iter()
            .enumerate()
            .filter(|(_, &p)| !matches!(&s.cycle()[p], enriques_monodromy::root_scheme::Token::Segment(m) if m.contains(&enriques_monodromy::root_scheme::Mark::CircleVertex)))
            .map(|(k, _)| k)
            .filter(|_| rand::Rng::gen_bool(&mut rng, 0.5))
            .collect();
        let r = remove_segments(&s, &removable).unwrap();
        prop_assert_eq!(r.grade(), s.grade());
        prop_assert_eq!(r.segment_count(), s.segment_count() - removable.len());
        prop_assert!(RootScheme::new(r.cycle().to_vec(), r.grade()).is_ok());
    }
}

#[test]
fn v3_sphere_chains() {
    for k in 0..=6 {
        let d = HalfDecomposition::new(
            Half::new([SurfaceComponent::Nonorientable(3)]),
            Half::new(std::iter::repeat_n(SurfaceComponent::Sphere, k)),
        );
        let dag = derive_dag(&d);
        assert_eq!(dag.nodes().len(), k + 1);
        assert_eq!(dag.edges().len(), k);
    }
}

#[test]
fn stabilizer_of_trivial_group() {
    let g = PermGroup::trivial(3);
    let p = UnorderedPartition::new(vec![vec![0, 1], vec![2]]).unwrap();
    assert!(partition_stabilizer(&g, &p).unwrap().is_trivial());
}

#[test]
fn sigma2_catalog_has_seven_orbits() {
    let c = embedded_default();
    let sigma = c.scheme_catalogs().get(SchemeFamily::Sigma2Cubic).unwrap();
    assert_eq!(sigma.len(), 11);
    assert_eq!(sigma.reversal_orbits().len(), 7);
}
