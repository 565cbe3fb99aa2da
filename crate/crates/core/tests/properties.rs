use std::sync::OnceLock;

use proptest::prelude::*;

use verba::corpus::bundled_corpus;
use verba::engine::{build_word_map_group, decide_chirality, decide_chirality_with_arity};
use verba::filters::{
    automorphic_to_inverse_filter, enumerate_automorphisms, filter_cascade, orbit, AutCache,
};
use verba::group::{
    cyclic, derived_subgroup, from_permutations, normal_subgroups, quotient, subgroup_generated,
};
use verba::verdict::Status;
use verba::words::{image, inversion_violator, normalize_power_commutator, Letter, Word};
use verba::{ElementSet, FiniteGroup, Limits};

fn groups() -> &'static [FiniteGroup] {
    static G: OnceLock<Vec<FiniteGroup>> = OnceLock::new();
    G.get_or_init(|| {
        bundled_corpus()
            .into_iter()
            .map(|(_, f)| f.load(&Limits::default()).unwrap().group)
            .collect()
    })
}

fn small_groups() -> Vec<&'static FiniteGroup> {
    groups().iter().filter(|g| g.order() <= 24).collect()
}

fn inverted(s: &ElementSet, g: &FiniteGroup) -> ElementSet {
    ElementSet::from_ids(g.order(), s.iter().map(|x| g.inverse(x)))
}

#[test]
fn corpus_groups_validate_and_powers_vanish() {
    for g in groups() {
        g.validate().unwrap();
        let e = g.exponent() as i64;
        assert_eq!(g.power_image_set(e).to_vec(), vec![g.identity()], "{}", g.label());
    }
}

#[test]
fn quotient_projections_are_homomorphisms() {
    let lim = Limits::default();
    for g in groups().iter().filter(|g| g.order() <= 200) {
        for n in normal_subgroups(g, &lim).unwrap() {
            let q = quotient(g, &n).unwrap();
            assert_eq!(q.group.order() * n.order(), g.order());
            for a in g.elements() {
                for b in g.elements() {
                    let lhs = q.projection[g.mul(a, b)];
                    assert_eq!(lhs, q.group.mul(q.projection[a], q.projection[b]));
                }
            }
        }
    }
}

#[test]
fn derived_subgroup_lies_under_abelian_quotients() {
    let lim = Limits::default();
    for g in small_groups() {
        let d = derived_subgroup(g);
        for n in normal_subgroups(g, &lim).unwrap() {
            if quotient(g, &n).unwrap().group.is_abelian() {
                assert!(d.elements.is_subset(&n.elements), "{}", g.label());
            }
        }
    }
}

#[test]
fn commutator_images_are_closed() {
    let w: Word = "[x,y]".parse().unwrap();
    for g in groups() {
        let img = image(&w, g).unwrap();
        assert!(inversion_violator(&img, g).is_none(), "{}", g.label());
    }
}

#[test]
fn cyclic_word_map_groups() {
    let lim = Limits::default();
    for n in 1..=12 {
        let w = build_word_map_group(&cyclic(n), 1, 1000, &lim).unwrap();
        assert_eq!(w.order(), n);
    }
}

#[test]
fn maps_fix_the_identity_tuple() {
    let lim = Limits::default();
    for g in small_groups().into_iter().take(20) {
        let d = g.minimal_generator_count();
        let w = build_word_map_group(g, d, 2000, &lim).unwrap();
        for idx in 0..w.order() {
            assert_eq!(w.values(idx)[0] as usize, g.identity());
        }
    }
}

#[test]
fn word_map_groups_are_reproducible() {
    let s3 = from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
    let lim = Limits::default();
    let dump = || {
        let mut out = Vec::new();
        build_word_map_group(&s3, 2, 10_000, &lim).unwrap().dump(&mut out).unwrap();
        out
    };
    assert_eq!(dump(), dump());
}

#[test]
fn filters_never_contradict_the_engine() {
    let lim = Limits {
        map_cap: 20_000,
        ..Limits::default()
    };
    let mut decided = 0;
    for g in small_groups() {
        let filt = filter_cascade(g, &[], &lim);
        let eng = decide_chirality(g, &lim);
        if filt.status != Status::Unknown && eng.status != Status::Unknown {
            assert_eq!(filt.status, eng.status, "{}", g.label());
            decided += 1;
        }
        assert_ne!(eng.status, Status::Chiral, "{}", g.label());
    }
    assert!(decided >= 30, "only {decided} groups decided by both");
}

#[test]
fn s3_on_three_variables_shows_no_chiral_map() {
    // the full enumeration is out of reach; a truncated run must not find a witness
    let s3 = from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
    let lim = Limits {
        map_cap: 30_000,
        ..Limits::default()
    };
    let v3 = decide_chirality_with_arity(&s3, 3, &lim);
    assert_ne!(v3.status, Status::Chiral);
    assert_eq!(decide_chirality_with_arity(&s3, 2, &lim).status, Status::Achiral);
}

#[test]
fn automorphism_orbits_partition_the_group() {
    for g in small_groups() {
        let auts = enumerate_automorphisms(g, 100_000).unwrap();
        let n = g.order();
        let mut owner = vec![None; n];
        for x in 0..n {
            let o = orbit(x, &auts, n);
            assert!(o.contains(x));
            // closed under every automorphism
            for y in o.iter() {
                for a in &auts {
                    assert!(o.contains(a.apply(y)));
                }
            }
            let key = o.iter().next().unwrap();
            match owner[x] {
                None => o.iter().for_each(|y| owner[y] = Some(key)),
                Some(k) => assert_eq!(k, key),
            }
        }
    }
}

#[test]
fn automorphism_filter_is_silent_on_chiral_families() {
    let lim = Limits::default();
    let families: Vec<_> = groups().iter().filter(|g| g.label().starts_with("family-")).collect();
    assert_eq!(families.len(), 3);
    for g in families {
        let mut cache = AutCache::new(g, &lim);
        assert!(automorphic_to_inverse_filter(g, &mut cache).unwrap().is_none(), "{}", g.label());
    }
}

fn word_strategy() -> impl Strategy<Value = Word> {
    (1usize..=3).prop_flat_map(|arity| {
        proptest::collection::vec((0..arity, any::<bool>()), 0..10)
            .prop_map(move |ls| Word::new(arity, ls.into_iter().map(|(v, i)| Letter::new(v, i))))
    })
}

fn nielsen(w: &Word, mv: usize) -> Word {
    let d = w.arity().max(2);
    let w = w.with_arity(d);
    let mut images: Vec<Word> = (0..d).map(|i| Word::var(i, d)).collect();
    match mv {
        0 => images.swap(0, 1),
        1 => images[0] = images[0].invert(),
        _ => images[0] = Word::var(0, d).mul(&Word::var(1, d)),
    }
    w.substitute(&images)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nielsen_moves_keep_images(w in word_strategy(), mv in 0usize..3, gi in any::<prop::sample::Index>()) {
        let gs = small_groups();
        let g = gs[gi.index(gs.len())];
        let moved = nielsen(&w, mv);
        prop_assert_eq!(image(&w.with_arity(moved.arity()), g).unwrap(), image(&moved, g).unwrap());
    }

    #[test]
    fn normal_form_keeps_images(w in word_strategy(), gi in any::<prop::sample::Index>()) {
        let gs = small_groups();
        let g = gs[gi.index(gs.len())];
        let nf = normalize_power_commutator(&w).to_word();
        prop_assert_eq!(image(&w, g).unwrap(), image(&nf, g).unwrap());
    }

    #[test]
    fn inverse_word_inverts_image(w in word_strategy(), gi in any::<prop::sample::Index>()) {
        let gs = small_groups();
        let g = gs[gi.index(gs.len())];
        let img = image(&w, g).unwrap();
        prop_assert!(img.contains(g.identity()));
        prop_assert_eq!(image(&w.invert(), g).unwrap(), inverted(&img, g));
    }

    #[test]
    fn generated_subgroups_obey_lagrange(seeds in proptest::collection::vec(0usize..1000, 0..3), gi in any::<prop::sample::Index>()) {
        let g = &groups()[gi.index(groups().len())];
        let seeds: Vec<usize> = seeds.iter().map(|s| s % g.order()).collect();
        let h = subgroup_generated(g, &seeds);
        prop_assert_eq!(g.order() % h.order(), 0);
    }
}
