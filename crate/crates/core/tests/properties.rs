use std::collections::BTreeSet;

use num_integer::Integer;
use proptest::prelude::*;

use rootproj::angle::{angle_data, Longer};
use rootproj::catalog::{build, Family, SystemLabel};
use rootproj::exact::{gram_rank, inner, project_complement, Rational, RootVector};
use rootproj::projector::{project_system, weyl_theta_invariance_check};
use rootproj::subsystems::{analyze_universe, audit_root_system, SearchOptions};
use rootproj::theorems::predict_classical;
use rootproj::theta::ThetaSubset;

fn small_vec(dim: usize) -> impl Strategy<Value = RootVector> {
    (prop::collection::vec(-6i64..=6, dim), 1i64..=4).prop_map(|(nums, den)| RootVector::from_ints_over(&nums, den))
}

fn small_labels() -> Vec<SystemLabel> {
    let mut v = Vec::new();
    for (f, n) in [
        (Family::A, 2),
        (Family::A, 4),
        (Family::B, 3),
        (Family::C, 3),
        (Family::D, 4),
        (Family::B, 4),
        (Family::C, 4),
        (Family::G, 2),
        (Family::F, 4),
    ] {
        v.push(SystemLabel::new(f, n).unwrap());
    }
    v
}

/// A catalog system together with a proper nonempty Θ given by a bit mask.
fn system_and_theta() -> impl Strategy<Value = (SystemLabel, ThetaSubset)> {
    (0..small_labels().len(), any::<u32>()).prop_map(|(i, bits)| {
        let label = small_labels()[i];
        let n = label.rank;
        let span = (1u32 << n) - 2;
        let mask = 1 + bits % span;
        (label, ThetaSubset::from_mask(mask, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rationals_are_reduced(a in -1000i64..1000, b in prop_oneof![-1000i64..-1, 1i64..1000]) {
        let q = Rational::new(a, b);
        prop_assert!(q.denom() > &0.into());
        prop_assert!(q.numer().gcd(q.denom()) == 1.into());
        prop_assert_eq!(&q * &Rational::from_int(b), Rational::from_int(a));
    }

    #[test]
    fn inner_is_symmetric_and_bilinear(u in small_vec(4), v in small_vec(4), w in small_vec(4), k in -5i64..5) {
        let s = Rational::from_int(k);
        prop_assert_eq!(inner(&u, &v).unwrap(), inner(&v, &u).unwrap());
        let lhs = inner(&(&u.scale(&s) + &w), &v).unwrap();
        prop_assert_eq!(lhs, &(&s * &inner(&u, &v).unwrap()) + &inner(&w, &v).unwrap());
    }

    #[test]
    fn complement_projection_laws(v in small_vec(5), basis in prop::collection::vec(small_vec(5), 1..4)) {
        prop_assume!(gram_rank(&basis) == basis.len());
        let p = project_complement(&v, &basis).unwrap();
        for b in &basis {
            prop_assert!(inner(&p, b).unwrap().is_zero());
        }
        prop_assert_eq!(project_complement(&p, &basis).unwrap(), p.clone());
        let rest = &v - &p;
        prop_assert_eq!(v.norm2(), &p.norm2() + &rest.norm2());
    }

    #[test]
    fn angle_data_symmetry_and_scaling(a in small_vec(4), b in small_vec(4), k in 1i64..6, neg in any::<bool>()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let ab = angle_data(&a, &b).unwrap();
        let ba = angle_data(&b, &a).unwrap();
        prop_assert_eq!(&ab.c, &ba.c);
        prop_assert_eq!(&ab.r, &ba.r);
        prop_assert_eq!(ab.verdict, ba.verdict);
        let flipped = match ab.longer { Longer::First => Longer::Second, Longer::Second => Longer::First, Longer::Equal => Longer::Equal };
        prop_assert_eq!(ba.longer, flipped);
        let s = Rational::from_int(if neg { -k } else { k });
        let scaled = angle_data(&a.scale(&s), &b.scale(&s)).unwrap();
        prop_assert_eq!(scaled.c, ab.c);
        prop_assert_eq!(scaled.r, ab.r);
        prop_assert_eq!(scaled.verdict, ab.verdict);
    }

    #[test]
    fn theta_text_round_trips(mask in 1u32..255) {
        let t = ThetaSubset::from_mask(mask, 8);
        let back: ThetaSubset = t.to_string().parse().unwrap();
        prop_assert_eq!(back, t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projected_set_invariants((label, theta) in system_and_theta()) {
        let sys = build(label).unwrap();
        let ps = project_system(&sys, &theta).unwrap();
        let set: BTreeSet<&RootVector> = ps.sigma_theta.iter().collect();
        for v in &ps.sigma_theta {
            prop_assert!(!v.is_zero());
            prop_assert!(set.contains(&-v));
            for &i in theta.indices() {
                prop_assert!(inner(v, sys.alpha(i)).unwrap().is_zero());
            }
            // Projecting again changes nothing.
            let theta_roots: Vec<RootVector> = theta.indices().iter().map(|&i| sys.alpha(i).clone()).collect();
            prop_assert_eq!(&project_complement(v, &theta_roots).unwrap(), v);
        }
        prop_assert_eq!(ps.d, sys.rank() - theta.len());
        prop_assert_eq!(gram_rank(&ps.delta_theta), ps.d);
        prop_assert_eq!(gram_rank(&ps.sigma_theta), ps.d);
        let mut covered: Vec<RootVector> = ps.fibers.values().flatten().cloned().collect();
        covered.extend(ps.kernel.iter().cloned());
        covered.sort();
        prop_assert_eq!(covered, sys.roots.clone());
        prop_assert!(weyl_theta_invariance_check(&sys, &theta));
    }

    #[test]
    fn search_ignores_universe_order(
        (label, theta) in system_and_theta(),
        seed in any::<u64>(),
    ) {
        let sys = build(label).unwrap();
        let ps = project_system(&sys, &theta).unwrap();
        let mut shuffled = ps.sigma_theta.clone();
        // Deterministic Fisher-Yates driven by a splitmix sequence.
        let mut x = seed;
        for i in (1..shuffled.len()).rev() {
            x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = x;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^= z >> 31;
            shuffled.swap(i, (z % (i as u64 + 1)) as usize);
        }
        let opts = SearchOptions { rank_cap: ps.d, parallel: false };
        let a = analyze_universe(&ps.sigma_theta, ps.d, opts);
        let b = analyze_universe(&shuffled, ps.d, SearchOptions::new(ps.d));
        prop_assert_eq!(a.max_rank, b.max_rank);
        prop_assert_eq!(&a.max_rank_reports, &b.max_rank_reports);
        prop_assert_eq!(&a.irreducible_reports, &b.irreducible_reports);
        prop_assert_eq!(&a.irreducible_types, &b.irreducible_types);
    }

    #[test]
    fn reported_subsystems_are_root_systems((label, theta) in system_and_theta()) {
        let sys = build(label).unwrap();
        let ps = project_system(&sys, &theta).unwrap();
        let a = analyze_universe(&ps.sigma_theta, ps.d, SearchOptions::new(ps.d));
        for r in a.max_rank_reports.iter().chain(&a.irreducible_reports) {
            prop_assert!(audit_root_system(&r.roots).is_ok());
            prop_assert!(r.roots.iter().all(|v| ps.contains(v)));
            prop_assert_eq!(gram_rank(&r.roots), r.rank);
            prop_assert_eq!(r.components.iter().map(|c| c.rank).sum::<usize>(), r.rank);
            let set: BTreeSet<&RootVector> = r.roots.iter().collect();
            let has_double = r.roots.iter().any(|v| set.contains(&v.scale(&Rational::from_int(2))));
            prop_assert_eq!(r.reduced, !has_double);
            let count: usize = r.components.iter().map(|c| c.root_count()).sum();
            prop_assert_eq!(count, r.roots.len());
            // The reported simple system is a basis with obtuse pairwise angles.
            prop_assert_eq!(gram_rank(&r.simple_system), r.rank);
            for (i, x) in r.simple_system.iter().enumerate() {
                for y in &r.simple_system[i + 1..] {
                    prop_assert!(!inner(x, y).unwrap().is_positive());
                }
            }
            prop_assert_eq!(r.achieves_d, r.rank == ps.d);
        }
    }

    #[test]
    fn prediction_present_iff_applies((label, theta) in system_and_theta()) {
        prop_assume!(label.family.is_classical());
        let sys = build(label).unwrap();
        let v = predict_classical(&sys, &theta).unwrap();
        prop_assert_eq!(v.applies, v.predicted.is_some());
    }
}
