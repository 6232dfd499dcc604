use rootproj::catalog::{build, check_axioms, check_simple_expansion, Convention, Family, RootSystemData, SystemLabel};
use rootproj::exact::{gram_rank, RootVector};

fn expected_count(label: SystemLabel) -> usize {
    let n = label.rank;
    match label.family {
        Family::A => n * (n + 1),
        Family::B | Family::C => 2 * n * n,
        Family::D => 2 * n * (n - 1),
        Family::E => [72, 126, 240][n - 6],
        Family::F => 48,
        Family::G => 12,
    }
}

#[test]
fn every_buildable_system_satisfies_the_axioms() {
    for label in SystemLabel::all_buildable(8) {
        let sys = build(label).unwrap();
        assert_eq!(sys.roots.len(), expected_count(label), "{label}");
        assert_eq!(sys.rank(), label.rank);
        assert_eq!(gram_rank(&sys.simple), label.rank, "{label}");
        assert!(sys.roots.iter().all(|r| sys.contains(&-r)));
        assert!(check_axioms(&sys).is_ok(), "{label}");
        assert!(check_simple_expansion(&sys).is_ok(), "{label}");
    }
}

#[test]
fn rank_constraints_are_enforced() {
    assert!(SystemLabel::new(Family::E, 5).is_err());
    assert!(SystemLabel::new(Family::F, 3).is_err());
    assert!(SystemLabel::new(Family::G, 3).is_err());
    assert!(SystemLabel::new(Family::D, 1).is_err());
    assert!(SystemLabel::new(Family::A, 0).is_err());
    assert!(SystemLabel::parse("E9", Convention::Labesse).is_err());
}

#[test]
fn conventions_describe_the_same_diagram() {
    // Bourbaki numbering swaps the first two nodes of the E diagram.
    for n in 6..=8 {
        let l = build(SystemLabel::with_convention(Family::E, n, Convention::Labesse).unwrap()).unwrap();
        let b = build(SystemLabel::with_convention(Family::E, n, Convention::Bourbaki).unwrap()).unwrap();
        let swap = |i: usize| match i {
            1 => 2,
            2 => 1,
            i => i,
        };
        for i in 1..=n {
            for j in i + 1..=n {
                assert_eq!(l.is_adjacent(i, j), b.is_adjacent(swap(i), swap(j)), "E{n} {i} {j}");
            }
        }
        assert!(l.is_adjacent(1, 4));
        assert!(b.is_adjacent(2, 4));
    }
}

#[test]
fn serialized_system_round_trips() {
    let sys = build(SystemLabel::new(Family::F, 4).unwrap()).unwrap();
    let text = serde_json::to_string(&sys).unwrap();
    let back: RootSystemData = serde_json::from_str(&text).unwrap();
    let rebuilt = RootSystemData::from_parts(back.label, back.roots, back.simple).unwrap();
    assert_eq!(rebuilt, sys);
}

#[test]
fn malformed_parts_are_rejected() {
    let sys = build(SystemLabel::new(Family::A, 2).unwrap()).unwrap();
    let mut roots = sys.roots.clone();
    roots.pop();
    assert!(RootSystemData::from_parts(sys.label, roots, sys.simple.clone()).is_err());
    let mut roots = sys.roots.clone();
    roots.push(RootVector::zeros(sys.ambient_dim));
    assert!(RootSystemData::from_parts(sys.label, roots, sys.simple.clone()).is_err());
}
