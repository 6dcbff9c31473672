use std::collections::BTreeSet;

use itertools::Itertools;
use varietylab::lattice::{Lattice, Pentagon};
use varietylab::varieties::VarietyId;
use varietylab::variety_lattice;

/// Covering pairs of the published diagram.
const DIAGRAM: [(&str, &str); 25] = [
    ("T", "ZM"),
    ("T", "SL"),
    ("ZM", "K"),
    ("ZM", "SL+ZM"),
    ("SL", "SL+ZM"),
    ("SL", "B"),
    ("K", "M"),
    ("K", "L"),
    ("K", "SL+K"),
    ("SL+ZM", "SL+K"),
    ("SL+ZM", "B+ZM"),
    ("B", "B+ZM"),
    ("L", "N"),
    ("L", "SL+L"),
    ("M", "N"),
    ("M", "SL+M"),
    ("SL+K", "SL+L"),
    ("SL+K", "SL+M"),
    ("SL+N", "IS"),
    ("B+ZM", "B+K"),
    ("N", "SL+N"),
    ("SL+L", "SL+N"),
    ("SL+L", "B+K"),
    ("SL+M", "SL+N"),
    ("B+K", "IS"),
];

fn lattice() -> &'static Lattice {
    &variety_lattice().lattice
}

fn all_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).cartesian_product(0..n).cartesian_product(0..n).map(|((x, y), z)| (x, y, z))
}

#[test]
fn order_is_the_closure_of_the_diagram() {
    let lat = lattice();
    let n = lat.len();
    let idx = |s: &str| lat.index_of(s).unwrap_or_else(|| panic!("missing {s}"));
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in &DIAGRAM {
        reach[idx(a)][idx(b)] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    for (x, row) in reach.iter().enumerate() {
        for (y, &r) in row.iter().enumerate() {
            assert_eq!(lat.leq(x, y), r, "{} <= {}", lat.label(x), lat.label(y));
        }
    }
    let covers: BTreeSet<(String, String)> =
        lat.covers().into_iter().map(|(x, y)| (lat.label(x).into(), lat.label(y).into())).collect();
    let expected: BTreeSet<(String, String)> = DIAGRAM.iter().map(|&(a, b)| (a.into(), b.into())).collect();
    assert_eq!(covers, expected);
}

#[test]
fn join_and_meet_obey_lattice_laws() {
    let lat = lattice();
    for (x, y, z) in all_triples(lat.len()) {
        assert_eq!(lat.join(x, y), lat.join(y, x));
        assert_eq!(lat.meet(x, y), lat.meet(y, x));
        assert_eq!(lat.join(lat.join(x, y), z), lat.join(x, lat.join(y, z)));
        assert_eq!(lat.meet(lat.meet(x, y), z), lat.meet(x, lat.meet(y, z)));
        assert_eq!(lat.join(x, lat.meet(x, y)), x);
        assert_eq!(lat.meet(x, lat.join(x, y)), x);
        let j = lat.join(x, y);
        assert!(lat.leq(x, j) && lat.leq(y, j));
        assert!(!(lat.leq(x, z) && lat.leq(y, z)) || lat.leq(j, z));
    }
}

#[test]
fn non_inclusions_are_certified() {
    let vl = variety_lattice();
    for &v in &VarietyId::ALL {
        for &w in &VarietyId::ALL {
            let sep = vl.separation(v, w);
            if vl.leq(v, w) {
                assert!(sep.is_none(), "{v} <= {w}");
                continue;
            }
            let sep = sep.unwrap_or_else(|| panic!("no certificate for {v} not <= {w}"));
            assert!(w.record().basis.contains(&sep.identity));
            let g = varietylab::builtin(sep.generator).unwrap();
            assert!(v.record().generators.contains(&sep.generator));
            assert!(!g.satisfies(&sep.identity).holds());
        }
    }
}

/// Closure of a set under join and meet.
fn generated(lat: &Lattice, seed: &[usize]) -> Vec<usize> {
    let mut set: BTreeSet<usize> = seed.iter().copied().collect();
    loop {
        let next: BTreeSet<usize> = set
            .iter()
            .cartesian_product(set.iter())
            .flat_map(|(&a, &b)| [lat.join(a, b), lat.meet(a, b)])
            .chain(set.iter().copied())
            .collect();
        if next == set {
            return set.into_iter().collect();
        }
        set = next;
    }
}

fn distributive_on(lat: &Lattice, elems: &[usize]) -> bool {
    elems.iter().cartesian_product(elems).cartesian_product(elems).all(|((&x, &y), &z)| {
        lat.meet(x, lat.join(y, z)) == lat.join(lat.meet(x, y), lat.meet(x, z))
    })
}

#[test]
fn neutral_elements_match_generated_sublattices() {
    let lat = lattice();
    let n = lat.len();
    let brute: Vec<usize> = (0..n)
        .filter(|&x| (0..n).cartesian_product(0..n).all(|(y, z)| distributive_on(lat, &generated(lat, &[x, y, z]))))
        .collect();
    assert_eq!(lat.neutral_elements(), brute);
    for name in ["SL", "ZM"] {
        assert!(brute.contains(&lat.index_of(name).unwrap()), "{name}");
    }
}

#[test]
fn pentagon_witness_is_a_sublattice() {
    let lat = lattice();
    let p = lat.find_n5().expect("lattice is non-modular");
    let Pentagon { o, a, b, c, i } = p;
    assert_eq!(BTreeSet::from([o, a, b, c, i]).len(), 5);
    assert!(lat.lt(o, a) && lat.lt(a, c) && lat.lt(c, i) && lat.lt(o, b) && lat.lt(b, i));
    assert_eq!(lat.join(a, b), i);
    assert_eq!(lat.join(c, b), i);
    assert_eq!(lat.meet(a, b), o);
    assert_eq!(lat.meet(c, b), o);
    assert!(lat.is_pentagon(&p));
    assert!(!lat.is_distributive());
}

#[test]
fn small_down_sets() {
    let vl = variety_lattice();
    assert_eq!(vl.down_set(VarietyId::B), vec![VarietyId::T, VarietyId::SL, VarietyId::B]);
    assert_eq!(vl.down_set(VarietyId::N).len(), 6);
    assert_eq!(vl.join(VarietyId::B, VarietyId::K), vl.join(VarietyId::B, VarietyId::L));
    assert_eq!(vl.join(VarietyId::B, VarietyId::M), VarietyId::IS);
    assert_eq!(vl.join(VarietyId::B, VarietyId::N), VarietyId::IS);
}

#[test]
fn zero_distributivity_and_atoms_by_brute_force() {
    let lat = lattice();
    let bottom = lat.least();
    let holds = all_triples(lat.len()).all(|(x, y, z)| {
        !(lat.meet(x, y) == bottom && lat.meet(x, z) == bottom) || lat.meet(x, lat.join(y, z)) == bottom
    });
    assert_eq!(lat.is_zero_distributive(), holds);
    assert!(holds);
    let atoms: Vec<&str> = (0..lat.len())
        .filter(|&x| x != bottom && (0..lat.len()).all(|y| !(lat.lt(bottom, y) && lat.lt(y, x))))
        .map(|x| lat.label(x))
        .sorted()
        .collect();
    assert_eq!(atoms, ["SL", "ZM"]);
}

#[test]
fn dot_export_is_stable() {
    let lat = lattice();
    let dot = lat.to_dot("IS");
    assert_eq!(dot, lat.to_dot("IS"));
    assert_eq!(dot.matches("->").count(), 25);
    assert!(dot.starts_with("digraph"));
}
