//! Finite lattices: construction from an order, sublattices, and the
//! order-theoretic properties checked on the lattice of varieties.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::OnceLock;

use thiserror::Error;

use crate::terms::Identity;
use crate::varieties::{registry, VarietyId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("relation is not a partial order: {0}")]
    NotAnOrder(String),
    #[error("{0} and {1} have no {2}")]
    MissingBound(String, String, &'static str),
    #[error("subset is not closed: {0}")]
    NotClosed(String),
    #[error("computed order deviates from the reference diagram: {0}")]
    Deviation(String),
}

/// A finite lattice on elements `0..n`, with labels for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
}

/// A pentagon sublattice `o < a < c < i`, `o < b < i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pentagon {
    pub o: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub i: usize,
}

impl Lattice {
    pub fn from_order(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Lattice, LatticeError> {
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotAnOrder("matrix shape".into()));
        }
        for x in 0..n {
            if !leq[x][x] {
                return Err(LatticeError::NotAnOrder(format!("{} is not reflexive", labels[x])));
            }
            for y in 0..n {
                if x != y && leq[x][y] && leq[y][x] {
                    return Err(LatticeError::NotAnOrder(format!(
                        "{} and {} are mutually below each other",
                        labels[x], labels[y]
                    )));
                }
                for z in 0..n {
                    if leq[x][y] && leq[y][z] && !leq[x][z] {
                        return Err(LatticeError::NotAnOrder(format!(
                            "{} <= {} <= {} but not {} <= {}",
                            labels[x], labels[y], labels[z], labels[x], labels[z]
                        )));
                    }
                }
            }
        }
        let bound = |x: usize, y: usize, upper: bool| -> Option<usize> {
            let below = |p: usize, q: usize| if upper { leq[p][q] } else { leq[q][p] };
            let candidates: Vec<usize> = (0..n).filter(|&z| below(x, z) && below(y, z)).collect();
            candidates
                .iter()
                .copied()
                .find(|&z| candidates.iter().all(|&w| below(z, w)))
        };
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                join[x][y] = bound(x, y, true)
                    .ok_or_else(|| LatticeError::MissingBound(labels[x].clone(), labels[y].clone(), "join"))?;
                meet[x][y] = bound(x, y, false)
                    .ok_or_else(|| LatticeError::MissingBound(labels[x].clone(), labels[y].clone(), "meet"))?;
            }
        }
        Ok(Lattice { labels, leq, join, meet })
    }

    /// The lattice whose order is the reflexive-transitive closure of `covers`.
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Lattice, LatticeError> {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(x, y) in covers {
            leq[x][y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        Lattice::from_order(labels, leq)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x][y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x][y]
    }

    pub fn least(&self) -> usize {
        (0..self.len()).fold(0, |acc, x| self.meet(acc, x))
    }

    pub fn greatest(&self) -> usize {
        (0..self.len()).fold(0, |acc, x| self.join(acc, x))
    }

    /// Pairs `(x, y)` with `x ≺ y`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) && !(0..n).any(|z| self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq(y, x)).collect()
    }

    /// The sublattice on `elems`; they must be closed under join and meet.
    pub fn sublattice(&self, elems: &[usize]) -> Result<Lattice, LatticeError> {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        for &x in &set {
            for &y in &set {
                for (z, what) in [(self.join(x, y), "join"), (self.meet(x, y), "meet")] {
                    if !set.contains(&z) {
                        return Err(LatticeError::NotClosed(format!(
                            "{what} of {} and {} is {}",
                            self.labels[x], self.labels[y], self.labels[z]
                        )));
                    }
                }
            }
        }
        let elems: Vec<usize> = set.into_iter().collect();
        let labels = elems.iter().map(|&x| self.labels[x].clone()).collect();
        let leq = elems
            .iter()
            .map(|&x| elems.iter().map(|&y| self.leq(x, y)).collect())
            .collect();
        Lattice::from_order(labels, leq)
    }

    pub fn is_pentagon(&self, p: &Pentagon) -> bool {
        let Pentagon { o, a, b, c, i } = *p;
        self.lt(o, a)
            && self.lt(a, c)
            && self.lt(c, i)
            && self.lt(o, b)
            && self.lt(b, i)
            && self.join(a, b) == i
            && self.join(c, b) == i
            && self.meet(a, b) == o
            && self.meet(c, b) == o
    }

    /// The first pentagon sublattice in index order, if the lattice is not
    /// modular.
    pub fn find_n5(&self) -> Option<Pentagon> {
        let n = self.len();
        for a in 0..n {
            for c in 0..n {
                if !self.lt(a, c) {
                    continue;
                }
                for b in 0..n {
                    let (o, i) = (self.meet(a, b), self.join(a, b));
                    let p = Pentagon { o, a, b, c, i };
                    if self.is_pentagon(&p) {
                        return Some(p);
                    }
                }
            }
        }
        None
    }

    /// A triple with `x∧(y∨z) ≠ (x∧y)∨(x∧z)`.
    pub fn distributivity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        triples(n).find(|&(x, y, z)| self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), self.meet(x, z)))
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_violation().is_none()
    }

    /// A triple with `x∧z = y∧z = 0` but `(x∨y)∧z ≠ 0`.
    pub fn zero_distributivity_violation(&self) -> Option<(usize, usize, usize)> {
        let bottom = self.least();
        triples(self.len()).find(|&(x, y, z)| {
            self.meet(x, z) == bottom && self.meet(y, z) == bottom && self.meet(self.join(x, y), z) != bottom
        })
    }

    pub fn is_zero_distributive(&self) -> bool {
        self.zero_distributivity_violation().is_none()
    }

    /// Neutrality via the median identity, plus distributivity of `x` over
    /// every pair in both directions.
    pub fn is_neutral(&self, x: usize) -> bool {
        let n = self.len();
        (0..n).all(|y| {
            (0..n).all(|z| {
                let median_lo = self.join(self.join(self.meet(x, y), self.meet(y, z)), self.meet(z, x));
                let median_hi = self.meet(self.meet(self.join(x, y), self.join(y, z)), self.join(z, x));
                median_lo == median_hi
                    && self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))
                    && self.join(x, self.meet(y, z)) == self.meet(self.join(x, y), self.join(x, z))
            })
        })
    }

    pub fn neutral_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.is_neutral(x)).collect()
    }

    pub fn atoms(&self) -> Vec<usize> {
        let bottom = self.least();
        self.covers()
            .into_iter()
            .filter(|&(x, _)| x == bottom)
            .map(|(_, y)| y)
            .collect()
    }

    /// Hasse diagram in DOT, nodes and edges sorted by label, edges from
    /// lower to upper element.
    pub fn to_dot(&self, name: &str) -> String {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&x, &y| self.labels[x].cmp(&self.labels[y]));
        let mut edges: Vec<(&str, &str)> = self
            .covers()
            .into_iter()
            .map(|(x, y)| (self.labels[x].as_str(), self.labels[y].as_str()))
            .collect();
        edges.sort();
        let mut out = String::new();
        writeln!(out, "digraph \"{name}\" {{").unwrap();
        out.push_str("  rankdir=BT;\n");
        for x in order {
            writeln!(out, "  \"{0}\" [label=\"{0}\"];", self.labels[x]).unwrap();
        }
        for (x, y) in edges {
            writeln!(out, "  \"{x}\" -> \"{y}\";").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
}

/// The 25 covering pairs of the reference diagram, by ASCII name.
pub const REFERENCE_COVERS: [(&str, &str); 25] = [
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
    ("M", "N"),
    ("M", "SL+M"),
    ("L", "N"),
    ("L", "SL+L"),
    ("SL+K", "SL+M"),
    ("SL+K", "SL+L"),
    ("SL+L", "B+K"),
    ("B+ZM", "B+K"),
    ("N", "SL+N"),
    ("SL+M", "SL+N"),
    ("SL+L", "SL+N"),
    ("SL+N", "IS"),
    ("B+K", "IS"),
];

/// A basis identity of `upper` failing in a generator of `lower`: the
/// certificate that `lower ⊄ upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub lower: VarietyId,
    pub upper: VarietyId,
    pub identity: Identity,
    pub generator: &'static str,
    pub witness: String,
}

/// The subvariety lattice, ordered semantically: `V ≤ W` iff every
/// generator of `V` satisfies every basis identity of `W`.
#[derive(Debug, Clone)]
pub struct VarietyLattice {
    pub lattice: Lattice,
    pub separations: Vec<Separation>,
}

impl VarietyLattice {
    pub fn compute() -> VarietyLattice {
        let records = registry();
        let gens: Vec<_> = records.iter().map(|r| r.generator_algebras()).collect();
        let n = records.len();
        let mut leq = vec![vec![false; n]; n];
        let mut separations = Vec::new();
        for (v, rv) in records.iter().enumerate() {
            for (w, rw) in records.iter().enumerate() {
                let failure = rw.basis.iter().find_map(|id| {
                    gens[v].iter().zip(&rv.generators).find_map(|(g, name)| {
                        g.satisfies(id)
                            .witness
                            .map(|asg| (id.clone(), *name, g.describe(&asg)))
                    })
                });
                match failure {
                    None => leq[v][w] = true,
                    Some((identity, generator, witness)) => separations.push(Separation {
                        lower: rv.id,
                        upper: rw.id,
                        identity,
                        generator,
                        witness,
                    }),
                }
            }
        }
        let labels = records.iter().map(|r| r.id.name().to_string()).collect();
        let lattice = Lattice::from_order(labels, leq).expect("the semantic order is a lattice");
        VarietyLattice { lattice, separations }
    }

    /// Compares the computed covers with [`REFERENCE_COVERS`].
    pub fn verify_reference(&self) -> Result<(), LatticeError> {
        let computed: BTreeSet<(String, String)> = self
            .lattice
            .covers()
            .into_iter()
            .map(|(x, y)| (self.lattice.label(x).to_string(), self.lattice.label(y).to_string()))
            .collect();
        let expected: BTreeSet<(String, String)> = REFERENCE_COVERS
            .iter()
            .map(|&(x, y)| (x.to_string(), y.to_string()))
            .collect();
        if self.lattice.len() != 16 {
            return Err(LatticeError::Deviation(format!("{} elements", self.lattice.len())));
        }
        if let Some((x, y)) = computed.difference(&expected).next() {
            return Err(LatticeError::Deviation(format!("unexpected cover {x} < {y}")));
        }
        if let Some((x, y)) = expected.difference(&computed).next() {
            return Err(LatticeError::Deviation(format!("missing cover {x} < {y}")));
        }
        Ok(())
    }

    pub fn leq(&self, v: VarietyId, w: VarietyId) -> bool {
        self.lattice.leq(v.index(), w.index())
    }

    pub fn join(&self, v: VarietyId, w: VarietyId) -> VarietyId {
        VarietyId::ALL[self.lattice.join(v.index(), w.index())]
    }

    pub fn meet(&self, v: VarietyId, w: VarietyId) -> VarietyId {
        VarietyId::ALL[self.lattice.meet(v.index(), w.index())]
    }

    pub fn ids(&self, elems: &[usize]) -> Vec<VarietyId> {
        elems.iter().map(|&x| VarietyId::ALL[x]).collect()
    }

    pub fn down_set(&self, v: VarietyId) -> Vec<VarietyId> {
        self.ids(&self.lattice.down_set(v.index()))
    }

    /// The sublattice on the given varieties; labels are variety names.
    pub fn restrict(&self, vs: &[VarietyId]) -> Result<Lattice, LatticeError> {
        let idx: Vec<usize> = vs.iter().map(|v| v.index()).collect();
        self.lattice.sublattice(&idx)
    }

    pub fn separation(&self, lower: VarietyId, upper: VarietyId) -> Option<&Separation> {
        self.separations
            .iter()
            .find(|s| s.lower == lower && s.upper == upper)
    }
}

/// Computes the lattice of varieties and checks it against the reference
/// diagram.
pub fn build_lattice() -> Result<VarietyLattice, LatticeError> {
    let lat = VarietyLattice::compute();
    lat.verify_reference()?;
    Ok(lat)
}

/// Shared, lazily computed copy of the (unverified) variety lattice.
pub fn variety_lattice() -> &'static VarietyLattice {
    static CELL: OnceLock<VarietyLattice> = OnceLock::new();
    CELL.get_or_init(VarietyLattice::compute)
}

#[cfg(test)]
mod tests {
    use super::*;
    use VarietyId as V;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn pentagon() -> Lattice {
        Lattice::from_covers(labels(&["o", "a", "b", "c", "i"]), &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)]).unwrap()
    }

    fn chain(n: usize) -> Lattice {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Lattice::from_covers(names, &covers).unwrap()
    }

    #[test]
    fn order_validation() {
        let err = Lattice::from_order(labels(&["a", "b"]), vec![vec![true, true], vec![true, true]]).unwrap_err();
        assert!(matches!(err, LatticeError::NotAnOrder(_)));
        // two incomparable elements: no join
        let err = Lattice::from_covers(labels(&["a", "b"]), &[]).unwrap_err();
        assert!(matches!(err, LatticeError::MissingBound(..)));
    }

    #[test]
    fn small_lattices() {
        let two = chain(2);
        assert!(two.is_distributive());
        assert!(two.is_zero_distributive());
        assert_eq!(two.atoms(), vec![1]);
        assert!(chain(3).find_n5().is_none());

        let n5 = pentagon();
        assert!(n5.find_n5().is_some());
        assert!(!n5.is_distributive());
        assert!(n5.is_zero_distributive());
        assert_eq!(n5.neutral_elements(), vec![0, 4]);
    }

    #[test]
    fn diamond_is_not_zero_distributive() {
        let m3 = Lattice::from_covers(labels(&["0", "a", "b", "c", "1"]), &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        assert!(m3.find_n5().is_none());
        assert!(!m3.is_distributive());
        assert!(m3.zero_distributivity_violation().is_some());
    }

    #[test]
    fn sublattice_requires_closure() {
        let n5 = pentagon();
        assert!(n5.sublattice(&[1, 2]).is_err());
        assert_eq!(n5.sublattice(&[0, 1, 3, 4]).unwrap().len(), 4);
    }

    #[test]
    fn variety_order_matches_reference() {
        let lat = build_lattice().unwrap();
        assert_eq!(lat.lattice.len(), 16);
        assert_eq!(lat.lattice.covers().len(), 25);
    }

    #[test]
    fn join_and_meet_examples() {
        let lat = variety_lattice();
        assert_eq!(lat.join(V::B, V::M), V::IS);
        assert_eq!(lat.join(V::B, V::K), V::BK);
        assert_eq!(lat.join(V::B, V::L), V::BK);
        assert_eq!(lat.meet(V::SlN, V::BK), V::SlL);
    }

    #[test]
    fn non_inclusions_have_certificates() {
        let lat = variety_lattice();
        for v in V::ALL {
            for w in V::ALL {
                assert_eq!(lat.leq(v, w), lat.separation(v, w).is_none(), "{v} {w}");
            }
        }
        let s = lat.separation(V::M, V::BK).unwrap();
        assert_eq!(s.identity.to_string(), "xO = xx");
    }

    #[test]
    fn dot_is_stable() {
        let dot = variety_lattice().lattice.to_dot("IS");
        assert!(dot.starts_with("digraph \"IS\" {\n  rankdir=BT;\n  \"B\" [label=\"B\"];"));
        assert!(dot.contains("  \"T\" -> \"SL\";\n"));
        assert_eq!(dot.matches("->").count(), 25);
        assert_eq!(dot, variety_lattice().lattice.to_dot("IS"));
    }
}
