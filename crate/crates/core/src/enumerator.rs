//! Exhaustive generation of small implication semigroups and zroupoids up to
//! isomorphism, and their classification into the sixteen varieties.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::models::{FiniteAlgebra, ModelError};
use crate::terms::{Identity, Mode};
use crate::varieties::{variety_of, IdentitySet, VarietyError, VarietyId};

pub const MAX_ORDER_IS: usize = 4;
pub const MAX_ORDER_IZ: usize = 4;

const UNSET: u8 = u8::MAX;

#[derive(Debug, Error)]
pub enum EnumerationError {
    #[error("order must be at least 1")]
    EmptyOrder,
    #[error("order {order} exceeds the {mode} bound of {bound}")]
    BoundExceeded { order: usize, mode: Mode, bound: usize },
    #[error("classification needs IS mode")]
    NotSemigroups,
    #[error("algebra {index} generates {variety} but disagrees on {identity}: holds={holds}")]
    Coincidence {
        index: usize,
        variety: VarietyId,
        identity: Identity,
        holds: bool,
    },
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Canonical representatives of all algebras of one order and mode, sorted
/// by canonical bytes.
#[derive(Debug, Clone)]
pub struct EnumerationReport {
    pub order: usize,
    pub mode: Mode,
    pub algebras: Vec<FiniteAlgebra>,
}

impl EnumerationReport {
    pub fn count(&self) -> usize {
        self.algebras.len()
    }

    /// One block per algebra in the algebra file format, with an optional
    /// variety header, and a summary footer.
    pub fn render(&self, classes: Option<&[VarietyId]>) -> String {
        let mut out = String::new();
        for (i, a) in self.algebras.iter().enumerate() {
            if let Some(cs) = classes {
                writeln!(out, "# variety: {}", cs[i]).unwrap();
            }
            out.push_str(&a.to_file_format());
            out.push('\n');
        }
        writeln!(out, "order={} mode={} classes={}", self.order, self.mode, self.count()).unwrap();
        out
    }
}

/// Lexicographically least `[n, table...]` over all relabelings that fix the
/// distinguished element and send it to index 0.
pub fn canonical_form(a: &FiniteAlgebra) -> Vec<u8> {
    let n = a.order();
    let d = a.distinguished();
    let others: Vec<usize> = (0..n).filter(|&i| i != d).collect();
    let mut best: Option<Vec<u8>> = None;
    for perm in others.iter().copied().permutations(others.len()) {
        // perm[k] is the old element placed at new index k + 1
        let mut old_of_new = Vec::with_capacity(n);
        old_of_new.push(d);
        old_of_new.extend(perm);
        let mut new_of_old = vec![0u8; n];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new as u8;
        }
        let mut bytes = Vec::with_capacity(n * n + 1);
        bytes.push(n as u8);
        for &i in &old_of_new {
            for &j in &old_of_new {
                bytes.push(new_of_old[a.op(i, j)]);
            }
        }
        if best.as_ref().is_none_or(|b| bytes < *b) {
            best = Some(bytes);
        }
    }
    best.expect("at least one permutation")
}

fn algebra_from_bytes(bytes: &[u8]) -> FiniteAlgebra {
    let n = bytes[0] as usize;
    FiniteAlgebra::from_flat(bytes[1..].iter().map(|&b| b as usize).collect(), n, 0)
}

struct Search {
    n: usize,
    mode: Mode,
    perms: Vec<Vec<u8>>,
}

impl Search {
    fn new(n: usize, mode: Mode) -> Search {
        let perms = (1..n as u8)
            .permutations(n - 1)
            .map(|p| std::iter::once(0).chain(p).collect())
            .collect();
        Search { n, mode, perms }
    }

    #[inline]
    fn get(&self, t: &[u8], i: u8, j: u8) -> Option<u8> {
        let v = t[i as usize * self.n + j as usize];
        (v != UNSET).then_some(v)
    }

    /// Rejects a partial table if some fully defined instance of an axiom
    /// fails.
    fn consistent(&self, t: &[u8]) -> bool {
        let n = self.n as u8;
        match self.mode {
            Mode::IS => {
                if let Some(w2) = self.get(t, 0, 0) {
                    if self.get(t, w2, 0).is_some_and(|w3| w3 != 0) {
                        return false;
                    }
                }
                for x in 0..n {
                    for y in 0..n {
                        let Some(xy) = self.get(t, x, y) else { continue };
                        for z in 0..n {
                            let lhs = self.get(t, xy, z);
                            let rhs = self.get(t, y, z).and_then(|yz| self.get(t, x, yz));
                            if let (Some(l), Some(r)) = (lhs, rhs) {
                                if l != r {
                                    return false;
                                }
                            }
                        }
                    }
                }
                true
            }
            Mode::IZ => {
                if let Some(z1) = self.get(t, 0, 0) {
                    if self.get(t, z1, 0).is_some_and(|z2| z2 != 0) {
                        return false;
                    }
                }
                for x in 0..n {
                    for y in 0..n {
                        let Some(xy) = self.get(t, x, y) else { continue };
                        for z in 0..n {
                            let Some(lhs) = self.get(t, xy, z) else { continue };
                            let rhs = (|| {
                                let zp = self.get(t, z, 0)?;
                                let p = self.get(t, zp, x)?;
                                let q = self.get(t, y, z)?;
                                let qp = self.get(t, q, 0)?;
                                let r = self.get(t, p, qp)?;
                                self.get(t, r, 0)
                            })();
                            if rhs.is_some_and(|r| r != lhs) {
                                return false;
                            }
                        }
                    }
                }
                true
            }
        }
    }

    /// Checks of the complete table not covered by [`consistent`].
    fn complete(&self, t: &[u8]) -> bool {
        match self.mode {
            // xyz = zωxyzωω
            Mode::IS => {
                let n = self.n as u8;
                let op = |a: u8, b: u8| t[a as usize * self.n + b as usize];
                (0..n).all(|x| {
                    (0..n).all(|y| {
                        (0..n).all(|z| {
                            let xyz = op(op(x, y), z);
                            op(op(op(z, 0), xyz), op(0, 0)) == xyz
                        })
                    })
                })
            }
            Mode::IZ => true,
        }
    }

    /// Whether `t` is the least table in its isomorphism class.
    fn is_canonical(&self, t: &[u8]) -> bool {
        let n = self.n;
        let mut inv = vec![0u8; n];
        'perm: for p in &self.perms[1..] {
            for (new, &old) in p.iter().enumerate() {
                inv[old as usize] = new as u8;
            }
            for i in 0..n {
                for j in 0..n {
                    let v = inv[t[p[i] as usize * n + p[j] as usize] as usize];
                    let cur = t[i * n + j];
                    if v < cur {
                        return false;
                    }
                    if v > cur {
                        continue 'perm;
                    }
                }
            }
        }
        true
    }

    fn run(&self, t: &mut Vec<u8>, cell: usize, out: &mut Vec<Vec<u8>>) {
        if cell == t.len() {
            if self.complete(t) && self.is_canonical(t) {
                let mut bytes = Vec::with_capacity(t.len() + 1);
                bytes.push(self.n as u8);
                bytes.extend_from_slice(t);
                out.push(bytes);
            }
            return;
        }
        for v in 0..self.n as u8 {
            t[cell] = v;
            if self.consistent(t) {
                self.run(t, cell + 1, out);
            }
        }
        t[cell] = UNSET;
    }

    /// Consistent assignments of the first row, the unit of parallel work.
    fn first_rows(&self) -> Vec<Vec<u8>> {
        let n = self.n;
        (0..n)
            .map(|_| 0..n as u8)
            .multi_cartesian_product()
            .filter_map(|row| {
                let mut t = vec![UNSET; n * n];
                t[..n].copy_from_slice(&row);
                self.consistent(&t).then_some(t)
            })
            .collect()
    }

    fn extend_prefix(&self, mut t: Vec<u8>) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        self.run(&mut t, self.n, &mut out);
        out
    }
}

fn check_bounds(order: usize, mode: Mode) -> Result<(), EnumerationError> {
    let bound = match mode {
        Mode::IS => MAX_ORDER_IS,
        Mode::IZ => MAX_ORDER_IZ,
    };
    if order == 0 {
        return Err(EnumerationError::EmptyOrder);
    }
    if order > bound {
        return Err(EnumerationError::BoundExceeded { order, mode, bound });
    }
    Ok(())
}

fn finish(order: usize, mode: Mode, mut tables: Vec<Vec<u8>>) -> EnumerationReport {
    tables.sort();
    tables.dedup();
    EnumerationReport {
        order,
        mode,
        algebras: tables.iter().map(|b| algebra_from_bytes(b)).collect(),
    }
}

/// All algebras of the given order up to isomorphism, using the global
/// rayon pool.
pub fn enumerate(order: usize, mode: Mode) -> Result<EnumerationReport, EnumerationError> {
    check_bounds(order, mode)?;
    let search = Search::new(order, mode);
    let tables = search
        .first_rows()
        .into_par_iter()
        .flat_map_iter(|t| search.extend_prefix(t))
        .collect();
    Ok(finish(order, mode, tables))
}

/// [`enumerate`] with an explicit worker count; `jobs == 1` runs on the
/// calling thread.
pub fn enumerate_with_jobs(order: usize, mode: Mode, jobs: usize) -> Result<EnumerationReport, EnumerationError> {
    check_bounds(order, mode)?;
    if jobs <= 1 {
        let search = Search::new(order, mode);
        let tables = search
            .first_rows()
            .into_iter()
            .flat_map(|t| search.extend_prefix(t))
            .collect();
        return Ok(finish(order, mode, tables));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| EnumerationError::Pool(e.to_string()))?;
    pool.install(|| enumerate(order, mode))
}

/// Per-algebra variety assignment plus counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub varieties: Vec<VarietyId>,
    pub per_variety: BTreeMap<VarietyId, usize>,
}

/// Assigns each algebra its variety and checks that the algebra satisfies
/// exactly the identities of the standard set that hold in that variety.
pub fn classify(report: &EnumerationReport) -> Result<Classification, EnumerationError> {
    if report.mode != Mode::IS {
        return Err(EnumerationError::NotSemigroups);
    }
    let set = IdentitySet::standard();
    let varieties: Vec<VarietyId> = report
        .algebras
        .iter()
        .map(variety_of)
        .collect::<Result<_, _>>()?;
    let needed: BTreeSet<VarietyId> = varieties.iter().copied().collect();
    let decisions: BTreeMap<VarietyId, Vec<bool>> = needed
        .into_par_iter()
        .map(|v| (v, set.decisions(v)))
        .collect();
    let w = set.words().len();
    report
        .algebras
        .par_iter()
        .enumerate()
        .try_for_each(|(index, a)| {
            let classes = set.classes(std::slice::from_ref(a));
            let variety = varieties[index];
            let expected = &decisions[&variety];
            for i in 0..w {
                for j in 0..w {
                    let holds = classes[i] == classes[j];
                    if holds != expected[i * w + j] {
                        return Err(EnumerationError::Coincidence {
                            index,
                            variety,
                            identity: set.identity(i, j),
                            holds,
                        });
                    }
                }
            }
            Ok(())
        })?;
    let mut per_variety = BTreeMap::new();
    for &v in &varieties {
        *per_variety.entry(v).or_insert(0) += 1;
    }
    Ok(Classification { varieties, per_variety })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::builtin;

    fn contains_iso(report: &EnumerationReport, a: &FiniteAlgebra) -> bool {
        let key = canonical_form(a);
        report.algebras.iter().any(|b| canonical_form(b) == key)
    }

    #[test]
    fn canonical_form_examples() {
        let z = builtin("Z").unwrap();
        let swapped = FiniteAlgebra::new(vec![vec![0, 0], vec![0, 0]], 0).unwrap();
        assert_eq!(canonical_form(&z), canonical_form(&swapped));
        assert_ne!(canonical_form(&builtin("A").unwrap()), canonical_form(&z));
        assert_eq!(canonical_form(&builtin("trivial").unwrap()), vec![1, 0]);
    }

    #[test]
    fn canonical_check_agrees_with_canonical_form() {
        let search = Search::new(3, Mode::IS);
        for t in (0..9).map(|_| 0..3u8).multi_cartesian_product() {
            let a = algebra_from_bytes(&[&[3u8][..], &t].concat());
            assert_eq!(search.is_canonical(&t), canonical_form(&a)[1..] == t[..], "{t:?}");
        }
    }

    #[test]
    fn small_orders() {
        assert_eq!(enumerate(1, Mode::IS).unwrap().count(), 1);
        let two = enumerate(2, Mode::IS).unwrap();
        assert!(contains_iso(&two, &builtin("A").unwrap()));
        assert!(contains_iso(&two, &builtin("Z").unwrap()));
        let iz = enumerate(2, Mode::IZ).unwrap();
        assert!(contains_iso(&iz, &builtin("2s").unwrap()));
        assert!(contains_iso(&iz, &builtin("2b").unwrap()));
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(matches!(enumerate(5, Mode::IS), Err(EnumerationError::BoundExceeded { .. })));
        assert!(matches!(enumerate(0, Mode::IZ), Err(EnumerationError::EmptyOrder)));
    }

    #[test]
    fn classification_of_small_orders() {
        let one = classify(&enumerate(1, Mode::IS).unwrap()).unwrap();
        assert_eq!(one.per_variety, BTreeMap::from([(VarietyId::T, 1)]));
        let report = enumerate(2, Mode::IS).unwrap();
        let c = classify(&report).unwrap();
        for (a, v) in report.algebras.iter().zip(&c.varieties) {
            if a.is_isomorphic(&builtin("A").unwrap()) {
                assert_eq!(*v, VarietyId::SL);
            }
            if a.is_isomorphic(&builtin("Z").unwrap()) {
                assert_eq!(*v, VarietyId::ZM);
            }
        }
    }

    #[test]
    fn report_rendering() {
        let report = enumerate(1, Mode::IS).unwrap();
        let text = report.render(Some(&[VarietyId::T]));
        assert!(text.starts_with("# variety: T\nsize: 1\nomega: 0\n0\n"));
        assert!(text.ends_with("order=1 mode=IS classes=1\n"));
    }
}
