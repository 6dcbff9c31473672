//! Finite (2,0)-algebras given by Cayley tables, used as an exact oracle for
//! identities, together with the constructions needed to build new models
//! from old ones.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::terms::{Identity, Letter, Mode, Symbol, TreeTerm, Word};

/// Values for the letters of a term, keyed by letter.
pub type Assignment = BTreeMap<Letter, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown builtin algebra {0:?}")]
    UnknownBuiltin(String),
    #[error("letter {0} has no value")]
    Unassigned(Letter),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("not an ideal: {left} * {right} = {product} escapes the set")]
    NotAnIdeal {
        left: usize,
        right: usize,
        product: usize,
    },
    #[error("axiom {axiom} fails with witness {witness:?}")]
    AxiomFailure { axiom: String, witness: Vec<usize> },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// A finite algebra of type (2,0): an `n × n` operation table and one
/// distinguished element (`ω` for semigroups, `0` for zroupoids).
///
/// `table[i][j]` is `i·j`, read as `i → j` in zroupoid mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: Option<String>,
    labels: Vec<String>,
    order: usize,
    table: Vec<usize>,
    distinguished: usize,
}

impl FiniteAlgebra {
    pub fn new(rows: Vec<Vec<usize>>, distinguished: usize) -> Result<Self, ModelError> {
        let order = rows.len();
        if order == 0 {
            return Err(ModelError::InvalidTable("empty table".into()));
        }
        if distinguished >= order {
            return Err(ModelError::InvalidTable(format!(
                "distinguished element {distinguished} out of range"
            )));
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != order {
                return Err(ModelError::InvalidTable(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= order) {
                return Err(ModelError::InvalidTable(format!("entry {bad} in row {i} out of range")));
            }
            table.extend(row);
        }
        Ok(FiniteAlgebra {
            name: None,
            labels: (0..order).map(|i| i.to_string()).collect(),
            order,
            table,
            distinguished,
        })
    }

    pub(crate) fn from_flat(table: Vec<usize>, order: usize, distinguished: usize) -> Self {
        debug_assert_eq!(table.len(), order * order);
        FiniteAlgebra {
            name: None,
            labels: (0..order).map(|i| i.to_string()).collect(),
            order,
            table,
            distinguished,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        assert_eq!(labels.len(), self.order, "one label per element");
        self.labels = labels;
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn distinguished(&self) -> usize {
        self.distinguished
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index of the element with the given label.
    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn op(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.table[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|i| self.row(i).to_vec()).collect()
    }

    /// Renders an assignment as `x=b, y=a` using element labels.
    pub fn describe(&self, asg: &Assignment) -> String {
        asg.iter()
            .map(|(x, &v)| format!("{x}={}", self.labels[v]))
            .join(", ")
    }

    pub fn evaluate<T: Evaluate + ?Sized>(&self, t: &T, asg: &Assignment) -> Result<usize, ModelError> {
        let mut env = [0usize; 26];
        for x in t.letters() {
            let v = *asg.get(&x).ok_or(ModelError::Unassigned(x))?;
            if v >= self.order {
                return Err(ModelError::InvalidTable(format!("value {v} for {x} out of range")));
            }
            env[x.index()] = v;
        }
        Ok(t.eval_in(self, &env))
    }

    /// Checks `id` under every assignment of its letters, in lexicographic
    /// order (first letter most significant), keeping the first failure.
    pub fn satisfies(&self, id: &Identity) -> Satisfaction {
        let witness = match id {
            Identity::Is { lhs, rhs } => self.first_failure(lhs, rhs, None),
            Identity::Iz { lhs, rhs } => self.first_failure(lhs, rhs, None),
        };
        Satisfaction { witness }
    }

    /// Same verdict and witness as [`satisfies`](Self::satisfies), with the
    /// value of the first letter split across rayon workers.
    pub fn satisfies_par(&self, id: &Identity) -> Satisfaction {
        let letters = id.letters();
        if letters.is_empty() {
            return self.satisfies(id);
        }
        let witness = (0..self.order).into_par_iter().find_map_first(|v| match id {
            Identity::Is { lhs, rhs } => self.first_failure(lhs, rhs, Some(v)),
            Identity::Iz { lhs, rhs } => self.first_failure(lhs, rhs, Some(v)),
        });
        Satisfaction { witness }
    }

    fn first_failure<T: Evaluate>(&self, lhs: &T, rhs: &T, first_value: Option<usize>) -> Option<Assignment> {
        let letters: Vec<Letter> = (&lhs.letters() | &rhs.letters()).into_iter().collect();
        let k = letters.len();
        let mut digits = vec![0usize; k];
        let fixed = usize::from(first_value.is_some());
        if let Some(v) = first_value {
            digits[0] = v;
        }
        let mut env = [0usize; 26];
        loop {
            for (x, &d) in letters.iter().zip(&digits) {
                env[x.index()] = d;
            }
            if lhs.eval_in(self, &env) != rhs.eval_in(self, &env) {
                return Some(letters.iter().copied().zip(digits.iter().copied()).collect());
            }
            // odometer over the free positions, last letter fastest
            let mut pos = k;
            loop {
                if pos == fixed {
                    return None;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < self.order {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    pub fn check_axioms(&self, mode: Mode) -> AxiomReport {
        let mut checks = Vec::new();
        match mode {
            Mode::IS => {
                let n = self.order;
                let assoc = (0..n)
                    .cartesian_product(0..n)
                    .cartesian_product(0..n)
                    .find(|&((x, y), z)| self.op(self.op(x, y), z) != self.op(x, self.op(y, z)))
                    .map(|((x, y), z)| vec![x, y, z]);
                checks.push(AxiomCheck {
                    axiom: "associativity".into(),
                    witness: assoc,
                });
                for id in is_axioms() {
                    checks.push(AxiomCheck {
                        axiom: id.to_string(),
                        witness: self.satisfies(id).witness.map(|a| a.into_values().collect()),
                    });
                }
            }
            Mode::IZ => {
                for id in iz_axioms() {
                    checks.push(AxiomCheck {
                        axiom: id.to_string(),
                        witness: self.satisfies(id).witness.map(|a| a.into_values().collect()),
                    });
                }
            }
        }
        AxiomReport { mode, checks }
    }

    /// Fails with the first violated axiom of `mode`.
    pub fn require_axioms(&self, mode: Mode) -> Result<(), ModelError> {
        match self.check_axioms(mode).first_failure() {
            None => Ok(()),
            Some(c) => Err(ModelError::AxiomFailure {
                axiom: c.axiom.clone(),
                witness: c.witness.clone().unwrap_or_default(),
            }),
        }
    }

    /// Closure of `seed ∪ {distinguished}` under the binary operation.
    pub fn closure(&self, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = seed.iter().copied().filter(|&s| s < self.order).collect();
        set.insert(self.distinguished);
        loop {
            let new: Vec<usize> = set
                .iter()
                .cartesian_product(set.iter())
                .map(|(&i, &j)| self.op(i, j))
                .filter(|p| !set.contains(p))
                .collect();
            if new.is_empty() {
                return set;
            }
            set.extend(new);
        }
    }

    pub fn subalgebra_generated(&self, seed: &BTreeSet<usize>) -> FiniteAlgebra {
        let elems: Vec<usize> = self.closure(seed).into_iter().collect();
        self.restrict(&elems)
    }

    /// The table restricted to `elems`, which must be closed and contain
    /// the distinguished element.
    fn restrict(&self, elems: &[usize]) -> FiniteAlgebra {
        let index: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let table = elems
            .iter()
            .flat_map(|&i| elems.iter().map(move |&j| (i, j)))
            .map(|(i, j)| index[&self.op(i, j)])
            .collect();
        let mut sub = FiniteAlgebra::from_flat(table, elems.len(), index[&self.distinguished]);
        sub.labels = elems.iter().map(|&e| self.labels[e].clone()).collect();
        sub.name = self.name.as_ref().map(|n| format!("sub({n})"));
        sub
    }

    pub fn direct_product(&self, other: &FiniteAlgebra) -> FiniteAlgebra {
        let (n, m) = (self.order, other.order);
        let mut table = Vec::with_capacity(n * m * n * m);
        for i in 0..n * m {
            for j in 0..n * m {
                let (a1, b1) = (i / m, i % m);
                let (a2, b2) = (j / m, j % m);
                table.push(self.op(a1, a2) * m + other.op(b1, b2));
            }
        }
        let mut p = FiniteAlgebra::from_flat(table, n * m, self.distinguished * m + other.distinguished);
        p.labels = (0..n * m)
            .map(|i| format!("({},{})", self.labels[i / m], other.labels[i % m]))
            .collect();
        if let (Some(a), Some(b)) = (&self.name, &other.name) {
            p.name = Some(format!("{a}x{b}"));
        }
        p
    }

    /// Collapses a two-sided ideal to one element. The class keeps the
    /// position of the ideal's smallest member; other elements keep their
    /// relative order.
    pub fn rees_quotient(&self, ideal: &BTreeSet<usize>) -> Result<FiniteAlgebra, ModelError> {
        let Some(&rep) = ideal.first() else {
            return Err(ModelError::InvalidTable("empty ideal".into()));
        };
        if let Some(&bad) = ideal.iter().find(|&&i| i >= self.order) {
            return Err(ModelError::InvalidTable(format!("ideal element {bad} out of range")));
        }
        for s in 0..self.order {
            for &i in ideal {
                for (l, r) in [(s, i), (i, s)] {
                    let p = self.op(l, r);
                    if !ideal.contains(&p) {
                        return Err(ModelError::NotAnIdeal {
                            left: l,
                            right: r,
                            product: p,
                        });
                    }
                }
            }
        }
        let kept: Vec<usize> = (0..self.order).filter(|i| !ideal.contains(i) || *i == rep).collect();
        let index: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let class = |e: usize| if ideal.contains(&e) { index[&rep] } else { index[&e] };
        let table = kept
            .iter()
            .flat_map(|&i| kept.iter().map(move |&j| (i, j)))
            .map(|(i, j)| class(self.op(i, j)))
            .collect();
        let mut q = FiniteAlgebra::from_flat(table, kept.len(), class(self.distinguished));
        q.labels = kept
            .iter()
            .map(|&e| {
                if e == rep {
                    format!("[{}]", self.labels[e])
                } else {
                    self.labels[e].clone()
                }
            })
            .collect();
        q.name = self.name.as_ref().map(|n| format!("{n}/I"));
        Ok(q)
    }

    /// Checks that `S` embeds subdirectly into `ωS × S/ωS` with a band as
    /// the first factor and a 3-nilpotent second factor.
    pub fn subdirect_check(&self) -> Result<SubdirectReport, ModelError> {
        self.require_axioms(Mode::IS)?;
        let n = self.order;
        let e = self.distinguished;
        let mut failures = Vec::new();
        if self.op(e, e) != e {
            failures.push(format!("distinguished element {} is not idempotent", self.labels[e]));
        }
        for s in 0..n {
            if self.op(e, s) != self.op(s, e) {
                failures.push(format!("distinguished element does not commute with {}", self.labels[s]));
            }
        }
        let ideal: BTreeSet<usize> = (0..n).map(|s| self.op(e, s)).collect();
        let ideal_elems: Vec<usize> = ideal.iter().copied().collect();
        if self.closure(&ideal) != ideal {
            failures.push("eS is not closed under the operation".into());
        }
        let band = self.restrict(&ideal_elems);
        let quotient = self.rees_quotient(&ideal)?;
        let band_index: BTreeMap<usize, usize> = ideal_elems.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let rep = ideal_elems[0];
        let kept: Vec<usize> = (0..n).filter(|i| !ideal.contains(i) || *i == rep).collect();
        let q_index: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let eta = |s: usize| if ideal.contains(&s) { q_index[&rep] } else { q_index[&s] };
        let phi = |s: usize| band_index[&self.op(e, s)];

        let images: BTreeSet<(usize, usize)> = (0..n).map(|s| (phi(s), eta(s))).collect();
        if images.len() != n {
            failures.push("the pair map is not injective".into());
        }
        if (0..n).map(phi).collect::<BTreeSet<_>>().len() != band.order()
            || (0..n).map(eta).collect::<BTreeSet<_>>().len() != quotient.order()
        {
            failures.push("the pair map is not onto each factor".into());
        }
        if phi(e) != band.distinguished() || eta(e) != quotient.distinguished() {
            failures.push("the pair map does not preserve the constant".into());
        }
        'hom: for s in 0..n {
            for t in 0..n {
                let st = self.op(s, t);
                if phi(st) != band.op(phi(s), phi(t)) || eta(st) != quotient.op(eta(s), eta(t)) {
                    failures.push(format!(
                        "the pair map is not a homomorphism at ({}, {})",
                        self.labels[s], self.labels[t]
                    ));
                    break 'hom;
                }
            }
        }
        if let Some(w) = band.satisfies(&band_law()).witness {
            failures.push(format!("eS violates xx = x at {}", band.describe(&w)));
        }
        if let Some(w) = quotient.satisfies(&nil3_law()).witness {
            failures.push(format!("S/eS violates xyz = O at {}", quotient.describe(&w)));
        }
        Ok(SubdirectReport {
            ideal: ideal_elems,
            band,
            quotient,
            failures,
        })
    }

    /// Isomorphism fixing the distinguished elements, by brute force over
    /// bijections.
    pub fn is_isomorphic(&self, other: &FiniteAlgebra) -> bool {
        if self.order != other.order {
            return false;
        }
        let n = self.order;
        let rest_a: Vec<usize> = (0..n).filter(|&i| i != self.distinguished).collect();
        let rest_b: Vec<usize> = (0..n).filter(|&i| i != other.distinguished).collect();
        let k = rest_b.len();
        rest_b.iter().copied().permutations(k).any(|perm| {
            let mut map = vec![0usize; n];
            map[self.distinguished] = other.distinguished;
            for (&a, &b) in rest_a.iter().zip(&perm) {
                map[a] = b;
            }
            (0..n).all(|i| (0..n).all(|j| map[self.op(i, j)] == other.op(map[i], map[j])))
        })
    }

    /// The line-oriented text form: `size:`, `omega:`, then the rows.
    pub fn to_file_format(&self) -> String {
        let mut out = format!("size: {}\nomega: {}\n", self.order, self.distinguished);
        for i in 0..self.order {
            out.push_str(&self.row(i).iter().join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_file_format(text: &str) -> Result<FiniteAlgebra, ModelError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut header = |key: &str| -> Result<usize, ModelError> {
            let (line, l) = lines.next().ok_or(ModelError::Format {
                line: 0,
                message: format!("missing {key:?} line"),
            })?;
            let value = l
                .strip_prefix(key)
                .and_then(|rest| rest.trim_start().strip_prefix(':'))
                .ok_or_else(|| ModelError::Format {
                    line,
                    message: format!("expected {key:?}"),
                })?;
            value.trim().parse().map_err(|_| ModelError::Format {
                line,
                message: format!("bad number {:?}", value.trim()),
            })
        };
        let size = header("size")?;
        let omega = header("omega")?;
        let mut rows = Vec::with_capacity(size);
        for (line, l) in lines {
            let row = l
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| ModelError::Format {
                    line,
                    message: format!("bad row {l:?}"),
                })?;
            rows.push(row);
        }
        if rows.len() != size {
            return Err(ModelError::Format {
                line: 0,
                message: format!("expected {size} rows, found {}", rows.len()),
            });
        }
        FiniteAlgebra::new(rows, omega)
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name.as_deref().unwrap_or("algebra"))
    }
}

/// Outcome of [`FiniteAlgebra::satisfies`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Satisfaction {
    pub witness: Option<Assignment>,
}

impl Satisfaction {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: String,
    /// Values of the axiom's letters in alphabetical order, on failure.
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub mode: Mode,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.witness.is_none())
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.witness.is_some())
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

#[derive(Debug, Clone)]
pub struct SubdirectReport {
    /// Elements of `ωS`, as indices of the original algebra.
    pub ideal: Vec<usize>,
    pub band: FiniteAlgebra,
    pub quotient: FiniteAlgebra,
    pub failures: Vec<String>,
}

impl SubdirectReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Something that evaluates in a finite algebra given letter values.
pub trait Evaluate {
    fn letters(&self) -> BTreeSet<Letter>;
    /// `env` is indexed by [`Letter::index`].
    fn eval_in(&self, a: &FiniteAlgebra, env: &[usize; 26]) -> usize;
}

impl Evaluate for Word {
    fn letters(&self) -> BTreeSet<Letter> {
        Word::letters(self)
    }

    fn eval_in(&self, a: &FiniteAlgebra, env: &[usize; 26]) -> usize {
        let value = |s: &Symbol| match s {
            Symbol::Letter(x) => env[x.index()],
            Symbol::Omega => a.distinguished,
        };
        let mut it = self.symbols().iter();
        let first = value(it.next().expect("words are nonempty"));
        it.fold(first, |acc, s| a.op(acc, value(s)))
    }
}

impl Evaluate for TreeTerm {
    fn letters(&self) -> BTreeSet<Letter> {
        TreeTerm::letters(self)
    }

    fn eval_in(&self, a: &FiniteAlgebra, env: &[usize; 26]) -> usize {
        match self {
            TreeTerm::Zero => a.distinguished,
            TreeTerm::Var(x) => env[x.index()],
            TreeTerm::Arrow(l, r) => a.op(l.eval_in(a, env), r.eval_in(a, env)),
        }
    }
}

fn parsed(cell: &'static OnceLock<Vec<Identity>>, texts: &[&str], mode: Mode) -> &'static [Identity] {
    cell.get_or_init(|| {
        texts
            .iter()
            .map(|t| Identity::parse(t, mode).expect("builtin identity parses"))
            .collect()
    })
}

/// The two non-associativity axioms of implication semigroups.
pub fn is_axioms() -> &'static [Identity] {
    static CELL: OnceLock<Vec<Identity>> = OnceLock::new();
    parsed(&CELL, &["xyz=zOxyzOO", "OOO=O"], Mode::IS)
}

/// The defining identities of implication zroupoids.
pub fn iz_axioms() -> &'static [Identity] {
    static CELL: OnceLock<Vec<Identity>> = OnceLock::new();
    parsed(&CELL, &["((x>y)>z) = ((z'>x)>(y>z)')'", "0''=0"], Mode::IZ)
}

fn band_law() -> Identity {
    Identity::parse("xx=x", Mode::IS).unwrap()
}

fn nil3_law() -> Identity {
    Identity::parse("xyz=O", Mode::IS).unwrap()
}

pub const BUILTIN_NAMES: [&str; 10] = ["A", "B", "K", "L", "M", "Z", "2s", "2b", "trivial", "BxK_mod_I"];

/// The named algebras. Products not listed in a presentation are zero.
pub fn builtin(name: &str) -> Result<FiniteAlgebra, ModelError> {
    let alg = match name {
        // {0,1} under meet, ω = 1
        "A" => FiniteAlgebra::new(vec![vec![0, 0], vec![0, 1]], 1)?.with_labels(["0", "1"]),
        // right-zero band {e,f} with an identity adjoined, ω = 1
        "B" => FiniteAlgebra::new(vec![vec![0, 1, 0], vec![0, 1, 1], vec![0, 1, 2]], 2)?
            .with_labels(["e", "f", "1"]),
        // a, b, ab, 0
        "K" => FiniteAlgebra::new(
            vec![vec![3, 2, 3, 3], vec![2, 3, 3, 3], vec![3, 3, 3, 3], vec![3, 3, 3, 3]],
            3,
        )?
        .with_labels(["a", "b", "ab", "0"]),
        "L" => FiniteAlgebra::new(
            vec![vec![3, 2, 3, 3], vec![3, 3, 3, 3], vec![3, 3, 3, 3], vec![3, 3, 3, 3]],
            3,
        )?
        .with_labels(["a", "b", "ab", "0"]),
        // a, b, b², ab, 0
        "M" => FiniteAlgebra::new(
            vec![
                vec![4, 3, 4, 4, 4],
                vec![3, 2, 4, 4, 4],
                vec![4, 4, 4, 4, 4],
                vec![4, 4, 4, 4, 4],
                vec![4, 4, 4, 4, 4],
            ],
            4,
        )?
        .with_labels(["a", "b", "bb", "ab", "0"]),
        "Z" => FiniteAlgebra::new(vec![vec![1, 1], vec![1, 1]], 1)?.with_labels(["a", "0"]),
        "2s" => FiniteAlgebra::new(vec![vec![0, 1], vec![1, 1]], 0)?.with_labels(["0", "1"]),
        "2b" => FiniteAlgebra::new(vec![vec![1, 1], vec![0, 1]], 0)?.with_labels(["0", "1"]),
        "trivial" => FiniteAlgebra::new(vec![vec![0]], 0)?.with_labels(["o"]),
        "BxK_mod_I" => {
            let b = builtin("B")?;
            let k = builtin("K")?;
            let bk = b.direct_product(&k);
            let ideal: BTreeSet<usize> = ["(e,0)", "(f,0)", "(1,0)"]
                .iter()
                .map(|l| bk.element(l).expect("product label"))
                .collect();
            bk.rees_quotient(&ideal)?
        }
        _ => return Err(ModelError::UnknownBuiltin(name.to_string())),
    };
    Ok(alg.with_name(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> Identity {
        Identity::parse(s, Mode::IS).unwrap()
    }

    fn izid(s: &str) -> Identity {
        Identity::parse(s, Mode::IZ).unwrap()
    }

    fn b(name: &str) -> FiniteAlgebra {
        builtin(name).unwrap()
    }

    fn asg(pairs: &[(char, usize)]) -> Assignment {
        pairs.iter().map(|&(c, v)| (Letter::new(c).unwrap(), v)).collect()
    }

    #[test]
    fn two_element_tables() {
        assert_eq!(b("2b").row(0), &[1, 1]);
        assert_eq!(b("2b").row(1), &[0, 1]);
        assert_eq!(b("2s").row(0), &[0, 1]);
        assert_eq!(b("2s").row(1), &[1, 1]);
    }

    #[test]
    fn table_walks() {
        let bb = b("B");
        let (e, f) = (bb.element("e").unwrap(), bb.element("f").unwrap());
        let w: Word = "xyx".parse().unwrap();
        assert_eq!(bb.evaluate(&w, &asg(&[('x', e), ('y', f)])).unwrap(), e);

        let k = b("K");
        let xy: Word = "xy".parse().unwrap();
        let v = k.evaluate(&xy, &asg(&[('x', 0), ('y', 1)])).unwrap();
        assert_eq!(k.label(v), "ab");

        let l = b("L");
        let yx: Word = "yx".parse().unwrap();
        let v = l.evaluate(&yx, &asg(&[('x', 0), ('y', 1)])).unwrap();
        assert_eq!(l.label(v), "0");

        for name in BUILTIN_NAMES {
            let a = b(name);
            assert_eq!(a.evaluate(&Word::omega(), &Assignment::new()).unwrap(), a.distinguished());
        }
    }

    #[test]
    fn unassigned_letter_is_an_error() {
        let w: Word = "xy".parse().unwrap();
        let err = b("K").evaluate(&w, &asg(&[('x', 0)])).unwrap_err();
        assert_eq!(err, ModelError::Unassigned(Letter::new('y').unwrap()));
    }

    #[test]
    fn oracle_examples() {
        assert!(b("K").satisfies(&id("xy=yx")).holds());
        let l = b("L");
        let w = l.satisfies(&id("xy=yx")).witness.unwrap();
        assert_eq!(l.describe(&w), "x=a, y=b");
        let m = b("M");
        let w = m.satisfies(&id("xO=xx")).witness.unwrap();
        assert_eq!(m.describe(&w), "x=b");
    }

    #[test]
    fn parallel_oracle_matches_sequential() {
        let m = b("M");
        for text in ["xO=xx", "xy=yx", "xyz=O", "xy=yxO", "xx=O", "xyx=yxO"] {
            assert_eq!(m.satisfies(&id(text)), m.satisfies_par(&id(text)), "{text}");
        }
    }

    #[test]
    fn axiom_checks() {
        for name in ["A", "B", "K", "L", "M", "Z", "trivial", "BxK_mod_I", "2s"] {
            assert!(b(name).check_axioms(Mode::IS).passed(), "{name}");
            assert!(b(name).check_axioms(Mode::IZ).passed(), "{name}");
        }
        let r = b("2b").check_axioms(Mode::IS);
        let assoc = r.check("associativity").unwrap();
        assert_eq!(assoc.witness, Some(vec![0, 0, 0]));
        assert!(b("2b").check_axioms(Mode::IZ).passed());
    }

    #[test]
    fn product_and_quotient() {
        let bk = b("B").direct_product(&b("K"));
        assert_eq!(bk.order(), 12);
        let ea = bk.element("(e,a)").unwrap();
        let fb = bk.element("(f,b)").unwrap();
        assert_eq!(bk.label(bk.op(ea, fb)), "(f,ab)");
        assert_eq!(bk.label(bk.distinguished()), "(1,0)");

        let q = b("BxK_mod_I");
        assert_eq!(q.order(), 10);
        assert!(q.satisfies(&id("xx=O")).holds());
        let w = q.satisfies(&id("xy=yx")).witness.unwrap();
        assert_eq!(q.describe(&w), "x=(e,a), y=(f,b)");
    }

    #[test]
    fn non_ideal_is_rejected() {
        let k = b("K");
        let err = k.rees_quotient(&[0].into_iter().collect()).unwrap_err();
        assert!(matches!(err, ModelError::NotAnIdeal { .. }));
        assert!(k.rees_quotient(&BTreeSet::new()).is_err());
    }

    #[test]
    fn generated_subalgebras() {
        let sub = b("2b").subalgebra_generated(&BTreeSet::new());
        assert_eq!(sub.order(), 2);
        assert!(sub.is_isomorphic(&b("2b")));
        let k = b("K");
        let sub = k.subalgebra_generated(&[0].into_iter().collect());
        assert_eq!(sub.labels(), &["a", "0"]);
        assert_eq!(b("trivial").subalgebra_generated(&BTreeSet::new()).order(), 1);
    }

    #[test]
    fn subdirect_examples() {
        let r = b("B").subdirect_check().unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.band.order(), 3);
        assert_eq!(r.quotient.order(), 1);

        let r = b("M").subdirect_check().unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.band.order(), 1);
        assert!(r.quotient.is_isomorphic(&b("M")));

        assert!(b("K").subdirect_check().unwrap().passed());
        assert!(b("2b").subdirect_check().is_err());
    }

    #[test]
    fn derived_zroupoid_identities_on_builtins() {
        let texts = [
            "((x>y)>z) = (((0'>x)>y)>z)",
            "((x>y)>z) = ((x>y)>z)''",
            "(((0>x)>0')>y) = ((x>0')>y)",
            "((0>0')>x) = (0'>x)",
            "(0'>0') = 0'",
            "(0>0') = 0'",
        ];
        for name in BUILTIN_NAMES {
            for t in texts {
                assert!(b(name).satisfies(&izid(t)).holds(), "{name}: {t}");
            }
        }
        assert!(!b("2b").satisfies(&izid("0=0'")).holds());
        assert!(b("2s").satisfies(&izid("0=0'")).holds());
    }

    #[test]
    fn file_format_round_trip() {
        let k = b("K");
        let text = k.to_file_format();
        let back = FiniteAlgebra::from_file_format(&text).unwrap();
        assert_eq!(back.rows(), k.rows());
        assert_eq!(back.distinguished(), k.distinguished());
        let commented = "# Z\nsize: 2 # two elements\nomega: 1\n1 1\n\n1 1\n";
        let z = FiniteAlgebra::from_file_format(commented).unwrap();
        assert!(z.is_isomorphic(&b("Z")));
        assert!(FiniteAlgebra::from_file_format("size: 2\nomega: 0\n0 1\n").is_err());
        assert!(FiniteAlgebra::from_file_format("size: 1\nomega: 3\n0\n").is_err());
        assert!(FiniteAlgebra::from_file_format("omega: 0\nsize: 1\n0\n").is_err());
    }

    #[test]
    fn unknown_builtin() {
        assert_eq!(builtin("Q").unwrap_err(), ModelError::UnknownBuiltin("Q".into()));
    }
}
