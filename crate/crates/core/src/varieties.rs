//! The sixteen varieties of implication semigroups: their finite bases,
//! generating algebras, and syntactic decision procedures for identities.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::lattice;
use crate::models::{builtin, FiniteAlgebra, ModelError};
use crate::terms::{contains_square, content, length, los, Identity, Letter, Mode, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error("unknown variety {0:?}")]
    UnknownVariety(String),
    #[error("expected an IS identity, got {0} mode")]
    ModeMismatch(Mode),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("no least variety contains the algebra")]
    NoLeastVariety,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarietyId {
    T,
    ZM,
    SL,
    B,
    K,
    L,
    M,
    N,
    SlZm,
    SlK,
    SlL,
    SlM,
    SlN,
    BZm,
    BK,
    IS,
}

impl VarietyId {
    pub const ALL: [VarietyId; 16] = [
        VarietyId::T,
        VarietyId::ZM,
        VarietyId::SL,
        VarietyId::B,
        VarietyId::K,
        VarietyId::L,
        VarietyId::M,
        VarietyId::N,
        VarietyId::SlZm,
        VarietyId::SlK,
        VarietyId::SlL,
        VarietyId::SlM,
        VarietyId::SlN,
        VarietyId::BZm,
        VarietyId::BK,
        VarietyId::IS,
    ];

    /// ASCII name; `+` stands for the join.
    pub fn name(self) -> &'static str {
        match self {
            VarietyId::T => "T",
            VarietyId::ZM => "ZM",
            VarietyId::SL => "SL",
            VarietyId::B => "B",
            VarietyId::K => "K",
            VarietyId::L => "L",
            VarietyId::M => "M",
            VarietyId::N => "N",
            VarietyId::SlZm => "SL+ZM",
            VarietyId::SlK => "SL+K",
            VarietyId::SlL => "SL+L",
            VarietyId::SlM => "SL+M",
            VarietyId::SlN => "SL+N",
            VarietyId::BZm => "B+ZM",
            VarietyId::BK => "B+K",
            VarietyId::IS => "IS",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn record(self) -> &'static VarietyRecord {
        &registry()[self.index()]
    }
}

impl fmt::Display for VarietyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VarietyId {
    type Err = VarietyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == '∨' { '+' } else { c.to_ascii_uppercase() })
            .collect();
        VarietyId::ALL
            .into_iter()
            .find(|v| v.name() == norm)
            .ok_or_else(|| VarietyError::UnknownVariety(s.to_string()))
    }
}

/// One syntactic test per join-irreducible building block; a variety's
/// identities are those passing every test of its components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    SL,
    B,
    ZM,
    K,
    L,
    M,
    N,
}

impl Component {
    fn generators(self) -> &'static [&'static str] {
        match self {
            Component::SL => &["A"],
            Component::B => &["B"],
            Component::ZM => &["Z"],
            Component::K => &["K"],
            Component::L => &["L"],
            Component::M => &["M"],
            Component::N => &["L", "M"],
        }
    }

    fn test(self, u: &WordFacts, v: &WordFacts) -> bool {
        let square_or_long = |w: &WordFacts| w.square || w.len3;
        match self {
            Component::SL => u.content == v.content,
            Component::B => u.los == v.los,
            Component::ZM => u.len2 && v.len2,
            Component::K => commutative_pattern(u, v) || (square_or_long(u) && square_or_long(v)),
            Component::L => square_or_long(u) && square_or_long(v),
            Component::M => commutative_pattern(u, v) || (u.len3 && v.len3),
            Component::N => u.len3 && v.len3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VarietyRecord {
    pub id: VarietyId,
    pub basis: Vec<Identity>,
    /// Builtin algebra names; the variety is generated by these.
    pub generators: Vec<&'static str>,
    pub components: Vec<Component>,
}

impl VarietyRecord {
    pub fn generator_algebras(&self) -> Vec<FiniteAlgebra> {
        self.generators
            .iter()
            .map(|g| builtin(g).expect("registry names builtin algebras"))
            .collect()
    }
}

/// The sixteen records, in [`VarietyId::ALL`] order.
pub fn registry() -> &'static [VarietyRecord] {
    static REGISTRY: OnceLock<Vec<VarietyRecord>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        use Component as C;
        use VarietyId as V;
        let rows: [(V, &[&str], &[C]); 16] = [
            (V::T, &["x=O"], &[]),
            (V::ZM, &["xy=O"], &[C::ZM]),
            (V::SL, &["xx=x", "xy=yx"], &[C::SL]),
            (V::B, &["xx=x"], &[C::B]),
            (V::K, &["xyz=O", "xx=O", "xy=yx"], &[C::K]),
            (V::L, &["xyz=O", "xx=O"], &[C::L]),
            (V::M, &["xyz=O", "xy=yx"], &[C::M]),
            (V::N, &["xyz=O"], &[C::N]),
            (V::SlZm, &["xy=yxO"], &[C::SL, C::ZM]),
            (V::SlK, &["xO=xx", "xy=yx"], &[C::SL, C::K]),
            (V::SlL, &["xO=xx", "xyO=yxO"], &[C::SL, C::L]),
            (V::SlM, &["xy=yx"], &[C::SL, C::M]),
            (V::SlN, &["xyO=yxO"], &[C::SL, C::N]),
            (V::BZm, &["xy=xyO"], &[C::B, C::ZM]),
            (V::BK, &["xO=xx"], &[C::B, C::K]),
            (V::IS, &[], &[C::B, C::N]),
        ];
        rows.into_iter()
            .map(|(id, basis, components)| {
                let mut generators: Vec<&'static str> = Vec::new();
                for c in components {
                    for g in c.generators() {
                        if !generators.contains(g) {
                            generators.push(g);
                        }
                    }
                }
                if generators.is_empty() {
                    generators.push("trivial");
                }
                VarietyRecord {
                    id,
                    basis: basis
                        .iter()
                        .map(|t| Identity::parse(t, Mode::IS).expect("basis parses"))
                        .collect(),
                    generators,
                    components: components.to_vec(),
                }
            })
            .collect()
    })
}

/// Everything the decision procedures need to know about one side of an
/// identity. Computing it once per word makes bulk comparisons cheap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordFacts {
    word: Word,
    content: BTreeSet<Letter>,
    los: Option<Word>,
    len2: bool,
    len3: bool,
    square: bool,
    /// `Some((x, y))` for a two-letter semigroup word `xy` with `x ≠ y`.
    pair: Option<(Letter, Letter)>,
}

impl WordFacts {
    pub fn new(w: &Word) -> WordFacts {
        let l = length(w);
        let letters: Vec<Letter> = w
            .symbols()
            .iter()
            .filter_map(|s| match s {
                crate::terms::Symbol::Letter(x) => Some(*x),
                crate::terms::Symbol::Omega => None,
            })
            .collect();
        let pair = match (l, letters.as_slice()) {
            (crate::terms::Length::Finite(2), &[x, y]) if x != y => Some((x, y)),
            _ => None,
        };
        WordFacts {
            word: w.clone(),
            content: content(w),
            los: los(w),
            len2: l.at_least(2),
            len3: l.at_least(3),
            square: contains_square(w),
            pair,
        }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }
}

/// `u ≈ v` is the commutative law `xy ≈ yx` up to renaming.
fn commutative_pattern(u: &WordFacts, v: &WordFacts) -> bool {
    match (u.pair, v.pair) {
        (Some((a, b)), Some((c, d))) => a == d && b == c,
        _ => false,
    }
}

/// [`decide`] on precomputed facts.
pub fn decide_facts(v: VarietyId, u: &WordFacts, w: &WordFacts) -> bool {
    u.word == w.word || v.record().components.iter().all(|c| c.test(u, w))
}

/// Whether the identity holds in the variety, by the word-problem
/// characterizations of its join components.
pub fn decide(v: VarietyId, id: &Identity) -> Result<bool, VarietyError> {
    match id {
        Identity::Is { lhs, rhs } => Ok(decide_facts(v, &WordFacts::new(lhs), &WordFacts::new(rhs))),
        Identity::Iz { .. } => Err(VarietyError::ModeMismatch(Mode::IZ)),
    }
}

/// The least of the sixteen varieties containing `a`, i.e. `var a`.
pub fn variety_of(a: &FiniteAlgebra) -> Result<VarietyId, VarietyError> {
    a.require_axioms(Mode::IS)?;
    let containing: Vec<VarietyId> = VarietyId::ALL
        .into_iter()
        .filter(|v| v.record().basis.iter().all(|id| a.satisfies(id).holds()))
        .collect();
    let lat = lattice::variety_lattice();
    containing
        .iter()
        .copied()
        .find(|&c| containing.iter().all(|&d| lat.leq(c, d)))
        .ok_or(VarietyError::NoLeastVariety)
}

/// All identities `u ≈ v` with `u`, `v` words over `x, y, z, ω` of length at
/// most four, as ordered pairs of word indices.
#[derive(Debug)]
pub struct IdentitySet {
    words: Vec<Word>,
    facts: Vec<WordFacts>,
}

impl IdentitySet {
    pub fn new(letters: &str, max_len: usize) -> IdentitySet {
        let letters: Vec<Letter> = letters.chars().filter_map(Letter::new).collect();
        let words = crate::terms::words_up_to(&letters, true, max_len);
        let facts = words.iter().map(WordFacts::new).collect();
        IdentitySet { words, facts }
    }

    /// The shared set over `x, y, z` with words up to length four.
    pub fn standard() -> &'static IdentitySet {
        static SET: OnceLock<IdentitySet> = OnceLock::new();
        SET.get_or_init(|| IdentitySet::new("xyz", 4))
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn facts(&self) -> &[WordFacts] {
        &self.facts
    }

    pub fn pair_count(&self) -> usize {
        self.words.len() * self.words.len()
    }

    pub fn identity(&self, i: usize, j: usize) -> Identity {
        Identity::is(self.words[i].clone(), self.words[j].clone())
    }

    /// `decide(v, u_i ≈ u_j)` for every pair, row-major.
    pub fn decisions(&self, v: VarietyId) -> Vec<bool> {
        let f = &self.facts;
        f.iter()
            .flat_map(|u| f.iter().map(move |w| decide_facts(v, u, w)))
            .collect()
    }

    /// Labels words so that two words get the same label iff they take
    /// equal values under every assignment in every one of `algebras`.
    pub fn classes(&self, algebras: &[FiniteAlgebra]) -> Vec<usize> {
        let letters: Vec<Letter> = self
            .words
            .iter()
            .flat_map(|w| w.letters())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let signatures: Vec<Vec<usize>> = self
            .words
            .iter()
            .map(|w| {
                let mut sig = Vec::new();
                for a in algebras {
                    let n = a.order();
                    let total = n.pow(letters.len() as u32);
                    let mut env = [0usize; 26];
                    for code in 0..total {
                        let mut c = code;
                        for x in &letters {
                            env[x.index()] = c % n;
                            c /= n;
                        }
                        sig.push(crate::models::Evaluate::eval_in(w, a, &env));
                    }
                }
                sig
            })
            .collect();
        let mut seen: std::collections::HashMap<&[usize], usize> = std::collections::HashMap::new();
        signatures
            .iter()
            .map(|s| {
                let next = seen.len();
                *seen.entry(s.as_slice()).or_insert(next)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> Identity {
        Identity::parse(s, Mode::IS).unwrap()
    }

    fn holds(v: VarietyId, s: &str) -> bool {
        decide(v, &id(s)).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for v in VarietyId::ALL {
            assert_eq!(v.name().parse::<VarietyId>().unwrap(), v);
            assert_eq!(v.record().id, v);
        }
        assert_eq!("sl+zm".parse::<VarietyId>().unwrap(), VarietyId::SlZm);
        assert_eq!("B∨K".parse::<VarietyId>().unwrap(), VarietyId::BK);
        assert!("Q".parse::<VarietyId>().is_err());
    }

    #[test]
    fn registry_examples() {
        assert_eq!(VarietyId::SlZm.record().basis, vec![id("xy=yxO")]);
        assert_eq!(VarietyId::BK.record().basis, vec![id("xO=xx")]);
        assert_eq!(VarietyId::N.record().generators, vec!["L", "M"]);
        assert_eq!(VarietyId::IS.record().generators, vec!["B", "L", "M"]);
        assert_eq!(VarietyId::T.record().generators, vec!["trivial"]);
        assert!(VarietyId::IS.record().basis.is_empty());
    }

    #[test]
    fn generators_satisfy_their_bases() {
        for rec in registry() {
            for g in rec.generator_algebras() {
                for b in &rec.basis {
                    assert!(g.satisfies(b).holds(), "{} / {} / {}", rec.id, g, b);
                }
            }
        }
    }

    #[test]
    fn decide_examples() {
        assert!(holds(VarietyId::IS, "xyz=zOxyzOO"));
        assert!(!holds(VarietyId::ZM, "x=xx"));
        assert!(!holds(VarietyId::M, "xO=xx"));
        assert!(holds(VarietyId::K, "xO=xx"));
        assert!(holds(VarietyId::B, "xO=xx"));
    }

    #[test]
    fn commutative_law_is_special() {
        assert!(holds(VarietyId::K, "xy=yx"));
        assert!(holds(VarietyId::M, "yz=zy"));
        assert!(!holds(VarietyId::L, "xy=yx"));
        assert!(!holds(VarietyId::M, "xy=yxO"));
        assert!(!holds(VarietyId::M, "xx=xx O"));
        assert!(holds(VarietyId::M, "xx=xx"));
    }

    #[test]
    fn iz_identity_is_rejected() {
        let iz = Identity::parse("0''=0", Mode::IZ).unwrap();
        assert_eq!(decide(VarietyId::IS, &iz), Err(VarietyError::ModeMismatch(Mode::IZ)));
    }

    #[test]
    fn variety_of_examples() {
        assert_eq!(variety_of(&builtin("Z").unwrap()).unwrap(), VarietyId::ZM);
        assert_eq!(variety_of(&builtin("A").unwrap()).unwrap(), VarietyId::SL);
        assert_eq!(variety_of(&builtin("BxK_mod_I").unwrap()).unwrap(), VarietyId::L);
        assert_eq!(variety_of(&builtin("trivial").unwrap()).unwrap(), VarietyId::T);
        let err = variety_of(&builtin("2b").unwrap()).unwrap_err();
        assert!(matches!(err, VarietyError::Model(ModelError::AxiomFailure { .. })));
    }

    #[test]
    fn identity_set_size_and_classes() {
        let set = IdentitySet::standard();
        assert_eq!(set.words().len(), 340);
        assert_eq!(set.pair_count(), 115_600);
        let classes = set.classes(&[builtin("A").unwrap()]);
        let w = |t: &str| set.words().iter().position(|x| *x == crate::terms::parse_word(t).unwrap()).unwrap();
        assert_eq!(classes[w("xy")], classes[w("yx")]);
        assert_ne!(classes[w("x")], classes[w("y")]);
        assert_eq!(classes[w("xyx")], classes[w("xy")]);
    }
}
