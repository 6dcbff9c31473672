//! Flat words over letters and `ω`, binary `→`-trees over letters and `0`,
//! and the structural operations the decision procedures are built from.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A syntax error, located by byte offset into the input text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

/// Which signature a term or identity lives in: flat implication-semigroup
/// words, or non-associative implication-zroupoid trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    IS,
    IZ,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::IS => "IS",
            Mode::IZ => "IZ",
        })
    }
}

impl FromStr for Mode {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "IS" => Ok(Mode::IS),
            "IZ" => Ok(Mode::IZ),
            _ => Err(ParseError::new(0, format!("unknown mode {s:?}"))),
        }
    }
}

/// A variable name: a single lowercase ASCII character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    pub fn new(c: char) -> Option<Letter> {
        c.is_ascii_lowercase().then_some(Letter(c as u8))
    }

    pub fn as_char(self) -> char {
        self.0 as char
    }

    /// Position in the alphabet, `a` = 0.
    pub fn index(self) -> usize {
        (self.0 - b'a') as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Letter(Letter),
    Omega,
}

/// An element of the free implication semigroup, modulo associativity.
///
/// Never empty. Rendered with `O` standing for `ω`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

/// `ℓ(w)`: the symbol count of a semigroup word, or `∞` once `ω` occurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Length {
    Finite(usize),
    Infinite,
}

impl Length {
    pub fn at_least(self, k: usize) -> bool {
        self >= Length::Finite(k)
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

impl Word {
    /// Returns `None` for an empty symbol sequence.
    pub fn new(symbols: Vec<Symbol>) -> Option<Word> {
        (!symbols.is_empty()).then_some(Word(symbols))
    }

    pub fn omega() -> Word {
        Word(vec![Symbol::Omega])
    }

    pub fn letter(x: Letter) -> Word {
        Word(vec![Symbol::Letter(x)])
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    /// Number of symbols, `ω` included. See [`length`] for `ℓ`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn has_omega(&self) -> bool {
        self.0.contains(&Symbol::Omega)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.0.clone();
        symbols.extend_from_slice(&other.0);
        Word(symbols)
    }

    /// The factor at 1-based inclusive positions `from..=to`.
    pub fn factor(&self, from: usize, to: usize) -> Option<Word> {
        if from == 0 || from > to || to > self.len() {
            return None;
        }
        Some(Word(self.0[from - 1..to].to_vec()))
    }

    /// Replaces the factor at `from..=to` (1-based, inclusive) by `with`.
    pub fn splice(&self, from: usize, to: usize, with: &Word) -> Option<Word> {
        self.factor(from, to)?;
        let mut symbols = self.0[..from - 1].to_vec();
        symbols.extend_from_slice(&with.0);
        symbols.extend_from_slice(&self.0[to..]);
        Some(Word(symbols))
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        content(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            match s {
                Symbol::Letter(x) => write!(f, "{x}")?,
                Symbol::Omega => f.write_str("O")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

/// Parses `word := ([a-z] | 'O')+`, ignoring whitespace.
pub fn parse_word(text: &str) -> Result<Word, ParseError> {
    let mut symbols = Vec::new();
    for (offset, c) in text.char_indices() {
        if c.is_whitespace() {
            continue;
        }
        match c {
            'O' => symbols.push(Symbol::Omega),
            _ => match Letter::new(c) {
                Some(x) => symbols.push(Symbol::Letter(x)),
                None => return Err(ParseError::new(offset, format!("unexpected {c:?}"))),
            },
        }
    }
    Word::new(symbols).ok_or_else(|| ParseError::new(text.len(), "empty word"))
}

/// The set of letters of `w`; `ω` is not a letter.
pub fn content(w: &Word) -> BTreeSet<Letter> {
    w.0.iter()
        .filter_map(|s| match s {
            Symbol::Letter(x) => Some(*x),
            Symbol::Omega => None,
        })
        .collect()
}

/// Last occurrence sequence: keeps only the last occurrence of each letter
/// and drops every `ω`. `None` marks the empty result of an `ω`-power.
pub fn los(w: &Word) -> Option<Word> {
    let mut seen = BTreeSet::new();
    let mut kept: Vec<Symbol> = Vec::new();
    for s in w.0.iter().rev() {
        if let Symbol::Letter(x) = s {
            if seen.insert(*x) {
                kept.push(*s);
            }
        }
    }
    kept.reverse();
    Word::new(kept)
}

pub fn length(w: &Word) -> Length {
    if w.has_omega() {
        Length::Infinite
    } else {
        Length::Finite(w.len())
    }
}

/// True iff `w = a·b·b·c` for a nonempty factor `b`; `b` may contain `ω`.
pub fn contains_square(w: &Word) -> bool {
    let s = &w.0;
    (1..=s.len() / 2).any(|k| (0..=s.len() - 2 * k).any(|i| s[i..i + k] == s[i + k..i + 2 * k]))
}

/// A finite map from letters to images. Letters outside the domain are left
/// in place by [`substitute`] and [`TreeTerm::substitute`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Substitution<T>(BTreeMap<Letter, T>);

impl<T> Substitution<T> {
    pub fn new() -> Self {
        Substitution(BTreeMap::new())
    }

    pub fn insert(&mut self, x: Letter, image: T) -> Option<T> {
        self.0.insert(x, image)
    }

    pub fn get(&self, x: Letter) -> Option<&T> {
        self.0.get(&x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Letter, &T)> {
        self.0.iter()
    }

    pub fn domain(&self) -> BTreeSet<Letter> {
        self.0.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<T> FromIterator<(Letter, T)> for Substitution<T> {
    fn from_iter<I: IntoIterator<Item = (Letter, T)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

impl<T: fmt::Display> fmt::Display for Substitution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}={t}")?;
        }
        f.write_str("}")
    }
}

pub fn substitute(w: &Word, s: &Substitution<Word>) -> Word {
    let mut out = Vec::with_capacity(w.len());
    for sym in &w.0 {
        match sym {
            Symbol::Letter(x) => match s.get(*x) {
                Some(image) => out.extend_from_slice(&image.0),
                None => out.push(*sym),
            },
            Symbol::Omega => out.push(Symbol::Omega),
        }
    }
    Word(out)
}

/// The implication-semigroup normal form: words with `ℓ ≥ 3` collapse to
/// `los(w)ω` (or `ω`); shorter semigroup words are already canonical.
pub fn normalize_is(w: &Word) -> Word {
    if !length(w).at_least(3) {
        return w.clone();
    }
    match los(w) {
        Some(l) => l.concat(&Word::omega()),
        None => Word::omega(),
    }
}

/// All words of length `1..=max_len` over `letters` (plus `ω` when
/// `with_omega`), shortest first, lexicographic within a length.
pub fn words_up_to(letters: &[Letter], with_omega: bool, max_len: usize) -> Vec<Word> {
    let mut alphabet: Vec<Symbol> = letters.iter().map(|&x| Symbol::Letter(x)).collect();
    if with_omega {
        alphabet.push(Symbol::Omega);
    }
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Symbol>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for prefix in &layer {
            for &s in &alphabet {
                let mut w = prefix.clone();
                w.push(s);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned().map(Word));
        layer = next;
    }
    out
}

/// A binary `→`-tree over letters and the constant `0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreeTerm {
    Zero,
    Var(Letter),
    Arrow(Box<TreeTerm>, Box<TreeTerm>),
}

/// One step down a [`TreeTerm`]: into the antecedent (`L`) or consequent (`R`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    L,
    R,
}

/// A root path into a tree term. Rendered as `e` when empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Path(pub Vec<Side>);

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for s in &self.0 {
            f.write_str(match s {
                Side::L => "L",
                Side::R => "R",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Path {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "e" {
            return Ok(Path::default());
        }
        if s.is_empty() {
            return Err(ParseError::new(0, "empty path"));
        }
        s.char_indices()
            .map(|(i, c)| match c {
                'L' => Ok(Side::L),
                'R' => Ok(Side::R),
                _ => Err(ParseError::new(i, format!("unexpected {c:?} in path"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Path)
    }
}

impl TreeTerm {
    pub fn arrow(l: TreeTerm, r: TreeTerm) -> TreeTerm {
        TreeTerm::Arrow(Box::new(l), Box::new(r))
    }

    /// `t′ = t → 0`.
    pub fn prime(self) -> TreeTerm {
        TreeTerm::arrow(self, TreeTerm::Zero)
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<Letter>) {
        match self {
            TreeTerm::Zero => {}
            TreeTerm::Var(x) => {
                out.insert(*x);
            }
            TreeTerm::Arrow(l, r) => {
                l.collect_letters(out);
                r.collect_letters(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            TreeTerm::Arrow(l, r) => 1 + l.size() + r.size(),
            _ => 1,
        }
    }

    pub fn subterm(&self, path: &Path) -> Option<&TreeTerm> {
        let mut t = self;
        for side in &path.0 {
            t = match (t, side) {
                (TreeTerm::Arrow(l, _), Side::L) => l,
                (TreeTerm::Arrow(_, r), Side::R) => r,
                _ => return None,
            };
        }
        Some(t)
    }

    pub fn replace_at(&self, path: &[Side], with: &TreeTerm) -> Option<TreeTerm> {
        let Some((first, rest)) = path.split_first() else {
            return Some(with.clone());
        };
        match (self, first) {
            (TreeTerm::Arrow(l, r), Side::L) => {
                Some(TreeTerm::arrow(l.replace_at(rest, with)?, (**r).clone()))
            }
            (TreeTerm::Arrow(l, r), Side::R) => {
                Some(TreeTerm::arrow((**l).clone(), r.replace_at(rest, with)?))
            }
            _ => None,
        }
    }

    pub fn substitute(&self, s: &Substitution<TreeTerm>) -> TreeTerm {
        match self {
            TreeTerm::Zero => TreeTerm::Zero,
            TreeTerm::Var(x) => s.get(*x).cloned().unwrap_or_else(|| self.clone()),
            TreeTerm::Arrow(l, r) => TreeTerm::arrow(l.substitute(s), r.substitute(s)),
        }
    }
}

impl fmt::Display for TreeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeTerm::Zero => f.write_str("0"),
            TreeTerm::Var(x) => write!(f, "{x}"),
            TreeTerm::Arrow(l, r) if **r == TreeTerm::Zero => write!(f, "{l}'"),
            TreeTerm::Arrow(l, r) => write!(f, "({l}>{r})"),
        }
    }
}

impl FromStr for TreeTerm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

struct TermParser<'a> {
    tokens: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl TermParser<'_> {
    fn peek(&self) -> Option<(usize, char)> {
        self.tokens.get(self.pos).copied()
    }

    fn end_offset(&self) -> usize {
        self.text.len()
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some((_, c)) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some((i, c)) => Err(ParseError::new(i, format!("expected {want:?}, found {c:?}"))),
            None => Err(ParseError::new(
                self.end_offset(),
                format!("expected {want:?}, found end of input"),
            )),
        }
    }

    fn term(&mut self) -> Result<TreeTerm, ParseError> {
        let mut t = self.primary()?;
        while let Some((_, '\'')) = self.peek() {
            self.pos += 1;
            t = t.prime();
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<TreeTerm, ParseError> {
        match self.peek() {
            Some((_, '0')) => {
                self.pos += 1;
                Ok(TreeTerm::Zero)
            }
            Some((_, '(')) => {
                self.pos += 1;
                let l = self.term()?;
                self.expect('>')?;
                let r = self.term()?;
                self.expect(')')?;
                Ok(TreeTerm::arrow(l, r))
            }
            Some((i, c)) => match Letter::new(c) {
                Some(x) => {
                    self.pos += 1;
                    Ok(TreeTerm::Var(x))
                }
                None => Err(ParseError::new(i, format!("unexpected {c:?}"))),
            },
            None => Err(ParseError::new(self.end_offset(), "unexpected end of input")),
        }
    }
}

/// Parses the tree grammar `term := primary '\''*`,
/// `primary := '0' | [a-z] | '(' term '>' term ')'`, ignoring whitespace.
pub fn parse_term(text: &str) -> Result<TreeTerm, ParseError> {
    let tokens: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut p = TermParser { tokens, pos: 0, text };
    let t = p.term()?;
    match p.peek() {
        None => Ok(t),
        Some((i, c)) => Err(ParseError::new(i, format!("trailing {c:?}"))),
    }
}

/// A formal equation `lhs ≈ rhs` in one of the two signatures.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Identity {
    Is { lhs: Word, rhs: Word },
    Iz { lhs: TreeTerm, rhs: TreeTerm },
}

impl Identity {
    pub fn is(lhs: Word, rhs: Word) -> Identity {
        Identity::Is { lhs, rhs }
    }

    pub fn iz(lhs: TreeTerm, rhs: TreeTerm) -> Identity {
        Identity::Iz { lhs, rhs }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Identity::Is { .. } => Mode::IS,
            Identity::Iz { .. } => Mode::IZ,
        }
    }

    /// Parses `lhs '=' rhs` in the grammar of `mode`.
    pub fn parse(text: &str, mode: Mode) -> Result<Identity, ParseError> {
        let Some(eq) = text.find('=') else {
            return Err(ParseError::new(text.len(), "expected '='"));
        };
        let (l, r) = (&text[..eq], &text[eq + 1..]);
        let shift = |e: ParseError, by: usize| ParseError::new(e.offset + by, e.message);
        match mode {
            Mode::IS => Ok(Identity::is(
                parse_word(l)?,
                parse_word(r).map_err(|e| shift(e, eq + 1))?,
            )),
            Mode::IZ => Ok(Identity::iz(
                parse_term(l)?,
                parse_term(r).map_err(|e| shift(e, eq + 1))?,
            )),
        }
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        match self {
            Identity::Is { lhs, rhs } => &content(lhs) | &content(rhs),
            Identity::Iz { lhs, rhs } => &lhs.letters() | &rhs.letters(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Identity::Is { lhs, rhs } => lhs == rhs,
            Identity::Iz { lhs, rhs } => lhs == rhs,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identity::Is { lhs, rhs } => write!(f, "{lhs} = {rhs}"),
            Identity::Iz { lhs, rhs } => write!(f, "{lhs} = {rhs}"),
        }
    }
}
