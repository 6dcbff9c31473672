//! A checker for equational derivations written as explicit rewrite chains.
//!
//! Every step names a rule, a direction, the exact position of the rewritten
//! subterm and the substitution instance, so replay never searches.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::terms::{
    parse_term, parse_word, substitute, Identity, Letter, Mode, ParseError, Path, Substitution, TreeTerm, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("step {step}: unknown rule {label:?}")]
    UnknownRule { step: usize, label: String },
    #[error("step {step}: position {position} does not address a subterm of {term}")]
    BadPosition { step: usize, position: String, term: String },
    #[error("step {step}: substitution covers {found}, rule needs exactly {expected}")]
    Domain { step: usize, expected: String, found: String },
    #[error("step {step}: expected {expected} at {position}, found {found}")]
    NoMatch {
        step: usize,
        position: String,
        expected: String,
        found: String,
    },
    #[error("step {step}: rewriting gives {computed}, script claims {claimed}")]
    WrongResult { step: usize, computed: String, claimed: String },
    #[error("start {start} differs from the goal's left side {lhs}")]
    StartMismatch { start: String, lhs: String },
    #[error("chain ends at {last}, goal's right side is {rhs}")]
    GoalNotReached { last: String, rhs: String },
    #[error("rule {label} is not an identity in {mode} mode")]
    ModeMismatch { label: String, mode: Mode },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Axiom,
    Premise,
    Proven,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub label: String,
    pub identity: Identity,
    pub kind: RuleKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    L2R,
    R2L,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::L2R => "L2R",
            Direction::R2L => "R2L",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "L2R" => Ok(Direction::L2R),
            "R2L" => Ok(Direction::R2L),
            _ => Err(format!("expected L2R or R2L, got {s:?}")),
        }
    }
}

/// A factor `from..to` of a word, 1-based and inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Range {
    pub from: usize,
    pub to: usize,
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.from, self.to)
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected i..j, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad index {t:?}: {e}"));
        Ok(Range { from: parse(a)?, to: parse(b)? })
    }
}

/// The term languages the checker can rewrite.
pub trait Term: Sized + Clone + Eq + fmt::Display + fmt::Debug {
    type Pos: Clone + Eq + fmt::Display + fmt::Debug;
    const MODE: Mode;

    fn parse_text(text: &str) -> Result<Self, ParseError>;
    fn parse_pos(text: &str) -> Result<Self::Pos, String>;
    fn vars(&self) -> BTreeSet<Letter>;
    fn instance(&self, s: &Substitution<Self>) -> Self;
    fn at(&self, pos: &Self::Pos) -> Option<Self>;
    fn replace(&self, pos: &Self::Pos, with: &Self) -> Option<Self>;
    fn sides(id: &Identity) -> Option<(&Self, &Self)>;
    fn make_identity(lhs: Self, rhs: Self) -> Identity;
    /// A different term, used to corrupt substitutions in negative tests.
    fn perturb(&self) -> Self;
}

impl Term for Word {
    type Pos = Range;
    const MODE: Mode = Mode::IS;

    fn parse_text(text: &str) -> Result<Self, ParseError> {
        parse_word(text)
    }

    fn parse_pos(text: &str) -> Result<Range, String> {
        text.parse()
    }

    fn vars(&self) -> BTreeSet<Letter> {
        self.letters()
    }

    fn instance(&self, s: &Substitution<Word>) -> Word {
        substitute(self, s)
    }

    fn at(&self, pos: &Range) -> Option<Word> {
        self.factor(pos.from, pos.to)
    }

    fn replace(&self, pos: &Range, with: &Word) -> Option<Word> {
        self.splice(pos.from, pos.to, with)
    }

    fn sides(id: &Identity) -> Option<(&Word, &Word)> {
        match id {
            Identity::Is { lhs, rhs } => Some((lhs, rhs)),
            Identity::Iz { .. } => None,
        }
    }

    fn make_identity(lhs: Word, rhs: Word) -> Identity {
        Identity::is(lhs, rhs)
    }

    fn perturb(&self) -> Word {
        self.concat(&Word::omega())
    }
}

impl Term for TreeTerm {
    type Pos = Path;
    const MODE: Mode = Mode::IZ;

    fn parse_text(text: &str) -> Result<Self, ParseError> {
        parse_term(text)
    }

    fn parse_pos(text: &str) -> Result<Path, String> {
        text.parse().map_err(|e: ParseError| e.to_string())
    }

    fn vars(&self) -> BTreeSet<Letter> {
        self.letters()
    }

    fn instance(&self, s: &Substitution<TreeTerm>) -> TreeTerm {
        self.substitute(s)
    }

    fn at(&self, pos: &Path) -> Option<TreeTerm> {
        self.subterm(pos).cloned()
    }

    fn replace(&self, pos: &Path, with: &TreeTerm) -> Option<TreeTerm> {
        self.replace_at(&pos.0, with)
    }

    fn sides(id: &Identity) -> Option<(&TreeTerm, &TreeTerm)> {
        match id {
            Identity::Iz { lhs, rhs } => Some((lhs, rhs)),
            Identity::Is { .. } => None,
        }
    }

    fn make_identity(lhs: TreeTerm, rhs: TreeTerm) -> Identity {
        Identity::iz(lhs, rhs)
    }

    fn perturb(&self) -> TreeTerm {
        self.clone().prime()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step<T: Term> {
    pub rule: String,
    pub direction: Direction,
    pub position: T::Pos,
    pub substitution: Substitution<T>,
    pub result: T,
}

impl<T: Term> fmt::Display for Step<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step {} {} at {} sub {} -> {}",
            self.rule, self.direction, self.position, self.substitution, self.result
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script<T: Term> {
    pub name: String,
    pub premises: Vec<Rule>,
    pub goal: Identity,
    pub start: T,
    pub steps: Vec<Step<T>>,
}

impl<T: Term> fmt::Display for Script<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mode: {}", T::MODE)?;
        writeln!(f, "name: {}", self.name)?;
        writeln!(f, "premises:")?;
        for p in &self.premises {
            writeln!(f, "  {}: {}", p.label, p.identity)?;
        }
        writeln!(f, "goal: {}", self.goal)?;
        writeln!(f, "start: {}", self.start)?;
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A script in either mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyScript {
    Is(Script<Word>),
    Iz(Script<TreeTerm>),
}

impl AnyScript {
    pub fn name(&self) -> &str {
        match self {
            AnyScript::Is(s) => &s.name,
            AnyScript::Iz(s) => &s.name,
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            AnyScript::Is(_) => Mode::IS,
            AnyScript::Iz(_) => Mode::IZ,
        }
    }

    pub fn goal(&self) -> &Identity {
        match self {
            AnyScript::Is(s) => &s.goal,
            AnyScript::Iz(s) => &s.goal,
        }
    }

    pub fn premises(&self) -> &[Rule] {
        match self {
            AnyScript::Is(s) => &s.premises,
            AnyScript::Iz(s) => &s.premises,
        }
    }

    pub fn step_count(&self) -> usize {
        match self {
            AnyScript::Is(s) => s.steps.len(),
            AnyScript::Iz(s) => s.steps.len(),
        }
    }

    pub fn replay(&self, proven: &[Rule]) -> Result<(), ReplayError> {
        match self {
            AnyScript::Is(s) => replay(s, proven),
            AnyScript::Iz(s) => replay(s, proven),
        }
    }

    /// The script with the substitution of step `index` (0-based) changed.
    pub fn corrupt_step(&self, index: usize) -> AnyScript {
        match self {
            AnyScript::Is(s) => AnyScript::Is(corrupt(s, index)),
            AnyScript::Iz(s) => AnyScript::Iz(corrupt(s, index)),
        }
    }

    pub fn parse(text: &str) -> Result<AnyScript, ReplayError> {
        let mode = text
            .lines()
            .map(strip_comment)
            .find(|l| !l.is_empty())
            .and_then(|l| l.strip_prefix("mode:"))
            .ok_or_else(|| syntax(1, "first line must be \"mode: IS\" or \"mode: IZ\""))?;
        match mode.trim().parse::<Mode>() {
            Ok(Mode::IS) => parse_script::<Word>(text).map(AnyScript::Is),
            Ok(Mode::IZ) => parse_script::<TreeTerm>(text).map(AnyScript::Iz),
            Err(e) => Err(syntax(1, e.to_string())),
        }
    }
}

impl fmt::Display for AnyScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyScript::Is(s) => s.fmt(f),
            AnyScript::Iz(s) => s.fmt(f),
        }
    }
}

fn corrupt<T: Term>(s: &Script<T>, index: usize) -> Script<T> {
    let mut out = s.clone();
    let step = &mut out.steps[index];
    let mut entries: Vec<(Letter, T)> = step.substitution.iter().map(|(x, t)| (*x, t.clone())).collect();
    match entries.first_mut() {
        Some((_, t)) => *t = t.perturb(),
        None => {
            let x = Letter::new('x').expect("x is a letter");
            entries.push((x, T::parse_text("O").or_else(|_| T::parse_text("0")).expect("constant parses")));
        }
    }
    step.substitution = entries.into_iter().collect();
    out
}

fn syntax(line: usize, message: impl Into<String>) -> ReplayError {
    ReplayError::Syntax { line, message: message.into() }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_identity<T: Term>(text: &str, line: usize) -> Result<Identity, ReplayError> {
    Identity::parse(text, T::MODE).map_err(|e| syntax(line, e.to_string()))
}

fn parse_substitution<T: Term>(text: &str, line: usize) -> Result<Substitution<T>, ReplayError> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| syntax(line, format!("substitution must be braced, got {text:?}")))?;
    let mut sub = Substitution::new();
    for binding in inner.split(',').map(str::trim).filter(|b| !b.is_empty()) {
        let (var, image) = binding
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected x=term, got {binding:?}")))?;
        let mut chars = var.trim().chars();
        let letter = match (chars.next().and_then(Letter::new), chars.next()) {
            (Some(x), None) => x,
            _ => return Err(syntax(line, format!("bad variable {var:?}"))),
        };
        let image = T::parse_text(image).map_err(|e| syntax(line, e.to_string()))?;
        if sub.insert(letter, image).is_some() {
            return Err(syntax(line, format!("{letter} bound twice")));
        }
    }
    Ok(sub)
}

fn parse_step<T: Term>(text: &str, line: usize) -> Result<Step<T>, ReplayError> {
    let body = text.strip_prefix("step ").ok_or_else(|| syntax(line, "expected a step"))?;
    let (head, result) = body
        .rsplit_once("->")
        .ok_or_else(|| syntax(line, "missing \"-> result\""))?;
    let (head, sub) = head.split_once(" sub ").ok_or_else(|| syntax(line, "missing \"sub {...}\""))?;
    let words: Vec<&str> = head.split_whitespace().collect();
    let [rule, direction, "at", position] = words.as_slice() else {
        return Err(syntax(line, "expected \"step <label> <L2R|R2L> at <position>\""));
    };
    Ok(Step {
        rule: rule.to_string(),
        direction: direction.parse().map_err(|e: String| syntax(line, e))?,
        position: T::parse_pos(position).map_err(|e| syntax(line, e))?,
        substitution: parse_substitution(sub, line)?,
        result: T::parse_text(result).map_err(|e| syntax(line, e.to_string()))?,
    })
}

/// Parses the line-oriented script format.
pub fn parse_script<T: Term>(text: &str) -> Result<Script<T>, ReplayError> {
    let mut name = None;
    let mut premises = Vec::new();
    let mut goal = None;
    let mut start = None;
    let mut steps = Vec::new();
    let mut in_premises = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = strip_comment(raw);
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix("mode:") {
            if rest.trim().parse::<Mode>().ok() != Some(T::MODE) {
                return Err(syntax(line, format!("expected mode {}", T::MODE)));
            }
            in_premises = false;
        } else if let Some(rest) = l.strip_prefix("name:") {
            name = Some(rest.trim().to_string());
            in_premises = false;
        } else if l == "premises:" {
            in_premises = true;
        } else if let Some(rest) = l.strip_prefix("goal:") {
            goal = Some(parse_identity::<T>(rest, line)?);
            in_premises = false;
        } else if let Some(rest) = l.strip_prefix("start:") {
            start = Some(T::parse_text(rest).map_err(|e| syntax(line, e.to_string()))?);
            in_premises = false;
        } else if l.starts_with("step ") {
            steps.push(parse_step::<T>(l, line)?);
            in_premises = false;
        } else if in_premises {
            let (label, id) = l
                .split_once(':')
                .ok_or_else(|| syntax(line, "expected \"label: identity\""))?;
            premises.push(Rule {
                label: label.trim().to_string(),
                identity: parse_identity::<T>(id, line)?,
                kind: RuleKind::Premise,
            });
        } else {
            return Err(syntax(line, format!("unexpected line {l:?}")));
        }
    }
    Ok(Script {
        name: name.ok_or_else(|| syntax(0, "missing name"))?,
        premises,
        goal: goal.ok_or_else(|| syntax(0, "missing goal"))?,
        start: start.ok_or_else(|| syntax(0, "missing start"))?,
        steps,
    })
}

/// The axioms available in every script of a mode.
pub fn axioms(mode: Mode) -> Vec<Rule> {
    let texts: &[(&str, &str)] = match mode {
        Mode::IS => &[("IS1", "xyz = zOxyzOO"), ("IS2", "OOO = O")],
        Mode::IZ => &[("IZ1", "((x>y)>z) = ((z'>x)>(y>z)')'"), ("IZ2", "0'' = 0")],
    };
    texts
        .iter()
        .map(|&(label, text)| Rule {
            label: label.to_string(),
            identity: Identity::parse(text, mode).expect("axioms parse"),
            kind: RuleKind::Axiom,
        })
        .collect()
}

/// Rewrites `term` by one step: the subterm at the step's position must be
/// the substitution instance of the rule's source side.
pub fn apply_step<T: Term>(term: &T, step: &Step<T>, rules: &[Rule], index: usize) -> Result<T, ReplayError> {
    let rule = rules
        .iter()
        .find(|r| r.label == step.rule)
        .ok_or_else(|| ReplayError::UnknownRule { step: index, label: step.rule.clone() })?;
    let (lhs, rhs) = T::sides(&rule.identity).ok_or_else(|| ReplayError::ModeMismatch {
        label: rule.label.clone(),
        mode: T::MODE,
    })?;
    let (source, target) = match step.direction {
        Direction::L2R => (lhs, rhs),
        Direction::R2L => (rhs, lhs),
    };
    let needed: BTreeSet<Letter> = &lhs.vars() | &rhs.vars();
    let domain = step.substitution.domain();
    if needed != domain {
        let show = |s: &BTreeSet<Letter>| format!("{{{}}}", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
        return Err(ReplayError::Domain {
            step: index,
            expected: show(&needed),
            found: show(&domain),
        });
    }
    let found = term.at(&step.position).ok_or_else(|| ReplayError::BadPosition {
        step: index,
        position: step.position.to_string(),
        term: term.to_string(),
    })?;
    let expected = source.instance(&step.substitution);
    if found != expected {
        return Err(ReplayError::NoMatch {
            step: index,
            position: step.position.to_string(),
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
    let replacement = target.instance(&step.substitution);
    Ok(term
        .replace(&step.position, &replacement)
        .expect("position was validated above"))
}

/// Checks every step of `script` in order. `proven` supplies previously
/// established identities that steps may cite by label.
pub fn replay<T: Term>(script: &Script<T>, proven: &[Rule]) -> Result<(), ReplayError> {
    let (lhs, rhs) = T::sides(&script.goal).ok_or_else(|| ReplayError::ModeMismatch {
        label: script.name.clone(),
        mode: T::MODE,
    })?;
    if &script.start != lhs {
        return Err(ReplayError::StartMismatch {
            start: script.start.to_string(),
            lhs: lhs.to_string(),
        });
    }
    let mut rules = axioms(T::MODE);
    rules.extend(script.premises.iter().cloned());
    rules.extend(proven.iter().filter(|r| r.identity.mode() == T::MODE).cloned());
    let mut term = script.start.clone();
    for (i, step) in script.steps.iter().enumerate() {
        let index = i + 1;
        let next = apply_step(&term, step, &rules, index)?;
        if next != step.result {
            return Err(ReplayError::WrongResult {
                step: index,
                computed: next.to_string(),
                claimed: step.result.to_string(),
            });
        }
        term = next;
    }
    if &term != rhs {
        return Err(ReplayError::GoalNotReached {
            last: term.to_string(),
            rhs: rhs.to_string(),
        });
    }
    Ok(())
}

const SHIPPED: [&str; 14] = [
    include_str!("../scripts/omega-square.txt"),
    include_str!("../scripts/omega-central.txt"),
    include_str!("../scripts/absorb.txt"),
    include_str!("../scripts/monoid-band.txt"),
    include_str!("../scripts/band-monoid.txt"),
    include_str!("../scripts/band-xyx.txt"),
    include_str!("../scripts/xyx.txt"),
    include_str!("../scripts/xxy.txt"),
    include_str!("../scripts/nil-omega.txt"),
    include_str!("../scripts/comm-omega.txt"),
    include_str!("../scripts/zero-x-prime.txt"),
    include_str!("../scripts/zero-prime-x.txt"),
    include_str!("../scripts/prime-prime.txt"),
    include_str!("../scripts/zero-prime.txt"),
];

/// The bundled derivations, in dependency order.
pub fn shipped_scripts() -> &'static [AnyScript] {
    static SCRIPTS: OnceLock<Vec<AnyScript>> = OnceLock::new();
    SCRIPTS.get_or_init(|| {
        SHIPPED
            .iter()
            .map(|text| AnyScript::parse(text).expect("bundled scripts parse"))
            .collect()
    })
}

/// Rule citing the goal of a script as a proven identity.
pub fn as_proven(script: &AnyScript) -> Rule {
    Rule {
        label: script.name().to_string(),
        identity: script.goal().clone(),
        kind: RuleKind::Proven,
    }
}

/// Goals of `earlier` scripts whose premises all appear among `premises`;
/// these may be cited by a script assuming `premises`.
pub fn citable<'a>(premises: &[Rule], earlier: impl IntoIterator<Item = &'a AnyScript>) -> Vec<Rule> {
    earlier
        .into_iter()
        .filter(|s| {
            s.premises()
                .iter()
                .all(|p| premises.iter().any(|q| q.identity == p.identity))
        })
        .map(as_proven)
        .collect()
}

/// Replays a script against the shipped library, as for a user-supplied
/// script file.
pub fn replay_with_library(script: &AnyScript) -> Result<(), ReplayError> {
    let earlier = shipped_scripts().iter().filter(|s| s.name() != script.name());
    script.replay(&citable(script.premises(), earlier))
}

/// Replays the shipped scripts in order; each may cite the goals of the
/// earlier ones that replayed.
pub fn replay_shipped() -> Vec<(String, Result<(), ReplayError>)> {
    let mut passed: Vec<&AnyScript> = Vec::new();
    let mut out = Vec::new();
    for s in shipped_scripts() {
        let verdict = s.replay(&citable(s.premises(), passed.iter().copied()));
        if verdict.is_ok() {
            passed.push(s);
        }
        out.push((s.name().to_string(), verdict));
    }
    out
}
