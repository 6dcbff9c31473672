//! The reproduction suite: thirteen acceptance criteria and the worked
//! examples, each checked against computed results.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::derivations::{replay_shipped, shipped_scripts, ReplayError};
use crate::enumerator::{canonical_form, enumerate, enumerate_with_jobs};
use crate::lattice::{build_lattice, variety_lattice, Lattice, Pentagon};
use crate::models::builtin;
use crate::terms::{normalize_is, Identity, Mode};
use crate::varieties::{decide, variety_of, IdentitySet, VarietyId as V};

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl CriterionResult {
    /// `[PASS] 3 title: detail`, without timing so output is reproducible.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 13] = [
    (1, "lattice has 16 elements and the 25 reference covers"),
    (2, "lattice is non-modular with a valid pentagon"),
    (3, "L(B) is a 3-chain and N has 6 subvarieties"),
    (4, "SL and ZM are neutral"),
    (5, "atoms are SL and ZM"),
    (6, "decision procedure agrees with generator oracle"),
    (7, "normal forms decide IS"),
    (8, "join equalities B+K=B+L and B+M=B+N=IS"),
    (9, "Rees quotient (BxK)/I generates L"),
    (10, "derivation scripts replay and mutants fail"),
    (11, "subdirect decomposition and band-monoid equivalence on all IS algebras up to order 4"),
    (12, "IZ algebras of order 3 satisfy the derived identities"),
    (13, "lattice is 0-distributive"),
];

fn limit(id: u8) -> Option<Duration> {
    match id {
        1 | 2 | 10 => Some(Duration::from_secs(1)),
        6 | 12 => Some(Duration::from_secs(60)),
        11 => Some(Duration::from_secs(600)),
        _ => None,
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn is_id(text: &str) -> Identity {
    Identity::parse(text, Mode::IS).expect("fixed identity parses")
}

fn iz_id(text: &str) -> Identity {
    Identity::parse(text, Mode::IZ).expect("fixed identity parses")
}

fn names(lat: &Lattice, xs: &[usize]) -> String {
    xs.iter().map(|&x| lat.label(x)).collect::<Vec<_>>().join(",")
}

fn lattice_shape() -> Outcome {
    let lat = build_lattice().map_err(|e| e.to_string())?;
    Ok(format!(
        "elements={} covers={}",
        lat.lattice.len(),
        lat.lattice.covers().len()
    ))
}

fn non_modular() -> Outcome {
    let lat = &variety_lattice().lattice;
    let p = lat.find_n5().ok_or("no pentagon found")?;
    let Pentagon { o, a, b, c, i } = p;
    ensure(lat.is_pentagon(&p), || "witness fails the pentagon relations".into())?;
    let sub = lat.sublattice(&[o, a, b, c, i]).map_err(|e| e.to_string())?;
    ensure(sub.len() == 5 && sub.find_n5().is_some(), || "witness is not a 5-element sublattice".into())?;
    Ok(format!(
        "o={} a={} c={} b={} i={}",
        lat.label(o),
        lat.label(a),
        lat.label(c),
        lat.label(b),
        lat.label(i)
    ))
}

fn small_down_sets() -> Outcome {
    let vl = variety_lattice();
    let lat = &vl.lattice;
    let below_b = lat.down_set(V::B.index());
    let chain = lat.sublattice(&below_b).map_err(|e| e.to_string())?;
    let is_chain = (0..chain.len()).all(|x| (0..chain.len()).all(|y| chain.leq(x, y) || chain.leq(y, x)));
    ensure(
        vl.down_set(V::B) == vec![V::T, V::SL, V::B] && is_chain,
        || format!("L(B) = {}", names(lat, &below_b)),
    )?;
    let below_n = vl.down_set(V::N);
    ensure(below_n.len() == 6, || format!("L(N) has {} elements", below_n.len()))?;
    Ok(format!("L(B)={} |L(N)|={}", names(lat, &below_b), below_n.len()))
}

fn neutrality() -> Outcome {
    let lat = &variety_lattice().lattice;
    let neutral = lat.neutral_elements();
    for v in [V::SL, V::ZM] {
        ensure(neutral.contains(&v.index()), || format!("{v} is not neutral"))?;
    }
    Ok(format!("neutral={}", names(lat, &neutral)))
}

fn atoms() -> Outcome {
    let lat = &variety_lattice().lattice;
    let atoms = lat.atoms();
    let expected: BTreeSet<usize> = [V::SL.index(), V::ZM.index()].into();
    ensure(atoms.iter().copied().collect::<BTreeSet<_>>() == expected, || {
        format!("atoms={}", names(lat, &atoms))
    })?;
    Ok(format!("atoms={}", names(lat, &atoms)))
}

/// Counts pairs where `decide` and the generator oracle disagree, scanning
/// on the calling thread.
pub fn oracle_discrepancies(set: &IdentitySet) -> Vec<(V, Identity, bool)> {
    let w = set.words().len();
    let mut out = Vec::new();
    for v in V::ALL {
        let classes = set.classes(&v.record().generator_algebras());
        let decided = set.decisions(v);
        for i in 0..w {
            for j in 0..w {
                let holds = classes[i] == classes[j];
                if holds != decided[i * w + j] {
                    out.push((v, set.identity(i, j), holds));
                }
            }
        }
    }
    out
}

fn oracle_agreement() -> Outcome {
    let set = IdentitySet::standard();
    let bad = oracle_discrepancies(set);
    if let Some((v, id, holds)) = bad.first() {
        return Err(format!("{} discrepancies, first {v}: {id} oracle={holds}", bad.len()));
    }
    Ok(format!("varieties=16 identities={} discrepancies=0", set.pair_count()))
}

fn normal_forms() -> Outcome {
    let set = IdentitySet::standard();
    let normal: Vec<_> = set.words().iter().map(normalize_is).collect();
    let decided = set.decisions(V::IS);
    let w = normal.len();
    let mut bad = 0usize;
    let mut first = None;
    for i in 0..w {
        for j in 0..w {
            if (normal[i] == normal[j]) != decided[i * w + j] {
                bad += 1;
                first.get_or_insert_with(|| set.identity(i, j));
            }
        }
    }
    match first {
        Some(id) => Err(format!("{bad} discrepancies, first {id}")),
        None => Ok(format!("identities={} discrepancies=0", set.pair_count())),
    }
}

fn join_equalities() -> Outcome {
    let lat = variety_lattice();
    let (bk, bl, bm, bn) = (lat.join(V::B, V::K), lat.join(V::B, V::L), lat.join(V::B, V::M), lat.join(V::B, V::N));
    ensure(bk == bl && bm == bn && bn == V::IS, || format!("B+K={bk} B+L={bl} B+M={bm} B+N={bn}"))?;
    Ok(format!("B+K=B+L={bk} B+M=B+N={bm}"))
}

fn rees_quotient() -> Outcome {
    let q = builtin("BxK_mod_I").map_err(|e| e.to_string())?;
    ensure(q.order() == 10, || format!("order {}", q.order()))?;
    ensure(q.satisfies(&is_id("xx=O")).holds(), || "xx = O fails".into())?;
    let w = q.satisfies(&is_id("xy=yx")).witness.ok_or("commutative law holds")?;
    let witness = q.describe(&w);
    ensure(witness == "x=(e,a), y=(f,b)", || format!("witness {witness}"))?;
    let v = variety_of(&q).map_err(|e| e.to_string())?;
    ensure(v == V::L, || format!("generates {v}"))?;
    Ok(format!("order=10 witness {witness} variety={v}"))
}

fn derivations() -> Outcome {
    let scripts = shipped_scripts();
    ensure(scripts.len() >= 10, || format!("only {} scripts", scripts.len()))?;
    for (name, verdict) in replay_shipped() {
        verdict.map_err(|e| format!("{name}: {e}"))?;
    }
    let mut mutants = 0;
    for (k, s) in scripts.iter().enumerate() {
        let proven = crate::derivations::citable(s.premises(), &scripts[..k]);
        for i in 0..s.step_count() {
            mutants += 1;
            match s.corrupt_step(i).replay(&proven) {
                Ok(()) => return Err(format!("{} survives corruption of step {}", s.name(), i + 1)),
                Err(e) if failing_step(&e) != Some(i + 1) => {
                    return Err(format!("{} mutant at step {} fails elsewhere: {e}", s.name(), i + 1))
                }
                Err(_) => {}
            }
        }
    }
    Ok(format!("scripts={} mutants={} all rejected", scripts.len(), mutants))
}

/// The 1-based step a replay error points at.
pub fn failing_step(e: &ReplayError) -> Option<usize> {
    match e {
        ReplayError::UnknownRule { step, .. }
        | ReplayError::BadPosition { step, .. }
        | ReplayError::Domain { step, .. }
        | ReplayError::NoMatch { step, .. }
        | ReplayError::WrongResult { step, .. } => Some(*step),
        _ => None,
    }
}

fn semigroup_decomposition(jobs: usize) -> Outcome {
    let band = is_id("xx=x");
    let (right, left) = (is_id("xO=x"), is_id("Ox=x"));
    let mut counts = Vec::new();
    for n in 1..=4 {
        let report = enumerate_with_jobs(n, Mode::IS, jobs).map_err(|e| e.to_string())?;
        for a in &report.algebras {
            let sd = a.subdirect_check().map_err(|e| e.to_string())?;
            ensure(sd.passed(), || format!("subdirect check fails on\n{}: {:?}", a.to_file_format(), sd.failures))?;
            let is_band = a.satisfies(&band).holds();
            let is_monoid = a.satisfies(&right).holds() && a.satisfies(&left).holds();
            ensure(is_band == is_monoid, || format!("band={is_band} monoid={is_monoid} on\n{}", a.to_file_format()))?;
        }
        counts.push(report.count().to_string());
    }
    Ok(format!("classes by order={}", counts.join(",")))
}

/// The six identities derived for implication zroupoids.
pub fn derived_iz_identities() -> Vec<Identity> {
    [
        "((x>y)>z) = (((0'>x)>y)>z)",
        "((x>y)>z) = ((x>y)>z)''",
        "(((0>x)>0')>y) = ((x>0')>y)",
        "((0>0')>x) = (0'>x)",
        "(0'>0') = 0'",
        "(0>0') = 0'",
    ]
    .iter()
    .map(|t| iz_id(t))
    .collect()
}

fn zroupoid_identities(jobs: usize) -> Outcome {
    let report = enumerate_with_jobs(3, Mode::IZ, jobs).map_err(|e| e.to_string())?;
    let ids = derived_iz_identities();
    let zero_law = iz_id("0 = 0'");
    let two_b = builtin("2b").map_err(|e| e.to_string())?;
    for a in &report.algebras {
        for id in &ids {
            ensure(a.satisfies(id).holds(), || format!("{id} fails in\n{}", a.to_file_format()))?;
        }
        let has_two_b = a.subalgebra_generated(&BTreeSet::new()).is_isomorphic(&two_b);
        ensure(a.satisfies(&zero_law).holds() != has_two_b, || {
            format!("0 = 0' and 2b subalgebra disagree on\n{}", a.to_file_format())
        })?;
    }
    let two = enumerate_with_jobs(2, Mode::IZ, jobs).map_err(|e| e.to_string())?;
    for name in ["2s", "2b"] {
        let key = canonical_form(&builtin(name).map_err(|e| e.to_string())?);
        ensure(two.algebras.iter().any(|a| canonical_form(a) == key), || format!("{name} missing at order 2"))?;
    }
    Ok(format!("order 3 classes={} order 2 classes={}", report.count(), two.count()))
}

fn zero_distributive() -> Outcome {
    let lat = &variety_lattice().lattice;
    match lat.zero_distributivity_violation() {
        None => Ok("no violating triple".into()),
        Some((x, y, z)) => Err(format!("violated at {}", names(lat, &[x, y, z]))),
    }
}

/// Runs one criterion; `jobs` bounds enumeration workers.
pub fn run_criterion(id: u8, jobs: usize) -> CriterionResult {
    let title = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, t)| *t)
        .unwrap_or("unknown criterion");
    let start = Instant::now();
    let outcome = match id {
        1 => lattice_shape(),
        2 => non_modular(),
        3 => small_down_sets(),
        4 => neutrality(),
        5 => atoms(),
        6 => oracle_agreement(),
        7 => normal_forms(),
        8 => join_equalities(),
        9 => rees_quotient(),
        10 => derivations(),
        11 => semigroup_decomposition(jobs),
        12 => zroupoid_identities(jobs),
        13 => zero_distributive(),
        _ => Err("no such criterion".into()),
    };
    let elapsed = start.elapsed();
    let limit = limit(id);
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let (passed, mut detail) = match outcome {
        Ok(d) => (in_time, d),
        Err(d) => (false, d),
    };
    if !in_time {
        detail.push_str(&format!(" (exceeded {:?})", limit.unwrap()));
    }
    CriterionResult { id, title, passed, detail, elapsed, limit }
}

pub fn run_criteria(jobs: usize) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, jobs)).collect()
}

/// A named worked example and its outcome.
#[derive(Debug, Clone)]
pub struct ExampleResult {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

fn eq<T: PartialEq + std::fmt::Debug>(got: T, want: T) -> Result<(), String> {
    ensure(got == want, || format!("got {got:?}, expected {want:?}"))
}

type Example = (&'static str, fn() -> Result<(), String>);

const EXAMPLES: &[Example] = &[
    ("parse word xyz", || {
        eq(crate::terms::parse_word("xyz").map(|w| w.len()).ok(), Some(3))
    }),
    ("parse word with omegas", || {
        eq(crate::terms::parse_word("zOxyzOO").map(|w| w.to_string()).ok(), Some("zOxyzOO".into()))
    }),
    ("empty word rejected", || eq(crate::terms::parse_word("").is_err(), true)),
    ("prime desugars to arrow into zero", || {
        use crate::terms::TreeTerm;
        eq(crate::terms::parse_term("0'").ok(), Some(TreeTerm::arrow(TreeTerm::Zero, TreeTerm::Zero)))
    }),
    ("nested arrow parses", || {
        eq(crate::terms::parse_term("((x>y)>z)").map(|t| t.to_string()).ok(), Some("((x>y)>z)".into()))
    }),
    ("unbalanced term rejected", || eq(crate::terms::parse_term("(x>y").is_err(), true)),
    ("content", || {
        let c = |s: &str| crate::terms::content(&crate::terms::parse_word(s).unwrap()).len();
        eq((c("xyx"), c("OO"), c("zOxyzOO")), (2, 0, 3))
    }),
    ("last occurrence sequence", || {
        let l = |s: &str| crate::terms::los(&crate::terms::parse_word(s).unwrap()).map(|w| w.to_string());
        eq((l("xyx"), l("zOxyzOO"), l("OO")), (Some("yx".into()), Some("xyz".into()), None))
    }),
    ("length", || {
        use crate::terms::Length;
        let l = |s: &str| crate::terms::length(&crate::terms::parse_word(s).unwrap());
        eq((l("xy"), l("xO"), l("xyz")), (Length::Finite(2), Length::Infinite, Length::Finite(3)))
    }),
    ("squares", || {
        let s = |w: &str| crate::terms::contains_square(&crate::terms::parse_word(w).unwrap());
        eq((s("xyxy"), s("xyz"), s("axxb")), (true, false, true))
    }),
    ("substitution", || {
        use crate::terms::{parse_word, substitute, Letter, Substitution};
        let w = |s: &str| parse_word(s).unwrap();
        let x = Letter::new('x').unwrap();
        let y = Letter::new('y').unwrap();
        let s1: Substitution<_> = [(x, w("ab")), (y, w("O"))].into_iter().collect();
        let s2: Substitution<_> = [(x, w("O"))].into_iter().collect();
        let id: Substitution<_> = "xyz".chars().map(|c| (Letter::new(c).unwrap(), w(&c.to_string()))).collect();
        eq(
            (substitute(&w("xyO"), &s1), substitute(&w("xx"), &s2), substitute(&w("xyz"), &id)),
            (w("abOO"), w("OO"), w("xyz")),
        )
    }),
    ("normal forms", || {
        let n = |s: &str| normalize_is(&crate::terms::parse_word(s).unwrap()).to_string();
        eq((n("xyx"), n("xy"), n("OO")), ("yxO".into(), "xy".into(), "O".into()))
    }),
    ("registry bases and generators", || {
        eq(V::SlZm.record().basis.clone(), vec![is_id("xy=yxO")])?;
        eq(V::BK.record().basis.clone(), vec![is_id("xO=xx")])?;
        eq(V::N.record().generators.clone(), vec!["L", "M"])
    }),
    ("decide examples", || {
        let d = |v: V, s: &str| decide(v, &is_id(s)).unwrap();
        eq(
            (d(V::IS, "xyz=zOxyzOO"), d(V::ZM, "x=xx"), d(V::M, "xO=xx"), d(V::K, "xO=xx"), d(V::B, "xO=xx")),
            (true, false, false, true, true),
        )
    }),
    ("variety of Z, quotient and trivial", || {
        let v = |n: &str| variety_of(&builtin(n).unwrap()).ok();
        eq((v("Z"), v("BxK_mod_I"), v("trivial")), (Some(V::ZM), Some(V::L), Some(V::T)))
    }),
    ("builtin 2b and 2s rows", || {
        eq((builtin("2b").unwrap().row(0).to_vec(), builtin("2s").unwrap().row(0).to_vec()), (vec![1, 1], vec![0, 1]))
    }),
    ("efe = e in B", || {
        let b = builtin("B").unwrap();
        let (e, f) = (b.element("e").unwrap(), b.element("f").unwrap());
        eq(b.op(b.op(e, f), e), e)
    }),
    ("evaluation in K, L and of omega", || {
        use crate::models::Assignment;
        use crate::terms::{parse_word, Letter};
        let asg = |a: &crate::models::FiniteAlgebra| -> Assignment {
            [(Letter::new('x').unwrap(), a.element("a").unwrap()), (Letter::new('y').unwrap(), a.element("b").unwrap())].into()
        };
        let (k, l) = (builtin("K").unwrap(), builtin("L").unwrap());
        let kv = k.evaluate(&parse_word("xy").unwrap(), &asg(&k)).unwrap();
        let lv = l.evaluate(&parse_word("yx").unwrap(), &asg(&l)).unwrap();
        let om = k.evaluate(&parse_word("O").unwrap(), &Assignment::new()).unwrap();
        eq((k.label(kv), l.label(lv), om), ("ab", "0", k.distinguished()))
    }),
    ("satisfaction witnesses", || {
        let (k, l, m) = (builtin("K").unwrap(), builtin("L").unwrap(), builtin("M").unwrap());
        eq(k.satisfies(&is_id("xy=yx")).holds(), true)?;
        let lw = l.satisfies(&is_id("xy=yx")).witness.map(|w| l.describe(&w));
        let mw = m.satisfies(&is_id("xO=xx")).witness.map(|w| m.describe(&w));
        eq((lw, mw), (Some("x=a, y=b".into()), Some("x=b".into())))
    }),
    ("axiom checks", || {
        eq(builtin("A").unwrap().check_axioms(Mode::IS).passed(), true)?;
        let r = builtin("2b").unwrap().check_axioms(Mode::IS);
        eq(r.check("associativity").and_then(|c| c.witness.clone()), Some(vec![0, 0, 0]))?;
        eq(builtin("2b").unwrap().check_axioms(Mode::IZ).passed(), true)
    }),
    ("direct product B x K", || {
        let p = builtin("B").unwrap().direct_product(&builtin("K").unwrap());
        let (ea, fb) = (p.element("(e,a)").unwrap(), p.element("(f,b)").unwrap());
        eq((p.order(), p.label(p.op(ea, fb)), p.label(p.distinguished())), (12, "(f,ab)", "(1,0)"))
    }),
    ("Rees quotient of B x K", || {
        let q = builtin("BxK_mod_I").unwrap();
        eq(q.order(), 10)?;
        eq(q.satisfies(&is_id("xx=O")).holds(), true)?;
        eq(q.satisfies(&is_id("xy=yx")).witness.map(|w| q.describe(&w)), Some("x=(e,a), y=(f,b)".into()))
    }),
    ("generated subalgebras", || {
        let b2 = builtin("2b").unwrap();
        let k = builtin("K").unwrap();
        let a = k.element("a").unwrap();
        let ka = k.subalgebra_generated(&[a].into());
        eq(
            (b2.subalgebra_generated(&BTreeSet::new()).order(), ka.labels().to_vec(), builtin("trivial").unwrap().subalgebra_generated(&BTreeSet::new()).order()),
            (2, vec!["a".to_string(), "0".to_string()], 1),
        )
    }),
    ("subdirect decompositions", || {
        let b = builtin("B").unwrap().subdirect_check().map_err(|e| e.to_string())?;
        eq((b.passed(), b.band.order(), b.quotient.order()), (true, 3, 1))?;
        let m = builtin("M").unwrap().subdirect_check().map_err(|e| e.to_string())?;
        eq((m.passed(), m.band.order()), (true, 1))?;
        eq(m.quotient.is_isomorphic(&builtin("M").unwrap()), true)?;
        eq(builtin("K").unwrap().subdirect_check().map(|r| r.passed()).ok(), Some(true))
    }),
    ("lattice joins and meets", || {
        let l = variety_lattice();
        eq((l.join(V::B, V::M), l.join(V::B, V::K), l.join(V::B, V::L), l.meet(V::SlN, V::BK)), (V::IS, V::BK, V::BK, V::SlL))
    }),
    ("pentagons", || {
        let vl = variety_lattice();
        let lat = &vl.lattice;
        let (sl, slm, sln, b, is) = (V::SL.index(), V::SlM.index(), V::SlN.index(), V::B.index(), V::IS.index());
        eq(lat.is_pentagon(&Pentagon { o: sl, a: slm, b, c: sln, i: is }), true)?;
        let chain = lat.sublattice(&vl.lattice.down_set(V::B.index())).map_err(|e| e.to_string())?;
        eq(chain.find_n5().is_none(), true)?;
        let n = lat.sublattice(&lat.down_set(V::N.index())).map_err(|e| e.to_string())?;
        eq(n.find_n5().is_none(), true)
    }),
    ("distributivity", || {
        let lat = &variety_lattice().lattice;
        let n = lat.sublattice(&lat.down_set(V::N.index())).map_err(|e| e.to_string())?;
        let two = lat.sublattice(&[V::T.index(), V::SL.index()]).map_err(|e| e.to_string())?;
        eq((lat.is_distributive(), n.is_distributive(), two.is_distributive()), (false, true, true))
    }),
    ("0-distributivity", || {
        let lat = &variety_lattice().lattice;
        let n5 = Lattice::from_covers(
            ["o", "a", "b", "c", "i"].map(String::from).to_vec(),
            &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)],
        )
        .map_err(|e| e.to_string())?;
        let two = lat.sublattice(&[V::T.index(), V::SL.index()]).map_err(|e| e.to_string())?;
        eq((lat.is_zero_distributive(), n5.is_zero_distributive(), two.is_zero_distributive()), (true, true, true))
    }),
    ("neutral elements", || {
        let lat = &variety_lattice().lattice;
        let n = lat.neutral_elements();
        eq([V::SL, V::ZM, V::T, V::IS].iter().all(|v| n.contains(&v.index())), true)
    }),
    ("atoms", || {
        let lat = &variety_lattice().lattice;
        let n = lat.sublattice(&lat.down_set(V::N.index())).map_err(|e| e.to_string())?;
        let two = lat.sublattice(&[V::T.index(), V::SL.index()]).map_err(|e| e.to_string())?;
        eq(
            (names(lat, &lat.atoms()), names(&n, &n.atoms()), names(&two, &two.atoms())),
            ("ZM,SL".into(), "ZM".into(), "SL".into()),
        )
    }),
    ("enumeration of orders 1 and 2", || {
        eq(enumerate(1, Mode::IS).map(|r| r.count()).ok(), Some(1))?;
        let two = enumerate(2, Mode::IS).map_err(|e| e.to_string())?;
        for name in ["A", "Z"] {
            let key = canonical_form(&builtin(name).unwrap());
            eq(two.algebras.iter().any(|a| canonical_form(a) == key), true)?;
        }
        let iz = enumerate(2, Mode::IZ).map_err(|e| e.to_string())?;
        for name in ["2s", "2b"] {
            let key = canonical_form(&builtin(name).unwrap());
            eq(iz.algebras.iter().any(|a| canonical_form(a) == key), true)?;
        }
        Ok(())
    }),
    ("canonical forms", || {
        let z = builtin("Z").unwrap();
        let relabeled = crate::models::FiniteAlgebra::new(vec![vec![0, 0], vec![0, 0]], 0).unwrap();
        eq(canonical_form(&z), canonical_form(&relabeled))?;
        eq(canonical_form(&builtin("A").unwrap()) != canonical_form(&z), true)?;
        eq(canonical_form(&builtin("trivial").unwrap()), vec![1, 0])
    }),
    ("classification of small orders", || {
        use crate::enumerator::classify;
        let one = classify(&enumerate(1, Mode::IS).unwrap()).map_err(|e| e.to_string())?;
        eq(one.varieties, vec![V::T])?;
        for n in [2, 4] {
            let r = enumerate(n, Mode::IS).map_err(|e| e.to_string())?;
            let c = classify(&r).map_err(|e| e.to_string())?;
            for (a, v) in r.algebras.iter().zip(&c.varieties) {
                for (name, want) in [("A", V::SL), ("Z", V::ZM), ("K", V::K), ("L", V::L)] {
                    if a.is_isomorphic(&builtin(name).unwrap()) {
                        eq(*v, want)?;
                    }
                }
            }
        }
        Ok(())
    }),
    ("rewrite steps", || {
        use crate::derivations::{apply_step, axioms, Direction, Range, Step};
        use crate::terms::{parse_word, Letter};
        let w = |s: &str| parse_word(s).unwrap();
        let rules = axioms(Mode::IS);
        let cube = Step { rule: "IS2".into(), direction: Direction::L2R, position: Range { from: 2, to: 4 }, substitution: crate::terms::Substitution::new(), result: w("xO") };
        eq(apply_step(&w("xOOO"), &cube, &rules, 1).ok(), Some(w("xO")))?;
        let sub = "xyz".chars().map(|c| (Letter::new(c).unwrap(), w(&c.to_string()))).collect();
        let back = Step { rule: "IS1".into(), direction: Direction::R2L, position: Range { from: 1, to: 7 }, substitution: sub, result: w("xyz") };
        eq(apply_step(&w("zOxyzOO"), &back, &rules, 1).ok(), Some(w("xyz")))?;
        let short = Step { rule: "IS2".into(), direction: Direction::L2R, position: Range { from: 1, to: 3 }, substitution: crate::terms::Substitution::new(), result: w("O") };
        eq(matches!(apply_step(&w("xOO"), &short, &rules, 1), Err(ReplayError::NoMatch { .. })), true)
    }),
    ("shipped scripts replay", || {
        for (name, v) in replay_shipped() {
            v.map_err(|e| format!("{name}: {e}"))?;
        }
        eq(shipped_scripts().len() >= 10, true)
    }),
    ("corrupted script fails at the corrupted step", || {
        let s = &shipped_scripts()[0];
        let e = s.corrupt_step(4).replay(&[]).err().ok_or("mutant replayed")?;
        eq(failing_step(&e), Some(5))
    }),
    ("script goals hold in builtin algebras", || {
        for s in shipped_scripts() {
            for name in crate::models::BUILTIN_NAMES {
                let a = builtin(name).unwrap();
                if !a.check_axioms(s.mode()).passed() {
                    continue;
                }
                if s.premises().iter().all(|p| a.satisfies(&p.identity).holds()) {
                    ensure(a.satisfies(s.goal()).holds(), || format!("{} fails in {name}", s.name()))?;
                }
            }
        }
        Ok(())
    }),
    ("command line examples", || {
        let run = |args: &[&str]| crate::cli::run(args.iter().map(|s| s.to_string()));
        let (code, out) = run(&["varietylab", "check", "IS", "xyz=zOxyzOO"]);
        eq((code, out.trim()), (0, "HOLDS"))?;
        let (code, out) = run(&["varietylab", "oracle", "builtin:M", "xO=xx"]);
        eq((code, out.trim()), (0, "FAILS witness x=b"))?;
        let (code, out) = run(&["varietylab", "lattice"]);
        eq((code, out.contains("elements=16 covers=25 modular=false")), (0, true))
    }),
];

pub fn run_examples() -> Vec<ExampleResult> {
    EXAMPLES
        .iter()
        .map(|&(name, f)| ExampleResult { name, outcome: f() })
        .collect()
}

/// Full report text and whether everything passed.
pub fn report(jobs: usize) -> (bool, String) {
    let mut out = String::new();
    let criteria = run_criteria(jobs);
    for r in &criteria {
        out.push_str(&r.line());
        out.push('\n');
    }
    let examples = run_examples();
    for e in &examples {
        match &e.outcome {
            Ok(()) => out.push_str(&format!("[PASS] example {}\n", e.name)),
            Err(m) => out.push_str(&format!("[FAIL] example {}: {m}\n", e.name)),
        }
    }
    let failed = criteria.iter().filter(|r| !r.passed).count() + examples.iter().filter(|e| e.outcome.is_err()).count();
    out.push_str(&format!(
        "criteria={} examples={} failed={failed}\n",
        criteria.len(),
        examples.len()
    ));
    (failed == 0, out)
}
