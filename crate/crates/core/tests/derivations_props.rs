mod common;

use proptest::prelude::*;
use varietylab::derivations::{replay_shipped, replay_with_library, shipped_scripts, AnyScript, ReplayError};
use varietylab::models::BUILTIN_NAMES;
use varietylab::verify::failing_step;
use varietylab::{builtin, FiniteAlgebra, Mode};

fn models(mode: Mode) -> Vec<FiniteAlgebra> {
    let enumerated = match mode {
        Mode::IS => common::small_is_algebras(),
        Mode::IZ => common::small_iz_algebras(),
    };
    BUILTIN_NAMES
        .iter()
        .map(|n| builtin(n).unwrap())
        .filter(|a| a.check_axioms(mode).passed())
        .chain(enumerated.iter().cloned())
        .collect()
}

#[test]
fn shipped_scripts_replay() {
    let results = replay_shipped();
    assert!(results.len() >= 10);
    for (name, r) in results {
        assert_eq!(r, Ok(()), "{name}");
    }
}

#[test]
fn goals_hold_wherever_premises_do() {
    for script in shipped_scripts() {
        let premises: Vec<_> = script.premises().iter().map(|r| r.identity.clone()).collect();
        let mut applicable = 0;
        for a in models(script.mode()) {
            if premises.iter().all(|p| a.satisfies(p).holds()) {
                applicable += 1;
                assert!(a.satisfies(script.goal()).holds(), "{} fails in\n{}", script.name(), a.to_file_format());
            }
        }
        assert!(applicable > 0, "{} has no models", script.name());
    }
}

#[test]
fn scripts_round_trip_through_text() {
    for script in shipped_scripts() {
        assert_eq!(&AnyScript::parse(&script.to_string()).unwrap(), script);
    }
}

#[test]
fn replay_is_deterministic() {
    for script in shipped_scripts() {
        let bad = script.corrupt_step(0);
        assert_eq!(replay_with_library(&bad), replay_with_library(&bad));
    }
}

#[test]
fn malformed_scripts_are_rejected() {
    assert!(matches!(AnyScript::parse("mode: IS\nname: x\n"), Err(ReplayError::Syntax { .. })));
    let text = shipped_scripts()[0].to_string().replacen("step IS", "step NOPE", 1);
    if let Ok(s) = AnyScript::parse(&text) {
        assert!(replay_with_library(&s).is_err());
    }
}

fn script_and_step() -> impl Strategy<Value = (usize, usize)> {
    let sizes: Vec<usize> = shipped_scripts().iter().map(|s| s.step_count()).collect();
    (0..sizes.len()).prop_flat_map(move |i| (Just(i), 0..sizes[i]))
}

proptest! {
    #![proptest_config(common::config(64))]

    #[test]
    fn corrupted_steps_fail_where_corrupted((i, step) in script_and_step()) {
        let mutant = shipped_scripts()[i].corrupt_step(step);
        let err = replay_with_library(&mutant).unwrap_err();
        prop_assert_eq!(failing_step(&err), Some(step + 1), "{}", err);
    }
}
