use varietylab::verify::{run_criteria, run_examples};

#[test]
fn acceptance_criteria() {
    let results = run_criteria(4);
    for r in &results {
        let limit = r.limit.map(|l| format!(" limit {l:?}")).unwrap_or_default();
        println!("{} [{:.3?}{limit}]", r.line(), r.elapsed);
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!("criteria={} failed={}", results.len(), failed.len());
    assert_eq!(results.len(), 13);
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn worked_examples() {
    let results = run_examples();
    for r in &results {
        match &r.outcome {
            Ok(()) => println!("[PASS] {}", r.name),
            Err(e) => println!("[FAIL] {}: {e}", r.name),
        }
    }
    let failed: Vec<&str> = results.iter().filter(|r| r.outcome.is_err()).map(|r| r.name).collect();
    assert!(failed.is_empty(), "failing examples: {failed:?}");
}
