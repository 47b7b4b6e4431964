use std::time::{Duration, Instant};

use omfq::verify::{self, Suite, SuiteReport};

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    run: fn() -> omfq::Result<Vec<SuiteReport>>,
}

fn one(s: Suite) -> omfq::Result<Vec<SuiteReport>> {
    Ok(vec![verify::run(s)?])
}

const CRITERIA: [Criterion; 8] = [
    Criterion { id: 1, title: "P2 of psi35 on B1 x B2 is 71 E4^2 E6 Delta^5", budget: Some(Duration::from_secs(5)), run: || one(Suite::Ex65) },
    Criterion { id: 2, title: "psi10 block and pullbacks of its inverse", budget: Some(Duration::from_secs(30)), run: || one(Suite::Ex64) },
    Criterion { id: 3, title: "pullback of a lift is the lift of the development", budget: None, run: || one(Suite::Prop57) },
    Criterion { id: 4, title: "Gegenbauer generating function and structure", budget: Some(Duration::from_secs(1)), run: || one(Suite::Gegenbauer) },
    Criterion {
        id: 5,
        title: "Cohen kernel identities over Q(sqrt 5)",
        budget: None,
        run: || Ok(vec![verify::run(Suite::Lemma63)?, verify::run(Suite::Prop62)?]),
    },
    Criterion { id: 6, title: "Fourier-Jacobi of a cycle pullback, termwise", budget: None, run: || one(Suite::Prop56) },
    Criterion { id: 7, title: "Weil representation identities", budget: None, run: || one(Suite::Weil) },
    Criterion { id: 8, title: "structural invariants", budget: None, run: || Ok(vec![verify::structural_suite(40, 0x5eed)?]) },
];

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (pass, note) = match &outcome {
            Ok(reports) => {
                let total: usize = reports.iter().map(|r| r.checks.len()).sum();
                let bad: Vec<String> = reports.iter().flat_map(|r| r.failures()).map(|f| f.name.clone()).collect();
                (bad.is_empty(), if bad.is_empty() { format!("{total} checks") } else { bad.join(", ") })
            }
            Err(e) => (false, e.to_string()),
        };
        let over = c.budget.filter(|b| elapsed > *b).map(|b| format!(", over the {}s budget", b.as_secs())).unwrap_or_default();
        println!("{} {}. {} ({note}; {:.2?}{over})", if pass { "PASS" } else { "FAIL" }, c.id, c.title, elapsed);
        if !pass {
            failed.push(c.id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
