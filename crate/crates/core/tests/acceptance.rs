//! End-to-end acceptance run: one line of output per criterion, with the
//! time budgets from the project requirements enforced.

use std::process::Command;
use std::time::{Duration, Instant};

use baire_graphs::ordinal::Ordinal;
use baire_graphs::universal::Variant;
use baire_graphs::verify::{
    bipartite_structure, descent_soundness, embedding_correctness, fault_detection,
    game_limit_case, game_lower_bounds, lprime_scan, prefix_determinacy, prop1_nested,
    rank_monotonicity, rng, round_trip, tree_rank_oracle, universal_construction,
    universal_witnesses, PropertyOutcome,
};

struct Criterion {
    label: &'static str,
    outcomes: Vec<PropertyOutcome>,
    elapsed: Duration,
    budget: Option<Duration>,
}

impl Criterion {
    fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
            && self.budget.is_none_or(|b| self.elapsed <= b)
    }

    fn report(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "criterion {status}: {} ({:.1}s",
            self.label,
            self.elapsed.as_secs_f64()
        );
        if let Some(b) = self.budget {
            line.push_str(&format!(" of {:.0}s budget", b.as_secs_f64()));
        }
        line.push(')');
        for o in self.outcomes.iter().filter(|o| !o.pass) {
            line.push_str(&format!("\n    {o}"));
        }
        line
    }
}

fn run(
    label: &'static str,
    budget_secs: Option<u64>,
    body: impl FnOnce() -> Vec<PropertyOutcome>,
) -> Criterion {
    let start = Instant::now();
    let outcomes = body();
    Criterion {
        label,
        outcomes,
        elapsed: start.elapsed(),
        budget: budget_secs.map(Duration::from_secs),
    }
}

fn alphas() -> Vec<Ordinal> {
    ["w", "w*2", "w^2", "w^3+w"]
        .iter()
        .map(|s| s.parse().expect("valid notation"))
        .collect()
}

#[test]
fn acceptance() {
    let w = Ordinal::omega();
    let w2 = Ordinal::term(Ordinal::nat(2), 1);
    let mut criteria = Vec::new();

    criteria.push(run("descent halts soundly on 10^4 random pairs per level", Some(10), || {
        alphas()
            .iter()
            .enumerate()
            .map(|(i, a)| descent_soundness(a, 10_000, &mut rng(100 + i as u64)))
            .collect()
    }));

    criteria.push(run("verdicts depend only on the read prefixes", None, || {
        vec![prefix_determinacy(&w, 1000, 100, &mut rng(200))]
    }));

    criteria.push(run("bipartite structure with verified neighbors", None, || {
        vec![bipartite_structure(&w, 1000, 1000, &mut rng(300))]
    }));

    criteria.push(run("adversary games survive to verified refutations", Some(60), || {
        vec![
            game_lower_bounds(&w, 50, 20),
            game_limit_case(&w2, &w, 20),
        ]
    }));

    criteria.push(run("rank computations match oracles and stay monotone", None, || {
        vec![
            tree_rank_oracle(100, 500, &mut rng(400)),
            rank_monotonicity(50, &[2, 4, 8], &mut rng(401)),
            prop1_nested(200, &mut rng(402)),
        ]
    }));

    criteria.push(run("universal construction stays valid and serves requests", Some(120), || {
        vec![
            universal_construction(&w2, 10_000, 1000, Variant::Plain),
            universal_construction(&w2, 10_000, 1000, Variant::TrueClopen),
            universal_witnesses(&w2, 500, 3, &mut rng(500)),
            lprime_scan(&w2, 10_000),
        ]
    }));

    criteria.push(run("random trees embed and reduce faithfully", Some(120), || {
        vec![
            embedding_correctness(&w2, 100, 40, 6, 200, &mut rng(600)),
            fault_detection(&w2, 100, 40, 6, &mut rng(601)),
        ]
    }));

    criteria.push(run("canonical labeling round-trips the graph", None, || {
        vec![round_trip(&w, 3, 5)]
    }));

    criteria.push(run("verification CLI is byte-deterministic", None, || {
        let exe = env!("CARGO_BIN_EXE_baire");
        let mut runs = Vec::new();
        for _ in 0..2 {
            match Command::new(exe).args(["verify", "--suite", "all", "--seed", "1"]).output() {
                Ok(out) => runs.push(out),
                Err(e) => {
                    return vec![PropertyOutcome {
                        name: "cli-determinism".into(),
                        pass: false,
                        detail: format!("cannot run {exe}: {e}"),
                    }]
                }
            }
        }
        let ok = runs[0].status.success()
            && runs[1].status.success()
            && runs[0].stdout == runs[1].stdout
            && !runs[0].stdout.is_empty();
        vec![PropertyOutcome {
            name: "cli-determinism".into(),
            pass: ok,
            detail: if ok {
                format!("two runs produced identical {}-byte reports", runs[0].stdout.len())
            } else {
                format!(
                    "status {:?}/{:?}, {} vs {} bytes",
                    runs[0].status, runs[1].status,
                    runs[0].stdout.len(), runs[1].stdout.len()
                )
            },
        }]
    }));

    let mut failed = 0;
    for c in &criteria {
        println!("{}", c.report());
        if !c.passed() {
            failed += 1;
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
