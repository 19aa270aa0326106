//! The acceptance criteria, each at its pinned tolerance and time budget.
//! Run with `cargo test -p primint --test acceptance -- --nocapture` to see
//! the table.

use std::time::{Duration, Instant};

use primint::verify::{self, Rows};
use primint::SuiteRow;

const SEED: u64 = 7;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Rows,
}

fn all<const N: usize>(parts: [Rows; N]) -> Rows {
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn criteria() -> Vec<Criterion> {
    let secs = Duration::from_secs;
    vec![
        Criterion { id: 1, name: "Alexiewicz norm exact values", budget: secs(10), run: verify::exact_norms },
        Criterion { id: 2, name: "Hardy-Krause norms", budget: secs(1), run: verify::bv_norms },
        Criterion { id: 3, name: "divergence witness", budget: secs(5), run: verify::divergence_witness },
        Criterion {
            id: 4,
            name: "indicator coincidence",
            budget: secs(60),
            run: || verify::indicator_coincidence(SEED, verify::COINCIDENCE_CASES),
        },
        Criterion { id: 5, name: "Holder inequality", budget: secs(120), run: || verify::holder(SEED, verify::HOLDER_CASES) },
        Criterion { id: 6, name: "norm sandwiches", budget: secs(30), run: verify::norm_sandwich },
        Criterion { id: 7, name: "FTC round trip", budget: secs(5), run: verify::ftc },
        Criterion { id: 8, name: "Fubini counterexamples", budget: secs(30), run: verify::fubini },
        Criterion {
            id: 9,
            name: "lattice and M-space",
            budget: secs(10),
            run: || {
                all([
                    verify::lattice_identities(SEED, verify::LATTICE_TRIPLES),
                    verify::join_norms(),
                    verify::incomparable_pair(),
                ])
            },
        },
        Criterion {
            id: 10,
            name: "algebra",
            budget: secs(10),
            run: || {
                all([
                    verify::submultiplicative(SEED, verify::ALGEBRA_PAIRS),
                    verify::zero_divisor(),
                    verify::approximate_unit(),
                ])
            },
        },
        Criterion { id: 11, name: "convergence theorem", budget: secs(30), run: || verify::quadrant_convergence(SEED) },
        Criterion {
            id: 12,
            name: "convolution",
            budget: secs(180),
            run: || {
                all([
                    verify::poisson_mass(),
                    verify::poisson_chain(verify::CHAIN_RESOLUTION),
                    verify::bv_corner_limits(),
                ])
            },
        },
        Criterion { id: 13, name: "translation", budget: secs(20), run: verify::translation },
        Criterion { id: 14, name: "three-dimensional corner formula", budget: secs(1), run: verify::nd_corner },
    ]
}

#[test]
fn acceptance() {
    let mut failures = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let rows = (c.run)();
        let took = start.elapsed();
        let (ok, note) = match &rows {
            Ok(rows) => {
                let bad: Vec<&SuiteRow> = rows.iter().filter(|r| !r.passed).collect();
                let mut note = format!("{} checks", rows.len());
                for r in &bad {
                    note.push_str(&format!("; FAIL {}: {}", r.id, r.detail));
                }
                if took > c.budget {
                    note.push_str(&format!("; over budget {:?}", c.budget));
                }
                (!rows.is_empty() && bad.is_empty() && took <= c.budget, note)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "{} {:>2} {:<34} {:>8.3} s  {}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            took.as_secs_f64(),
            note
        );
        if !ok {
            failures.push(c.id);
        }
    }
    assert!(failures.is_empty(), "failing criteria: {failures:?}");
}
