//! Acceptance criteria. Each prints one PASS/FAIL line; the process exits
//! nonzero if any criterion fails.

use std::time::{Duration, Instant};

use modp_langlands::checks::{run_suite, CheckConfig, Suite, SuiteReport};
use modp_langlands::cli::run_args;

// Wall-clock limits. Counting tolerances are zero throughout: every check is
// exact finite-field or rational arithmetic.
const EQUIVARIANCE_LIMIT: Duration = Duration::from_secs(20);
const PSI_LIMIT: Duration = Duration::from_secs(5);
const AMICE_LIMIT: Duration = Duration::from_secs(15);
const PROFILE_LIMIT: Duration = Duration::from_secs(10);
const ROUND_TRIP_LIMIT: Duration = Duration::from_secs(10);
const TABLE_LIMIT: Duration = Duration::from_secs(5);
const FULL_CHECK_LIMIT: Duration = Duration::from_secs(60);

const PAIR_TRIPLES: usize = 200;
const TABLE_ANCHORS: usize = 5;

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn suite(s: Suite, p: u32) -> SuiteReport {
    run_suite(s, &CheckConfig::new(p))
        .unwrap_or_else(|e| panic!("{} suite at p = {p}: {e}", s.name()))
}

/// Requires each named property to have run at least `min` times with no violations.
fn require(reports: &[SuiteReport], names: &[&str], min: usize, notes: &mut Vec<String>) -> bool {
    let mut ok = true;
    for rep in reports {
        for &name in names {
            match rep.property(name) {
                Some(x) if x.violations == 0 && x.checked >= min => {
                    notes.push(format!("p={} {name}={}", rep.p, x.checked));
                }
                Some(x) => {
                    ok = false;
                    notes.push(format!(
                        "p={} {name}: checked {} violations {} {:?}",
                        rep.p, x.checked, x.violations, x.examples
                    ));
                }
                None => {
                    ok = false;
                    notes.push(format!("p={} {name}: missing", rep.p));
                }
            }
        }
    }
    ok
}

fn residue_equivariance() -> Outcome {
    let mut notes = Vec::new();
    let reports: Vec<_> = [2, 3, 5, 7]
        .into_iter()
        .map(|p| suite(Suite::Tower, p))
        .collect();
    let ok = require(
        &reports,
        &[
            "residue_equivariance",
            "residue_displayed_values",
            "star_action_validity",
        ],
        1,
        &mut notes,
    );
    Outcome {
        ok,
        detail: notes.join(", "),
    }
}

fn psi_structure() -> Outcome {
    let mut notes = Vec::new();
    let reports: Vec<_> = [2, 3, 5, 7]
        .into_iter()
        .map(|p| suite(Suite::Series, p))
        .collect();
    let names = [
        "psi_phi_identity",
        "psi_kills_twisted_frobenius",
        "psi_displayed_values",
        "psi_onto_ideals",
    ];
    let ok = require(&reports, &names, 1, &mut notes);
    Outcome {
        ok,
        detail: notes.join(", "),
    }
}

fn amice_induction() -> Outcome {
    let mut notes = Vec::new();
    let reports: Vec<_> = [2, 3, 5]
        .into_iter()
        .map(|p| suite(Suite::Amice, p))
        .collect();
    let mut ok = require(
        &reports,
        &[
            "transform_bijective",
            "measure_formula_central",
            "measure_formula_p_power",
            "measure_formula_diagonal_unit",
            "measure_formula_unipotent",
        ],
        1,
        &mut notes,
    );
    ok &= require(&reports, &["pair_invariance"], PAIR_TRIPLES, &mut notes);
    Outcome {
        ok,
        detail: notes.join(", "),
    }
}

fn borel_profiles() -> Outcome {
    let mut notes = Vec::new();
    let reports = [suite(Suite::Reps, 5)];
    let ok = require(
        &reports,
        &["borel_profiles_distinct", "reconstruct_inverts_restrict"],
        1,
        &mut notes,
    );
    Outcome {
        ok,
        detail: notes.join(", "),
    }
}

fn round_trip() -> Outcome {
    let mut notes = Vec::new();
    let reports = [suite(Suite::Corresp, 5)];
    let ok = require(
        &reports,
        &[
            "round_trip",
            "swap_invariance",
            "central_character_identity",
        ],
        1,
        &mut notes,
    );
    Outcome {
        ok,
        detail: notes.join(", "),
    }
}

fn reduction_table() -> Outcome {
    let mut notes = Vec::new();
    let reports: Vec<_> = [3, 5, 7]
        .into_iter()
        .map(|p| suite(Suite::Corresp, p))
        .collect();
    let mut ok = require(
        &reports,
        &["table_partition", "zero_coefficient_matches_case_one"],
        1,
        &mut notes,
    );
    ok &= require(
        &reports[1..2],
        &["table_instances"],
        TABLE_ANCHORS,
        &mut notes,
    );
    Outcome {
        ok,
        detail: notes.join(", "),
    }
}

fn full_check() -> Outcome {
    match run_args(["modpll", "check", "--suite", "all", "--p", "5"]) {
        Ok(out) => Outcome {
            ok: out.code == 0 && out.json["violations"] == 0,
            detail: format!("exit {}, violations {}", out.code, out.json["violations"]),
        },
        Err(e) => Outcome {
            ok: false,
            detail: e.to_string(),
        },
    }
}

fn main() {
    let criteria: [Criterion; 7] = [
        (
            "residue equivariance, p in {2,3,5,7}",
            EQUIVARIANCE_LIMIT,
            residue_equivariance,
        ),
        ("psi structure, p in {2,3,5,7}", PSI_LIMIT, psi_structure),
        (
            "Amice transform and induction, p in {2,3,5}",
            AMICE_LIMIT,
            amice_induction,
        ),
        (
            "Borel profiles separate and reconstruct, p = 5",
            PROFILE_LIMIT,
            borel_profiles,
        ),
        (
            "correspondence round trip and swap, p = 5",
            ROUND_TRIP_LIMIT,
            round_trip,
        ),
        (
            "crystalline reduction table, p in {3,5,7}",
            TABLE_LIMIT,
            reduction_table,
        ),
        ("check --suite all --p 5", FULL_CHECK_LIMIT, full_check),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let pass = out.ok && took <= limit;
        if !pass {
            failed += 1;
        }
        println!(
            "{} {name} ({:.2}s, limit {}s): {}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            out.detail
        );
    }
    println!("{} of 7 criteria passed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
