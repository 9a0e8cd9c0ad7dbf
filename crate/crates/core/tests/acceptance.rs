//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gl_workbench::experiments::{
    claim_corpus, compare_prover_with_oracle, separate_diamond, separate_fans, verify_axiom_corpus,
    verify_cofin_truncation, verify_duality, verify_infdist, verify_infmeettoloeb, verify_infrep,
    verify_path_meet, verify_soundness, Demo, ExperimentReport, InfdistBounds, DEFAULT_SEED,
};
use gl_workbench::prover::ProverLimits;

const ORACLE_MAX_SIZE: usize = 7;
const ORACLE_MAX_WORLDS: usize = 4;
const ORACLE_FORMULAS: usize = 7779;
const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(300);
const FRAME_WORLDS: usize = 4;
const LOEB_WORLDS: usize = 5;
const OMEGA_WINDOW: u64 = 8;
const CLAIM_N_MAX: u64 = 40;
const MIN_CLAIM_PAIRS: usize = 20;
const FAN_K_MAX: usize = 10;
const COFIN_CHECKS: usize = 10_000;
const COFIN_MAX_EXCEPTION: u64 = 16;

type Criterion = (&'static str, Box<dyn FnOnce() -> Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_reports(reports: &[ExperimentReport]) -> Outcome {
    let pass = reports.iter().all(|r| r.pass);
    let checked: usize = reports
        .iter()
        .flat_map(|r| &r.cases)
        .map(|c| c.checked)
        .sum();
    let mut detail = format!("{checked} instances");
    for r in reports {
        for c in r.failures() {
            detail.push_str(&format!("; {}: {}", r.name, c.label));
            if let Some(cx) = &c.counterexample {
                detail.push_str(&format!(" [{cx}]"));
            }
        }
    }
    Outcome { pass, detail }
}

fn prover_oracle() -> Outcome {
    let start = Instant::now();
    match compare_prover_with_oracle(ORACLE_MAX_SIZE, ORACLE_MAX_WORLDS, &ProverLimits::default()) {
        Err(e) => Outcome {
            pass: false,
            detail: e.to_string(),
        },
        Ok(cmp) => {
            let elapsed = start.elapsed();
            let pass = cmp.disagreements.is_empty()
                && cmp.formulas == ORACLE_FORMULAS
                && elapsed <= ORACLE_TIME_LIMIT;
            let mut detail = format!(
                "{} formulas, {} proved, {} refuted, {} disagreements, {} flagged beyond the {}-world bound, {:.1}s",
                cmp.formulas,
                cmp.proved,
                cmp.refuted,
                cmp.disagreements.len(),
                cmp.beyond_bound.len(),
                ORACLE_MAX_WORLDS,
                elapsed.as_secs_f64()
            );
            if let Some(d) = cmp.disagreements.first() {
                detail.push_str(&format!("; first: {d}"));
            }
            Outcome { pass, detail }
        }
    }
}

fn run(f: impl FnOnce() -> Result<Vec<ExperimentReport>, String>) -> Outcome {
    match f() {
        Ok(reports) => from_reports(&reports),
        Err(e) => Outcome {
            pass: false,
            detail: e,
        },
    }
}

fn main() -> ExitCode {
    let limits = ProverLimits::default();
    let criteria: Vec<Criterion> = vec![
        (
            "prover agrees with brute-force countermodel search",
            Box::new(prover_oracle),
        ),
        (
            "axiom corpus proved, non-theorems refuted",
            Box::new(move || run(|| Ok(vec![verify_axiom_corpus(&limits)]))),
        ),
        (
            "acyclic iff diamond chain meets 0",
            Box::new(|| {
                run(|| {
                    Ok(vec![
                        verify_path_meet(FRAME_WORLDS).map_err(|e| e.to_string())?
                    ])
                })
            }),
        ),
        (
            "eta embeds and the dual frame is isomorphic",
            Box::new(|| {
                run(|| {
                    Ok(vec![
                        verify_infrep(FRAME_WORLDS).map_err(|e| e.to_string())?,
                        verify_duality(FRAME_WORLDS).map_err(|e| e.to_string())?,
                    ])
                })
            }),
        ),
        (
            "nested boxes distribute over the chain meet",
            Box::new(|| {
                run(|| {
                    let bounds = InfdistBounds {
                        seed: DEFAULT_SEED,
                        ..InfdistBounds::default()
                    };
                    Ok(vec![verify_infdist(&bounds).map_err(|e| e.to_string())?])
                })
            }),
        ),
        (
            "chain meet 0 on transitive frames gives Loeb",
            Box::new(|| {
                run(|| {
                    Ok(vec![
                        verify_infmeettoloeb(LOEB_WORLDS).map_err(|e| e.to_string())?
                    ])
                })
            }),
        ),
        (
            "omega+1: chain meet {w}, Q0 drops the non-principal filter, claim holds",
            Box::new(|| {
                run(|| {
                    if claim_corpus().len() < MIN_CLAIM_PAIRS {
                        return Err(format!("claim corpus smaller than {MIN_CLAIM_PAIRS}"));
                    }
                    Ok(vec![
                        separate_diamond(OMEGA_WINDOW, CLAIM_N_MAX).map_err(|e| e.to_string())?
                    ])
                })
            }),
        ),
        (
            "fans G_2..G_10 separate Loeb from non-compactness",
            Box::new(|| {
                run(|| {
                    let r = separate_fans(Demo::Nc, FAN_K_MAX).map_err(|e| e.to_string())?;
                    if r.cases.len() != FAN_K_MAX - 1 {
                        return Err(format!(
                            "expected {} fans, got {}",
                            FAN_K_MAX - 1,
                            r.cases.len()
                        ));
                    }
                    Ok(vec![r])
                })
            }),
        ),
        (
            "omega+1 operations match truncation",
            Box::new(|| {
                run(|| {
                    Ok(vec![verify_cofin_truncation(
                        COFIN_CHECKS,
                        COFIN_MAX_EXCEPTION,
                        DEFAULT_SEED,
                    )
                    .map_err(|e| e.to_string())?])
                })
            }),
        ),
        (
            "proved formulas are valid on transitive acyclic frames",
            Box::new(move || {
                run(|| {
                    Ok(vec![
                        verify_soundness(FRAME_WORLDS, &limits).map_err(|e| e.to_string())?
                    ])
                })
            }),
        ),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({}; {:.2}s)",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            name,
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        println!("all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria fail");
        ExitCode::FAILURE
    }
}
