//! One PASS/FAIL line per acceptance criterion, evaluated at the default configuration.
//!
//! Criteria 2 and 8 do not hold for the algebra as implemented (see the README); this target
//! prints them as FAIL and asserts that the recorded outcome of every criterion is unchanged.

use std::time::{Duration, Instant};

use kappa_cli::config::RunConfig;
use kappa_cli::suites::{exit_code, run_suite, SuiteRun};
use kappa_double::kappa::double::build_full_double;
use kappa_double::kappa::grid::{check_differentiation_pairing, verify_closed_form_pairings};
use kappa_double::kappa::phase::build_phase_space;
use kappa_double::kappa::presentations::x;
use kappa_double::kappa::SignPolicy;
use kappa_double::ncalg::{NCPoly, NormalOrderer};
use kappa_double::report::{CheckReport, Status};
use kappa_double::scalars::{with_truncation, Gauss, Scalar};

/// Criteria expected not to hold.
const KNOWN_FAILING: [u32; 2] = [2, 8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn no_failures(reports: &[CheckReport]) -> Outcome {
    let items: Vec<_> = reports.iter().flat_map(|r| &r.items).collect();
    let failed: Vec<_> = items.iter().filter(|i| i.status == Status::Fail).collect();
    let mut detail = format!("{} checks, {} failing", items.len(), failed.len());
    if let Some(first) = failed.first() {
        detail.push_str(&format!(", first {} = {}", first.id, first.residual));
    }
    Outcome { pass: failed.is_empty(), detail }
}

fn all_pass(reports: &[CheckReport]) -> Outcome {
    let o = no_failures(reports);
    let pass = o.pass && reports.iter().all(|r| r.items.iter().all(|i| i.status == Status::Pass));
    Outcome { pass, ..o }
}

fn suite(name: &str, cfg: &RunConfig) -> Vec<SuiteRun> {
    run_suite(name, cfg).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn reports(runs: &[SuiteRun]) -> Vec<CheckReport> {
    runs.iter().flat_map(|r| r.reports.clone()).collect()
}

fn phase_space_derivation(cfg: &RunConfig) -> Outcome {
    with_truncation(cfg.truncation(), || {
        let ps = build_phase_space(&cfg.profile()).unwrap();
        let cmp = ps.compare_with_printed().unwrap();
        let matching = cmp.items.iter().filter(|i| i.status == Status::Pass).count();
        let only_x0_xk = cmp.items.iter().filter(|i| i.status != Status::Pass).all(|i| i.id == "family:[x0,xk]");
        let o = NormalOrderer::new(&ps.rewrite);
        let minus_i_lam = Scalar::monomial(Gauss::int(0, -1), 0, 1);
        let bracket_ok = (1..4).all(|k| o.commutator(&x(0), &x(k)).unwrap() == x(k).scale(&minus_i_lam));
        let jacobi = ps.jacobi().unwrap();
        Outcome {
            pass: matching == 9 && only_x0_xk && bracket_ok && jacobi.passed(),
            detail: format!(
                "{matching}/10 families match, [x0,xk] = -i lam xk: {bracket_ok}, jacobi {} checks {} failing",
                jacobi.items.len(),
                jacobi.failures().count()
            ),
        }
    })
}

fn full_double(cfg: &RunConfig) -> Outcome {
    with_truncation(cfg.truncation(), || all_pass(&[build_full_double(&cfg.profile()).unwrap().compare_with_printed()]))
}

fn pairing_grid(cfg: &RunConfig) -> Outcome {
    with_truncation(cfg.truncation(), || {
        let ps = build_phase_space(&cfg.profile()).unwrap();
        all_pass(&[verify_closed_form_pairings(&ps, 3, 3, 3, 3).unwrap()])
    })
}

fn differentiation(cfg: &RunConfig) -> Outcome {
    with_truncation(cfg.truncation(), || {
        let ps = build_phase_space(&cfg.profile()).unwrap();
        let r = check_differentiation_pairing(&ps, cfg.seed, 20, 4).unwrap();
        Outcome { pass: r.items.len() == 20 && r.passed(), detail: format!("{} random pairs, {} failing", r.items.len(), r.failures().count()) }
    })
}

fn erratum(cfg: &RunConfig) -> Outcome {
    let literal = RunConfig { sign_policy: SignPolicy::PaperLiteral, ..cfg.clone() };
    let runs = suite("jacobi", &literal);
    let items: Vec<_> = runs.iter().flat_map(|r| &r.reports).flat_map(|r| &r.items).collect();
    let errata: Vec<_> = items.iter().filter(|i| i.status == Status::DocumentedErratum).collect();
    let want = with_truncation(cfg.truncation(), || NCPoly::scalar(Scalar::monomial(Gauss::int(2, 0), 1, 1)).to_string());
    let residual_ok = errata.iter().all(|i| i.residual == want);
    let code = exit_code(&runs);
    Outcome {
        pass: errata.len() == 3 && residual_ok && code == 3 && items.iter().all(|i| i.status != Status::Fail),
        detail: format!("{} documented errata with residual {want}: {residual_ok}, exit code {code}", errata.len()),
    }
}

#[test]
fn acceptance() {
    let cfg = RunConfig::default();
    type Criterion = (u32, &'static str, Option<Duration>, Box<dyn Fn(&RunConfig) -> Outcome>);
    let criteria: Vec<Criterion> = vec![
        (1, "phase-space cross relations", Some(Duration::from_secs(10)), Box::new(phase_space_derivation)),
        (2, "full double against the relation table", Some(Duration::from_secs(60)), Box::new(full_double)),
        (3, "closed-form pairing grid", Some(Duration::from_secs(60)), Box::new(pairing_grid)),
        (4, "pairing by differentiation", None, Box::new(differentiation)),
        (5, "Hopf axioms", None, Box::new(|c| all_pass(&reports(&suite("hopf-axioms", c))))),
        (6, "classical basis change", None, Box::new(|c| all_pass(&reports(&suite("basis-change", c))))),
        (7, "Weyl realization", None, Box::new(|c| no_failures(&reports(&suite("weyl-realization", c))))),
        (8, "dual basis", None, Box::new(|c| all_pass(&reports(&suite("dual-basis", c))))),
        (9, "uncertainty relations", Some(Duration::from_secs(120)), Box::new(|c| all_pass(&reports(&suite("uncertainty", c))))),
        (10, "documented erratum", None, Box::new(erratum)),
    ];
    let mut mismatched = Vec::new();
    for (n, name, limit, run) in &criteria {
        let start = Instant::now();
        let mut o = run(&cfg);
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > *limit {
                o.pass = false;
                o.detail.push_str(&format!(", over the {}s limit", limit.as_secs()));
            }
        }
        println!("criterion {n:>2} {}: {name} ({}; {:.1}s)", if o.pass { "PASS" } else { "FAIL" }, o.detail, elapsed.as_secs_f64());
        if o.pass == KNOWN_FAILING.contains(n) {
            mismatched.push(*n);
        }
    }
    assert!(mismatched.is_empty(), "criteria with an unexpected outcome: {mismatched:?}");
}
