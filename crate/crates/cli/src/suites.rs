//! Named check suites over the catalog and the numeric representation.

use std::time::Instant;

use kappa_double::hopf::{check_bialgebra_compat, check_bialgebra_compat_modulo, check_coassociativity, check_counit};
use kappa_double::kappa::basis::{check_classical_limit, classical_basis_change};
use kappa_double::kappa::double::build_full_double;
use kappa_double::kappa::dual::{check_dual_basis, solve_dual_basis};
use kappa_double::kappa::grid::{check_differentiation_pairing, verify_closed_form_pairings};
use kappa_double::kappa::lorentz::tensor_vanishes;
use kappa_double::kappa::phase::{build_phase_space, table_jacobi};
use kappa_double::kappa::presentations::{build_kappa_algebra, build_kappa_group};
use kappa_double::kappa::weyl::{conjugation_check, weyl_realization_check};
use kappa_double::kappa::{KappaError, SignPolicy};
use kappa_double::numrep::{
    build_deformed_operators, check_standard_limit, check_uncertainty_suite, random_low_occupation_states, BoundRow,
    NumrepError,
};
use kappa_double::report::{CheckReport, Status};
use kappa_double::scalars::with_truncation;
use thiserror::Error;

use crate::config::RunConfig;

pub const SUITES: [&str; 8] =
    ["hopf-axioms", "jacobi", "cross-derive", "pairing-grid", "basis-change", "weyl-realization", "dual-basis", "uncertainty"];

/// `kappa hbar` used for the undeformed limit of the uncertainty suite.
pub const LIMIT_KAPPA_HBAR: f64 = 1e12;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}` (expected one of {list} or all)", list = SUITES.join(", "))]
    Unknown(String),
    #[error(transparent)]
    Kappa(#[from] KappaError),
    #[error(transparent)]
    Numrep(#[from] NumrepError),
}

impl From<kappa_double::hopf::HopfError> for SuiteError {
    fn from(e: kappa_double::hopf::HopfError) -> Self {
        SuiteError::Kappa(e.into())
    }
}

impl From<kappa_double::ncalg::NcError> for SuiteError {
    fn from(e: kappa_double::ncalg::NcError) -> Self {
        SuiteError::Kappa(e.into())
    }
}

#[derive(Debug, Clone)]
pub struct SuiteRun {
    pub suite: String,
    pub reports: Vec<CheckReport>,
    /// Uncertainty rows for CSV export.
    pub rows: Vec<BoundRow>,
    pub duration_ms: u64,
}

impl SuiteRun {
    pub fn status(&self) -> Status {
        let all = CheckReport { id: String::new(), items: self.reports.iter().flat_map(|r| r.items.clone()).collect() };
        all.status()
    }
}

/// Process exit code for a set of runs: 0 all pass, 3 only documented errata, 1 otherwise.
pub fn exit_code(runs: &[SuiteRun]) -> i32 {
    let statuses: Vec<Status> = runs.iter().map(SuiteRun::status).collect();
    if statuses.contains(&Status::Fail) {
        1
    } else if statuses.contains(&Status::DocumentedErratum) {
        3
    } else {
        0
    }
}

/// Runs `name` (or every suite for `all`) under the truncation and profile of `cfg`.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Vec<SuiteRun>, SuiteError> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, cfg)).collect();
    }
    Ok(vec![run_one(name, cfg)?])
}

fn run_one(name: &str, cfg: &RunConfig) -> Result<SuiteRun, SuiteError> {
    let start = Instant::now();
    let mut rows = Vec::new();
    let reports = with_truncation(cfg.truncation(), || -> Result<Vec<CheckReport>, SuiteError> {
        match name {
            "hopf-axioms" => hopf_axioms(cfg),
            "jacobi" => jacobi(cfg),
            "cross-derive" => cross_derive(cfg),
            "pairing-grid" => {
                let ps = build_phase_space(&cfg.profile())?;
                Ok(vec![
                    verify_closed_form_pairings(&ps, 3, 3, 3, 3)?,
                    check_differentiation_pairing(&ps, cfg.seed, cfg.pairing_samples, 4)?,
                ])
            }
            "basis-change" => Ok(vec![classical_basis_change(&cfg.profile())?, check_classical_limit(&cfg.profile())]),
            "weyl-realization" => Ok(vec![weyl_realization_check(&cfg.profile())?, conjugation_check()?]),
            "dual-basis" => {
                let ps = build_phase_space(&cfg.profile())?;
                let sol = solve_dual_basis(&ps, cfg.dual_degree)?;
                Ok(vec![check_dual_basis(&sol, cfg.dual_degree)?])
            }
            "uncertainty" => {
                let (reports, r) = uncertainty(cfg, &cfg.kappa_hbar)?;
                rows = r;
                Ok(reports)
            }
            other => Err(SuiteError::Unknown(other.to_string())),
        }
    })?;
    let duration_ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
    Ok(SuiteRun { suite: name.to_string(), reports, rows, duration_ms })
}

fn hopf_axioms(cfg: &RunConfig) -> Result<Vec<CheckReport>, SuiteError> {
    let alg = build_kappa_algebra(&cfg.profile());
    let grp = build_kappa_group(&cfg.profile());
    Ok(vec![
        check_coassociativity(&alg, 2)?,
        // products of group generators are coassociative only modulo orthogonality; on
        // generators it is exact, and multiplicativity is covered by the compatibility check
        check_coassociativity(&grp, 1)?,
        check_counit(&alg)?,
        check_counit(&grp)?,
        check_bialgebra_compat(&alg)?,
        // the group relations hold modulo orthogonality of the Lorentz matrix
        check_bialgebra_compat_modulo(&grp, &tensor_vanishes)?,
    ])
}

fn jacobi(cfg: &RunConfig) -> Result<Vec<CheckReport>, SuiteError> {
    let profile = cfg.profile();
    let mut reports = vec![table_jacobi(&profile)?];
    if profile.sign_policy == SignPolicy::Derive {
        reports.push(build_phase_space(&profile)?.jacobi()?);
        let double = build_full_double(&profile)?;
        reports.push(double.jacobi_sweep(&double.generators())?);
    }
    Ok(reports)
}

fn cross_derive(cfg: &RunConfig) -> Result<Vec<CheckReport>, SuiteError> {
    let ps = build_phase_space(&cfg.profile())?;
    let double = build_full_double(&cfg.profile())?;
    Ok(vec![ps.compare_with_printed()?, ps.closure(), double.compare_with_printed()])
}

/// Robertson and deformed bounds for each `kappa hbar` in `values`, then the undeformed limit.
pub fn uncertainty(cfg: &RunConfig, values: &[f64]) -> Result<(Vec<CheckReport>, Vec<BoundRow>), SuiteError> {
    let states = random_low_occupation_states(cfg.seed, cfg.states, cfg.n_levels, cfg.space_modes + 1);
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for &kh in values {
        let ops = build_deformed_operators(kh, cfg.space_modes, cfg.n_levels)?;
        let mut out = check_uncertainty_suite(&ops, &states)?;
        out.report.id = format!("uncertainty/kappa-hbar={kh}");
        reports.push(out.report);
        rows.extend(out.rows);
    }
    let ops = build_deformed_operators(LIMIT_KAPPA_HBAR, cfg.space_modes, cfg.n_levels)?;
    reports.push(check_standard_limit(&ops, &states));
    Ok((reports, rows))
}
