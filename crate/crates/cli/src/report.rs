//! Flat report records and their JSON and Markdown renderings.

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::suites::SuiteRun;
use kappa_double::report::Status;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub suite: String,
    pub check_id: String,
    pub status: Status,
    pub residual_text: String,
    pub profile: String,
    #[serde(rename = "N")]
    pub n: i32,
    pub seed: u64,
    pub duration_ms: u64,
}

pub fn records(runs: &[SuiteRun], cfg: &RunConfig) -> Vec<Record> {
    let mut out = Vec::new();
    for run in runs {
        for report in &run.reports {
            for item in &report.items {
                out.push(Record {
                    suite: run.suite.clone(),
                    check_id: format!("{}/{}", report.id, item.id),
                    status: item.status,
                    residual_text: item.residual.clone(),
                    profile: cfg.profile().label(),
                    n: cfg.truncation_order,
                    seed: cfg.seed,
                    duration_ms: run.duration_ms,
                });
            }
        }
    }
    out
}

pub fn to_json(records: &[Record]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("records serialize");
    s.push('\n');
    s
}

/// Per-suite counts, then every check that did not pass.
pub fn to_markdown(runs: &[SuiteRun], cfg: &RunConfig) -> String {
    let mut s = format!("# Check summary\n\nprofile `{}`, N = {}, seed {}\n\n", cfg.profile().label(), cfg.truncation_order, cfg.seed);
    s.push_str("| suite | checks | pass | documented erratum | fail |\n|---|---|---|---|---|\n");
    for run in runs {
        let items: Vec<_> = run.reports.iter().flat_map(|r| &r.items).collect();
        let count = |st: Status| items.iter().filter(|i| i.status == st).count();
        s.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            run.suite,
            items.len(),
            count(Status::Pass),
            count(Status::DocumentedErratum),
            count(Status::Fail)
        ));
    }
    let rest: Vec<_> = records(runs, cfg).into_iter().filter(|r| r.status != Status::Pass).collect();
    if !rest.is_empty() {
        s.push_str("\n## Not passing\n\n| check | status | residual |\n|---|---|---|\n");
        for r in rest {
            s.push_str(&format!("| `{}` | {} | `{}` |\n", r.check_id, r.status, r.residual_text.replace('|', "\\|")));
        }
    }
    s
}
