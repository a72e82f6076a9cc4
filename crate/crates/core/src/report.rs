//! Structured pass/fail records for identity checks.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ncalg::{NCPoly, TensorPoly};
use crate::scalars::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A known inconsistency of the source relations, reproduced on purpose.
    DocumentedErratum,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::DocumentedErratum => "documented-erratum",
        })
    }
}

/// One checked identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckItem {
    pub id: String,
    pub status: Status,
    /// Canonical text of the residual (`0` when the identity holds).
    pub residual: String,
    pub inputs: String,
    /// Lowest `lam` power at which the residual is nonzero.
    pub first_failure_order: Option<i32>,
}

impl CheckItem {
    pub fn pass(id: impl Into<String>, inputs: impl Into<String>) -> Self {
        CheckItem { id: id.into(), status: Status::Pass, residual: "0".into(), inputs: inputs.into(), first_failure_order: None }
    }

    pub fn from_poly(id: impl Into<String>, inputs: impl Into<String>, residual: &NCPoly) -> Self {
        CheckItem {
            id: id.into(),
            status: if residual.is_zero() { Status::Pass } else { Status::Fail },
            residual: residual.to_string(),
            inputs: inputs.into(),
            first_failure_order: residual.first_order(),
        }
    }

    pub fn from_tensor(id: impl Into<String>, inputs: impl Into<String>, residual: &TensorPoly) -> Self {
        CheckItem {
            id: id.into(),
            status: if residual.is_zero() { Status::Pass } else { Status::Fail },
            residual: residual.to_string(),
            inputs: inputs.into(),
            first_failure_order: residual.first_order(),
        }
    }

    pub fn from_scalar(id: impl Into<String>, inputs: impl Into<String>, residual: &Scalar) -> Self {
        CheckItem {
            id: id.into(),
            status: if residual.is_zero() { Status::Pass } else { Status::Fail },
            residual: residual.to_string(),
            inputs: inputs.into(),
            first_failure_order: residual.min_lambda(),
        }
    }

    /// Floating-point check: passes when `margin >= -tol`.
    pub fn from_margin(id: impl Into<String>, inputs: impl Into<String>, margin: f64, tol: f64) -> Self {
        CheckItem {
            id: id.into(),
            status: if margin >= -tol { Status::Pass } else { Status::Fail },
            residual: format!("{margin:e}"),
            inputs: inputs.into(),
            first_failure_order: None,
        }
    }

    pub fn failed(id: impl Into<String>, inputs: impl Into<String>, residual: impl Into<String>) -> Self {
        CheckItem {
            id: id.into(),
            status: Status::Fail,
            residual: residual.into(),
            inputs: inputs.into(),
            first_failure_order: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// A named group of checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct CheckReport {
    pub id: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(id: impl Into<String>) -> Self {
        CheckReport { id: id.into(), items: Vec::new() }
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.items.extend(other.items);
    }

    /// `Fail` if any item failed, else `DocumentedErratum` if any item is one, else `Pass`.
    pub fn status(&self) -> Status {
        if self.items.iter().any(|i| i.status == Status::Fail) {
            Status::Fail
        } else if self.items.iter().any(|i| i.status == Status::DocumentedErratum) {
            Status::DocumentedErratum
        } else {
            Status::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.status() == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| i.status == Status::Fail)
    }

    pub fn item(&self, id: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.id == id)
    }
}
