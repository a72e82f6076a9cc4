//! The kappa-Poincare catalog and its theorem suite.

pub mod basis;
pub mod double;
pub mod dual;
pub mod grid;
pub mod lorentz;
pub mod phase;
pub mod presentations;
pub mod weyl;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hopf::HopfError;
use crate::ncalg::NcError;
use crate::scalars::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KappaError {
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Rewrite(#[from] NcError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("adjoint series still nonzero after {0} terms")]
    SeriesNotTerminated(usize),
    #[error("dual-basis system is singular at degree {degree}: {detail}")]
    SingularSystem { degree: u32, detail: String },
}

/// Whether the phase-space symbols `x0`, `P0` carry a lowered index (`x_0 = -x^0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexMode {
    Lowered,
    Plain,
}

/// Whether printed signs that break consistency (boost brackets, `[x_0, x_k]`) are replaced
/// by the derived ones or kept verbatim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignPolicy {
    Derive,
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConventionProfile {
    pub index_mode: IndexMode,
    pub sign_policy: SignPolicy,
}

impl Default for ConventionProfile {
    fn default() -> Self {
        ConventionProfile { index_mode: IndexMode::Lowered, sign_policy: SignPolicy::Derive }
    }
}

impl ConventionProfile {
    pub fn paper_literal() -> Self {
        ConventionProfile { sign_policy: SignPolicy::PaperLiteral, ..Default::default() }
    }

    pub fn label(&self) -> String {
        let idx = match self.index_mode {
            IndexMode::Lowered => "lowered",
            IndexMode::Plain => "plain",
        };
        let pol = match self.sign_policy {
            SignPolicy::Derive => "derive",
            SignPolicy::PaperLiteral => "paper-literal",
        };
        format!("{idx}/{pol}")
    }
}

/// One rewrite rule `g h = h g + remainder`, rendered as text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationEntry {
    pub left: String,
    pub right: String,
    pub remainder: String,
}

/// The rules of `rs` in generator order.
pub fn relation_entries(rs: &crate::ncalg::RewriteSystem) -> Vec<RelationEntry> {
    rs.sorted_rules()
        .into_iter()
        .map(|((g, h), rem)| RelationEntry { left: g.name(), right: h.name(), remainder: rem.to_string() })
        .collect()
}
