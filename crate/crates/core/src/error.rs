use crate::lint::LintReport;
use crate::model::{EdgeId, StatementId};

/// Which text of a statement failed linting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TextField {
    Normal,
    NegatedCustom,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("unknown statement {0}")]
    UnknownStatement(StatementId),
    #[error("{field:?} text violates statement guidelines ({} errors)", report.errors.len())]
    LintFailed { field: TextField, report: LintReport },
    #[error("statement {0} is a draft and cannot be related")]
    DraftEndpoint(StatementId),
    #[error("statement {0} cannot relate to itself")]
    SelfRelation(StatementId),
    #[error("statement {child} is already related to {parent} (edge {existing})")]
    DuplicateRelation { child: StatementId, parent: StatementId, existing: EdgeId },
    #[error("search query has no words")]
    EmptyQuery,
    #[error("integrity violation at {subject}: {reason}")]
    Integrity { subject: String, reason: String },
}

impl GraphError {
    pub(crate) fn integrity(subject: impl std::fmt::Display, reason: impl Into<String>) -> Self {
        GraphError::Integrity { subject: subject.to_string(), reason: reason.into() }
    }
}
