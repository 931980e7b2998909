//! Argument graph engine.
//!
//! Statements have a normal and a negated form. Statements are connected by
//! support/oppose edges stored against the parent's normal form, so viewing
//! the negated form of a statement swaps its supporting and opposing lists.
//! An edge onto a plain statement is itself reified as a relation-statement
//! ("A supports B") that can be argued about in turn.

mod error;
pub mod export;
pub mod graph;
pub mod lint;
pub mod model;
pub mod search;
pub mod slug;
pub mod view;

pub use error::{GraphError, TextField};
pub use export::{ExportFormat, GraphExport};
pub use graph::{Graph, RelationRequest};
pub use lint::{lint_statement_text, LintError, LintReport, LintWarning, Linter};
pub use model::{
    Edge, EdgeId, Form, Polarity, RelationPayload, Statement, StatementId, StatementKind, Status, Timestamp,
    UserId,
};
pub use search::SearchHit;
pub use slug::slugify;
pub use view::{Annotations, BeliefCounts, NoAnnotations, View, ViewEntry};
