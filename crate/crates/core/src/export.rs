//! Whole-graph export as JSON or Graphviz DOT.
//!
//! JSON layout:
//!
//! ```text
//! {
//!   "statements": [{ "id", "kind", "status", "text_normal", "text_negated",
//!                    "belief_counts": { "normal", "negated" } }],
//!   "edges": [{ "id", "child", "child_form", "parent", "polarity",
//!               "relation_statement" }]
//! }
//! ```
//!
//! `polarity` is canonical (against the parent's normal form). Statements and
//! edges are ordered by id. Authors are never exported here.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::model::{EdgeId, Form, Polarity, StatementId, StatementKind, Status};
use crate::view::{Annotations, BeliefCounts};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ExportFormat::Json),
            "dot" => Ok(ExportFormat::Dot),
            other => Err(format!("unknown export format {other:?} (expected json or dot)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportedStatement {
    pub id: StatementId,
    pub kind: StatementKind,
    pub status: Status,
    pub text_normal: String,
    pub text_negated: String,
    pub belief_counts: BeliefCounts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportedEdge {
    pub id: EdgeId,
    pub child: StatementId,
    pub child_form: Form,
    pub parent: StatementId,
    pub polarity: Polarity,
    pub relation_statement: Option<StatementId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExport {
    pub statements: Vec<ExportedStatement>,
    pub edges: Vec<ExportedEdge>,
}

impl GraphExport {
    pub fn count(&self, kind: StatementKind) -> usize {
        self.statements.iter().filter(|s| s.kind == kind).count()
    }
}

impl Graph {
    pub fn to_export(&self, notes: &dyn Annotations) -> GraphExport {
        GraphExport {
            statements: self
                .statements()
                .map(|s| ExportedStatement {
                    id: s.id,
                    kind: s.kind,
                    status: s.status,
                    text_normal: s.text_normal.clone(),
                    text_negated: s.negated_text(),
                    belief_counts: notes.belief_counts(s.id),
                })
                .collect(),
            edges: self
                .edges()
                .map(|e| ExportedEdge {
                    id: e.id,
                    child: e.child,
                    child_form: e.child_form,
                    parent: e.parent,
                    polarity: e.polarity,
                    relation_statement: e.relation_statement,
                })
                .collect(),
        }
    }

    pub fn export(&self, format: ExportFormat, notes: &dyn Annotations) -> String {
        match format {
            ExportFormat::Json => {
                serde_json::to_string_pretty(&self.to_export(notes)).expect("export serializes")
            }
            ExportFormat::Dot => self.to_dot(),
        }
    }

    /// Plain statements are green boxes, relation-statements brown ellipses.
    /// Edges point from child to parent and are labeled with the canonical
    /// polarity; a negated child form is dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph arguments {\n  rankdir=BT;\n");
        for s in self.statements() {
            let (class, shape, color) = match s.kind {
                StatementKind::Plain => ("statement", "box", "#8fbc5a"),
                StatementKind::Relation => ("relation", "ellipse", "#a0522d"),
            };
            let _ = writeln!(
                out,
                "  s{} [label=\"{}\", class=\"{class}\", shape={shape}, style=filled, fillcolor=\"{color}\"{}];",
                s.id,
                escape(&s.text_normal),
                if s.is_draft() { ", peripheries=2" } else { "" },
            );
        }
        for e in self.edges() {
            let _ = writeln!(
                out,
                "  s{} -> s{} [label=\"{}\"{}];",
                e.child,
                e.parent,
                e.polarity,
                if e.child_form == Form::Negated { ", style=dashed" } else { "" },
            );
        }
        out.push_str("}\n");
        out
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RelationRequest;
    use crate::model::UserId;
    use crate::view::NoAnnotations;

    #[test]
    fn empty_graph_json() {
        let json = Graph::new().export(ExportFormat::Json, &NoAnnotations);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value, serde_json::json!({ "statements": [], "edges": [] }));
    }

    #[test]
    fn dot_has_two_node_classes() {
        let mut g = Graph::new();
        let a = g.create_statement(UserId(1), "Say \"cheese\"", None, Status::Approved, 0).unwrap().id;
        let b = g.create_statement(UserId(1), "Photos need smiles", None, Status::Approved, 0).unwrap().id;
        g.add_relation(
            RelationRequest {
                child: a,
                child_form: Form::Negated,
                parent: b,
                parent_form: Form::Normal,
                polarity: Polarity::Support,
            },
            UserId(1),
            0,
        )
        .unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph arguments {"));
        assert_eq!(dot.matches("class=\"statement\"").count(), 2);
        assert_eq!(dot.matches("class=\"relation\"").count(), 1);
        assert!(dot.contains("s1 -> s2 [label=\"support\", style=dashed];"));
        assert!(dot.contains("Say \\\"cheese\\\""));
    }

    #[test]
    fn format_parse() {
        assert_eq!("DOT".parse::<ExportFormat>().unwrap(), ExportFormat::Dot);
        assert!("xml".parse::<ExportFormat>().is_err());
    }
}
