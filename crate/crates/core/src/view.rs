//! What a reader sees when focusing one form of a statement.

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::Graph;
use crate::model::{
    Edge, EdgeId, Form, Polarity, RelationPayload, StatementId, StatementKind, Status, Timestamp,
};
use crate::slug::slugify;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeliefCounts {
    pub normal: u64,
    pub negated: u64,
}

impl BeliefCounts {
    pub fn get(&self, form: Form) -> u64 {
        match form {
            Form::Normal => self.normal,
            Form::Negated => self.negated,
        }
    }

    pub fn get_mut(&mut self, form: Form) -> &mut u64 {
        match form {
            Form::Normal => &mut self.normal,
            Form::Negated => &mut self.negated,
        }
    }

    pub fn total(&self) -> u64 {
        self.normal + self.negated
    }
}

/// Community data layered over the graph.
pub trait Annotations {
    fn belief_counts(&self, statement: StatementId) -> BeliefCounts;
    fn comment_count(&self, statement: StatementId) -> usize;
}

/// Annotations for a bare graph: no beliefs, no comments.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoAnnotations;

impl Annotations for NoAnnotations {
    fn belief_counts(&self, _: StatementId) -> BeliefCounts {
        BeliefCounts::default()
    }

    fn comment_count(&self, _: StatementId) -> usize {
        0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewEntry {
    pub edge: EdgeId,
    pub statement: StatementId,
    pub form: Form,
    pub text: String,
    pub status: Status,
    pub relation_statement: Option<StatementId>,
    /// Droplets on the stalk, when the edge is reified.
    pub relation_belief_counts: Option<BeliefCounts>,
    /// Number of statements directly underneath the child.
    pub underlying_count: usize,
    pub belief_counts: BeliefCounts,
    #[serde(skip)]
    created_at: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsedIn {
    pub edge: EdgeId,
    pub parent: StatementId,
    pub parent_text: String,
    pub child_form: Form,
    pub polarity: Polarity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct View {
    pub statement: StatementId,
    pub kind: StatementKind,
    pub form: Form,
    pub rendered_text: String,
    pub slug: String,
    pub status: Status,
    pub relation: Option<RelationPayload>,
    pub supporting: Vec<ViewEntry>,
    pub opposing: Vec<ViewEntry>,
    pub used_in: Vec<UsedIn>,
    pub belief_counts: BeliefCounts,
    pub comment_count: usize,
}

impl View {
    pub fn entries(&self, polarity: Polarity) -> &[ViewEntry] {
        match polarity {
            Polarity::Support => &self.supporting,
            Polarity::Oppose => &self.opposing,
        }
    }
}

impl Graph {
    /// Drafts render with empty child lists; their status is the marker.
    pub fn view(&self, id: StatementId, form: Form, notes: &dyn Annotations) -> Result<View, GraphError> {
        let s = self.get(id)?;
        let mut supporting = Vec::new();
        let mut opposing = Vec::new();
        if !s.is_draft() {
            for edge in self.children_of(id) {
                let entry = self.entry(edge, notes);
                match edge.polarity_for(form) {
                    Polarity::Support => supporting.push(entry),
                    Polarity::Oppose => opposing.push(entry),
                }
            }
        }
        sort_entries(&mut supporting);
        sort_entries(&mut opposing);

        let mut used_in: Vec<UsedIn> = self
            .used_in(id)
            .map(|e| UsedIn {
                edge: e.id,
                parent: e.parent,
                parent_text: self.statements_text(e.parent),
                child_form: e.child_form,
                polarity: e.polarity,
            })
            .collect();
        used_in.sort_by_key(|u| u.edge);

        Ok(View {
            statement: id,
            kind: s.kind,
            form,
            rendered_text: s.text(form),
            slug: slugify(&s.text_normal),
            status: s.status,
            relation: s.relation,
            supporting,
            opposing,
            used_in,
            belief_counts: notes.belief_counts(id),
            comment_count: notes.comment_count(id),
        })
    }

    fn entry(&self, edge: &Edge, notes: &dyn Annotations) -> ViewEntry {
        let child = &self.statement(edge.child).expect("edge endpoints exist");
        ViewEntry {
            edge: edge.id,
            statement: child.id,
            form: edge.child_form,
            text: child.text(edge.child_form),
            status: child.status,
            relation_statement: edge.relation_statement,
            relation_belief_counts: edge.relation_statement.map(|r| notes.belief_counts(r)),
            underlying_count: self.children_of(child.id).count(),
            belief_counts: notes.belief_counts(child.id),
            created_at: edge.created_at,
        }
    }

    fn statements_text(&self, id: StatementId) -> String {
        self.statement(id).map(|s| s.text_normal.clone()).unwrap_or_default()
    }
}

/// Most droplets on the shown child form first, then newest.
fn sort_entries(entries: &mut [ViewEntry]) {
    entries.sort_by(|a, b| {
        b.belief_counts
            .get(b.form)
            .cmp(&a.belief_counts.get(a.form))
            .then(b.created_at.cmp(&a.created_at))
            .then(b.edge.cmp(&a.edge))
    });
}
