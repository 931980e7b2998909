//! Token search over both forms of every statement.

use serde::Serialize;

use crate::error::GraphError;
use crate::graph::Graph;
use crate::model::{Form, Statement};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchHit {
    pub statement: Statement,
    /// Fraction of distinct query words found in either form.
    pub score: f64,
    /// The form whose text contains more of the query words (normal on ties).
    pub matched_form: Form,
}

/// Lowercased alphanumeric words, in order, without repeats.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for word in text.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()) {
        let word = word.to_lowercase();
        if !out.contains(&word) {
            out.push(word);
        }
    }
    out
}

impl Graph {
    /// Best matches first; equal scores list the newer statement first.
    /// Drafts are included and carry their status.
    pub fn search(&self, query: &str, limit: usize) -> Result<Vec<SearchHit>, GraphError> {
        let terms = tokenize(query);
        if terms.is_empty() {
            return Err(GraphError::EmptyQuery);
        }
        let mut hits: Vec<SearchHit> = self
            .statements()
            .filter_map(|s| {
                let normal = tokenize(&s.text_normal);
                let negated = tokenize(&s.negated_text());
                let in_normal = terms.iter().filter(|t| normal.contains(t)).count();
                let in_negated = terms.iter().filter(|t| negated.contains(t)).count();
                let matched = terms.iter().filter(|t| normal.contains(t) || negated.contains(t)).count();
                (matched > 0).then(|| SearchHit {
                    statement: s.clone(),
                    score: matched as f64 / terms.len() as f64,
                    matched_form: if in_negated > in_normal { Form::Negated } else { Form::Normal },
                })
            })
            .collect();
        hits.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then(b.statement.created_at.cmp(&a.statement.created_at))
                .then(b.statement.id.cmp(&a.statement.id))
        });
        hits.truncate(limit);
        Ok(hits)
    }
}
