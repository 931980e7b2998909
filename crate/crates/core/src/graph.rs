//! The in-memory statement graph.
//!
//! Edges are stored once per ordered (child, parent) pair with their polarity
//! expressed against the parent's normal form. Everything shown for the
//! negated form of a statement is derived from that single record.

use std::collections::{BTreeMap, HashMap};

use crate::error::{GraphError, TextField};
use crate::lint::{self, LintError};
use crate::model::{
    Edge, EdgeId, Form, Polarity, RelationPayload, Statement, StatementId, StatementKind, Status, Timestamp,
    UserId,
};

/// Request to relate `child` (in `child_form`) to `parent` as seen from
/// `parent_form`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationRequest {
    pub child: StatementId,
    pub child_form: Form,
    pub parent: StatementId,
    pub parent_form: Form,
    pub polarity: Polarity,
}

#[derive(Debug, Clone, Default)]
pub struct Graph {
    statements: BTreeMap<StatementId, Statement>,
    edges: BTreeMap<EdgeId, Edge>,
    by_pair: HashMap<(StatementId, StatementId), EdgeId>,
    children: HashMap<StatementId, Vec<EdgeId>>,
    used_in: HashMap<StatementId, Vec<EdgeId>>,
    next_statement: u64,
    next_edge: u64,
}

impl Graph {
    pub fn new() -> Self {
        Graph { next_statement: 1, next_edge: 1, ..Default::default() }
    }

    /// Empty graph whose first statement and edge get the given ids.
    pub fn with_next_ids(statement: StatementId, edge: EdgeId) -> Self {
        Graph { next_statement: statement.0.max(1), next_edge: edge.0.max(1), ..Default::default() }
    }

    /// Rebuild a graph from stored records, checking referential integrity,
    /// edge uniqueness, relation-statement consistency and statement lint.
    pub fn from_parts(
        statements: impl IntoIterator<Item = Statement>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Graph, GraphError> {
        let mut graph = Graph::new();
        for s in statements {
            if s.id.0 == 0 {
                return Err(GraphError::integrity(format!("statement {}", s.id), "id must be positive"));
            }
            check_stored_text(&s)?;
            match (s.kind, s.relation.is_some()) {
                (StatementKind::Plain, true) => {
                    return Err(GraphError::integrity(
                        format!("statement {}", s.id),
                        "plain statement carries a relation payload",
                    ))
                }
                (StatementKind::Relation, false) => {
                    return Err(GraphError::integrity(
                        format!("statement {}", s.id),
                        "relation statement lacks a relation payload",
                    ))
                }
                _ => {}
            }
            graph.next_statement = graph.next_statement.max(s.id.0 + 1);
            if graph.statements.insert(s.id, s.clone()).is_some() {
                return Err(GraphError::integrity(format!("statement {}", s.id), "duplicate id"));
            }
        }

        let mut reified: HashMap<StatementId, EdgeId> = HashMap::new();
        for e in edges {
            let subject = format!("edge {}", e.id);
            if e.id.0 == 0 {
                return Err(GraphError::integrity(subject, "id must be positive"));
            }
            if graph.edges.contains_key(&e.id) {
                return Err(GraphError::integrity(subject, "duplicate id"));
            }
            let parent = graph.statements.get(&e.parent).ok_or_else(|| {
                GraphError::integrity(&subject, format!("references missing statement {}", e.parent))
            })?;
            if !graph.statements.contains_key(&e.child) {
                return Err(GraphError::integrity(
                    subject,
                    format!("references missing statement {}", e.child),
                ));
            }
            if e.child == e.parent {
                return Err(GraphError::integrity(subject, "self relation"));
            }
            if graph.by_pair.contains_key(&(e.child, e.parent)) {
                return Err(GraphError::integrity(subject, "duplicate (child, parent) pair"));
            }
            match (parent.kind, e.relation_statement) {
                (StatementKind::Plain, None) => {
                    return Err(GraphError::integrity(
                        subject,
                        "edge onto a plain statement lacks its relation statement",
                    ))
                }
                (StatementKind::Relation, Some(_)) => {
                    return Err(GraphError::integrity(
                        subject,
                        "edge onto a relation statement must not carry one",
                    ))
                }
                (StatementKind::Plain, Some(rel)) => {
                    let expected = RelationPayload {
                        child: e.child,
                        child_form: e.child_form,
                        parent: e.parent,
                        polarity: e.polarity,
                    };
                    match graph.statements.get(&rel) {
                        None => {
                            return Err(GraphError::integrity(
                                subject,
                                format!("references missing statement {rel}"),
                            ))
                        }
                        Some(r) if r.relation != Some(expected) => {
                            return Err(GraphError::integrity(
                                subject,
                                format!("relation statement {rel} does not describe this edge"),
                            ))
                        }
                        _ => {}
                    }
                    if reified.insert(rel, e.id).is_some() {
                        return Err(GraphError::integrity(
                            subject,
                            format!("relation statement {rel} is shared by two edges"),
                        ));
                    }
                }
                (StatementKind::Relation, None) => {}
            }
            graph.next_edge = graph.next_edge.max(e.id.0 + 1);
            graph.index_edge(e);
        }

        if let Some(orphan) =
            graph.statements.values().find(|s| s.is_relation() && !reified.contains_key(&s.id))
        {
            return Err(GraphError::integrity(
                format!("statement {}", orphan.id),
                "relation statement is not attached to any edge",
            ));
        }
        Ok(graph)
    }

    pub fn statement(&self, id: StatementId) -> Option<&Statement> {
        self.statements.get(&id)
    }

    pub fn get(&self, id: StatementId) -> Result<&Statement, GraphError> {
        self.statements.get(&id).ok_or(GraphError::UnknownStatement(id))
    }

    pub fn statements(&self) -> impl Iterator<Item = &Statement> {
        self.statements.values()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn edge_between(&self, child: StatementId, parent: StatementId) -> Option<&Edge> {
        self.by_pair.get(&(child, parent)).map(|id| &self.edges[id])
    }

    /// Edges whose parent is `id`.
    pub fn children_of(&self, id: StatementId) -> impl Iterator<Item = &Edge> {
        self.children.get(&id).into_iter().flatten().map(|e| &self.edges[e])
    }

    /// Edges whose child is `id`.
    pub fn used_in(&self, id: StatementId) -> impl Iterator<Item = &Edge> {
        self.used_in.get(&id).into_iter().flatten().map(|e| &self.edges[e])
    }

    pub fn statement_count(&self) -> usize {
        self.statements.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn next_statement_id(&self) -> StatementId {
        StatementId(self.next_statement)
    }

    /// Create a plain statement. Surrounding whitespace is trimmed and a
    /// blank custom negation counts as none.
    pub fn create_statement(
        &mut self,
        author: UserId,
        text_normal: &str,
        text_negated_custom: Option<&str>,
        status: Status,
        now: Timestamp,
    ) -> Result<Statement, GraphError> {
        let text_normal = text_normal.trim();
        let report = lint::lint_statement_text(text_normal);
        if !report.is_ok() {
            return Err(GraphError::LintFailed { field: TextField::Normal, report });
        }
        let custom = text_negated_custom.map(str::trim).filter(|t| !t.is_empty());
        if let Some(custom) = custom {
            let report = lint::lint_negated_text(custom);
            if !report.is_ok() {
                return Err(GraphError::LintFailed { field: TextField::NegatedCustom, report });
            }
        }
        let statement = Statement {
            id: StatementId(self.next_statement),
            kind: StatementKind::Plain,
            text_normal: text_normal.to_string(),
            text_negated_custom: custom.map(str::to_string),
            status,
            author,
            created_at: now,
            overlong_exempt: false,
            relation: None,
        };
        self.next_statement += 1;
        self.statements.insert(statement.id, statement.clone());
        Ok(statement)
    }

    /// Check whether a relation could be added, without changing anything.
    pub fn check_relation(&self, req: &RelationRequest) -> Result<(), GraphError> {
        let child = self.get(req.child)?;
        let parent = self.get(req.parent)?;
        if req.child == req.parent {
            return Err(GraphError::SelfRelation(req.child));
        }
        for s in [child, parent] {
            if s.is_draft() {
                return Err(GraphError::DraftEndpoint(s.id));
            }
        }
        if let Some(existing) = self.by_pair.get(&(req.child, req.parent)) {
            return Err(GraphError::DuplicateRelation {
                child: req.child,
                parent: req.parent,
                existing: *existing,
            });
        }
        Ok(())
    }

    /// Add a canonical edge. When the parent is a plain statement the edge is
    /// reified as an approved relation-statement authored by `actor`, which is
    /// returned alongside the edge.
    pub fn add_relation(
        &mut self,
        req: RelationRequest,
        actor: UserId,
        now: Timestamp,
    ) -> Result<(Edge, Option<Statement>), GraphError> {
        self.check_relation(&req)?;
        let polarity = req.polarity.canonical_for(req.parent_form);
        let parent = &self.statements[&req.parent];
        let relation = if parent.kind == StatementKind::Plain {
            let child_text = self.statements[&req.child].text(req.child_form);
            let text_normal = format!("{child_text} {} {}", polarity.verb(), parent.text_normal);
            let text_negated = format!("{child_text} {} {}", polarity.negated_verb(), parent.text_normal);
            let overlong = text_normal.chars().count() > lint::MAX_STATEMENT_CHARS
                || text_negated.chars().count() > lint::MAX_NEGATED_CHARS;
            let statement = Statement {
                id: StatementId(self.next_statement),
                kind: StatementKind::Relation,
                text_normal,
                text_negated_custom: Some(text_negated),
                status: Status::Approved,
                author: actor,
                created_at: now,
                overlong_exempt: overlong,
                relation: Some(RelationPayload {
                    child: req.child,
                    child_form: req.child_form,
                    parent: req.parent,
                    polarity,
                }),
            };
            self.next_statement += 1;
            self.statements.insert(statement.id, statement.clone());
            Some(statement)
        } else {
            None
        };
        let edge = Edge {
            id: EdgeId(self.next_edge),
            child: req.child,
            child_form: req.child_form,
            parent: req.parent,
            polarity,
            relation_statement: relation.as_ref().map(|s| s.id),
            created_at: now,
        };
        self.next_edge += 1;
        self.index_edge(edge.clone());
        Ok((edge, relation))
    }

    /// Change a statement's status. Existing edges are untouched.
    pub fn set_status(&mut self, id: StatementId, status: Status) -> Result<&Statement, GraphError> {
        let s = self.statements.get_mut(&id).ok_or(GraphError::UnknownStatement(id))?;
        s.status = status;
        Ok(s)
    }

    fn index_edge(&mut self, edge: Edge) {
        self.by_pair.insert((edge.child, edge.parent), edge.id);
        self.children.entry(edge.parent).or_default().push(edge.id);
        self.used_in.entry(edge.child).or_default().push(edge.id);
        self.edges.insert(edge.id, edge);
    }
}

fn check_stored_text(s: &Statement) -> Result<(), GraphError> {
    let exempt = s.overlong_exempt && s.is_relation();
    let subject = || format!("statement {}", s.id);
    let normal = lint::lint_statement_text(&s.text_normal);
    let blocking = |errors: &[LintError]| errors.iter().any(|e| !(exempt && *e == LintError::TooLong));
    if blocking(&normal.errors) {
        return Err(GraphError::integrity(subject(), format!("text fails lint: {:?}", normal.errors)));
    }
    if let Some(custom) = &s.text_negated_custom {
        let negated = lint::lint_negated_text(custom);
        if blocking(&negated.errors) {
            return Err(GraphError::integrity(
                subject(),
                format!("negated text fails lint: {:?}", negated.errors),
            ));
        }
    }
    Ok(())
}
