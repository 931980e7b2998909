//! In-memory tables and the one function that mutates them.
//!
//! Every write is a [`Command`] carrying already-resolved facts (timestamps,
//! the status chosen at submission, credential digests), so replaying the
//! journal reproduces the same state regardless of configuration. Each
//! command validates fully before it changes anything.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use arbor_core::{
    Annotations, BeliefCounts, Edge, Form, Graph, Polarity, RelationRequest, Statement, StatementId,
    StatementKind, Status, Timestamp, UserId,
};
use serde::{Deserialize, Serialize};

use crate::corpus::CorpusFile;
use crate::credential;
use crate::error::{Result, StoreError};
use crate::model::{
    Actor, Belief, Comment, CommentId, Notification, NotificationEvent, NotificationId, User, UserStats,
};

pub const MAX_COMMENT_CHARS: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub(crate) enum Command {
    Register {
        username: String,
        credential_digest: Option<String>,
        at: Timestamp,
    },
    SetModerator {
        user: UserId,
        value: bool,
    },
    Submit {
        author: UserId,
        text_normal: String,
        text_negated_custom: Option<String>,
        status: Status,
        at: Timestamp,
    },
    Relate {
        actor: UserId,
        child: StatementId,
        child_form: Form,
        parent: StatementId,
        parent_form: Form,
        polarity: Polarity,
        at: Timestamp,
    },
    SetStatus {
        actor: Actor,
        statement: StatementId,
        status: Status,
        at: Timestamp,
    },
    SetBelief {
        user: UserId,
        statement: StatementId,
        form: Form,
        at: Timestamp,
    },
    RemoveBelief {
        user: UserId,
        statement: StatementId,
    },
    Comment {
        user: UserId,
        statement: StatementId,
        body: String,
        at: Timestamp,
    },
    MarkRead {
        user: UserId,
        notification: NotificationId,
    },
    Import {
        corpus: Box<CorpusFile>,
    },
}

#[derive(Debug, Clone)]
pub(crate) enum Outcome {
    User(User),
    Statement(Statement),
    Related(Edge, Option<Statement>),
    Belief(Belief),
    Comment(Comment),
    Done,
    Imported,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct State {
    pub(crate) graph: Graph,
    pub(crate) users: BTreeMap<UserId, User>,
    pub(crate) usernames: HashMap<String, UserId>,
    /// statement -> user -> belief
    pub(crate) beliefs: BTreeMap<StatementId, BTreeMap<UserId, Belief>>,
    pub(crate) comments: BTreeMap<CommentId, Comment>,
    pub(crate) comments_by_statement: HashMap<StatementId, Vec<CommentId>>,
    pub(crate) notifications: BTreeMap<NotificationId, Notification>,
    pub(crate) inboxes: HashMap<UserId, Vec<NotificationId>>,
    /// Statements whose approval has already been credited to the author.
    pub(crate) ever_approved: BTreeSet<StatementId>,
    pub(crate) next_user: u64,
    pub(crate) next_comment: u64,
    pub(crate) next_notification: u64,
}

impl State {
    pub(crate) fn new() -> Self {
        State {
            graph: Graph::new(),
            next_user: 1,
            next_comment: 1,
            next_notification: 1,
            ..Default::default()
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.users.is_empty() && self.graph.is_empty()
    }

    pub(crate) fn user(&self, id: UserId) -> Result<&User> {
        self.users.get(&id).ok_or(StoreError::UnknownUser(id))
    }

    pub(crate) fn user_by_name(&self, username: &str) -> Result<&User> {
        self.usernames
            .get(&username.to_lowercase())
            .map(|id| &self.users[id])
            .ok_or_else(|| StoreError::UnknownUsername(username.to_string()))
    }

    pub(crate) fn belief(&self, user: UserId, statement: StatementId) -> Option<&Belief> {
        self.beliefs.get(&statement).and_then(|m| m.get(&user))
    }

    /// Users holding a belief on `statement`, ascending.
    pub(crate) fn believers(&self, statement: StatementId) -> impl Iterator<Item = UserId> + '_ {
        self.beliefs.get(&statement).into_iter().flat_map(|m| m.keys().copied())
    }

    pub(crate) fn user_stats(&self, user: UserId) -> Result<UserStats> {
        self.user(user)?;
        let mut stats = UserStats { agreement_received: 0, approved_statements: 0 };
        for s in self.graph.statements() {
            if s.author != user || s.kind != StatementKind::Plain {
                continue;
            }
            if s.status == Status::Approved {
                stats.approved_statements += 1;
            }
            stats.agreement_received += self.believers(s.id).filter(|u| *u != user).count() as u64;
        }
        Ok(stats)
    }

    pub(crate) fn apply(&mut self, cmd: &Command) -> Result<Outcome> {
        match cmd {
            Command::Register { username, credential_digest, at } => {
                credential::validate_username(username)?;
                let key = username.to_lowercase();
                if self.usernames.contains_key(&key) {
                    return Err(StoreError::UsernameTaken(username.clone()));
                }
                let user = User {
                    id: UserId(self.next_user),
                    username: username.clone(),
                    credential_digest: credential_digest.clone(),
                    is_moderator: false,
                    approved_count: 0,
                    created_at: *at,
                };
                self.next_user += 1;
                self.usernames.insert(key, user.id);
                self.users.insert(user.id, user.clone());
                Ok(Outcome::User(user))
            }
            Command::SetModerator { user, value } => {
                let u = self.users.get_mut(user).ok_or(StoreError::UnknownUser(*user))?;
                u.is_moderator = *value;
                Ok(Outcome::User(u.clone()))
            }
            Command::Submit { author, text_normal, text_negated_custom, status, at } => {
                self.user(*author)?;
                let s = self.graph.create_statement(
                    *author,
                    text_normal,
                    text_negated_custom.as_deref(),
                    *status,
                    *at,
                )?;
                if s.status == Status::Approved {
                    self.credit_approval(&s);
                }
                Ok(Outcome::Statement(s))
            }
            Command::Relate { actor, child, child_form, parent, parent_form, polarity, at } => {
                self.user(*actor)?;
                let req = RelationRequest {
                    child: *child,
                    child_form: *child_form,
                    parent: *parent,
                    parent_form: *parent_form,
                    polarity: *polarity,
                };
                let (edge, relation) = self.graph.add_relation(req, *actor, *at)?;
                self.notify(
                    edge.parent,
                    NotificationEvent::ChildAdded { edge: edge.id, child: edge.child },
                    Some(*actor),
                    *at,
                );
                Ok(Outcome::Related(edge, relation))
            }
            Command::SetStatus { actor, statement, status, at } => {
                if let Actor::User(id) = actor {
                    if !self.user(*id)?.is_moderator {
                        return Err(StoreError::NotModerator(*id));
                    }
                }
                let current = self.graph.get(*statement)?.status;
                if current == *status {
                    return Err(StoreError::WrongStatus { statement: *statement, actual: current });
                }
                let s = self.graph.set_status(*statement, *status)?.clone();
                if s.status == Status::Approved {
                    self.credit_approval(&s);
                }
                self.notify(
                    s.id,
                    NotificationEvent::StatusChanged { statement: s.id, status: s.status },
                    actor.user(),
                    *at,
                );
                Ok(Outcome::Statement(s))
            }
            Command::SetBelief { user, statement, form, at } => {
                self.user(*user)?;
                if self.graph.get(*statement)?.is_draft() {
                    return Err(StoreError::DraftStatement(*statement));
                }
                let belief = Belief { user: *user, statement: *statement, form: *form, created_at: *at };
                self.beliefs.entry(*statement).or_default().insert(*user, belief);
                Ok(Outcome::Belief(belief))
            }
            Command::RemoveBelief { user, statement } => {
                self.user(*user)?;
                self.graph.get(*statement)?;
                if let Some(m) = self.beliefs.get_mut(statement) {
                    m.remove(user);
                    if m.is_empty() {
                        self.beliefs.remove(statement);
                    }
                }
                Ok(Outcome::Done)
            }
            Command::Comment { user, statement, body, at } => {
                self.user(*user)?;
                self.graph.get(*statement)?;
                let body = body.trim();
                if body.is_empty() {
                    return Err(StoreError::EmptyBody);
                }
                if body.chars().count() > MAX_COMMENT_CHARS {
                    return Err(StoreError::BodyTooLong(MAX_COMMENT_CHARS));
                }
                let comment = Comment {
                    id: CommentId(self.next_comment),
                    statement: *statement,
                    author: *user,
                    body: body.to_string(),
                    created_at: *at,
                };
                self.next_comment += 1;
                self.comments_by_statement.entry(*statement).or_default().push(comment.id);
                self.comments.insert(comment.id, comment.clone());
                self.notify(
                    *statement,
                    NotificationEvent::CommentAdded { comment: comment.id },
                    Some(*user),
                    *at,
                );
                Ok(Outcome::Comment(comment))
            }
            Command::MarkRead { user, notification } => {
                let n = self
                    .notifications
                    .get_mut(notification)
                    .ok_or(StoreError::UnknownNotification(*notification))?;
                if n.recipient != *user {
                    return Err(StoreError::NotRecipient(*notification));
                }
                n.read = true;
                Ok(Outcome::Done)
            }
            Command::Import { corpus } => {
                if !self.is_empty() {
                    return Err(StoreError::NotEmpty);
                }
                *self = State::from_corpus(corpus)?;
                Ok(Outcome::Imported)
            }
        }
    }

    fn credit_approval(&mut self, s: &Statement) {
        if s.kind == StatementKind::Plain && self.ever_approved.insert(s.id) {
            if let Some(author) = self.users.get_mut(&s.author) {
                author.approved_count += 1;
            }
        }
    }

    /// Deliver to every believer of `subject` except the actor.
    fn notify(
        &mut self,
        subject: StatementId,
        event: NotificationEvent,
        actor: Option<UserId>,
        at: Timestamp,
    ) {
        let recipients: Vec<UserId> = self.believers(subject).filter(|u| Some(*u) != actor).collect();
        for recipient in recipients {
            let n = Notification {
                id: NotificationId(self.next_notification),
                recipient,
                event,
                subject,
                read: false,
                created_at: at,
            };
            self.next_notification += 1;
            self.inboxes.entry(recipient).or_default().push(n.id);
            self.notifications.insert(n.id, n);
        }
    }

    /// Newest first.
    pub(crate) fn inbox(&self, user: UserId) -> Vec<Notification> {
        self.inboxes.get(&user).into_iter().flatten().rev().map(|id| self.notifications[id].clone()).collect()
    }

    pub(crate) fn comments_on(&self, statement: StatementId) -> Vec<&Comment> {
        self.comments_by_statement
            .get(&statement)
            .into_iter()
            .flatten()
            .map(|id| &self.comments[id])
            .collect()
    }
}

impl Annotations for State {
    fn belief_counts(&self, statement: StatementId) -> BeliefCounts {
        let mut counts = BeliefCounts::default();
        for b in self.beliefs.get(&statement).into_iter().flat_map(|m| m.values()) {
            *counts.get_mut(b.form) += 1;
        }
        counts
    }

    fn comment_count(&self, statement: StatementId) -> usize {
        self.comments_by_statement.get(&statement).map_or(0, Vec::len)
    }
}
