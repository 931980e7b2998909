use std::path::PathBuf;

use arbor_core::{GraphError, StatementId, Status, UserId};

use crate::model::NotificationId;

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown user {0}")]
    UnknownUser(UserId),
    #[error("unknown username {0:?}")]
    UnknownUsername(String),
    #[error("username {0:?} is taken")]
    UsernameTaken(String),
    #[error("usernames are 3 to 32 letters, digits, '.', '_' or '-'")]
    InvalidUsername,
    #[error("credentials must be 8 to 256 characters")]
    InvalidCredential,
    #[error("wrong username or credential")]
    InvalidLogin,
    #[error("user {0} is not a moderator")]
    NotModerator(UserId),
    #[error("statement {statement} is already {}", if *actual == Status::Draft { "a draft" } else { "approved" })]
    WrongStatus { statement: StatementId, actual: Status },
    #[error("statement {0} is a draft")]
    DraftStatement(StatementId),
    #[error("comment body is empty")]
    EmptyBody,
    #[error("comment body exceeds {0} characters")]
    BodyTooLong(usize),
    #[error("unknown notification {0}")]
    UnknownNotification(NotificationId),
    #[error("notification {0} belongs to another user")]
    NotRecipient(NotificationId),
    #[error("corpus rejected: {0}")]
    Corpus(String),
    #[error("imports require an empty store")]
    NotEmpty,
    #[error("store unavailable: {0}")]
    Unavailable(String),
    #[error("store at {0} is locked by another process")]
    Locked(PathBuf),
    #[error("store log is corrupt: {0}")]
    CorruptLog(String),
    #[error("store stopped accepting writes after a failed append")]
    Poisoned,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = StoreError> = std::result::Result<T, E>;
