//! Durable community state over the argument graph.
//!
//! Users, the draft and moderation lifecycle, beliefs (which double as
//! subscriptions), comments and notifications, all written through one
//! journaled path. See [`Store`].

mod clock;
mod corpus;
mod credential;
mod error;
mod journal;
mod model;
pub mod seed;
mod state;
mod store;

pub use clock::{Clock, SystemClock, TickClock};
pub use corpus::{CorpusFile, CorpusSummary, StatementRecord, SCHEMA_VERSION};
pub use error::{Result, StoreError};
pub use journal::{journal_path, JOURNAL_VERSION, MAGIC};
pub use model::{
    Actor, Belief, Comment, CommentId, Notification, NotificationEvent, NotificationId, User, UserStats,
};
pub use state::MAX_COMMENT_CHARS;
pub use store::{CommentView, Store, StoreConfig, DEFAULT_DRAFT_THRESHOLD};
