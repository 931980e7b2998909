//! Identifiers and the two record types of the argument graph.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Milliseconds since the Unix epoch.
pub type Timestamp = u64;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u64);

        impl $name {
            pub fn get(self) -> u64 {
                self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl FromStr for $name {
            type Err = std::num::ParseIntError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                s.parse().map($name)
            }
        }
    };
}

id_type!(
    /// Statement identifier. Assigned once and never reused.
    StatementId
);
id_type!(EdgeId);
id_type!(UserId);

/// One of the two readings of a statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Normal,
    Negated,
}

impl Form {
    pub const ALL: [Form; 2] = [Form::Normal, Form::Negated];

    pub fn negate(self) -> Form {
        match self {
            Form::Normal => Form::Negated,
            Form::Negated => Form::Normal,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Form::Normal => "normal",
            Form::Negated => "negated",
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Form {
    type Err = ParseEnumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "normal" => Ok(Form::Normal),
            "negated" => Ok(Form::Negated),
            _ => Err(ParseEnumError { kind: "form", value: s.to_string() }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Support,
    Oppose,
}

impl Polarity {
    pub const ALL: [Polarity; 2] = [Polarity::Support, Polarity::Oppose];

    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Support => Polarity::Oppose,
            Polarity::Oppose => Polarity::Support,
        }
    }

    /// Express a polarity given against `form` of the parent relative to its
    /// normal form instead. Applying it twice with the same form is a no-op.
    pub fn canonical_for(self, parent_form: Form) -> Polarity {
        match parent_form {
            Form::Normal => self,
            Form::Negated => self.flip(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Support => "support",
            Polarity::Oppose => "oppose",
        }
    }

    pub(crate) fn verb(self) -> &'static str {
        match self {
            Polarity::Support => "supports",
            Polarity::Oppose => "opposes",
        }
    }

    pub(crate) fn negated_verb(self) -> &'static str {
        match self {
            Polarity::Support => "does not support",
            Polarity::Oppose => "does not oppose",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarity {
    type Err = ParseEnumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "support" | "supporting" => Ok(Polarity::Support),
            "oppose" | "opposing" => Ok(Polarity::Oppose),
            _ => Err(ParseEnumError { kind: "polarity", value: s.to_string() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid {kind}: {value:?}")]
pub struct ParseEnumError {
    kind: &'static str,
    value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatementKind {
    Plain,
    Relation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Draft,
    Approved,
}

/// What a relation-statement reifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationPayload {
    pub child: StatementId,
    pub child_form: Form,
    pub parent: StatementId,
    /// Canonical polarity, against the parent's normal form.
    pub polarity: Polarity,
}

/// Prefix used for the negated form when no custom text was given.
pub const DEFAULT_NEGATION_PREFIX: &str = "(not) ";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statement {
    pub id: StatementId,
    pub kind: StatementKind,
    pub text_normal: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text_negated_custom: Option<String>,
    pub status: Status,
    pub author: UserId,
    pub created_at: Timestamp,
    /// Generated relation text exceeding the length limit is kept as is.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub overlong_exempt: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<RelationPayload>,
}

impl Statement {
    pub fn negated_text(&self) -> String {
        match &self.text_negated_custom {
            Some(custom) => custom.clone(),
            None => format!("{DEFAULT_NEGATION_PREFIX}{}", self.text_normal),
        }
    }

    pub fn text(&self, form: Form) -> String {
        match form {
            Form::Normal => self.text_normal.clone(),
            Form::Negated => self.negated_text(),
        }
    }

    pub fn is_draft(&self) -> bool {
        self.status == Status::Draft
    }

    pub fn is_relation(&self) -> bool {
        self.kind == StatementKind::Relation
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub child: StatementId,
    pub child_form: Form,
    pub parent: StatementId,
    /// Always relative to the parent's normal form.
    pub polarity: Polarity,
    pub relation_statement: Option<StatementId>,
    pub created_at: Timestamp,
}

impl Edge {
    /// Polarity of this edge as seen from `form` of the parent.
    pub fn polarity_for(&self, form: Form) -> Polarity {
        self.polarity.canonical_for(form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_and_polarity_are_involutions() {
        for f in Form::ALL {
            assert_eq!(f.negate().negate(), f);
            assert_ne!(f.negate(), f);
        }
        for p in Polarity::ALL {
            assert_eq!(p.flip().flip(), p);
            for f in Form::ALL {
                assert_eq!(p.canonical_for(f).canonical_for(f), p);
            }
        }
    }

    #[test]
    fn default_negation_prepends_not() {
        let s = Statement {
            id: StatementId(1),
            kind: StatementKind::Plain,
            text_normal: "Climate change is man-made".into(),
            text_negated_custom: None,
            status: Status::Approved,
            author: UserId(1),
            created_at: 0,
            overlong_exempt: false,
            relation: None,
        };
        assert_eq!(s.negated_text(), "(not) Climate change is man-made");
        assert_eq!(s.text(Form::Normal), "Climate change is man-made");
    }

    #[test]
    fn parse_enums() {
        assert_eq!("Negated".parse::<Form>().unwrap(), Form::Negated);
        assert_eq!("oppose".parse::<Polarity>().unwrap(), Polarity::Oppose);
        assert!("sideways".parse::<Polarity>().is_err());
    }
}
