//! Statement guidelines: concise, free of context, not a question.
//!
//! Errors block creation. Warnings are advisory and surface indexical words
//! ("this", "also", ...) and likely conjunctions that should be split into
//! two statements.

use serde::{Deserialize, Serialize};

pub const MAX_STATEMENT_CHARS: usize = 120;
/// Room for a custom negation that adds a short "not" to a maximal statement.
pub const MAX_NEGATED_CHARS: usize = 126;

pub const DEFAULT_INDEXICALS: [&str; 16] = [
    "i", "me", "my", "we", "us", "our", "you", "your", "this", "that", "these", "those", "it", "here",
    "there", "also",
];

const CONJUNCTIONS: [&str; 3] = [" and ", " but ", ";"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LintError {
    EmptyText,
    TooLong,
    IsQuestion,
}

/// Positions are character offsets into the linted text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LintWarning {
    IndexicalReference { word: String, position: usize },
    ConjunctionCandidate { token: String, position: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintReport {
    pub errors: Vec<LintError>,
    pub warnings: Vec<LintWarning>,
}

impl LintReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linter {
    indexicals: Vec<String>,
    max_chars: usize,
}

impl Default for Linter {
    fn default() -> Self {
        Linter {
            indexicals: DEFAULT_INDEXICALS.iter().map(|w| w.to_string()).collect(),
            max_chars: MAX_STATEMENT_CHARS,
        }
    }
}

impl Linter {
    pub fn with_indexicals<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Linter {
            indexicals: words.into_iter().map(|w| w.into().to_lowercase()).collect(),
            ..Linter::default()
        }
    }

    pub fn max_chars(mut self, max: usize) -> Self {
        self.max_chars = max;
        self
    }

    pub fn lint(&self, text: &str) -> LintReport {
        let mut report = LintReport::default();
        let trimmed = text.trim();
        if trimmed.is_empty() {
            report.errors.push(LintError::EmptyText);
        }
        if text.chars().count() > self.max_chars {
            report.errors.push(LintError::TooLong);
        }
        if trimmed.ends_with('?') {
            report.errors.push(LintError::IsQuestion);
        }

        // ASCII lowercasing keeps character offsets stable.
        let lower = text.to_ascii_lowercase();
        let mut found: Vec<(usize, LintWarning)> = Vec::new();
        for (position, word) in words(&lower) {
            if self.indexicals.iter().any(|w| w == word) {
                found.push((position, LintWarning::IndexicalReference { word: word.to_string(), position }));
            }
        }
        for token in CONJUNCTIONS {
            for (byte, _) in lower.match_indices(token) {
                let position = lower[..byte].chars().count();
                found.push((
                    position,
                    LintWarning::ConjunctionCandidate { token: token.to_string(), position },
                ));
            }
        }
        found.sort_by_key(|(pos, _)| *pos);
        report.warnings = found.into_iter().map(|(_, w)| w).collect();
        report
    }
}

/// Lint with the default word list and the 120 character limit.
pub fn lint_statement_text(text: &str) -> LintReport {
    Linter::default().lint(text)
}

/// Lint a custom negated form, which may be slightly longer than the normal form.
pub fn lint_negated_text(text: &str) -> LintReport {
    Linter::default().max_chars(MAX_NEGATED_CHARS).lint(text)
}

/// Maximal alphanumeric runs with their character offsets.
fn words(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (char_idx, (byte_idx, c)) in text.char_indices().enumerate() {
        if c.is_alphanumeric() {
            if start.is_none() {
                start = Some((char_idx, byte_idx));
            }
        } else if let Some((ci, bi)) = start.take() {
            out.push((ci, &text[bi..byte_idx]));
        }
    }
    if let Some((ci, bi)) = start {
        out.push((ci, &text[bi..]));
    }
    out.into_iter()
}
