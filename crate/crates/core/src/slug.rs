//! URL slugs for representative statement links.

pub const MAX_SLUG_CHARS: usize = 80;

/// Lowercase ASCII slug. Runs of anything that is not an ASCII letter or digit
/// collapse into a single hyphen, edge hyphens are trimmed, and the result is
/// cut back to the last whole token that fits in 80 characters.
///
/// A single token longer than the limit is hard-cut.
pub fn slugify(text: &str) -> String {
    let mut slug = String::with_capacity(text.len());
    let mut pending_hyphen = false;
    for c in text.chars() {
        if c.is_ascii_alphanumeric() {
            if pending_hyphen && !slug.is_empty() {
                slug.push('-');
            }
            pending_hyphen = false;
            slug.push(c.to_ascii_lowercase());
        } else {
            pending_hyphen = true;
        }
    }
    if slug.len() <= MAX_SLUG_CHARS {
        return slug;
    }
    // The slug is pure ASCII here, so byte offsets are character offsets.
    if slug.as_bytes()[MAX_SLUG_CHARS] == b'-' {
        slug.truncate(MAX_SLUG_CHARS);
    } else {
        match slug[..MAX_SLUG_CHARS].rfind('-') {
            Some(cut) => slug.truncate(cut),
            None => slug.truncate(MAX_SLUG_CHARS),
        }
    }
    slug
}
