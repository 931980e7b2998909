//! Salted SHA-256 credential digests: `sha256$<salt hex>$<digest hex>`.

use rand::RngCore;
use sha2::{Digest, Sha256};

use crate::error::{Result, StoreError};

const MIN_CHARS: usize = 8;
const MAX_CHARS: usize = 256;

pub(crate) fn validate_username(username: &str) -> Result<()> {
    let len = username.chars().count();
    let charset = username.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'));
    if !(3..=32).contains(&len) || !charset {
        return Err(StoreError::InvalidUsername);
    }
    Ok(())
}

pub(crate) fn digest(credential: &str) -> Result<String> {
    let len = credential.chars().count();
    if !(MIN_CHARS..=MAX_CHARS).contains(&len) {
        return Err(StoreError::InvalidCredential);
    }
    let mut salt = [0u8; 16];
    rand::rng().fill_bytes(&mut salt);
    Ok(format!("sha256${}${}", hex::encode(salt), hash(&salt, credential)))
}

pub(crate) fn verify(stored: &str, credential: &str) -> bool {
    let mut parts = stored.split('$');
    let (Some("sha256"), Some(salt), Some(expected), None) =
        (parts.next(), parts.next(), parts.next(), parts.next())
    else {
        return false;
    };
    let Ok(salt) = hex::decode(salt) else {
        return false;
    };
    let actual = hash(&salt, credential);
    actual.len() == expected.len()
        && actual.bytes().zip(expected.bytes()).fold(0u8, |acc, (a, b)| acc | (a ^ b)) == 0
}

fn hash(salt: &[u8], credential: &str) -> String {
    let mut h = Sha256::new();
    h.update(salt);
    h.update(credential.as_bytes());
    hex::encode(h.finalize())
}
