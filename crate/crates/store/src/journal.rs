//! Append-only command journal.
//!
//! Layout: the 8-byte magic `ARBORLOG`, a little-endian `u32` schema version,
//! then records of `[len: u32 LE][crc32: u32 LE][len bytes of JSON command]`.
//! A torn or corrupt tail (from a crash mid-append) is cut off on open.
//! The file is held under an exclusive lock while open.

use std::fs::{File, OpenOptions, TryLockError};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use crate::error::{Result, StoreError};
use crate::state::Command;

pub const MAGIC: &[u8; 8] = b"ARBORLOG";
pub const JOURNAL_VERSION: u32 = 1;
pub const FILE_NAME: &str = "arbor.log";
const HEADER_LEN: u64 = 12;

#[derive(Debug)]
pub(crate) struct Journal {
    file: File,
    sync: bool,
}

impl Journal {
    /// Open (creating if needed) the journal in `dir` and return the commands
    /// recorded so far.
    pub(crate) fn open(dir: &Path, sync: bool) -> Result<(Journal, Vec<Command>)> {
        if !dir.is_dir() {
            return Err(StoreError::Unavailable(format!("{} is not an existing directory", dir.display())));
        }
        let path = dir.join(FILE_NAME);
        let mut file = OpenOptions::new()
            .read(true)
            .write(true)
            .create(true)
            .truncate(false)
            .open(&path)
            .map_err(|e| StoreError::Unavailable(format!("{}: {e}", path.display())))?;
        match file.try_lock() {
            Ok(()) => {}
            Err(TryLockError::WouldBlock) => return Err(StoreError::Locked(path)),
            Err(TryLockError::Error(e)) => return Err(e.into()),
        }

        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes)?;
        if bytes.is_empty() {
            let mut header = Vec::with_capacity(HEADER_LEN as usize);
            header.extend_from_slice(MAGIC);
            header.extend_from_slice(&JOURNAL_VERSION.to_le_bytes());
            file.write_all(&header)?;
            file.sync_all()?;
            return Ok((Journal { file, sync }, Vec::new()));
        }
        if bytes.len() < HEADER_LEN as usize || &bytes[..8] != MAGIC {
            return Err(StoreError::CorruptLog(format!("{} has no store header", path.display())));
        }
        let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        if version != JOURNAL_VERSION {
            return Err(StoreError::CorruptLog(format!(
                "store schema version {version} is not supported (expected {JOURNAL_VERSION})"
            )));
        }

        let (commands, good) = decode_records(&bytes[HEADER_LEN as usize..]);
        let good = HEADER_LEN + good as u64;
        if good < bytes.len() as u64 {
            tracing::warn!(
                path = %path.display(),
                dropped = bytes.len() as u64 - good,
                "discarding incomplete tail of store journal"
            );
            file.set_len(good)?;
            file.sync_all()?;
        }
        file.seek(SeekFrom::End(0))?;
        Ok((Journal { file, sync }, commands))
    }

    pub(crate) fn append(&mut self, cmd: &Command) -> Result<()> {
        let payload = serde_json::to_vec(cmd).expect("commands serialize");
        let mut record = Vec::with_capacity(payload.len() + 8);
        record.extend_from_slice(&(payload.len() as u32).to_le_bytes());
        record.extend_from_slice(&crc32fast::hash(&payload).to_le_bytes());
        record.extend_from_slice(&payload);
        self.file.write_all(&record)?;
        if self.sync {
            self.file.sync_data()?;
        }
        Ok(())
    }
}

/// Decode complete, checksummed records. Returns them with the number of
/// bytes they occupy.
fn decode_records(mut rest: &[u8]) -> (Vec<Command>, usize) {
    let mut commands = Vec::new();
    let mut consumed = 0;
    while rest.len() >= 8 {
        let len = u32::from_le_bytes(rest[..4].try_into().unwrap()) as usize;
        let crc = u32::from_le_bytes(rest[4..8].try_into().unwrap());
        let Some(payload) = rest.get(8..8 + len) else { break };
        if crc32fast::hash(payload) != crc {
            break;
        }
        let Ok(cmd) = serde_json::from_slice(payload) else { break };
        commands.push(cmd);
        consumed += 8 + len;
        rest = &rest[8 + len..];
    }
    (commands, consumed)
}

pub fn journal_path(dir: &Path) -> PathBuf {
    dir.join(FILE_NAME)
}
