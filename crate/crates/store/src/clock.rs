use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use arbor_core::Timestamp;

pub trait Clock: Send + Sync {
    fn now(&self) -> Timestamp;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> Timestamp {
        SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as Timestamp).unwrap_or(0)
    }
}

/// Deterministic clock advancing one millisecond per reading.
#[derive(Debug)]
pub struct TickClock(AtomicU64);

impl TickClock {
    pub fn starting_at(t: Timestamp) -> Self {
        TickClock(AtomicU64::new(t))
    }
}

impl Clock for TickClock {
    fn now(&self) -> Timestamp {
        self.0.fetch_add(1, Ordering::Relaxed)
    }
}
