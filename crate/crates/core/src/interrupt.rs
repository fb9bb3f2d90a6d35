// SPDX-License-Identifier: Apache-2.0

//! Cooperative cancellation shared between the sweep driver and engine
//! workers.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

/// A set of cancellation flags plus an optional deadline.
///
/// A child interrupt observes every flag of its parent but triggering it only
/// cancels the child, which is how a winning worker stops its siblings
/// without stopping the whole run.
#[derive(Clone, Debug)]
pub struct Interrupt {
    flags: Vec<Arc<AtomicBool>>,
    deadline: Option<Instant>,
}

impl Default for Interrupt {
    fn default() -> Self {
        Interrupt::new()
    }
}

impl Interrupt {
    pub fn new() -> Interrupt {
        Interrupt {
            flags: vec![Arc::new(AtomicBool::new(false))],
            deadline: None,
        }
    }

    pub fn with_timeout(timeout: Duration) -> Interrupt {
        Interrupt {
            deadline: Some(Instant::now() + timeout),
            ..Interrupt::new()
        }
    }

    /// A child sharing this interrupt's flags and deadline, with its own flag
    /// and a deadline no later than `limit` (when given).
    pub fn child(&self, limit: Option<Duration>) -> Interrupt {
        let mut flags = self.flags.clone();
        flags.push(Arc::new(AtomicBool::new(false)));
        let own = limit.map(|d| Instant::now() + d);
        let deadline = match (self.deadline, own) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Interrupt { flags, deadline }
    }

    /// Raises this interrupt's own flag.
    pub fn trigger(&self) {
        self.flags
            .last()
            .expect("interrupt always owns a flag")
            .store(true, Ordering::Relaxed);
    }

    pub fn is_triggered(&self) -> bool {
        self.flags.iter().any(|f| f.load(Ordering::Relaxed))
    }

    pub fn deadline_passed(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// True once any flag is raised or the deadline has passed.
    pub fn is_set(&self) -> bool {
        self.is_triggered() || self.deadline_passed()
    }
}
