use std::time::{Duration, Instant};

/// How often [`Clock::expired`] consults the real clock, in calls.
const TIMEOUT_STRIDE: usize = 4096;

/// A start instant plus an optional deadline, cheap enough to poll from
/// inner solver loops.
pub(crate) struct Clock {
    start: Instant,
    deadline: Option<Instant>,
    ticks: usize,
}

impl Clock {
    pub(crate) fn new(timeout: Option<Duration>) -> Clock {
        let start = Instant::now();
        Clock { start, deadline: timeout.map(|t| start + t), ticks: 0 }
    }

    /// True when the budget ran out. The real clock is consulted once per
    /// [`TIMEOUT_STRIDE`] calls.
    pub(crate) fn expired(&mut self) -> bool {
        match self.deadline {
            None => false,
            Some(deadline) => {
                self.ticks += 1;
                self.ticks % TIMEOUT_STRIDE == 0 && Instant::now() >= deadline
            }
        }
    }

    pub(crate) fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}
