use std::time::{Duration, Instant};

use defsched_core::search::{Clock, Deadline};

/// Deadlines measured on the monotonic wall clock.
#[derive(Clone, Copy, Debug, Default)]
pub struct WallClock;

struct At(Option<Instant>);

impl Deadline for At {
    fn expired(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }
}

impl Clock for WallClock {
    fn deadline(&self, seconds: f64) -> Box<dyn Deadline + Send> {
        let at = Duration::try_from_secs_f64(seconds).ok().and_then(|d| Instant::now().checked_add(d));
        Box::new(At(at))
    }
}
