//! Injectable clocks shared by the station monitor and the simulator.

use std::time::{Duration, Instant};

use chrono::{DateTime, TimeDelta, Utc};

pub trait Clock: Send {
    fn now(&self) -> DateTime<Utc>;

    /// Blocks until the clock reads at least `t`.
    fn sleep_until(&mut self, t: DateTime<Utc>);
}

/// Simulated time that only moves when asked to; sleeping is instantaneous.
#[derive(Debug, Clone)]
pub struct VirtualClock {
    now: DateTime<Utc>,
}

impl VirtualClock {
    pub fn new(start: DateTime<Utc>) -> Self {
        Self { now: start }
    }

    pub fn advance(&mut self, by: TimeDelta) {
        self.now += by;
    }
}

impl Clock for VirtualClock {
    fn now(&self) -> DateTime<Utc> {
        self.now
    }

    fn sleep_until(&mut self, t: DateTime<Utc>) {
        if t > self.now {
            self.now = t;
        }
    }
}

/// Wall-clock time scaled by `factor` from a fixed epoch: one real second is
/// `factor` simulated seconds.
#[derive(Debug, Clone)]
pub struct AcceleratedClock {
    epoch: DateTime<Utc>,
    started: Instant,
    factor: f64,
}

impl AcceleratedClock {
    pub fn new(epoch: DateTime<Utc>, factor: f64) -> Self {
        assert!(
            factor > 0.0 && factor.is_finite(),
            "acceleration factor must be positive"
        );
        Self {
            epoch,
            started: Instant::now(),
            factor,
        }
    }

    pub fn epoch(&self) -> DateTime<Utc> {
        self.epoch
    }
}

impl Clock for AcceleratedClock {
    fn now(&self) -> DateTime<Utc> {
        let simulated = self.started.elapsed().as_secs_f64() * self.factor;
        self.epoch + TimeDelta::microseconds((simulated * 1e6) as i64)
    }

    fn sleep_until(&mut self, t: DateTime<Utc>) {
        let ahead = (t - self.now()).num_microseconds().unwrap_or(i64::MAX);
        if ahead > 0 {
            std::thread::sleep(Duration::from_secs_f64(ahead as f64 / 1e6 / self.factor));
        }
    }
}
