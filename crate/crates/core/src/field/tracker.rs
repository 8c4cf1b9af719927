use std::sync::atomic::{AtomicUsize, Ordering};

/// High-water mark of the `t`-coefficient indices read during one computation.
///
/// Atomic so that a single computation may fan out over threads; it is never
/// shared between computations.
#[derive(Debug, Default)]
pub struct Tracker {
    high: AtomicUsize,
}

impl Tracker {
    pub fn new() -> Tracker {
        Tracker::default()
    }

    /// Note that coefficient `idx` was read.
    pub fn record(&self, idx: usize) {
        self.high.fetch_max(idx + 1, Ordering::Relaxed);
    }

    /// One more than the highest index read, or 0 if nothing was read.
    pub fn level_read(&self) -> usize {
        self.high.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.high.store(0, Ordering::Relaxed);
    }
}

/// Outcome of a purity check on a tracked computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Purity {
    pub level_read: usize,
    pub certified: usize,
}

impl Purity {
    pub fn ok(&self) -> bool {
        self.level_read <= self.certified
    }
}

/// Compare what a tracked computation read against the certified level.
pub fn purity_check(tracker: &Tracker, certified: usize) -> Purity {
    Purity { level_read: tracker.level_read(), certified }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_and_resettable() {
        let t = Tracker::new();
        assert_eq!(t.level_read(), 0);
        t.record(2);
        t.record(0);
        assert_eq!(t.level_read(), 3);
        assert!(purity_check(&t, 3).ok());
        assert!(!purity_check(&t, 2).ok());
        t.reset();
        assert_eq!(t.level_read(), 0);
    }
}
