use serde::{Deserialize, Serialize};

/// A real quantity known to lie in `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedValue {
    pub lo: f64,
    pub hi: f64,
    /// Set when the bounds are the exact value rather than an enclosure.
    pub exact: bool,
}

impl CertifiedValue {
    pub fn new(lo: f64, hi: f64) -> CertifiedValue {
        debug_assert!(lo <= hi, "empty enclosure [{lo}, {hi}]");
        CertifiedValue { lo, hi, exact: false }
    }

    pub fn exact(v: f64) -> CertifiedValue {
        CertifiedValue { lo: v, hi: v, exact: true }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}
