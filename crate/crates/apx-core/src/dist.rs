//! Hop-count distances with an explicit infinity sentinel.
//!
//! All distances in this crate are unsigned integers. Estimates are
//! compositions of at most a few real walk lengths, each below `n`, so
//! `u32` never overflows at the graph sizes this crate targets; `u32::MAX`
//! is reserved as the unreachable sentinel and addition saturates into it.

use serde::{Deserialize, Serialize};

/// Vertex identifier. Graphs are indexed `0..n`.
pub type Vertex = u32;

/// A hop distance or `INFINITY`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(transparent)]
pub struct Dist(pub u32);

pub const INFINITY: Dist = Dist(u32::MAX);

impl Dist {
    pub const ZERO: Dist = Dist(0);

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0 != u32::MAX
    }

    #[inline]
    pub fn min(self, other: Dist) -> Dist {
        if self.0 <= other.0 {
            self
        } else {
            other
        }
    }
}

/// Saturating addition; `INFINITY` is absorbing.
impl std::ops::Add for Dist {
    type Output = Dist;

    #[inline]
    fn add(self, other: Dist) -> Dist {
        if self.is_finite() && other.is_finite() {
            let sum = self.0.saturating_add(other.0);
            debug_assert!(sum != u32::MAX, "finite distance sum saturated");
            Dist(sum)
        } else {
            INFINITY
        }
    }
}

impl From<u32> for Dist {
    fn from(v: u32) -> Self {
        Dist(v)
    }
}

impl std::fmt::Debug for Dist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "inf")
        }
    }
}

impl std::fmt::Display for Dist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}
