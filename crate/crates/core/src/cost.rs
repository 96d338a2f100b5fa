//! Path costs with a distinguished infinity.

use std::fmt;

use serde::{Serialize, Serializer};

/// Largest edge weight accepted by the graph builder.
///
/// Capping weights at 32 bits keeps every simple-path sum far below the
/// infinity sentinel for any graph that fits in memory.
pub const MAX_WEIGHT: u64 = u32::MAX as u64;

/// A non-negative path cost, or `INFINITY` for "no path known".
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cost(u64);

impl Cost {
    pub const ZERO: Cost = Cost(0);
    pub const INFINITY: Cost = Cost(u64::MAX);

    /// Finite cost. `u64::MAX` is reserved for the sentinel.
    pub fn new(value: u64) -> Cost {
        assert!(value != u64::MAX, "cost value collides with INFINITY");
        Cost(value)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0 != u64::MAX
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        self.0 == u64::MAX
    }

    /// `None` for infinity.
    #[inline]
    pub fn value(self) -> Option<u64> {
        self.is_finite().then_some(self.0)
    }

    /// Raw representation, `u64::MAX` for infinity.
    #[inline]
    pub fn to_bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn from_bits(bits: u64) -> Cost {
        Cost(bits)
    }

    /// `self + w`, saturating at `INFINITY`. `INFINITY + w = INFINITY`.
    #[inline]
    pub fn plus_weight(self, w: u64) -> Cost {
        match self.0.checked_add(w) {
            Some(v) => Cost(v),
            None => Cost::INFINITY,
        }
    }

    /// Sum of two costs, saturating at `INFINITY`.
    #[inline]
    pub fn plus(self, other: Cost) -> Cost {
        if other.is_infinite() {
            return Cost::INFINITY;
        }
        self.plus_weight(other.0)
    }
}

impl fmt::Debug for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("inf"),
        }
    }
}

impl From<u64> for Cost {
    fn from(v: u64) -> Cost {
        Cost::new(v)
    }
}

// Infinity serializes as `null`.
impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.value() {
            Some(v) => s.serialize_some(&v),
            None => s.serialize_none(),
        }
    }
}
