use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

/// Hop count between two vertices, or [`Distance::UNREACHABLE`].
///
/// The sentinel orders above every finite value and absorbs addition, so
/// `min`/`+` over label arithmetic needs no special casing.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Distance(u32);

impl Distance {
    pub const ZERO: Distance = Distance(0);
    pub const UNREACHABLE: Distance = Distance(u32::MAX);

    /// Panics if `hops` collides with the sentinel.
    pub const fn new(hops: u32) -> Self {
        assert!(hops != u32::MAX, "hop count collides with UNREACHABLE");
        Distance(hops)
    }

    pub const fn from_raw(raw: u32) -> Self {
        Distance(raw)
    }

    pub const fn raw(self) -> u32 {
        self.0
    }

    pub const fn is_finite(self) -> bool {
        self.0 != u32::MAX
    }

    pub fn hops(self) -> Option<u32> {
        self.is_finite().then_some(self.0)
    }

    /// One hop further; stays unreachable.
    pub fn succ(self) -> Self {
        self + Distance(1)
    }

    /// Signed rendering used by text outputs: `-1` for unreachable.
    pub fn to_signed(self) -> i64 {
        match self.hops() {
            Some(h) => i64::from(h),
            None => -1,
        }
    }
}

impl Add for Distance {
    type Output = Distance;

    fn add(self, rhs: Distance) -> Distance {
        if !self.is_finite() || !rhs.is_finite() {
            return Distance::UNREACHABLE;
        }
        match self.0.checked_add(rhs.0) {
            Some(s) if s != u32::MAX => Distance(s),
            _ => Distance::UNREACHABLE,
        }
    }
}

impl From<u32> for Distance {
    fn from(hops: u32) -> Self {
        Distance::new(hops)
    }
}

impl fmt::Debug for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hops() {
            Some(h) => write!(f, "{h}"),
            None => f.write_str("inf"),
        }
    }
}
