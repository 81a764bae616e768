//! Process-wide size limits for full enumeration.

use std::sync::atomic::{AtomicUsize, Ordering};

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;
pub const ISOMORPHISM_BOUND: usize = 400;
pub const NORMAL_SUBGROUP_CLASS_BOUND: usize = 64;
pub const STABILISER_CAP: usize = 1 << 14;
/// Groups up to this order get a precomputed multiplication table.
pub const TABLE_LIMIT: usize = 2048;

static CLOSURE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_CLOSURE_CAP);

pub fn closure_cap() -> usize {
    CLOSURE_CAP.load(Ordering::Relaxed)
}

pub fn set_closure_cap(cap: usize) {
    CLOSURE_CAP.store(cap.max(1), Ordering::Relaxed);
}
