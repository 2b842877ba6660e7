pub mod census;
pub mod count_rigid;
pub mod density;
pub mod geometry;
pub mod project;

/// Default seed: fixed so the default invocation is reproducible.
pub const DEFAULT_SEED: u64 = 20060414;
