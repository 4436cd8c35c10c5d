//! Closed-form error and precision bounds, per-level precision schedules and
//! the estimation of the constants they depend on.

mod bounds;
mod schedule;

pub use bounds::*;
pub use schedule::*;
