//! Coloring invariants of virtual doodles.
//!
//! * [`switch`]: finite doodle switches as multiplication tables, their
//!   axioms, derived operations, isomorphism and enumeration.
//! * [`diagram`]: signed Gauss codes standing in for virtual diagrams.
//! * [`presentation`]: fundamental and doubled fundamental switch
//!   presentations and coloring counts.
//! * [`moves`]: R1/R2 rewrites and seeded random move walks.
//! * [`cover`]: the combinatorial double covering of a diagram.
//! * [`assets`]: the bundled example switches and diagrams.

pub mod assets;
pub mod cover;
pub mod diagram;
pub mod moves;
pub mod presentation;
pub mod switch;

pub use diagram::{GaussCode, Sign};
pub use presentation::{count_colorings, count_doubled_colorings, dfds, fds, SwitchPresentation};
pub use switch::{enumerate_switches, FiniteDoodleSwitch};

/// Coloring number of a diagram.
pub fn col(code: &GaussCode, sw: &FiniteDoodleSwitch) -> u128 {
    count_colorings(&fds(code), sw)
}

/// Doubled coloring number of a diagram.
pub fn dcol(code: &GaussCode, sw: &FiniteDoodleSwitch) -> u128 {
    count_doubled_colorings(code, sw)
}
