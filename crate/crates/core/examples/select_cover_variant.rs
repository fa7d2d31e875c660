//! Runs the cover-variant oracle and prints its log.
//!
//! `cargo run --release -p doodle-core --example select_cover_variant > crates/core/assets/cover_variant.log`

use doodle_core::cover::{oracle_battery, oracle_log};

fn main() {
    let (diagrams, switches) = oracle_battery();
    print!("{}", oracle_log(&diagrams, &switches));
}
