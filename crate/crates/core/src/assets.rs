//! Example switches and diagrams bundled with the crate. The same files live
//! in `assets/` for use from the command line.

use crate::diagram::GaussCode;
use crate::switch::FiniteDoodleSwitch;

pub const T: &str = include_str!("../assets/T.switch");
pub const T_PRIME: &str = include_str!("../assets/Tprime.switch");
pub const T_DOUBLE_PRIME: &str = include_str!("../assets/Tdoubleprime.switch");
pub const UNKNOT: &str = include_str!("../assets/U.gauss");
pub const D31: &str = include_str!("../assets/d31.gauss");

/// Directory holding the asset files in the source tree.
pub const DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/assets");

/// The three example switches, in the order T, T′, T″.
pub fn example_switches() -> [FiniteDoodleSwitch; 3] {
    [T, T_PRIME, T_DOUBLE_PRIME].map(|text| FiniteDoodleSwitch::from_text(text).expect("bundled switch"))
}

pub fn unknot() -> GaussCode {
    GaussCode::parse(UNKNOT).expect("bundled code")
}

pub fn d31() -> GaussCode {
    GaussCode::parse(D31).expect("bundled code")
}
