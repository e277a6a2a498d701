//! Fixtures shared by the criterion benches.

use qgalois_core::{character_table, conjugacy_classes, CharacterTable, Group, RngSeed, DEFAULT_TOL};

pub const SEED: RngSeed = RngSeed(0);

/// A suite group together with its character table.
pub fn with_table(name: &str) -> (Group, CharacterTable) {
    let g = qgalois_core::suite::by_name(name).expect("suite group");
    let t = character_table(&g, &conjugacy_classes(&g), DEFAULT_TOL).expect("character table");
    (g, t)
}
