//! Fixtures shared by the benchmarks in `benches/`.

use vgroups_core::braid::{named, random_braid};
use vgroups_core::{BraidWord, Theory};

/// Braids of increasing size: the worked examples plus seeded random words.
pub fn braid_fixtures() -> Vec<(&'static str, BraidWord)> {
    vec![
        ("virtual_trefoil", named::virtual_trefoil()),
        ("kishino", named::kishino()),
        ("kishino_kb", named::kishino_kb()),
        ("random_4x12", random_braid(4, 12, Theory::Virtual, 1)),
        ("random_6x24", random_braid(6, 24, Theory::Virtual, 2)),
    ]
}
