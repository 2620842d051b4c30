//! Small bundled lattices used in tests, examples and the CLI.

use crate::lattice::{FiniteLattice, LatticeData};

pub const L6_JSON: &str = include_str!("../fixtures/l6.json");
pub const L6_BROKEN_JSON: &str = include_str!("../fixtures/l6_broken.json");
pub const TWO_JSON: &str = include_str!("../fixtures/two.json");
pub const CHAIN3_IDEMPOTENT_JSON: &str = include_str!("../fixtures/chain3_idempotent.json");
pub const CHAIN3_NILPOTENT_JSON: &str = include_str!("../fixtures/chain3_nilpotent.json");

fn load(json: &str) -> FiniteLattice {
    FiniteLattice::new(LatticeData::from_json(json).expect("bundled fixture parses"))
        .expect("bundled fixture is a lattice")
}

/// Six elements `0 < a < b, c < d < 1` with every product of two elements
/// of `{a, b, c, d}` equal to `0`.
pub fn l6_data() -> LatticeData {
    LatticeData::from_json(L6_JSON).expect("bundled fixture parses")
}

pub fn l6() -> FiniteLattice {
    load(L6_JSON)
}

/// `{0, 1}` with multiplication equal to meet.
pub fn two() -> FiniteLattice {
    load(TWO_JSON)
}

/// The chain `0 < x < 1` with `x² = x` (`idempotent`) or `x² = 0`.
pub fn chain3(idempotent: bool) -> FiniteLattice {
    load(if idempotent {
        CHAIN3_IDEMPOTENT_JSON
    } else {
        CHAIN3_NILPOTENT_JSON
    })
}
