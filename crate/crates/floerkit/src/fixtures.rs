//! Complexes shipped in `fixtures/`, embedded so that `selftest` needs no
//! files at run time.

use floerkit_core::CfkComplex;

use crate::json::parse_complex;

pub const UNKNOT: &str = include_str!("../../../fixtures/unknot.json");
pub const TREFOIL: &str = include_str!("../../../fixtures/trefoil.json");
pub const FIGURE_EIGHT: &str = include_str!("../../../fixtures/figure-eight.json");
/// Five generators, asymmetric, violating several laws at once.
pub const BROKEN: &str = include_str!("../../../fixtures/broken.json");
/// Two generators joined by a diagonal arrow. `H(B+)` is one-dimensional
/// and finite, so the twisted surjective-or-zero check applies to it.
pub const DICHOTOMY_MODEL: &str = include_str!("../../../fixtures/dichotomy-model.json");

fn load(text: &str) -> CfkComplex {
    parse_complex(text).expect("bundled fixtures parse")
}

pub fn unknot() -> CfkComplex {
    load(UNKNOT)
}

pub fn trefoil() -> CfkComplex {
    load(TREFOIL)
}

pub fn figure_eight() -> CfkComplex {
    load(FIGURE_EIGHT)
}

pub fn broken() -> CfkComplex {
    load(BROKEN)
}

pub fn dichotomy_model() -> CfkComplex {
    load(DICHOTOMY_MODEL)
}

/// The three valid knot complexes.
pub fn knots() -> Vec<CfkComplex> {
    vec![unknot(), trefoil(), figure_eight()]
}
