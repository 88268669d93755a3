//! Exact homological algebra for knot Floer complexes.
//!
//! The crate takes a finitely generated model of CFK-infinity, builds the
//! quotient complexes `A+_k` and `B+`, the maps `v+_k` and `h+_k` between
//! them, and computes homology of large surgeries and of the zero-surgery
//! mapping cone (untwisted and with Laurent-twisted coefficients). All
//! arithmetic is exact, over F2 or Q.

#![no_std]

extern crate alloc;

pub mod analyzer;
pub mod error;
pub mod field;
pub mod homology;
pub mod linalg;
pub mod model;
pub mod plus;
pub mod surgery;

pub use error::{Error, Result};
pub use field::{Field, Poly, RatFunc, F2};
pub use homology::{
    induced_map, truncate, truncated_homology, u_module_structure, Certificate, FiniteComplex,
    HomologyMap, MapRanks, RankPair, UModule,
};
pub use model::{
    subquotient, validate_complex, Arrow, CfkComplex, FieldKind, Generator, Region,
    ValidationReport, Violation,
};
pub use plus::{ChainMap, PlusComplex, Tower, TowerArrow};
