//! Exact orbifold E-functions of invertible polynomials.
//!
//! A pair `(f, G)` consists of an invertible quasihomogeneous polynomial `f`
//! (a Thom-Sebastiani sum of chain and loop atoms) and a subgroup `G` of its
//! diagonal symmetry group `G_f`. This crate computes:
//!
//! - [`poly`]: parsing, atom decomposition, weights, the Berglund-Hubsch transpose;
//! - [`group`]: `G_f`, subgroups, ages, fixed loci, the duality pairing and dual groups;
//! - [`qexp`]: fractional-exponent polynomials in `t, tb`, Hodge tables and derived invariants;
//! - [`basis`]: the monomial-basis engine (Kreuzer bases, the psi map, sectors, pair tables);
//! - [`series`]: an independent character-filtered series engine;
//! - [`corpus`]: the line-oriented corpus format and the per-pair verification matrix.
//!
//! All arithmetic is exact. Sector computations run on rayon when the
//! `parallel` feature is enabled (the default) and sequentially otherwise.

pub mod basis;
pub mod corpus;
mod error;
mod exec;
pub mod group;
pub mod matrix;
pub mod poly;
pub mod qexp;
pub mod series;

pub use error::{Error, Result};
pub use exec::Exec;

/// Exact rational number used for weights, group components and exponents.
pub type Q = num_rational::Ratio<i64>;

pub use basis::{
    efunction_basis, hodge_table, pair_table, BasisMonomial, PairTable, SectorContribution,
};
pub use group::{AbelianSubgroup, GroupElement};
pub use poly::{Atom, AtomKind, InvertiblePolynomial, WeightSystem};
pub use qexp::{BiExpPolynomial, HodgeTable, Mode, PairModes};
pub use series::efunction_series;
