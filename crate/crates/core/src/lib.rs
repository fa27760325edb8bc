//! Exact label combinatorics for the irreducible characters of
//! `SL_n(q)` and `SU_n(q)`.
//!
//! Characters of the ambient general linear / unitary group are labelled by a
//! semisimple class datum (a multiset of Frobenius-orbits of prime-to-p
//! torsion points in Q/Z) together with a multipartition.  Restricting to the
//! special subgroup groups those labels into translation families; each family
//! splits into `a_lambda` constituents indexed by a cyclic character group.
//! This crate implements that bookkeeping exactly:
//!
//! * [`torsion`] — rationals mod 1 with the twisted Frobenius action
//!   `t -> (eps*q)*t`, and orbit enumeration by denominator;
//! * [`partition`] — partitions, conjugation, the part-wise operations used
//!   for unipotent support and wave front sets;
//! * [`gl`] — labels `(s~, lambda)` for the general linear/unitary group:
//!   enumeration, centralizer shapes, exact character degrees, central
//!   characters, wave fronts;
//! * [`sl`] — triple labels `(s, lambda, xi)` for the special subgroup:
//!   component groups, the reduction maps governing diagonal-automorphism
//!   orbits and Gelfand-Graev incidence, the outer-automorphism action, and
//!   the stabilizer factorization report.
//!
//! Everything is a pure function of immutable data; all enumeration orders
//! are deterministic and byte-stable across runs.

#![allow(clippy::needless_range_loop)]

pub mod cyclic;
pub mod error;
pub mod gl;
pub mod jsonio;
pub mod params;
pub mod partition;
pub mod sl;
pub mod torsion;

pub use cyclic::CyclicElt;
pub use error::CoreError;
pub use gl::{CentralizerShape, GlCharLabel, OrbitTable, SemisimpleClassLabel};
pub use params::GroupParams;
pub use partition::Partition;
pub use sl::{
    ActionCache, ComponentGroupData, Family, OuterAut, PglClassLabel, SlCharLabel,
    UnipotentSlClass,
};
pub use torsion::{FrobeniusOrbit, TorsionPoint};
