//! Exact-integer toolkit for free-group automorphisms, their Johnson
//! filtration depth, and their homological representations on finite covers.

pub mod cover;
pub mod error;
pub mod extrep;
pub mod freegroup;
pub mod intlattice;
pub mod nilpotent;
pub mod surface;

pub use cover::{CoverGraph, CycleVector, QuotientSpec, QuotientSpecFile};
pub use error::{Error, Result};
pub use extrep::{ExtBasis, ExtVector, SymplecticForm};
pub use freegroup::{Automorphism, Endomorphism, IaGenerator, Letter, NielsenMove, Word};
pub use intlattice::{IntMatrix, LatticeIndex, SnfResult, Sublattice};
pub use nilpotent::{Depth, HomVector, TruncatedSeries, UnitriangularElement};
pub use surface::{HomologyModel, LiftCriterionInput, PushDatum, PushKind};
