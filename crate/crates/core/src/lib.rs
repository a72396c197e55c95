//! Lower central series and Andreadakis filtrations on automorphism groups of
//! free groups, with exact desk-scale checks of their agreement on triangular
//! automorphisms and pure braids.

pub mod aut;
pub mod braid;
pub mod degree;
pub mod dk;
pub mod error;
pub mod harness;
mod expr;
pub mod johnson;
pub mod lie;
pub mod linalg;
pub mod magnus;
pub mod sampling;
pub mod word;

pub use aut::{Automorphism, FreeEndo, IAWord, TriangularAut};
pub use braid::{CombedForm, PureBraidWord};
pub use degree::{AndreadakisDegree, FiltrationDegree, GammaDegree};
pub use dk::DKElement;
pub use error::{Error, Result};
pub use lie::{Derivation, LieElement, LyndonBasis};
pub use magnus::NCPoly;
pub use word::{ExponentVector, Rank, Word};
