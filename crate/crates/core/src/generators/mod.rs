//! Constructive generators: B-sets, multirotations, the example set M and
//! oracle fixtures with known reach.

pub mod bset;
pub mod canonical;
pub mod multirotation;
pub mod poly;

pub use bset::{make_bset, parabola_bset, BSet, BSetSample, BSetSpec, BSetVariant, SemiFunctionSpec, SemiKind};
pub use canonical::{
    bilipschitz_distortion, canonical, cantor_contact, contact_bset, distortion_constant, example_m, leaf_count,
    Canonical, ExampleM, Fixture,
};
pub use multirotation::{apply_multirotation, MultirotationSpec, PlaneRotation};
pub use poly::{PiecewisePoly, PolyPiece};
