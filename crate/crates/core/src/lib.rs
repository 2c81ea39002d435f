//! Construction and verification of flag-transitive 2-(k^2, k, lambda) designs
//! of affine type.
//!
//! Points of `V = V_n(q)` are integer indices whose base-`p` digits are the
//! prime-field coordinates, so every group element is stored as a GF(p)-linear
//! map plus a translation and acts on plain `u32` indices.

pub mod atlas;
pub mod autsearch;
pub mod catalog;
pub mod design;
pub mod error;
pub mod field;
pub mod group;
pub mod linalg;
pub mod par;
pub mod space;
pub mod suzuki;

pub use error::{Error, Result};
pub use field::{make_field, Elem, Field, FieldSpec};
pub use space::Space;
