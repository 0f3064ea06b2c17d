//! Calculator for Weinstein handle presentations.
//!
//! Input is the signed crossing data between index-n attaching spheres and
//! index-(n-1) belt spheres. From it the crate computes top Morse cohomology,
//! the acyclic twisted-complex relations carried by each belt sphere, the
//! resulting upper bound on the Grothendieck group of the wrapped category, and
//! replays handle-slide and cancellation scripts while tracking co-cores.

pub mod abelian;
pub mod model;
pub mod morse;
pub mod relations;
pub mod grothendieck;
pub mod moves;
pub mod scenarios;
