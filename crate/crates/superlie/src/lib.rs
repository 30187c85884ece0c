//! superlie: exact computational algebra for finite-dimensional Lie
//! superalgebras.
//!
//! The crate builds the classical matrix families (gl, sl, A, osp, p) and the
//! Cartan-type families (W, S, S~, H) over exact rationals, computes root
//! space decompositions and triangular decompositions with machine-checked
//! regularity witnesses, classifies decompositions against the
//! C1/C2/parabolic conditions, and constructs highest-weight cyclic modules:
//! generalized Kac modules over g and local Weyl modules over map
//! superalgebras g (x) A for finite-dimensional jet algebras A, with
//! finite/infinite certificates.

pub mod hwengine;
pub mod qlinalg;
pub mod realize;
pub mod report;
pub mod roots;
pub mod superalg;
pub mod triangular;
pub mod weyl;
