//! Exact computations with representations of a linearly ordered set with
//! an involution: objects, morphisms, cones, homotopy classes and the
//! triangulated structure on the homotopy quotient.

pub mod block;
pub mod cli;
pub mod cone;
pub mod field;
pub mod homotopy;
pub mod linalg;
pub mod oracle;
pub mod poset;
pub mod problem;
pub mod randgen;
pub mod rep;
pub mod rng;
pub mod system;
pub mod tri;
pub mod verify;
