//! Reproductions of two worked scenarios: the weak-value singularity scan of
//! a qutrit projector and the three-box paradox in the two-qubit picture.

mod scan;
mod three_box;

pub use scan::*;
pub use three_box::*;
