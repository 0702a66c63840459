//! Depth-bounded Boolean inference and the depth-bounded belief functions
//! built on it.

pub mod belief;
pub mod forest;
pub mod io;
pub mod proof;
pub mod ratlp;
pub mod solver;
pub mod syntax;
