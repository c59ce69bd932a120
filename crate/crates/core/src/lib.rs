//! Heegaard Floer sliceness obstruction pipeline over F2.
//!
//! Bifiltered complexes with a formal U-action, the refiltering formula for
//! large negative surgery, d-invariants of large-surgery quotients, and the
//! number theory that turns d-invariant differences into a sliceness
//! obstruction for branched double covers.

pub mod cli;
pub mod complex;
pub mod error;
pub mod gf2;
pub mod lens;
pub mod models;
pub mod obstruction;
pub mod refilter;
pub mod surgery;
pub mod tag;
pub mod tower;

pub use complex::{Arrow, Complex, Generator, GradingShift};
pub use error::{Error, Result};
pub use models::{build_model, build_model_str, torus_model, unknot_model, whitehead_double_model, KnotExpr};
pub use tag::{Atom, ShiftTag};
