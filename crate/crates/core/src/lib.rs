//! Provability logic workbench: modal formulas, Kripke frames, complex
//! algebras, Q-filter duality and a GL decision procedure.

pub mod algebra;
pub mod duality;
pub mod experiments;
pub mod formula;
pub mod kripke;
pub mod prover;
pub mod worldset;

pub use formula::{parse, print, Formula};
pub use kripke::{Frame, Model};
pub use worldset::WorldSet;
