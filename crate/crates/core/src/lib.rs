//! Translation of first-order modal logic problems into classical
//! higher-order logic, together with a finite Kripke-model evaluator used to
//! cross-check the translation and to search for small countermodels.

pub mod cli;
pub mod embedding;
pub mod fml;
pub mod hol;
pub mod kripke;
pub mod qmf;
pub mod thf;
