//! Rigorous numerical workbench for improved discrete Hardy inequalities:
//! exact rational sequence kernels, directed-rounding interval arithmetic,
//! weight families (including the FKP weight v_p and its expansion
//! coefficients), certified functional evaluators, inequality checkers with
//! verdict semantics, and sharpness experiments.

pub mod error;
pub mod num;
pub mod seqcore;
pub mod series;
pub mod weights;
pub mod functionals;
pub mod inequalities;
pub mod sharpness;
pub mod report;

pub use error::{Error, Result};
