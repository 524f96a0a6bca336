//! Numerical complex character tables and the character formulas built on
//! them.

mod formulas;
mod table;

pub use formulas::{
    decompose, is_character, prob_char_exact, prob_char_pg, prob_char_relative, psi_class_function,
    restriction_norm, vanishes_outside, CharacterCheck, ClassFunction, PsiDecomposition,
};
pub use table::{
    character_table, verify_orthogonality, CharTableOptions, CharacterTable, CharacterTableJson,
    ClassJson, IrreducibleJson, OrthogonalityReport, EIGEN_GAP_TOL, FORMULA_TOL, ROUNDING_TOL,
};
