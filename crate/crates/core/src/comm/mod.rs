//! Commutators and the exact probability `p_g^{(n,m)}(H,K)`.

mod commutator;
mod distribution;
mod formulas;
mod prob;

pub use commutator::{commutator, left_normed_commutator};
pub use distribution::{comm_distribution, extend_by_conjugators, CommDistribution};
pub use formulas::{
    commutativity_degree, commutator_value_set, nested_commutator_subgroup, nilpotency_degree,
    prob_class_formula, y_set_size, zeta, zeta_nm, ClassFormula, Predicate,
};
pub(crate) use formulas::zeta_with;
pub use prob::{
    brute_counts, full_distribution, prob_brute, prob_fast, prob_profile,
    profile_from_distribution, rational_repr, rational_to_f64, ratio, CommParams, ExactProb,
    Method, DEFAULT_BRUTE_CAP,
};
