//! Finite groups as explicit multiplication tables.

mod conjugacy;
mod named;
mod perm;
mod spec;
mod subgroup;
mod table;

pub use conjugacy::{conjugacy, quotient_group, ConjugacyInfo, Quotient};
pub use named::{named_group, perm_from_one_based, NamedGroup};
pub use perm::{cycle_label, perm_from_cycles, PermList};
pub use spec::{parse_group_spec, parse_subgroup_spec, subgroup_spec};
pub use subgroup::{
    all_subgroups, center, centralizer_of_element, centralizer_of_subgroup, is_normal,
    smallest_prime_divisor, subgroup_closure, SubgroupRef,
};
pub use table::{
    close_group, direct_product, DirectProduct, ElemId, GroupTable, DEFAULT_MAX_ORDER,
    HARD_MAX_ORDER,
};
