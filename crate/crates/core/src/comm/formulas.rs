use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::distribution::{comm_distribution, CommDistribution};
use super::prob::{full_distribution, prob_fast, CommParams, ExactProb, Method};
use crate::error::{Error, Result};
use crate::group::{conjugacy, subgroup_closure, ConjugacyInfo, ElemId, GroupTable, SubgroupRef};

/// Which solvability test the class-size formula applies to a commutator
/// value `w` and target `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    /// `w·g ∈ Cl_K(w)`: exactly when `[w, y] = g` has a solution `y ∈ K`
    /// under `[x, y] = x⁻¹y⁻¹xy`.
    Derived,
    /// `g⁻¹·w ∈ Cl_K(w)`, as the formula is printed.
    Paper,
}

impl std::fmt::Display for Predicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Predicate::Derived => "derived",
            Predicate::Paper => "paper",
        })
    }
}

impl std::str::FromStr for Predicate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "derived" => Ok(Predicate::Derived),
            "paper" => Ok(Predicate::Paper),
            _ => Err(Error::ConfigInvalid(format!("unknown predicate `{s}`"))),
        }
    }
}

/// The class-size sum `Σ_{w solvable} Nₙ(w)·|C_K(w)|ᵐ` prepared for one
/// x-block distribution and one `K`, evaluable at any target.
pub struct ClassFormula<'a> {
    group: &'a GroupTable,
    x_dist: &'a CommDistribution,
    classes: ConjugacyInfo,
    weights: Vec<BigUint>,
}

impl<'a> ClassFormula<'a> {
    pub fn new(group: &'a GroupTable, x_dist: &'a CommDistribution, k: &SubgroupRef, m: usize) -> Result<Self> {
        let classes = conjugacy(group, k)?;
        if x_dist.counts().len() != group.order() {
            return Err(Error::ForeignSubgroup);
        }
        let weights = x_dist
            .counts()
            .iter()
            .enumerate()
            .map(|(w, c)| {
                if c.is_zero() {
                    BigUint::zero()
                } else {
                    c * BigUint::from(classes.centralizer_order(w)).pow(m as u32)
                }
            })
            .collect();
        Ok(Self { group, x_dist, classes, weights })
    }

    pub fn solvable(&self, w: ElemId, target: ElemId, predicate: Predicate) -> bool {
        let g = self.group;
        let moved = match predicate {
            Predicate::Derived => g.mul(w, target),
            Predicate::Paper => g.mul(g.inv(target), w),
        };
        self.classes.same_class(moved, w)
    }

    pub fn count(&self, target: ElemId, predicate: Predicate) -> BigUint {
        self.x_dist
            .support()
            .into_iter()
            .filter(|&w| self.solvable(w, target, predicate))
            .map(|w| &self.weights[w])
            .sum()
    }
}

/// The class-size formula evaluated as printed, with the chosen predicate.
///
/// For `m = 1` and [`Predicate::Derived`] this is exact; for `m > 1` it is
/// generally not, because the number of `(y₁,…,yₘ)` solving the equation is
/// not `|C_K(w)|ᵐ`.
pub fn prob_class_formula(group: &GroupTable, params: &CommParams<'_>, predicate: Predicate) -> Result<ExactProb> {
    params.validate(group)?;
    let x_dist = comm_distribution(group, params.h, params.n)?;
    let formula = ClassFormula::new(group, &x_dist, params.k, params.m)?;
    Ok(ExactProb::new(formula.count(params.g, predicate), params, Method::ClassFormula))
}

/// `ζ(g) = #{(x, y) ∈ H × G : [x, y] = g}` via `Σ_{x ∈ H, xg ∈ Cl_G(x)} |C_G(x)|`.
pub fn zeta(group: &GroupTable, h: &SubgroupRef, target: ElemId) -> Result<u64> {
    h.check_parent(group)?;
    group.check_element(target)?;
    let classes = conjugacy(group, &SubgroupRef::full(group))?;
    Ok(zeta_with(group, h, target, &classes))
}

pub(crate) fn zeta_with(group: &GroupTable, h: &SubgroupRef, target: ElemId, classes: &ConjugacyInfo) -> u64 {
    h.members()
        .iter()
        .filter(|&&x| classes.same_class(group.mul(x, target), x))
        .map(|&x| classes.centralizer_order(x) as u64)
        .sum()
}

/// `ζ^{(n,m)}(g)`: the number of `(x⃗, y⃗) ∈ Hⁿ × Gᵐ` with commutator `g`,
/// from the distribution engine.
pub fn zeta_nm(group: &GroupTable, params: &CommParams<'_>) -> Result<BigUint> {
    params.validate(group)?;
    if params.k.order() != group.order() {
        return Err(Error::RequiresFullGroup);
    }
    let dist = full_distribution(group, params.h, params.k, params.n, params.m)?;
    Ok(dist.count(params.g).clone())
}

/// The set of values taken by `[x₁,…,xₙ,y₁,…,yₘ]`.
pub fn commutator_value_set(
    group: &GroupTable,
    h: &SubgroupRef,
    k: &SubgroupRef,
    n: usize,
    m: usize,
) -> Result<Vec<ElemId>> {
    Ok(full_distribution(group, h, k, n, m)?.support())
}

/// `[ₙH, ₘK]`: the subgroup generated by the commutator values.
pub fn nested_commutator_subgroup(
    group: &GroupTable,
    h: &SubgroupRef,
    k: &SubgroupRef,
    n: usize,
    m: usize,
) -> Result<SubgroupRef> {
    subgroup_closure(group, &commutator_value_set(group, h, k, n, m)?)
}

/// `d⁽ⁿ⁾(H, G) = p_1^{(n,1)}(H, G)`.
pub fn nilpotency_degree(group: &GroupTable, h: &SubgroupRef, n: usize) -> Result<ExactProb> {
    let full = SubgroupRef::full(group);
    prob_fast(group, &CommParams::new(group, h, &full, n, 1, 0)?)
}

/// `d(G)`, the probability that two elements commute.
pub fn commutativity_degree(group: &GroupTable) -> Result<ExactProb> {
    nilpotency_degree(group, &SubgroupRef::full(group), 1)
}

/// Number of x-tuples whose commutator `w` has `C_K(w) = 1`.
pub fn y_set_size(group: &GroupTable, h: &SubgroupRef, k: &SubgroupRef, n: usize) -> Result<BigUint> {
    k.check_parent(group)?;
    let dist = comm_distribution(group, h, n)?;
    let classes = conjugacy(group, k)?;
    Ok(dist
        .support()
        .into_iter()
        .filter(|&w| classes.centralizer_order(w) == 1)
        .map(|w| dist.count(w).clone())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comm::prob::{prob_brute, DEFAULT_BRUTE_CAP};
    use crate::group::{named_group, NamedGroup};
    use num_rational::BigRational;

    fn named(s: &str) -> GroupTable {
        named_group(s.parse::<NamedGroup>().unwrap(), 1000).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn of_order(g: &GroupTable, k: usize) -> ElemId {
        g.elements().find(|&x| g.element_order(x) == k).unwrap()
    }

    #[test]
    fn class_formula_at_identity() {
        let g = named("S4");
        let full = SubgroupRef::full(&g);
        let p = CommParams::new(&g, &full, &full, 2, 1, 0).unwrap();
        let dist = comm_distribution(&g, &full, 2).unwrap();
        let classes = conjugacy(&g, &full).unwrap();
        let direct: BigUint = g
            .elements()
            .map(|w| dist.count(w) * BigUint::from(classes.centralizer_order(w)))
            .sum();
        for pred in [Predicate::Derived, Predicate::Paper] {
            let v = prob_class_formula(&g, &p, pred).unwrap();
            assert_eq!(v.value, super::super::prob::ratio(direct.clone(), p.tuple_count()));
        }
    }

    #[test]
    fn class_formula_s3() {
        let g = named("S3");
        let full = SubgroupRef::full(&g);
        let c = of_order(&g, 3);
        let p = CommParams::new(&g, &full, &full, 1, 1, c).unwrap();
        assert_eq!(prob_class_formula(&g, &p, Predicate::Derived).unwrap().value, q(1, 4));
        let p = CommParams::new(&g, &full, &full, 1, 2, 0).unwrap();
        assert_eq!(prob_class_formula(&g, &p, Predicate::Derived).unwrap().value, q(66, 216));
        assert_eq!(prob_brute(&g, &p, DEFAULT_BRUTE_CAP).unwrap().value, q(162, 216));
    }

    #[test]
    fn class_formula_m1_matches_brute_on_d4_subgroups() {
        let g = named("D4");
        let subs = crate::group::all_subgroups(&g);
        for h in &subs {
            for k in &subs {
                for n in 1..=2 {
                    let counts = crate::comm::prob::brute_counts(&g, h, k, n, 1, DEFAULT_BRUTE_CAP).unwrap();
                    let x_dist = comm_distribution(&g, h, n).unwrap();
                    let f = ClassFormula::new(&g, &x_dist, k, 1).unwrap();
                    for t in g.elements() {
                        assert_eq!(f.count(t, Predicate::Derived), BigUint::from(counts[t]));
                    }
                }
            }
        }
    }

    #[test]
    fn zeta_values() {
        let g = named("S3");
        let full = SubgroupRef::full(&g);
        let c = of_order(&g, 3);
        let a3 = subgroup_closure(&g, &[c]).unwrap();
        let sum_cent: u64 = g.elements().map(|x| conjugacy(&g, &full).unwrap().centralizer_order(x) as u64).sum();
        assert_eq!(zeta(&g, &full, 0).unwrap(), sum_cent);
        assert_eq!(zeta(&g, &full, 0).unwrap(), 18);
        assert_eq!(zeta(&g, &a3, c).unwrap(), 3);
        let c5 = named("C5");
        let h = SubgroupRef::full(&c5);
        assert_eq!(zeta(&c5, &h, 2).unwrap(), 0);
    }

    #[test]
    fn zeta_nm_values() {
        let g = named("S3");
        let full = SubgroupRef::full(&g);
        let p = CommParams::new(&g, &full, &full, 1, 1, 0).unwrap();
        assert_eq!(zeta_nm(&g, &p).unwrap(), BigUint::from(18u32));
        let p = CommParams::new(&g, &full, &full, 2, 1, 0).unwrap();
        assert_eq!(zeta_nm(&g, &p).unwrap(), BigUint::from(162u32));
        let total: BigUint = g.elements().map(|t| zeta_nm(&g, &p.with_target(t)).unwrap()).sum();
        assert_eq!(total, BigUint::from(216u32));
        let a3 = subgroup_closure(&g, &[of_order(&g, 3)]).unwrap();
        let p = CommParams::new(&g, &full, &a3, 1, 1, 0).unwrap();
        assert_eq!(zeta_nm(&g, &p), Err(Error::RequiresFullGroup));
    }

    #[test]
    fn value_sets_and_nested_subgroups() {
        let g = named("S3");
        let full = SubgroupRef::full(&g);
        let mut expected: Vec<ElemId> = g.elements().filter(|&x| g.element_order(x) != 2).collect();
        expected.sort();
        assert_eq!(commutator_value_set(&g, &full, &full, 1, 1).unwrap(), expected);
        assert_eq!(nested_commutator_subgroup(&g, &full, &full, 1, 1).unwrap().order(), 3);
        let c4 = named("C4");
        let f = SubgroupRef::full(&c4);
        assert_eq!(commutator_value_set(&c4, &f, &f, 2, 2).unwrap(), vec![0]);
        assert!(nested_commutator_subgroup(&c4, &f, &f, 1, 1).unwrap().is_trivial());
    }

    #[test]
    fn nilpotency_degrees() {
        assert_eq!(commutativity_degree(&named("S3")).unwrap().value, q(1, 2));
        assert_eq!(commutativity_degree(&named("Q8")).unwrap().value, q(5, 8));
        let g = named("S3");
        assert_eq!(nilpotency_degree(&g, &SubgroupRef::full(&g), 2).unwrap().value, q(3, 4));
    }

    #[test]
    fn y_set_sizes() {
        let g = named("S3");
        let full = SubgroupRef::full(&g);
        let triv = SubgroupRef::trivial(&g);
        assert_eq!(y_set_size(&g, &full, &triv, 2).unwrap(), BigUint::from(36u32));
        assert_eq!(y_set_size(&g, &full, &full, 1).unwrap(), BigUint::zero());
        // Centralizer census in <(12)>: elements not commuting with (12) are
        // the two 3-cycles and the other two transpositions.
        let t = of_order(&g, 2);
        let k = subgroup_closure(&g, &[t]).unwrap();
        let census = g.elements().filter(|&x| g.mul(x, t) != g.mul(t, x)).count();
        assert_eq!(census, 4);
        assert_eq!(y_set_size(&g, &full, &k, 1).unwrap(), BigUint::from(census));
    }
}
