use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::commutator::commutator;
use super::distribution::{comm_distribution, extend_by_conjugators, CommDistribution};
use crate::error::{Error, Result};
use crate::group::{ElemId, GroupTable, SubgroupRef};

/// Default ceiling on brute-force tuple evaluations.
pub const DEFAULT_BRUTE_CAP: u128 = 100_000_000;

/// The data of one probability `p_g^{(n,m)}(H,K)`.
#[derive(Debug, Clone, Copy)]
pub struct CommParams<'a> {
    pub h: &'a SubgroupRef,
    pub k: &'a SubgroupRef,
    pub n: usize,
    pub m: usize,
    pub g: ElemId,
}

impl<'a> CommParams<'a> {
    pub fn new(
        group: &GroupTable,
        h: &'a SubgroupRef,
        k: &'a SubgroupRef,
        n: usize,
        m: usize,
        g: ElemId,
    ) -> Result<Self> {
        let p = Self { h, k, n, m, g };
        p.validate(group)?;
        Ok(p)
    }

    pub fn validate(&self, group: &GroupTable) -> Result<()> {
        self.h.check_parent(group)?;
        self.k.check_parent(group)?;
        if self.n == 0 || self.m == 0 {
            return Err(Error::InvalidWeight { n: self.n, m: self.m });
        }
        group.check_element(self.g)
    }

    pub fn with_target(self, g: ElemId) -> Self {
        Self { g, ..self }
    }

    /// `|H|ⁿ·|K|ᵐ`
    pub fn tuple_count(&self) -> BigUint {
        tuple_count(self.h, self.k, self.n, self.m)
    }
}

pub(crate) fn tuple_count(h: &SubgroupRef, k: &SubgroupRef, n: usize, m: usize) -> BigUint {
    BigUint::from(h.order()).pow(n as u32) * BigUint::from(k.order()).pow(m as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Brute,
    ClassFormula,
    Distribution,
    Character,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::ClassFormula => "class_formula",
            Method::Distribution => "distribution",
            Method::Character => "character",
        })
    }
}

/// An exact probability together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactProb {
    #[serde(with = "rational_repr")]
    pub value: BigRational,
    pub method: Method,
    pub n: usize,
    pub m: usize,
    pub g: ElemId,
    pub h_order: usize,
    pub k_order: usize,
}

impl ExactProb {
    pub fn new(count: BigUint, params: &CommParams<'_>, method: Method) -> Self {
        Self {
            value: ratio(count, params.tuple_count()),
            method,
            n: params.n,
            m: params.m,
            g: params.g,
            h_order: params.h.order(),
            k_order: params.k.order(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }
}

pub fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serializes a rational as `{"num": "...", "den": "..."}`.
pub mod rational_repr {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        num: String,
        den: String,
    }

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        Repr { num: r.numer().to_string(), den: r.denom().to_string() }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let repr = Repr::deserialize(d)?;
        let num: BigInt = repr.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = repr.den.parse().map_err(D::Error::custom)?;
        if den == BigInt::from(0) {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    }
}

/// Full histogram of `[x₁,…,xₙ,y₁,…,yₘ]` by direct enumeration of
/// `Hⁿ × Kᵐ`. Refuses work above `cap` tuples.
pub fn brute_counts(
    g: &GroupTable,
    h: &SubgroupRef,
    k: &SubgroupRef,
    n: usize,
    m: usize,
    cap: u128,
) -> Result<Vec<u64>> {
    h.check_parent(g)?;
    k.check_parent(g)?;
    if n == 0 || m == 0 {
        return Err(Error::InvalidWeight { n, m });
    }
    let needed = (h.order() as u128)
        .checked_pow(n as u32)
        .and_then(|a| (k.order() as u128).checked_pow(m as u32).and_then(|b| a.checked_mul(b)))
        .unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::BruteCapExceeded { needed, cap });
    }
    let mut slots: Vec<&[ElemId]> = vec![h.members(); n];
    slots.extend(std::iter::repeat_n(k.members(), m));
    let order = g.order();
    let counts = h
        .members()
        .par_iter()
        .fold(
            || vec![0u64; order],
            |mut acc, &first| {
                enumerate_from(g, &slots, first, &mut acc);
                acc
            },
        )
        .reduce(
            || vec![0u64; order],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts)
}

/// Odometer over slots `1..` with the first entry fixed; `prefix[i]` holds
/// the commutator of the first `i + 1` entries so each step costs O(1)
/// amortized.
fn enumerate_from(g: &GroupTable, slots: &[&[ElemId]], first: ElemId, counts: &mut [u64]) {
    let len = slots.len();
    let mut idx = vec![0usize; len];
    let mut prefix = vec![first; len];
    for i in 1..len {
        prefix[i] = commutator(g, prefix[i - 1], slots[i][0]);
    }
    loop {
        counts[prefix[len - 1]] += 1;
        let mut p = len - 1;
        loop {
            if p == 0 {
                return;
            }
            idx[p] += 1;
            if idx[p] < slots[p].len() {
                break;
            }
            idx[p] = 0;
            p -= 1;
        }
        for i in p..len {
            prefix[i] = commutator(g, prefix[i - 1], slots[i][idx[i]]);
        }
    }
}

/// Ground truth by exhaustive enumeration.
pub fn prob_brute(group: &GroupTable, params: &CommParams<'_>, cap: u128) -> Result<ExactProb> {
    params.validate(group)?;
    let counts = brute_counts(group, params.h, params.k, params.n, params.m, cap)?;
    Ok(ExactProb::new(BigUint::from(counts[params.g]), params, Method::Brute))
}

/// The final distribution over `Hⁿ × Kᵐ`.
pub fn full_distribution(
    group: &GroupTable,
    h: &SubgroupRef,
    k: &SubgroupRef,
    n: usize,
    m: usize,
) -> Result<CommDistribution> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidWeight { n, m });
    }
    extend_by_conjugators(group, &comm_distribution(group, h, n)?, k, m)
}

/// Distribution-engine evaluation; agrees exactly with [`prob_brute`].
pub fn prob_fast(group: &GroupTable, params: &CommParams<'_>) -> Result<ExactProb> {
    params.validate(group)?;
    let dist = full_distribution(group, params.h, params.k, params.n, params.m)?;
    Ok(ExactProb::new(dist.count(params.g).clone(), params, Method::Distribution))
}

/// `p_g` for every `g` from one distribution pass, indexed by element id.
pub fn prob_profile(
    group: &GroupTable,
    h: &SubgroupRef,
    k: &SubgroupRef,
    n: usize,
    m: usize,
) -> Result<Vec<ExactProb>> {
    let dist = full_distribution(group, h, k, n, m)?;
    Ok(profile_from_distribution(&dist, h, k))
}

pub fn profile_from_distribution(
    dist: &CommDistribution,
    h: &SubgroupRef,
    k: &SubgroupRef,
) -> Vec<ExactProb> {
    let (n, m) = (dist.x_slots(), dist.y_slots());
    (0..dist.counts().len())
        .map(|g| {
            let params = CommParams { h, k, n, m, g };
            ExactProb::new(dist.count(g).clone(), &params, Method::Distribution)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{named_group, NamedGroup};
    use num_traits::{One, Zero};

    fn named(s: &str) -> GroupTable {
        named_group(s.parse::<NamedGroup>().unwrap(), 1000).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn abelian_parent() {
        let g = named("C6");
        let full = SubgroupRef::full(&g);
        for (n, m) in [(1, 1), (2, 1), (1, 2)] {
            let p = CommParams::new(&g, &full, &full, n, m, 0).unwrap();
            assert!(prob_brute(&g, &p, DEFAULT_BRUTE_CAP).unwrap().value.is_one());
            assert!(prob_fast(&g, &p).unwrap().value.is_one());
            let p = p.with_target(3);
            assert!(prob_brute(&g, &p, DEFAULT_BRUTE_CAP).unwrap().value.is_zero());
            assert!(prob_fast(&g, &p).unwrap().value.is_zero());
        }
    }

    #[test]
    fn s3_values() {
        let g = named("S3");
        let full = SubgroupRef::full(&g);
        let cyc = g.elements().find(|&x| g.element_order(x) == 3).unwrap();
        let tr = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        let p = CommParams::new(&g, &full, &full, 1, 1, cyc).unwrap();
        assert_eq!(prob_brute(&g, &p, DEFAULT_BRUTE_CAP).unwrap().value, q(1, 4));
        assert_eq!(prob_fast(&g, &p).unwrap().value, q(1, 4));
        let p = p.with_target(tr);
        assert_eq!(prob_fast(&g, &p).unwrap().value, q(0, 1));
        let p = CommParams::new(&g, &full, &full, 1, 2, 0).unwrap();
        assert_eq!(prob_fast(&g, &p).unwrap().value, q(3, 4));
        assert_eq!(prob_brute(&g, &p, DEFAULT_BRUTE_CAP).unwrap().value, q(162, 216));
    }

    #[test]
    fn brute_cap_enforced() {
        let g = named("S4");
        let full = SubgroupRef::full(&g);
        let p = CommParams::new(&g, &full, &full, 2, 2, 0).unwrap();
        assert!(matches!(prob_brute(&g, &p, 1000), Err(Error::BruteCapExceeded { .. })));
    }

    #[test]
    fn params_validation() {
        let g = named("S3");
        let full = SubgroupRef::full(&g);
        assert!(CommParams::new(&g, &full, &full, 0, 1, 0).is_err());
        assert!(CommParams::new(&g, &full, &full, 1, 0, 0).is_err());
        assert!(CommParams::new(&g, &full, &full, 1, 1, 6).is_err());
        let other = named("S3");
        let foreign = SubgroupRef::full(&other);
        assert_eq!(CommParams::new(&g, &foreign, &full, 1, 1, 0).unwrap_err(), Error::ForeignSubgroup);
    }

    #[test]
    fn profile_sums_to_one() {
        let g = named("S3");
        let full = SubgroupRef::full(&g);
        let prof = prob_profile(&g, &full, &full, 1, 1).unwrap();
        let total: BigRational = prof.iter().map(|p| p.value.clone()).sum();
        assert!(total.is_one());
        assert_eq!(prof[0].value, q(1, 2));
        for p in &prof {
            let exp = match g.element_order(p.g) {
                1 => q(1, 2),
                3 => q(1, 4),
                _ => q(0, 1),
            };
            assert_eq!(p.value, exp);
        }
    }

    #[test]
    fn json_value_shape() {
        let g = named("S3");
        let full = SubgroupRef::full(&g);
        let p = prob_fast(&g, &CommParams::new(&g, &full, &full, 1, 1, 0).unwrap()).unwrap();
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(json["value"]["num"], "1");
        assert_eq!(json["value"]["den"], "2");
        assert_eq!(json["method"], "distribution");
        let back: ExactProb = serde_json::from_value(json).unwrap();
        assert_eq!(back, p);
    }
}
