use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::table::{CharacterTable, FORMULA_TOL, ROUNDING_TOL};
use crate::comm::{zeta_with, CommParams, ExactProb, Method};
use crate::error::{Error, Result};
use crate::group::{conjugacy, is_normal, ElemId, GroupTable, SubgroupRef};

/// A function on the conjugacy classes of `G`, indexed in table order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassFunction {
    values: Vec<Complex64>,
}

impl ClassFunction {
    pub fn new(table: &CharacterTable, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != table.class_count() {
            return Err(Error::TableMismatch(format!(
                "{} values for {} classes",
                values.len(),
                table.class_count()
            )));
        }
        Ok(Self { values })
    }

    /// Lifts per-element counts to a class function, refusing input that is
    /// not constant on classes. Returns the offending class on failure.
    pub fn from_counts(table: &CharacterTable, counts: &[BigUint]) -> Result<Self> {
        if counts.len() != table.order() {
            return Err(Error::TableMismatch("count vector has the wrong length".into()));
        }
        let reps = table.class_reps();
        for (x, c) in counts.iter().enumerate() {
            let class = table.class_of(x);
            if *c != counts[reps[class]] {
                return Err(Error::NonClassFunction { class });
            }
        }
        let values = reps
            .iter()
            .map(|&r| Complex64::new(counts[r].to_f64().unwrap_or(f64::INFINITY), 0.0))
            .collect();
        Ok(Self { values })
    }

    /// `Σᵢ cᵢ χᵢ`.
    pub fn combination(table: &CharacterTable, coeffs: &[f64]) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); table.class_count()];
        for (i, &c) in coeffs.iter().enumerate() {
            for (v, chi) in values.iter_mut().zip(table.character(i)) {
                *v += chi * c;
            }
        }
        Self { values }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// `⟨f, χᵢ⟩` for every irreducible.
pub fn decompose(f: &ClassFunction, table: &CharacterTable) -> Vec<Complex64> {
    let order = table.order() as f64;
    let sizes = table.class_sizes();
    (0..table.irreducible_count())
        .map(|i| {
            f.values
                .iter()
                .zip(table.character(i))
                .zip(sizes)
                .map(|((fv, chi), &s)| fv * chi.conj() * s as f64)
                .sum::<Complex64>()
                / order
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterCheck {
    pub is_character: bool,
    pub multiplicities: Vec<[f64; 2]>,
    pub rounded: Vec<i64>,
    /// Largest distance of a multiplicity from its rounding.
    pub rounding_error: f64,
    /// Largest deviation of the rounded combination from `f`.
    pub reconstruction_error: f64,
}

pub fn is_character(f: &ClassFunction, table: &CharacterTable) -> CharacterCheck {
    let mults = decompose(f, table);
    let rounded: Vec<i64> = mults.iter().map(|z| z.re.round() as i64).collect();
    let rounding_error = mults
        .iter()
        .zip(&rounded)
        .map(|(z, &r)| (z - Complex64::new(r as f64, 0.0)).norm())
        .fold(0.0, f64::max);
    let coeffs: Vec<f64> = rounded.iter().map(|&r| r as f64).collect();
    let rebuilt = ClassFunction::combination(table, &coeffs);
    let reconstruction_error = rebuilt
        .values
        .iter()
        .zip(&f.values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    CharacterCheck {
        is_character: rounding_error < ROUNDING_TOL
            && reconstruction_error < ROUNDING_TOL
            && rounded.iter().all(|&r| r >= 0),
        multiplicities: mults.iter().map(|z| [z.re, z.im]).collect(),
        rounded,
        rounding_error,
        reconstruction_error,
    }
}

fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > FORMULA_TOL {
        Err(Error::ImaginaryResidue { residue: z.im })
    } else {
        Ok(z.re)
    }
}

/// `p_g(G) = (1/|G|) Σ_χ χ(g)/χ(1)`.
pub fn prob_char_pg(group: &GroupTable, table: &CharacterTable, g: ElemId) -> Result<f64> {
    table.check_group(group)?;
    group.check_element(g)?;
    let sum: Complex64 = (0..table.irreducible_count())
        .map(|i| table.value(i, g) / table.degrees()[i] as f64)
        .sum();
    real_part(sum / group.order() as f64)
}

/// `⟨χ_H, χ_H⟩_H` for the irreducible in row `chi`.
pub fn restriction_norm(group: &GroupTable, table: &CharacterTable, chi: usize, h: &SubgroupRef) -> Result<f64> {
    table.check_subgroup(group, h)?;
    check_row(table, chi)?;
    let sum: f64 = h.members().iter().map(|&x| table.value(chi, x).norm_sqr()).sum();
    Ok(sum / h.order() as f64)
}

/// `(1/(|H||G|)) Σ_χ (|H|⟨χ_H,χ_H⟩/χ(1)) χ(g)` for normal `H`.
pub fn prob_char_relative(group: &GroupTable, table: &CharacterTable, h: &SubgroupRef, g: ElemId) -> Result<f64> {
    table.check_subgroup(group, h)?;
    group.check_element(g)?;
    if !is_normal(group, h)? {
        return Err(Error::NotNormal);
    }
    let hord = h.order() as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..table.irreducible_count() {
        let e = restriction_norm(group, table, i, h)?;
        sum += table.value(i, g) * (hord * e / table.degrees()[i] as f64);
    }
    real_part(sum / (hord * group.order() as f64))
}

/// True iff `χ` is zero (within tolerance) everywhere off `H`.
pub fn vanishes_outside(group: &GroupTable, table: &CharacterTable, chi: usize, h: &SubgroupRef) -> Result<bool> {
    table.check_subgroup(group, h)?;
    check_row(table, chi)?;
    Ok(group
        .elements()
        .filter(|&x| !h.contains(x))
        .all(|x| table.value(chi, x).norm() < FORMULA_TOL))
}

fn check_row(table: &CharacterTable, chi: usize) -> Result<()> {
    if chi < table.irreducible_count() {
        Ok(())
    } else {
        Err(Error::TableMismatch(format!("no irreducible with index {chi}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiDecomposition {
    /// `ψ(g) = #{(x, y) ∈ G × G : [x, y] = g}`, one value per element.
    pub counts: Vec<u64>,
    pub function: ClassFunction,
    pub multiplicities: Vec<[f64; 2]>,
    /// `|G|/χ(1)` per irreducible.
    pub expected: Vec<u64>,
    pub max_deviation: f64,
}

pub fn psi_class_function(group: &GroupTable, table: &CharacterTable) -> Result<PsiDecomposition> {
    table.check_group(group)?;
    let full = SubgroupRef::full(group);
    let classes = conjugacy(group, &full)?;
    let counts: Vec<u64> = group.elements().map(|g| zeta_with(group, &full, g, &classes)).collect();
    let big: Vec<BigUint> = counts.iter().map(|&c| BigUint::from(c)).collect();
    let function = ClassFunction::from_counts(table, &big)?;
    let mults = decompose(&function, table);
    let expected: Vec<u64> = table.degrees().iter().map(|&d| group.order() as u64 / d).collect();
    let max_deviation = mults
        .iter()
        .zip(&expected)
        .map(|(z, &e)| (z - Complex64::new(e as f64, 0.0)).norm())
        .fold(0.0, f64::max);
    Ok(PsiDecomposition {
        counts,
        function,
        multiplicities: mults.iter().map(|z| [z.re, z.im]).collect(),
        expected,
        max_deviation,
    })
}

/// Character-formula evaluation of `p_g^{(1,1)}(H, G)` turned back into an
/// exact rational by rounding `p·|H|·|G|`. Covers `H = K = G` and normal
/// `H` with `K = G`.
pub fn prob_char_exact(group: &GroupTable, table: &CharacterTable, params: &CommParams<'_>) -> Result<ExactProb> {
    params.validate(group)?;
    table.check_group(group)?;
    if params.n != 1 || params.m != 1 || params.k.order() != group.order() {
        return Err(Error::ConfigInvalid(
            "character formulas need n = m = 1 and K = G".into(),
        ));
    }
    let p = if params.h.order() == group.order() {
        prob_char_pg(group, table, params.g)?
    } else {
        prob_char_relative(group, table, params.h, params.g)?
    };
    let scaled = p * (params.h.order() * group.order()) as f64;
    let count = scaled.round();
    if (scaled - count).abs() > ROUNDING_TOL || count < 0.0 {
        return Err(Error::ToleranceExceeded(format!("{scaled} is not an integer count")));
    }
    Ok(ExactProb::new(BigUint::from(count as u64), params, Method::Character))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::{character_table, CharTableOptions};
    use crate::comm::{prob_fast, zeta};
    use crate::group::{named_group, subgroup_closure, NamedGroup};

    fn named(s: &str) -> GroupTable {
        named_group(s.parse::<NamedGroup>().unwrap(), 1000).unwrap()
    }

    fn table(g: &GroupTable) -> CharacterTable {
        character_table(g, CharTableOptions::default()).unwrap()
    }

    fn of_order(g: &GroupTable, k: usize) -> ElemId {
        g.elements().find(|&x| g.element_order(x) == k).unwrap()
    }

    #[test]
    fn eq3_on_s3() {
        let g = named("S3");
        let t = table(&g);
        assert!((prob_char_pg(&g, &t, 0).unwrap() - 0.5).abs() < 1e-9);
        assert!((prob_char_pg(&g, &t, of_order(&g, 3)).unwrap() - 0.25).abs() < 1e-9);
        assert!(prob_char_pg(&g, &t, of_order(&g, 2)).unwrap().abs() < 1e-9);
    }

    #[test]
    fn eq3_matches_exact_engine() {
        for name in ["D4", "Q8", "A4", "D5"] {
            let g = named(name);
            let t = table(&g);
            let full = SubgroupRef::full(&g);
            for x in g.elements() {
                let exact = prob_fast(&g, &CommParams::new(&g, &full, &full, 1, 1, x).unwrap()).unwrap();
                assert!((prob_char_pg(&g, &t, x).unwrap() - exact.to_f64()).abs() < FORMULA_TOL);
            }
        }
    }

    #[test]
    fn psi_on_s3() {
        let g = named("S3");
        let t = table(&g);
        let psi = psi_class_function(&g, &t).unwrap();
        let vals: Vec<f64> = psi.function.values().iter().map(|z| z.re).collect();
        assert_eq!(vals, vec![18.0, 9.0, 0.0]);
        assert_eq!(psi.expected, vec![6, 6, 3]);
        assert!(psi.max_deviation < 1e-6);
        assert_eq!(psi.counts.iter().sum::<u64>(), 36);
    }

    #[test]
    fn psi_abelian() {
        let g = named("C4");
        let psi = psi_class_function(&g, &table(&g)).unwrap();
        assert_eq!(psi.counts, vec![16, 0, 0, 0]);
        assert_eq!(psi.expected, vec![4; 4]);
    }

    #[test]
    fn restriction_norms() {
        let g = named("S3");
        let t = table(&g);
        let a3 = subgroup_closure(&g, &[of_order(&g, 3)]).unwrap();
        assert!((restriction_norm(&g, &t, 2, &a3).unwrap() - 2.0).abs() < 1e-9);
        assert!((restriction_norm(&g, &t, 2, &SubgroupRef::full(&g)).unwrap() - 1.0).abs() < 1e-9);
        assert!((restriction_norm(&g, &t, 2, &SubgroupRef::trivial(&g)).unwrap() - 4.0).abs() < 1e-9);
        let other = named("S3");
        assert_eq!(
            restriction_norm(&g, &t, 0, &SubgroupRef::full(&other)).unwrap_err(),
            Error::ForeignSubgroup
        );
    }

    #[test]
    fn eq7_on_s3() {
        let g = named("S3");
        let t = table(&g);
        let a3 = subgroup_closure(&g, &[of_order(&g, 3)]).unwrap();
        let c = of_order(&g, 3);
        assert!((prob_char_relative(&g, &t, &a3, c).unwrap() - 1.0 / 6.0).abs() < 1e-9);
        assert!(prob_char_relative(&g, &t, &a3, of_order(&g, 2)).unwrap().abs() < 1e-9);
        assert_eq!(zeta(&g, &a3, c).unwrap(), 3);
        let full = SubgroupRef::full(&g);
        assert!((prob_char_relative(&g, &t, &full, c).unwrap() - 0.25).abs() < 1e-9);
        let c2 = subgroup_closure(&g, &[of_order(&g, 2)]).unwrap();
        assert_eq!(prob_char_relative(&g, &t, &c2, 0).unwrap_err(), Error::NotNormal);

        let p = CommParams::new(&g, &a3, &full, 1, 1, c).unwrap();
        let exact = prob_char_exact(&g, &t, &p).unwrap();
        assert_eq!(exact.value, num_rational::BigRational::new(1.into(), 6.into()));
        assert_eq!(exact.method, Method::Character);
    }

    #[test]
    fn synthetic_decomposition() {
        let g = named("S3");
        let t = table(&g);
        let f = ClassFunction::combination(&t, &[1.0, 2.0, 0.0]);
        let check = is_character(&f, &t);
        assert!(check.is_character);
        assert_eq!(check.rounded, vec![1, 2, 0]);
        let half = ClassFunction::combination(&t, &[0.5, 0.0, 0.0]);
        assert!(!is_character(&half, &t).is_character);
        let neg = ClassFunction::combination(&t, &[-1.0, 0.0, 0.0]);
        assert!(!is_character(&neg, &t).is_character);
    }

    #[test]
    fn non_constant_counts_rejected() {
        let g = named("S3");
        let t = table(&g);
        let mut counts = vec![BigUint::from(0u32); 6];
        counts[of_order(&g, 2)] = BigUint::from(1u32);
        assert!(matches!(ClassFunction::from_counts(&t, &counts), Err(Error::NonClassFunction { .. })));
    }

    #[test]
    fn vanishing() {
        let g = named("S3");
        let t = table(&g);
        let a3 = subgroup_closure(&g, &[of_order(&g, 3)]).unwrap();
        assert!(vanishes_outside(&g, &t, 0, &SubgroupRef::full(&g)).unwrap());
        assert!(!vanishes_outside(&g, &t, 0, &a3).unwrap());
        assert!(vanishes_outside(&g, &t, 2, &a3).unwrap());
    }
}
