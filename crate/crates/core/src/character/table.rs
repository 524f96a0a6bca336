use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{conjugacy, ElemId, GroupTable, SubgroupRef};

/// Minimum eigenvalue separation accepted from the random class-matrix
/// combination.
pub const EIGEN_GAP_TOL: f64 = 1e-8;
/// Slack allowed when rounding to integers and checking orthogonality.
pub const ROUNDING_TOL: f64 = 1e-6;
/// Slack for comparing character formulas against exact values.
pub const FORMULA_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharTableOptions {
    pub seed: u64,
    pub max_retries: usize,
}

impl Default for CharTableOptions {
    fn default() -> Self {
        Self { seed: 0, max_retries: 20 }
    }
}

/// Irreducible complex characters of a group, one row per character and one
/// column per conjugacy class.
///
/// Tables built by [`character_table`] list classes by (size, minimal
/// element id), so the identity class is column 0, and characters by degree
/// and then by values in descending order, so the trivial character is row 0.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    group_uid: u64,
    order: usize,
    class_sizes: Vec<usize>,
    class_reps: Vec<ElemId>,
    class_of: Vec<usize>,
    identity_class: usize,
    degrees: Vec<u64>,
    values: Vec<Vec<Complex64>>,
    tolerance: f64,
}

impl CharacterTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn class_reps(&self) -> &[ElemId] {
        &self.class_reps
    }

    #[inline]
    pub fn class_of(&self, x: ElemId) -> usize {
        self.class_of[x]
    }

    pub fn identity_class(&self) -> usize {
        self.identity_class
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn irreducible_count(&self) -> usize {
        self.values.len()
    }

    /// Row `i` of the table.
    pub fn character(&self, i: usize) -> &[Complex64] {
        &self.values[i]
    }

    /// `χᵢ(x)` for an element id.
    #[inline]
    pub fn value(&self, i: usize, x: ElemId) -> Complex64 {
        self.values[i][self.class_of[x]]
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn check_group(&self, g: &GroupTable) -> Result<()> {
        if self.group_uid == g.uid() && self.order == g.order() {
            Ok(())
        } else {
            Err(Error::TableMismatch("table was built for a different group".into()))
        }
    }

    pub(crate) fn check_subgroup(&self, g: &GroupTable, h: &SubgroupRef) -> Result<()> {
        self.check_group(g)?;
        h.check_parent(g)
    }

    pub fn to_json(&self) -> CharacterTableJson {
        CharacterTableJson {
            order: self.order,
            classes: self
                .class_sizes
                .iter()
                .zip(&self.class_reps)
                .map(|(&size, &rep)| ClassJson { size, rep })
                .collect(),
            irreducibles: self
                .degrees
                .iter()
                .zip(&self.values)
                .map(|(&degree, row)| IrreducibleJson {
                    degree,
                    values: row.iter().map(|z| [z.re, z.im]).collect(),
                })
                .collect(),
        }
    }

    /// Binds an externally supplied table to `g`, checking the class data
    /// against `g` and orthogonality before accepting it.
    pub fn from_json(g: &GroupTable, json: &CharacterTableJson) -> Result<Self> {
        let mismatch = |s: String| Error::TableMismatch(s);
        if json.order != g.order() {
            return Err(mismatch(format!("order {} vs group order {}", json.order, g.order())));
        }
        let info = conjugacy(g, &SubgroupRef::full(g))?;
        let k = info.class_count();
        if json.classes.len() != k || json.irreducibles.len() != k {
            return Err(mismatch(format!("expected {k} classes and {k} irreducibles")));
        }
        let mut class_of = vec![usize::MAX; g.order()];
        for (idx, c) in json.classes.iter().enumerate() {
            g.check_element(c.rep)?;
            let members = &info.classes()[info.class_of(c.rep)];
            if members.len() != c.size {
                return Err(mismatch(format!("class of {} has size {}, not {}", c.rep, members.len(), c.size)));
            }
            for &x in members {
                if class_of[x] != usize::MAX {
                    return Err(mismatch(format!("class of {} listed twice", c.rep)));
                }
                class_of[x] = idx;
            }
        }
        let identity_class = class_of[0];
        let mut values = Vec::with_capacity(k);
        let mut degrees = Vec::with_capacity(k);
        for irr in &json.irreducibles {
            if irr.values.len() != k {
                return Err(mismatch("irreducible with wrong number of values".into()));
            }
            let row: Vec<Complex64> = irr.values.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
            if (row[identity_class] - Complex64::new(irr.degree as f64, 0.0)).norm() > ROUNDING_TOL {
                return Err(mismatch(format!("degree {} does not match value at identity", irr.degree)));
            }
            degrees.push(irr.degree);
            values.push(row);
        }
        let table = Self {
            group_uid: g.uid(),
            order: g.order(),
            class_sizes: json.classes.iter().map(|c| c.size).collect(),
            class_reps: json.classes.iter().map(|c| c.rep).collect(),
            class_of,
            identity_class,
            degrees,
            values,
            tolerance: ROUNDING_TOL,
        };
        let report = verify_orthogonality(&table);
        if !report.passed {
            return Err(Error::ToleranceExceeded(format!(
                "imported table fails orthogonality (row {:e}, column {:e})",
                report.row_deviation, report.column_deviation
            )));
        }
        Ok(table)
    }

    #[cfg(test)]
    pub(crate) fn with_values(&self, values: Vec<Vec<Complex64>>) -> Self {
        Self { values, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterTableJson {
    pub order: usize,
    pub classes: Vec<ClassJson>,
    pub irreducibles: Vec<IrreducibleJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassJson {
    pub size: usize,
    pub rep: ElemId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrreducibleJson {
    pub degree: u64,
    pub values: Vec<[f64; 2]>,
}

/// Burnside's method.
///
/// The class sums `C₁,…,C_k` span the centre of the group algebra and
/// `Cⱼ·Cᵢ = Σₗ aⱼᵢₗ Cₗ`, where `aⱼᵢₗ` counts pairs `(x ∈ Cⱼ, y ∈ Cᵢ)` with
/// `xy` equal to a fixed representative of `Cₗ`. Multiplication by `Cⱼ` has
/// the central idempotents as common eigenvectors, with eigenvalue the
/// central character `|Cⱼ|χ(gⱼ)/χ(1)`. In the basis `Cᵢ/√|Cᵢ|` the adjoint
/// of multiplication by `Cⱼ` is multiplication by `Cⱼ⁻¹`, so a random
/// combination `Σⱼ wⱼ Bⱼ` with `w_{j⁻¹} = conj(wⱼ)` is Hermitian and its
/// eigenvectors can be read off with a Hermitian solver. Characters follow
/// from the eigenvectors up to scale, and the scale from
/// `Σₗ |Cₗ|·|χ(gₗ)|² = |G|`.
pub fn character_table(g: &GroupTable, opts: CharTableOptions) -> Result<CharacterTable> {
    let info = conjugacy(g, &SubgroupRef::full(g))?;
    let mut classes: Vec<Vec<ElemId>> = info.classes().to_vec();
    classes.sort_by_key(|c| (c.len(), c[0]));
    let k = classes.len();
    let mut class_of = vec![0; g.order()];
    for (idx, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x] = idx;
        }
    }
    let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    let reps: Vec<ElemId> = classes.iter().map(|c| c[0]).collect();
    let inverse_class: Vec<usize> = reps.iter().map(|&r| class_of[g.inv(r)]).collect();

    // a[(j * k + i) * k + l]
    let mut consts = vec![0u32; k * k * k];
    for (l, &r) in reps.iter().enumerate() {
        for x in g.elements() {
            let y = g.mul(g.inv(x), r);
            consts[(class_of[x] * k + class_of[y]) * k + l] += 1;
        }
    }
    let sqrt_sizes: Vec<f64> = sizes.iter().map(|&s| (s as f64).sqrt()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut last_err = Error::DegenerateEigenbasis { attempts: 0 };
    for attempt in 0..opts.max_retries.max(1) {
        let c: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let d: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let weights: Vec<Complex64> = (0..k)
            .map(|j| {
                let jj = inverse_class[j];
                Complex64::new(c[j] + c[jj], d[j] - d[jj])
            })
            .collect();
        let mut a = DMatrix::<Complex64>::zeros(k, k);
        for j in 0..k {
            for i in 0..k {
                for l in 0..k {
                    let n = consts[(j * k + i) * k + l];
                    if n != 0 {
                        a[(l, i)] += weights[j] * (n as f64 * sqrt_sizes[l] / sqrt_sizes[i]);
                    }
                }
            }
        }
        match table_from_hermitian(g, a, &sizes, &sqrt_sizes) {
            Ok((degrees, values)) => {
                let mut rows: Vec<(u64, Vec<Complex64>)> = degrees.into_iter().zip(values).collect();
                rows.sort_by(|(da, va), (db, vb)| da.cmp(db).then_with(|| value_key(vb).cmp(&value_key(va))));
                let table = CharacterTable {
                    group_uid: g.uid(),
                    order: g.order(),
                    class_sizes: sizes.clone(),
                    class_reps: reps.clone(),
                    class_of: class_of.clone(),
                    identity_class: 0,
                    degrees: rows.iter().map(|r| r.0).collect(),
                    values: rows.into_iter().map(|r| r.1).collect(),
                    tolerance: EIGEN_GAP_TOL,
                };
                let report = verify_orthogonality(&table);
                if report.passed {
                    return Ok(table);
                }
                last_err = Error::ToleranceExceeded(format!(
                    "orthogonality deviation row {:e}, column {:e}",
                    report.row_deviation, report.column_deviation
                ));
            }
            Err(Error::DegenerateEigenbasis { .. }) => {
                last_err = Error::DegenerateEigenbasis { attempts: attempt + 1 };
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

type Rows = (Vec<u64>, Vec<Vec<Complex64>>);

fn table_from_hermitian(
    g: &GroupTable,
    a: DMatrix<Complex64>,
    sizes: &[usize],
    sqrt_sizes: &[f64],
) -> Result<Rows> {
    let k = sizes.len();
    let eig = a.symmetric_eigen();
    let mut evals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    evals.sort_by(f64::total_cmp);
    if evals.windows(2).any(|w| w[1] - w[0] < EIGEN_GAP_TOL) {
        return Err(Error::DegenerateEigenbasis { attempts: 1 });
    }
    let order = g.order() as f64;
    let mut degrees = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for col in eig.eigenvectors.column_iter() {
        let v0 = col[0];
        if v0.norm() < EIGEN_GAP_TOL {
            return Err(Error::ToleranceExceeded("eigenvector vanishes on the identity class".into()));
        }
        // χ(gₗ)/χ(1) = conj(vₗ / (v₀ √|Cₗ|))
        let ratios: Vec<Complex64> = (0..k).map(|l| (col[l] / (v0 * sqrt_sizes[l])).conj()).collect();
        let norm: f64 = ratios.iter().zip(sizes).map(|(r, &s)| s as f64 * r.norm_sqr()).sum();
        let degree_f = (order / norm).sqrt();
        let degree = degree_f.round();
        if (degree_f - degree).abs() > ROUNDING_TOL || degree < 1.0 {
            return Err(Error::ToleranceExceeded(format!("degree {degree_f} is not an integer")));
        }
        degrees.push(degree as u64);
        values.push(ratios.into_iter().map(|r| snap(r * degree)).collect());
    }
    let sum_sq: u64 = degrees.iter().map(|d| d * d).sum();
    if sum_sq != g.order() as u64 {
        return Err(Error::ToleranceExceeded(format!("sum of squared degrees {sum_sq} ≠ |G|")));
    }
    Ok((degrees, values))
}

/// Clears floating-point dust below 1e-12 so exported tables are stable.
fn snap(z: Complex64) -> Complex64 {
    let f = |x: f64| {
        let y = (x * 1e12).round() / 1e12;
        if y == 0.0 { 0.0 } else { y }
    };
    Complex64::new(f(z.re), f(z.im))
}

fn value_key(row: &[Complex64]) -> Vec<(i64, i64)> {
    let q = |x: f64| (x / ROUNDING_TOL).round() as i64;
    row.iter().map(|z| (q(z.re), q(z.im))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    pub row_deviation: f64,
    pub column_deviation: f64,
    pub passed: bool,
}

/// Largest deviation of the first and second orthogonality relations from
/// the identity; passes below [`ROUNDING_TOL`].
pub fn verify_orthogonality(table: &CharacterTable) -> OrthogonalityReport {
    let k = table.class_count();
    let r = table.irreducible_count();
    let order = table.order as f64;
    let mut row_dev: f64 = if r == k { 0.0 } else { f64::INFINITY };
    for i in 0..r {
        for j in 0..r {
            let ip: Complex64 = (0..k)
                .map(|l| table.values[i][l] * table.values[j][l].conj() * table.class_sizes[l] as f64)
                .sum::<Complex64>()
                / order;
            let target = if i == j { 1.0 } else { 0.0 };
            row_dev = row_dev.max((ip - target).norm());
        }
    }
    let mut col_dev: f64 = 0.0;
    for a in 0..k {
        for b in 0..k {
            let s: Complex64 = (0..r).map(|i| table.values[i][a] * table.values[i][b].conj()).sum();
            let scale = ((table.class_sizes[a] * table.class_sizes[b]) as f64).sqrt() / order;
            let target = if a == b { 1.0 } else { 0.0 };
            col_dev = col_dev.max((s * scale - target).norm());
        }
    }
    OrthogonalityReport {
        row_deviation: row_dev,
        column_deviation: col_dev,
        passed: row_dev < ROUNDING_TOL && col_dev < ROUNDING_TOL,
    }
}
