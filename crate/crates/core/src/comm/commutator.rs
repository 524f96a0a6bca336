use crate::error::{Error, Result};
use crate::group::{ElemId, GroupTable};

/// `[x, y] = x⁻¹ y⁻¹ x y`, so that `[x, y]⁻¹ = [y, x]`.
#[inline]
pub fn commutator(g: &GroupTable, x: ElemId, y: ElemId) -> ElemId {
    g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y))
}

/// `[x₁, …, xₖ] = [[x₁, …, xₖ₋₁], xₖ]`, with `[x₁] = x₁`.
pub fn left_normed_commutator(g: &GroupTable, xs: &[ElemId]) -> Result<ElemId> {
    let (&first, rest) = xs.split_first().ok_or(Error::EmptyTuple)?;
    for &x in xs {
        g.check_element(x)?;
    }
    Ok(rest.iter().fold(first, |acc, &x| commutator(g, acc, x)))
}
