//! Lifting an isomorphism mod J to an isomorphism over A_h.

use crate::error::{Error, Result};
use crate::graded_algebra::{AlgebraElem, ToricGAlgebra};
use crate::graded_linalg::{mat, ElemMat};

/// S_h = num / h and T over A_h, with S_h·T = I and T·S_h = e.
#[derive(Clone, Debug)]
pub(crate) struct Extension {
    /// det(S̄·e·T̄); invariant and ≡ 1 mod J.
    pub h: AlgebraElem,
    /// adj(S̄·e·T̄)·S̄·e.
    pub num: ElemMat,
    /// e·T̄.
    pub t: ElemMat,
}

pub(crate) fn extend_h(alg: &ToricGAlgebra, e: &ElemMat, sbar: &ElemMat, tbar: &ElemMat) -> Result<Extension> {
    let d = alg.rank();
    let r = sbar.len();
    let se = mat::mul(sbar, e);
    let m = super::mul_to(&se, tbar, r);
    let h = mat::det(&m, d).in_ring(&alg.coeff);
    if h.is_zero() {
        return Err(Error::DegenerateLift);
    }
    if !alg.is_invariant(&h) {
        return Err(Error::Internal(format!("h = {h} is not invariant")));
    }
    if !alg.in_j(&(&h - &alg.one())) {
        return Err(Error::Internal(format!("h = {h} is not congruent to 1 modulo J")));
    }
    let num = if r == 0 { vec![] } else { mat::mul(&mat::adjugate(&m, d), &se) };
    Ok(Extension { h, num, t: super::mul_to(e, tbar, r) })
}

impl Extension {
    /// The isomorphism over A itself when h is a unit.
    pub fn over_a(&self, alg: &ToricGAlgebra) -> Option<(ElemMat, ElemMat)> {
        let inv = alg.unit_inverse(&self.h)?;
        Some((mat::scale(&self.num, &inv), self.t.clone()))
    }
}
