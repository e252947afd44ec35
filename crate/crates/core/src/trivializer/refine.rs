//! P ↦ P̃ with P̃ ∈ GL(A^G) and the off-diagonal entries of P·P̃ in J^N.

use crate::error::{Error, Result};
use crate::graded_algebra::{AlgebraElem, ToricGAlgebra};
use crate::graded_linalg::{mat, ElemMat};

#[derive(Clone, Debug)]
pub struct Refined {
    pub p_tilde: ElemMat,
    pub p_tilde_inv: ElemMat,
    /// P·P̃.
    pub product: ElemMat,
}

fn off_diagonal_in_j_power(alg: &ToricGAlgebra, a: &ElemMat, n: u32) -> Result<bool> {
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j && !alg.ideal_j_power_member(x, n)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// P must have invariant entries and be invertible modulo every
/// codimension-1 face ideal of the algebra's cone.
pub fn refine_matrix(alg: &ToricGAlgebra, p: &ElemMat, n: u32) -> Result<Refined> {
    let d = alg.rank();
    let m = p.len();
    for (i, row) in p.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !alg.is_invariant(x) || !alg.is_member(x) {
                return Err(Error::PreconditionFailed(format!("entry ({i},{j}) = {x} is not in A^G")));
            }
        }
    }
    let one = |n| mat::map(&mat::identity(n, d), |x| x.in_ring(&alg.coeff));
    let mut cur = p.clone();
    let mut pt = one(m);
    let mut pt_inv = one(m);

    // step 1: divide out the face retractions until cur ≡ I mod J
    for tau in alg.cone().codim1_faces() {
        let pi = mat::map(&cur, |x| alg.face_restrict(&tau, x));
        let det = mat::det(&pi, d);
        let inv = alg
            .unit_inverse(&det)
            .ok_or_else(|| Error::PreconditionFailed(format!("matrix is not invertible on a codimension-1 face (det {det})")))?;
        let pi_inv = mat::scale(&mat::adjugate(&pi, d), &inv);
        cur = mat::mul(&cur, &pi_inv);
        pt = mat::mul(&pt, &pi_inv);
        pt_inv = mat::mul(&pi, &pt_inv);
    }
    let residue = mat::sub(&cur, &one(m));
    if !residue.iter().flatten().all(|x| alg.in_j(x)) {
        return Err(Error::Internal("face corrections did not reach the identity modulo J".into()));
    }

    // induction: C_i ← C_i − cur_{ji}·C_j pushes off-diagonals one power deeper
    let mut level = 1;
    while level < n && !off_diagonal_in_j_power(alg, &cur, n)? {
        let mut pairs: Vec<(usize, usize)> = vec![];
        for j in 0..m {
            for i in j + 1..m {
                pairs.push((j, i));
            }
        }
        for j in 1..m {
            for i in 0..j {
                pairs.push((j, i));
            }
        }
        for (j, i) in pairs {
            // terms already in J^N need no killing; dropping them keeps P̃ small
            let q = below_j_power(alg, &cur[j][i], n)?;
            if q.is_zero() {
                continue;
            }
            column_axpy(&mut cur, i, j, &q);
            column_axpy(&mut pt, i, j, &q);
            // inverse: R_j ← R_j + q·R_i
            for c in 0..m {
                let add = &q * &pt_inv[i][c];
                pt_inv[j][c] = &pt_inv[j][c] + &add;
            }
        }
        level += 1;
    }

    if !mat::is_identity(&mat::mul(&pt, &pt_inv)) {
        return Err(Error::Internal("refinement lost track of its inverse".into()));
    }
    if !alg.is_unit(&mat::det(&pt, d)) && m > 0 {
        return Err(Error::Internal("refined matrix has non-unit determinant".into()));
    }
    if !off_diagonal_in_j_power(alg, &cur, n)? {
        return Err(Error::Internal(format!("off-diagonal entries of P·P̃ are not in J^{n}")));
    }
    Ok(Refined { p_tilde: pt, p_tilde_inv: pt_inv, product: cur })
}

/// The terms of x whose monomials are not in J^n.
fn below_j_power(alg: &ToricGAlgebra, x: &AlgebraElem, n: u32) -> Result<AlgebraElem> {
    let mut out = AlgebraElem::zero();
    for (m, c) in x.terms() {
        let mono = AlgebraElem::monomial(m.clone(), c.clone());
        if !alg.ideal_j_power_member(&mono, n)? {
            out.add_term(m.clone(), c.clone());
        }
    }
    Ok(out)
}

// C_i ← C_i − q·C_j
fn column_axpy(a: &mut ElemMat, i: usize, j: usize, q: &AlgebraElem) {
    for row in a.iter_mut() {
        let sub = q * &row[j];
        row[i] = &row[i] - &sub;
    }
}
