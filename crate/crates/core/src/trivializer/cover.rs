//! Descent of weight-0 matrices to A^G and the splitting of an automorphism
//! over R[t, 1/(th)] into a factor over R[t^{±1}] and one over R[t]_h.

use crate::error::{Error, Result};
use crate::euclid::{diagonalize, PolyCtx, UniPoly};
use crate::graded_algebra::{AlgebraElem, ToricGAlgebra};
use crate::graded_linalg::{mat, ElemMat, GradedMatrix};
use crate::scalar::CoeffRing;

use super::axis::{from_poly, mat_from_poly, mat_to_poly, min_t_exponent, t_pow, to_poly};

/// Reads a map between weight-0 free modules as a matrix over A^G.
pub fn descend(alg: &ToricGAlgebra, f: &GradedMatrix) -> Result<ElemMat> {
    if f.source.iter().chain(&f.target).any(|w| !alg.group.is_zero(w)) {
        return Err(Error::NotInvariant("source and target weights must all be 0".into()));
    }
    for (i, row) in f.entries.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !alg.is_invariant(x) || !alg.is_member(x) {
                return Err(Error::NotInvariant(format!("entry ({i},{j}) = {x} is not an invariant of A")));
            }
        }
    }
    Ok(f.entries.clone())
}

/// f = f2·f1 with f2 = P / h^s over R[t]_h and f1 invertible over R[t^{±1}].
#[derive(Clone, Debug)]
pub struct CoverFactors {
    pub p: ElemMat,
    pub s: u32,
    pub f1: ElemMat,
    pub f1_inv: ElemMat,
}

/// u divides a power of h in R[t].
fn divides_power_of(u: &UniPoly, h: &UniPoly, ring: &CoeffRing) -> bool {
    let k = u.degree().unwrap_or(0) + 1;
    h.pow(k).div_exact(u, ring).is_some()
}

fn poly(x: &AlgebraElem) -> UniPoly {
    to_poly(x, 0)
}

fn unsupported(msg: &str) -> Error {
    Error::UnsupportedFactorization(msg.into())
}

/// Factors f = F / (t^a·h^b) where F is polynomial in one variable and h(0) = 1.
/// All matrices are over R[t^{±1}] written with one exponent coordinate.
pub fn factor_cover(ring: &CoeffRing, big_f: &ElemMat, a: i64, h: &AlgebraElem, b: u32) -> Result<CoverFactors> {
    let n = big_f.len();
    if min_t_exponent(big_f) < 0 || h.support().any(|m| m[0] < 0) {
        return Err(Error::PreconditionFailed("cover factorization needs polynomial inputs".into()));
    }
    let hp = poly(h);
    let hb = h.pow(b, 1);
    let det_f = mat::det(big_f, 1);
    if det_f.is_zero() {
        return Err(Error::PreconditionFailed("matrix to factor is singular".into()));
    }
    let out = if let Some(c) = try_left_trivial(ring, big_f, a, &hp, &det_f, b) {
        c
    } else if let Some(c) = try_right_trivial(ring, big_f, a, &hb, b) {
        c
    } else {
        general(ring, big_f, a, &hp, b)?
    };
    let prod = mat::mul(&out.p, &out.f1);
    if mat::map(&prod, |x| x.shift(&[a])) != *big_f || !mat::is_identity(&mat::mul(&out.f1, &out.f1_inv)) {
        return Err(Error::Internal("cover factors do not multiply back".into()));
    }
    debug_assert_eq!(out.p.len(), n);
    Ok(out)
}

// f1 = I: t^a | F and det(F/t^a) divides a power of h.
fn try_left_trivial(ring: &CoeffRing, big_f: &ElemMat, a: i64, hp: &UniPoly, det_f: &AlgebraElem, b: u32) -> Option<CoverFactors> {
    let n = big_f.len() as i64;
    if min_t_exponent(big_f) < a {
        return None;
    }
    let dp = to_poly(det_f, -a * n);
    if dp.eval_zero().is_zero() || !divides_power_of(&dp, hp, ring) {
        return None;
    }
    let id = mat::identity(big_f.len(), 1);
    Some(CoverFactors { p: mat::map(big_f, |x| x.shift(&[-a])), s: b, f1: id.clone(), f1_inv: id })
}

// f2 = I: h^b | F and det(F/h^b) is a unit monomial.
fn try_right_trivial(ring: &CoeffRing, big_f: &ElemMat, a: i64, hb: &AlgebraElem, b: u32) -> Option<CoverFactors> {
    let q: ElemMat = big_f
        .iter()
        .map(|r| r.iter().map(|x| x.exact_div(hb, ring)).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    let dq = mat::det(&q, 1);
    let inv = mat::laurent_unit_inverse(&dq, |c| ring.is_unit(c))?;
    let f1 = mat::map(&q, |x| x.shift(&[-a]));
    let f1_inv = mat::scale(&mat::adjugate(&f1, 1), &inv.shift(&[a * big_f.len() as i64]));
    Some(CoverFactors { p: mat::map(&mat::identity(big_f.len(), 1), |x| x * hb), s: b, f1, f1_inv })
}

// X F Y = diag(t^{α_i} u_i) with every u_i dividing a power of h.
fn general(ring: &CoeffRing, big_f: &ElemMat, a: i64, hp: &UniPoly, b: u32) -> Result<CoverFactors> {
    let n = big_f.len();
    let dg = diagonalize(&PolyCtx { ring: *ring }, &mat_to_poly(big_f, 0), false)
        .map_err(|_| unsupported("elimination over R[t] stalls"))?;
    if dg.diag.len() < n || dg.diag.iter().any(|p| p.is_zero()) {
        return Err(unsupported("diagonal form is not of full rank"));
    }
    let mut u_diag = mat::zeros(n, n);
    let mut t_diag = mat::zeros(n, n);
    let mut t_diag_inv = mat::zeros(n, n);
    for (i, delta) in dg.diag.iter().enumerate() {
        let alpha = delta.valuation();
        let u = delta.shift_down(alpha);
        if !divides_power_of(&u, hp, ring) {
            return Err(unsupported(&format!("diagonal entry {delta} has a factor that is a unit on neither chart")));
        }
        u_diag[i][i] = from_poly(&u, 0);
        t_diag[i][i] = t_pow(alpha as i64 - a);
        t_diag_inv[i][i] = t_pow(a - alpha as i64);
    }
    let x_inv = mat_from_poly(&dg.x_inv, 0);
    let y = mat_from_poly(&dg.y, 0);
    let y_inv = mat_from_poly(&dg.y_inv, 0);
    Ok(CoverFactors {
        p: mat::mul(&x_inv, &u_diag),
        s: b,
        f1: mat::mul(&t_diag, &y_inv),
        f1_inv: mat::mul(&y, &t_diag_inv),
    })
}
