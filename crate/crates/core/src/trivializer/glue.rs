//! Gluing the torus-side isomorphism with the one over A_h when h is not a
//! unit. Here A^G_τ = R[t] with t = e_κ interior, the torus is the t ≠ 0
//! chart and the overlap is t·h ≠ 0.

use crate::error::{Error, Result};
use crate::graded_algebra::ToricGAlgebra;
use crate::graded_linalg::{mat, ElemMat, GradedMatrix};
use crate::lattice::{group_kernel, to_small, GroupElem, IntMat};
use crate::monoid::Point;

use super::axis::{min_t_exponent, Axis};
use super::cover::factor_cover;
use super::extend::Extension;
use super::refine::refine_matrix;
use super::torus::torus_iso;

#[derive(Clone, Debug)]
pub(crate) struct GlueRecord {
    pub kappa: Point,
    pub n: u32,
    pub s: u32,
    pub p: ElemMat,
    pub p_tilde: ElemMat,
}

fn sub(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// D⁻¹·X·D for D = diag(e_{w_k}).
fn conj_inv(x: &ElemMat, w: &[Point]) -> ElemMat {
    x.iter().enumerate().map(|(k, row)| row.iter().enumerate().map(|(l, v)| v.shift(&sub(&w[l], &w[k]))).collect()).collect()
}

/// D·X·D⁻¹.
fn conj(x: &ElemMat, w: &[Point]) -> ElemMat {
    x.iter().enumerate().map(|(k, row)| row.iter().enumerate().map(|(l, v)| v.shift(&sub(&w[k], &w[l]))).collect()).collect()
}

/// The weight-0 sublattice of span(τ) ∩ L as an interior ray, if it has rank 1.
pub(crate) fn invariant_axis(alg: &ToricGAlgebra, span: &IntMat) -> Result<Axis> {
    let psi_l = alg.psi.mul(span);
    let kern: Vec<Point> = span
        .mul(&group_kernel(&psi_l, &alg.group))
        .to_cols()
        .iter()
        .map(|c| to_small(c).expect("kernel vector fits"))
        .filter(|c| c.iter().any(|&v| v != 0))
        .collect();
    if kern.len() >= 2 {
        return Err(Error::Unsupported {
            step: "factor_cover".into(),
            reason: format!("the invariant ring of the face has {} independent generators", kern.len()),
        });
    }
    let Some(k) = kern.into_iter().next() else {
        return Err(Error::Internal("non-unit h although the face has no invariants".into()));
    };
    let minus: Point = k.iter().map(|v| -v).collect();
    if alg.is_interior(&k) {
        Ok(Axis::new(k))
    } else if alg.is_interior(&minus) {
        Ok(Axis::new(minus))
    } else {
        Err(Error::Internal("non-unit h although no invariant monomial is interior".into()))
    }
}

/// Returns S: E → F, T: F → E over A_τ and the gluing data.
pub(crate) fn glue(alg: &ToricGAlgebra, span: &IntMat, e: &GradedMatrix, weights: &[GroupElem], ext: &Extension) -> Result<(ElemMat, ElemMat, GlueRecord)> {
    let d = alg.rank();
    let r = weights.len();
    let axis = invariant_axis(alg, span)?;
    let torus = torus_iso(alg, span, e, Some(weights))?;
    let w = &torus.w;

    let phi = conj(&super::mul_to(&ext.num, &torus.t, r), w);
    let off_axis = || Error::Internal("weight-0 matrix leaves the invariant axis".into());
    let phi_t = axis.mat_to_t(&phi).ok_or_else(off_axis)?;
    let h_t = axis.to_t(&ext.h).ok_or_else(off_axis)?;
    let a = (-min_t_exponent(&phi_t)).max(0);
    let big_f = mat::map(&phi_t, |x| x.shift(&[a]));
    let cf = factor_cover(&alg.coeff, &big_f, a, &h_t, 1)?;

    let p = mat::map(&axis.mat_from_t(&cf.p), |x| x.in_ring(&alg.coeff));
    let mut n = 1;
    for k in 0..r {
        for l in 0..r {
            if k != l {
                n = n.max(alg.large_n(&sub(&w[k], &w[l]))?);
            }
        }
    }
    let refined = refine_matrix(alg, &p, n)?;
    let f1 = axis.mat_from_t(&cf.f1);
    let f1_inv = axis.mat_from_t(&cf.f1_inv);

    let theta1 = conj_inv(&mat::mul(&refined.p_tilde_inv, &f1), w);
    let theta1_inv = conj_inv(&mat::mul(&f1_inv, &refined.p_tilde), w);
    let s = mat::mul(&theta1, &torus.s);
    let t = super::mul_to(&torus.t, &theta1_inv, r);
    for (i, row) in s.iter().chain(&t).enumerate() {
        if let Some(x) = row.iter().find(|x| !alg.is_member(x)) {
            return Err(Error::GluingMismatch(format!("glued entry {x} in row {i} leaves the face")));
        }
    }
    let hs = ext.h.pow(cf.s, d);
    let lhs = mat::scale(&ext.num, &hs);
    let rhs = mat::scale(&mat::mul(&conj_inv(&refined.product, w), &s), &ext.h);
    if lhs != rhs {
        return Err(Error::GluingMismatch("the two charts disagree on the overlap".into()));
    }
    Ok((s, t, GlueRecord { kappa: axis.kappa.clone(), n, s: cf.s, p, p_tilde: refined.p_tilde }))
}
