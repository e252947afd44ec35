//! Gluing isomorphisms given on the codimension-1 faces of τ into one
//! isomorphism over A_τ/J (the union of the faces).

use crate::cone::Face;
use crate::error::{Error, Result};
use crate::graded_linalg::{mat, ElemMat};

/// An isomorphism over one face: S: E → F, T: F → E.
#[derive(Clone, Debug)]
pub(crate) struct FacePair<'a> {
    pub face: &'a Face,
    pub s: &'a ElemMat,
    pub t: &'a ElemMat,
}

/// S̄, T̄ supported on Y = ∪ faces.
#[derive(Clone, Debug)]
pub(crate) struct Patched {
    pub s: ElemMat,
    pub t: ElemMat,
}

fn keep(a: &ElemMat, pred: impl Fn(&[i64]) -> bool) -> ElemMat {
    mat::map(a, |x| x.filter(|m| pred(m)))
}

/// The faces must share their target weights; all inputs are taken mod J.
pub(crate) fn patch_faces(faces: &[FacePair], n: usize) -> Result<Patched> {
    let Some(first) = faces.first() else {
        return Err(Error::PreconditionFailed("no faces to patch".into()));
    };
    let mut s = first.s.clone();
    let mut t = first.t.clone();
    let mut done: Vec<&Face> = vec![first.face];
    for (r, next) in faces.iter().enumerate().skip(1) {
        let in_y = |m: &[i64]| done.iter().any(|f| f.contains(m));
        let overlap = |m: &[i64]| next.face.contains(m) && in_y(m);
        // g′ = η∘φ⁻¹ and its inverse, read on τ_{r+1} ∩ Y_r
        let g = keep(&mat::mul(next.s, &t), overlap);
        let g_inv = keep(&super::mul_to(&s, next.t, g.len()), overlap);
        if !mat::is_identity(&keep(&mat::mul(&g, &g_inv), overlap)) {
            return Err(Error::NotInvertible(format!("transition to face {r} is not invertible on the overlap")));
        }
        if !mat::is_identity(&g) {
            s = keep(&mat::mul(&g, &s), in_y);
            t = keep(&super::mul_to(&t, &g_inv, g.len()), in_y);
        }
        if keep(&s, overlap) != keep(next.s, overlap) || keep(&t, overlap) != keep(next.t, overlap) {
            return Err(Error::NotInvertible(format!("corrected isomorphism disagrees with face {r} on the overlap")));
        }
        // fiber product: η on τ_{r+1}, the corrected φ elsewhere on Y_r
        let on_next = |m: &[i64]| next.face.contains(m);
        s = mat::add(&keep(next.s, on_next), &keep(&s, |m| !on_next(m)));
        t = mat::add(&keep(next.t, on_next), &keep(&t, |m| !on_next(m)));
        done.push(next.face);
    }
    debug_assert_eq!(t.len(), n);
    Ok(Patched { s, t })
}
