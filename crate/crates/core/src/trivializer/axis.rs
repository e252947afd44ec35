//! Rank-one sublattices ℤκ ⊂ L and the transfer of elements supported on
//! them to one-variable Laurent polynomials in t = e_κ.

use crate::euclid::{Laurent, UniPoly};
use crate::graded_algebra::AlgebraElem;
use crate::graded_linalg::ElemMat;
use crate::monoid::Point;
use crate::scalar::Coeff;

#[derive(Clone, Debug)]
pub(crate) struct Axis {
    pub kappa: Point,
    pivot: usize,
}

impl Axis {
    pub fn new(kappa: Point) -> Axis {
        let pivot = kappa.iter().position(|&v| v != 0).expect("nonzero axis");
        Axis { kappa, pivot }
    }

    /// k with m = kκ.
    pub fn coord(&self, m: &[i64]) -> Option<i64> {
        let p = self.kappa[self.pivot];
        if m[self.pivot] % p != 0 {
            return None;
        }
        let k = m[self.pivot] / p;
        self.kappa.iter().zip(m).all(|(a, b)| a * k == *b).then_some(k)
    }

    pub fn point(&self, k: i64) -> Point {
        self.kappa.iter().map(|a| a * k).collect()
    }

    /// Elements of R[ℤκ] as elements of R[t^{±1}] (one exponent coordinate).
    pub fn to_t(&self, x: &AlgebraElem) -> Option<AlgebraElem> {
        let mut out = AlgebraElem::zero();
        for (m, c) in x.terms() {
            out.add_term(vec![self.coord(m)?], c.clone());
        }
        Some(out)
    }

    pub fn from_t(&self, x: &AlgebraElem) -> AlgebraElem {
        x.map_support(|m| self.point(m[0]))
    }

    pub fn mat_to_t(&self, a: &ElemMat) -> Option<ElemMat> {
        a.iter().map(|r| r.iter().map(|x| self.to_t(x)).collect()).collect()
    }

    pub fn mat_from_t(&self, a: &ElemMat) -> ElemMat {
        a.iter().map(|r| r.iter().map(|x| self.from_t(x)).collect()).collect()
    }
}

/// Least exponent of t over all entries (0 for the zero matrix).
pub(crate) fn min_t_exponent(a: &ElemMat) -> i64 {
    a.iter().flatten().flat_map(|x| x.support().map(|m| m[0])).min().unwrap_or(0)
}

/// t^shift · x as a polynomial; the shift must clear all negative exponents.
pub(crate) fn to_poly(x: &AlgebraElem, shift: i64) -> UniPoly {
    let mut c: Vec<Coeff> = vec![];
    for (m, v) in x.terms() {
        let k = usize::try_from(m[0] + shift).expect("shift clears denominators");
        if c.len() <= k {
            c.resize(k + 1, Coeff::zero());
        }
        c[k] = v.clone();
    }
    UniPoly { c }.trim()
}

/// t^{−shift} · p.
pub(crate) fn from_poly(p: &UniPoly, shift: i64) -> AlgebraElem {
    AlgebraElem::from_terms(p.c.iter().enumerate().map(|(i, v)| (vec![i as i64 - shift], v.clone())))
}

pub(crate) fn mat_to_poly(a: &ElemMat, shift: i64) -> Vec<Vec<UniPoly>> {
    a.iter().map(|r| r.iter().map(|x| to_poly(x, shift)).collect()).collect()
}

pub(crate) fn mat_from_poly(a: &[Vec<UniPoly>], shift: i64) -> ElemMat {
    a.iter().map(|r| r.iter().map(|p| from_poly(p, shift)).collect()).collect()
}

pub(crate) fn to_laurent(x: &AlgebraElem) -> Laurent {
    let val = x.support().map(|m| m[0]).min().unwrap_or(0);
    Laurent::new(val, to_poly(x, -val))
}

pub(crate) fn from_laurent(x: &Laurent) -> AlgebraElem {
    from_poly(&x.p, -x.val)
}

pub(crate) fn mat_to_laurent(a: &ElemMat) -> Vec<Vec<Laurent>> {
    a.iter().map(|r| r.iter().map(to_laurent).collect()).collect()
}

pub(crate) fn mat_from_laurent(a: &[Vec<Laurent>]) -> ElemMat {
    a.iter().map(|r| r.iter().map(from_laurent).collect()).collect()
}

/// t^k in one variable.
pub(crate) fn t_pow(k: i64) -> AlgebraElem {
    AlgebraElem::e(&[k])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_along_the_axis() {
        let a = Axis::new(vec![0, 2, -2]);
        assert_eq!(a.coord(&[0, 6, -6]), Some(3));
        assert_eq!(a.coord(&[0, 6, -4]), None);
        assert_eq!(a.coord(&[0, 3, -3]), None);
        assert_eq!(a.point(-1), vec![0, -2, 2]);
    }

    #[test]
    fn laurent_polynomial_roundtrip() {
        let x = AlgebraElem::from_terms([(vec![-2], Coeff::from_int(3)), (vec![1], Coeff::from_int(-1))]);
        let p = to_poly(&x, 2);
        assert_eq!(p.c.len(), 4);
        assert_eq!(from_poly(&p, 2), x);
        let l = to_laurent(&x);
        assert_eq!(l.val, -2);
        assert_eq!(from_laurent(&l), x);
    }
}
