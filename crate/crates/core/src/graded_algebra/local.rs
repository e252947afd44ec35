//! Fractions a / h^k for a fixed invariant h.

use crate::error::{Error, Result};
use crate::scalar::CoeffRing;

use super::{AlgebraElem, ToricGAlgebra};

#[derive(Clone, Debug)]
pub struct LocalizedElem {
    pub num: AlgebraElem,
    pub k: u32,
}

/// A[h⁻¹] over a domain; equality by cross-multiplication.
#[derive(Clone, Debug)]
pub struct Localization {
    h: AlgebraElem,
    d: usize,
    ring: CoeffRing,
}

impl Localization {
    pub fn new(alg: &ToricGAlgebra, h: &AlgebraElem) -> Result<Localization> {
        if !alg.coeff.is_domain() {
            return Err(Error::PreconditionFailed("localization needs a domain".into()));
        }
        if h.is_zero() {
            return Err(Error::PreconditionFailed("cannot invert 0".into()));
        }
        if !alg.is_invariant(h) {
            return Err(Error::NotInvariant(format!("{h} is not of weight 0")));
        }
        Ok(Localization { h: h.clone(), d: alg.rank(), ring: alg.coeff })
    }

    pub fn h(&self) -> &AlgebraElem {
        &self.h
    }

    pub fn h_pow(&self, k: u32) -> AlgebraElem {
        self.h.pow(k, self.d)
    }

    pub fn from_elem(&self, a: &AlgebraElem) -> LocalizedElem {
        LocalizedElem { num: a.clone(), k: 0 }
    }

    /// 1 / h^k.
    pub fn h_inverse_pow(&self, k: u32) -> LocalizedElem {
        LocalizedElem { num: AlgebraElem::one(self.d), k }
    }

    fn lift(&self, a: &LocalizedElem, k: u32) -> AlgebraElem {
        &a.num * &self.h_pow(k - a.k)
    }

    pub fn add(&self, a: &LocalizedElem, b: &LocalizedElem) -> LocalizedElem {
        let k = a.k.max(b.k);
        LocalizedElem { num: &self.lift(a, k) + &self.lift(b, k), k }
    }

    pub fn sub(&self, a: &LocalizedElem, b: &LocalizedElem) -> LocalizedElem {
        let k = a.k.max(b.k);
        LocalizedElem { num: &self.lift(a, k) - &self.lift(b, k), k }
    }

    pub fn neg(&self, a: &LocalizedElem) -> LocalizedElem {
        LocalizedElem { num: -&a.num, k: a.k }
    }

    pub fn mul(&self, a: &LocalizedElem, b: &LocalizedElem) -> LocalizedElem {
        LocalizedElem { num: &a.num * &b.num, k: a.k + b.k }
    }

    pub fn eq(&self, a: &LocalizedElem, b: &LocalizedElem) -> bool {
        &a.num * &self.h_pow(b.k) == &b.num * &self.h_pow(a.k)
    }

    pub fn is_zero(&self, a: &LocalizedElem) -> bool {
        a.num.is_zero()
    }

    /// (a, k) with the fraction equal to a / h^k.
    pub fn clear(&self, a: &LocalizedElem) -> (AlgebraElem, u32) {
        (a.num.clone(), a.k)
    }

    /// Cancels powers of h from the numerator while exact.
    pub fn simplify(&self, a: &LocalizedElem) -> LocalizedElem {
        let mut out = a.clone();
        while out.k > 0 {
            match out.num.exact_div(&self.h, &self.ring) {
                Some(q) => {
                    out.num = q;
                    out.k -= 1;
                }
                None => break,
            }
        }
        out
    }

    /// The element of A equal to a, if there is one.
    pub fn to_elem(&self, a: &LocalizedElem) -> Option<AlgebraElem> {
        let s = self.simplify(a);
        (s.k == 0).then_some(s.num)
    }
}
