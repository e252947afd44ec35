//! Sparse Laurent-type elements Σ c_m e_m keyed by exponent vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::monoid::Point;
use crate::scalar::{Coeff, CoeffRing};

/// Finite sum of monomials. No zero coefficient is ever stored, so derived
/// equality on the map is equality of elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElem {
    terms: BTreeMap<Point, Coeff>,
}

impl AlgebraElem {
    pub fn zero() -> AlgebraElem {
        AlgebraElem::default()
    }

    pub fn one(d: usize) -> AlgebraElem {
        AlgebraElem::monomial(vec![0; d], Coeff::one())
    }

    pub fn constant(c: Coeff, d: usize) -> AlgebraElem {
        AlgebraElem::monomial(vec![0; d], c)
    }

    pub fn monomial(m: Point, c: Coeff) -> AlgebraElem {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        AlgebraElem { terms }
    }

    /// e_m with coefficient 1.
    pub fn e(m: &[i64]) -> AlgebraElem {
        AlgebraElem::monomial(m.to_vec(), Coeff::one())
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Point, Coeff)>) -> AlgebraElem {
        let mut x = AlgebraElem::zero();
        for (m, c) in it {
            x.add_term(m, c);
        }
        x
    }

    pub fn add_term(&mut self, m: Point, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Point, &Coeff)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &[i64]) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Lex-largest term.
    pub fn leading(&self) -> Option<(&Point, &Coeff)> {
        self.terms.iter().next_back()
    }

    /// `Some(c)` when the element is c·e_0 (including 0).
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&v| v == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn as_monomial(&self) -> Option<(&Point, &Coeff)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Coeff) -> AlgebraElem {
        AlgebraElem::from_terms(self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    /// Multiplication by e_q.
    pub fn shift(&self, q: &[i64]) -> AlgebraElem {
        AlgebraElem {
            terms: self.terms.iter().map(|(m, c)| (add_pts(m, q), c.clone())).collect(),
        }
    }

    pub fn filter(&self, keep: impl Fn(&Point) -> bool) -> AlgebraElem {
        AlgebraElem {
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Applies an exponent map (assumed injective on the support).
    pub fn map_support(&self, f: impl Fn(&Point) -> Point) -> AlgebraElem {
        AlgebraElem::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    /// Tags every coefficient with the ring's modulus.
    pub fn in_ring(&self, ring: &CoeffRing) -> AlgebraElem {
        AlgebraElem::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.clone().in_ring(ring))))
    }

    pub fn pow(&self, k: u32, d: usize) -> AlgebraElem {
        let mut acc = AlgebraElem::one(d);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Coordinatewise bounds of the support.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for m in it {
            for i in 0..m.len() {
                lo[i] = lo[i].min(m[i]);
                hi[i] = hi[i].max(m[i]);
            }
        }
        Some((lo, hi))
    }

    /// Exact quotient self / b in R[ℤ^d], if it exists.
    ///
    /// Long division on lex-leading terms. A genuine quotient has its support
    /// inside the box [lo(a) − lo(b), hi(a) − hi(b)] (Newton polytopes add),
    /// which bounds the loop.
    pub fn exact_div(&self, b: &AlgebraElem, ring: &CoeffRing) -> Option<AlgebraElem> {
        if b.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(AlgebraElem::zero());
        }
        let (alo, ahi) = self.bounding_box()?;
        let (blo, bhi) = b.bounding_box()?;
        let qlo = sub_pts(&alo, &blo);
        let qhi = sub_pts(&ahi, &bhi);
        let (bm, bc) = b.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut r = self.clone();
        let mut q = AlgebraElem::zero();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = sub_pts(&rm, &bm);
            if qm.iter().zip(qlo.iter().zip(&qhi)).any(|(v, (l, h))| v < l || v > h) {
                return None;
            }
            let qc = rc.div_exact(&bc, ring)?;
            let t = AlgebraElem::monomial(qm, qc);
            r = &r - &(&t * b);
            q = &q + &t;
        }
        Some(q)
    }

    /// Parses the canonical text form, e.g. `3*e[1,0] - 1/2*e[0,2] + 5`.
    /// A bare coefficient means c·e_0; `e[..]` alone has coefficient 1.
    pub fn parse(s: &str, d: usize, ring: &CoeffRing) -> Result<AlgebraElem> {
        Parser { s: s.as_bytes(), pos: 0, d, ring }.expr()
    }
}

fn add_pts(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_pts(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl<'a> Add<&'a AlgebraElem> for &'a AlgebraElem {
    type Output = AlgebraElem;
    fn add(self, o: &AlgebraElem) -> AlgebraElem {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a AlgebraElem> for &'a AlgebraElem {
    type Output = AlgebraElem;
    fn sub(self, o: &AlgebraElem) -> AlgebraElem {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a AlgebraElem> for &'a AlgebraElem {
    type Output = AlgebraElem;
    fn mul(self, o: &AlgebraElem) -> AlgebraElem {
        let mut out = AlgebraElem::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(add_pts(m1, m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &AlgebraElem {
    type Output = AlgebraElem;
    fn neg(self) -> AlgebraElem {
        AlgebraElem {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for AlgebraElem {
    type Output = AlgebraElem;
    fn add(self, o: AlgebraElem) -> AlgebraElem {
        &self + &o
    }
}

impl Sub for AlgebraElem {
    type Output = AlgebraElem;
    fn sub(self, o: AlgebraElem) -> AlgebraElem {
        &self - &o
    }
}

impl Mul for AlgebraElem {
    type Output = AlgebraElem;
    fn mul(self, o: AlgebraElem) -> AlgebraElem {
        &self * &o
    }
}

impl Neg for AlgebraElem {
    type Output = AlgebraElem;
    fn neg(self) -> AlgebraElem {
        -&self
    }
}

/// Canonical form: terms in increasing lex order of exponents, `c*e[..]`
/// with `+`/`-` separators, `0` for the zero element.
impl fmt::Display for AlgebraElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.modulus() == 0 && c.value() < &BigRational::from_integer(BigInt::from(0));
            let mag = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let exps: Vec<String> = m.iter().map(|v| v.to_string()).collect();
            write!(f, "{}*e[{}]", mag, exps.join(","))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    d: usize,
    ring: &'a CoeffRing,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: 1, column: self.pos + 1, message: msg.into() })
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        self.ws();
        let start = self.pos;
        if self.pos < self.s.len() && self.s[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        match txt.parse::<BigInt>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("expected an integer")
            }
        }
    }

    fn expr(&mut self) -> Result<AlgebraElem> {
        let mut out = AlgebraElem::zero();
        let mut first = true;
        loop {
            let sign = if self.eat(b'-') {
                -1
            } else if self.eat(b'+') || first {
                1
            } else if self.peek().is_none() {
                break;
            } else {
                return self.err("expected '+' or '-'");
            };
            first = false;
            let (m, c) = self.term()?;
            let c = if sign < 0 { -c } else { c };
            out.add_term(m, c);
            if self.peek().is_none() {
                break;
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Point, Coeff)> {
        let coeff = match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                let n = self.int()?;
                let d = if self.eat(b'/') { self.int()? } else { BigInt::from(1) };
                if d == BigInt::from(0) {
                    self.pos = start;
                    return self.err("zero denominator");
                }
                let c = match self.ring.coerce(&BigRational::new(n, d)) {
                    Ok(c) => c,
                    Err(msg) => {
                        self.pos = start;
                        return self.err(msg);
                    }
                };
                if self.eat(b'*') {
                    if self.peek() != Some(b'e') {
                        return self.err("expected 'e[' after '*'");
                    }
                } else if self.peek() != Some(b'e') {
                    return Ok((vec![0; self.d], c));
                }
                c
            }
            Some(b'e') => Coeff::one().in_ring(self.ring),
            _ => return self.err("expected a coefficient or monomial"),
        };
        self.pos += 1;
        if !self.eat(b'[') {
            return self.err("expected '['");
        }
        let mut m = Vec::new();
        if self.peek() != Some(b']') {
            loop {
                let v = self.int()?;
                match i64::try_from(v) {
                    Ok(v) => m.push(v),
                    Err(_) => return self.err("exponent out of range"),
                }
                if !self.eat(b',') {
                    break;
                }
            }
        }
        if !self.eat(b']') {
            return self.err("expected ']'");
        }
        if m.len() != self.d {
            return self.err(format!("monomial has {} exponents, expected {}", m.len(), self.d));
        }
        Ok((m, coeff))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str, d: usize) -> AlgebraElem {
        AlgebraElem::parse(s, d, &CoeffRing::QQ).unwrap()
    }

    #[test]
    fn monomials_multiply_by_adding_exponents() {
        assert_eq!(&AlgebraElem::e(&[1, 0]) * &AlgebraElem::e(&[0, 1]), AlgebraElem::e(&[1, 1]));
        let a = q("1 + e[1]", 1);
        let b = q("1 - e[1]", 1);
        assert_eq!(&a * &b, q("1 - e[2]", 1));
    }

    #[test]
    fn render_parse_roundtrip() {
        let x = q("3*e[2,1] - 1/2*e[0,3] + 7", 2);
        let s = x.to_string();
        assert_eq!(s, "7*e[0,0] - 1/2*e[0,3] + 3*e[2,1]");
        assert_eq!(q(&s, 2), x);
        assert_eq!(AlgebraElem::zero().to_string(), "0");
        assert_eq!(q("0", 2), AlgebraElem::zero());
        assert_eq!(q("-e[1,-1]", 2).to_string(), "-1*e[1,-1]");
    }

    #[test]
    fn parse_errors_report_column() {
        let e = AlgebraElem::parse("1 + 2*e[1", 1, &CoeffRing::QQ).unwrap_err();
        assert!(matches!(e, Error::Parse { column: 10, .. }), "{e:?}");
        assert!(AlgebraElem::parse("1/2", 1, &CoeffRing::ZZ).is_err());
        assert!(AlgebraElem::parse("e[1,2]", 1, &CoeffRing::QQ).is_err());
    }

    #[test]
    fn prime_field_coefficients_reduce() {
        let f3 = CoeffRing::gf(3).unwrap();
        let x = AlgebraElem::parse("2*e[1] + 1", 1, &f3).unwrap();
        let y = &x + &x;
        assert_eq!(y, AlgebraElem::parse("1*e[1] + 2", 1, &f3).unwrap());
        let z = &(&y + &x) + &AlgebraElem::zero();
        assert!(z.is_zero());
    }

    #[test]
    fn exact_division() {
        let r = CoeffRing::QQ;
        let a = q("1 - e[2,0]", 2);
        let b = q("1 - e[1,0]", 2);
        assert_eq!(a.exact_div(&b, &r), Some(q("1 + e[1,0]", 2)));
        assert_eq!(b.exact_div(&a, &r), None);
        assert_eq!(q("e[1,1]", 2).exact_div(&q("e[0,1]", 2), &r), Some(q("e[1,0]", 2)));
        assert_eq!(q("2*e[1]", 1).exact_div(&q("4", 1), &CoeffRing::ZZ), None);
    }

    fn small_elem() -> impl Strategy<Value = AlgebraElem> {
        prop::collection::vec(((-2i64..3, -2i64..3), -3i64..4), 0..4).prop_map(|ts| {
            AlgebraElem::from_terms(ts.into_iter().map(|((a, b), c)| (vec![a, b], Coeff::from_int(c))))
        })
    }

    proptest! {
        #[test]
        fn product_matches_naive_convolution(a in small_elem(), b in small_elem()) {
            let mut naive: BTreeMap<Point, BigRational> = BTreeMap::new();
            for (m1, c1) in a.terms() {
                for (m2, c2) in b.terms() {
                    let k = vec![m1[0] + m2[0], m1[1] + m2[1]];
                    *naive.entry(k).or_insert_with(|| BigRational::from_integer(0.into())) += c1.value() * c2.value();
                }
            }
            let p = &a * &b;
            for (m, v) in &naive {
                prop_assert_eq!(p.coeff(m).value().clone(), v.clone());
            }
            prop_assert!(p.support().all(|m| naive.contains_key(m)));
        }

        #[test]
        fn product_divides_back(a in small_elem(), b in small_elem()) {
            prop_assume!(!b.is_zero());
            let p = &a * &b;
            prop_assert_eq!(p.exact_div(&b, &CoeffRing::QQ), Some(a));
        }

        #[test]
        fn text_roundtrip(a in small_elem()) {
            prop_assert_eq!(AlgebraElem::parse(&a.to_string(), 2, &CoeffRing::QQ).unwrap(), a);
        }
    }
}
