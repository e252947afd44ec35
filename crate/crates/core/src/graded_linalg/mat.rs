//! Dense matrices of algebra elements without weight bookkeeping.

use std::collections::HashMap;

use crate::graded_algebra::AlgebraElem;
use crate::scalar::Coeff;

pub type ElemMat = Vec<Vec<AlgebraElem>>;

pub fn zeros(r: usize, c: usize) -> ElemMat {
    vec![vec![AlgebraElem::zero(); c]; r]
}

pub fn identity(n: usize, d: usize) -> ElemMat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = AlgebraElem::one(d);
    }
    m
}

pub fn mul(a: &ElemMat, b: &ElemMat) -> ElemMat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    let mut s = AlgebraElem::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s = &s + &(&row[k] * &b[k][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn add(a: &ElemMat, b: &ElemMat) -> ElemMat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn sub(a: &ElemMat, b: &ElemMat) -> ElemMat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

pub fn scale(a: &ElemMat, x: &AlgebraElem) -> ElemMat {
    map(a, |e| e * x)
}

pub fn scale_coeff(a: &ElemMat, c: &Coeff) -> ElemMat {
    map(a, |e| e.scale(c))
}

pub fn map(a: &ElemMat, f: impl Fn(&AlgebraElem) -> AlgebraElem) -> ElemMat {
    a.iter().map(|r| r.iter().map(&f).collect()).collect()
}

pub fn transpose(a: &ElemMat) -> ElemMat {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn is_zero(a: &ElemMat) -> bool {
    a.iter().all(|r| r.iter().all(|e| e.is_zero()))
}

pub fn is_identity(a: &ElemMat) -> bool {
    a.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, e)| if i == j { e.is_one() } else { e.is_zero() }))
}

pub fn select(a: &ElemMat, rows: &[usize], cols: &[usize]) -> ElemMat {
    rows.iter().map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect()).collect()
}

/// Determinant by Laplace expansion along rows, memoized on column subsets.
pub fn det(a: &ElemMat, d: usize) -> AlgebraElem {
    let n = a.len();
    assert!(n <= 24, "determinant size");
    let mut memo: HashMap<u32, AlgebraElem> = HashMap::new();
    det_rec(a, d, 0, (1u32 << n) - 1, &mut memo)
}

fn det_rec(a: &ElemMat, d: usize, row: usize, cols: u32, memo: &mut HashMap<u32, AlgebraElem>) -> AlgebraElem {
    if cols == 0 {
        return AlgebraElem::one(d);
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut s = AlgebraElem::zero();
    let mut sign_neg = false;
    for j in 0..a.len() {
        if cols >> j & 1 == 0 {
            continue;
        }
        if !a[row][j].is_zero() {
            let minor = det_rec(a, d, row + 1, cols & !(1 << j), memo);
            let t = &a[row][j] * &minor;
            s = if sign_neg { &s - &t } else { &s + &t };
        }
        sign_neg = !sign_neg;
    }
    memo.insert(cols, s.clone());
    s
}

/// adj(a) with adj(a)·a = a·adj(a) = det(a)·I.
pub fn adjugate(a: &ElemMat, d: usize) -> ElemMat {
    let n = a.len();
    if n == 1 {
        return identity(1, d);
    }
    let mut out = zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let m = det(&select(a, &rows, &cols), d);
            out[i][j] = if (i + j) % 2 == 1 { -&m } else { m };
        }
    }
    out
}

/// Inverse of a single-term element with invertible coefficient, in R[ℤ^d].
pub fn laurent_unit_inverse(x: &AlgebraElem, is_unit: impl Fn(&Coeff) -> bool) -> Option<AlgebraElem> {
    let (m, c) = x.as_monomial()?;
    if !is_unit(c) {
        return None;
    }
    Some(AlgebraElem::monomial(m.iter().map(|v| -v).collect(), c.inv()?))
}

pub fn render(a: &ElemMat) -> Vec<Vec<String>> {
    a.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
}
