//! Trivialization over a Laurent ring R[Λ] for a saturated sublattice Λ ⊆ L.
//!
//! Weights are first moved into classes mod ψ(Λ) by diagonal monomial
//! conjugation; what is left is a weight-0 idempotent over R[K], K = Λ ∩ ker ψ,
//! which is factored through a free module directly.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::axis::{mat_from_laurent, mat_to_laurent, Axis};
use crate::error::{Error, Result};
use crate::euclid::{row_echelon, LaurentCtx, ScalarCtx};
use crate::graded_algebra::{AlgebraElem, ToricGAlgebra};
use crate::graded_linalg::{mat, ElemMat, GradedMatrix};
use crate::lattice::{cokernel, group_kernel, shortest_preimage, to_small, GroupElem, IntMat};
use crate::monoid::{combinations, Point};
use crate::scalar::{CoeffKind, Coeff};

/// S: E → F and T: F → E with S·T = I and T·S = e.
#[derive(Clone, Debug)]
pub(crate) struct TorusIso {
    pub weights: Vec<GroupElem>,
    pub s: ElemMat,
    pub t: ElemMat,
    /// Exponents w_k of the retargeting monomials, ψ(w_k) = f_k − (class offset).
    pub w: Vec<Point>,
}

/// Shortest point of Λ of weight `w`.
pub(crate) fn preimage(alg: &ToricGAlgebra, lattice: &IntMat, w: &GroupElem) -> Result<Point> {
    shortest_preimage(&alg.psi, &alg.group, lattice, &w.coords())
        .and_then(|x| to_small(&x))
        .ok_or_else(|| Error::Internal(format!("weight {w} has no preimage in the lattice")))
}

fn neg(m: &[i64]) -> Point {
    m.iter().map(|v| -v).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Trivializes e over R[Λ]. With a target, rows are matched to the given
/// weights (each must share its class mod ψ(Λ) with the rows it replaces).
pub(crate) fn torus_iso(alg: &ToricGAlgebra, lattice: &IntMat, e: &GradedMatrix, target: Option<&[GroupElem]>) -> Result<TorusIso> {
    let d = alg.rank();
    let n = e.rows();
    let psi_l = alg.psi.mul(lattice);
    let classes = cokernel(&psi_l.hstack(&alg.group.relations()));
    let kbasis: Vec<Point> = lattice
        .mul(&group_kernel(&psi_l, &alg.group))
        .to_cols()
        .iter()
        .map(|c| to_small(c).expect("kernel vector fits"))
        .filter(|c| c.iter().any(|&v| v != 0))
        .collect();

    let cls: Vec<GroupElem> = e.source.iter().map(|v| classes.apply(&v.coords())).collect();
    let mut order: Vec<GroupElem> = vec![];
    let mut members: BTreeMap<GroupElem, Vec<usize>> = BTreeMap::new();
    for (i, c) in cls.iter().enumerate() {
        if !members.contains_key(c) {
            order.push(c.clone());
        }
        members.entry(c.clone()).or_default().push(i);
    }

    // per class: offset, rows of S (r_c × n) and columns of T (n × r_c)
    let mut blocks: Vec<(GroupElem, GroupElem, ElemMat, ElemMat)> = vec![];
    for c in &order {
        let idx = &members[c];
        let offset = if classes.group.is_zero(c) { alg.group.zero() } else { e.source[idx[0]].clone() };
        let mu: Vec<Point> = idx
            .iter()
            .map(|&i| preimage(alg, lattice, &alg.group.sub(&e.source[i], &offset)))
            .collect::<Result<_>>()?;
        let sub_e = mat::select(&e.entries, idx, idx);
        let et: ElemMat = (0..idx.len())
            .map(|i| (0..idx.len()).map(|j| sub_e[i][j].shift(&sub(&mu[i], &mu[j]))).collect())
            .collect();
        let (st, tt) = factor_weight_zero(alg, &kbasis, &et)?;
        let r = st.len();
        let mut s = mat::zeros(r, n);
        let mut t = mat::zeros(n, r);
        for k in 0..r {
            for (a, &j) in idx.iter().enumerate() {
                s[k][j] = st[k][a].shift(&mu[a]);
                t[j][k] = tt[a][k].shift(&neg(&mu[a]));
            }
        }
        blocks.push((c.clone(), offset, s, t));
    }

    let Some(target) = target else {
        let mut weights = vec![];
        let mut s = vec![];
        let mut t = mat::zeros(n, 0);
        for (_, offset, bs, bt) in blocks {
            weights.extend(std::iter::repeat(offset).take(bs.len()));
            s.extend(bs);
            for (row, brow) in t.iter_mut().zip(bt) {
                row.extend(brow);
            }
        }
        let w = vec![vec![0; d]; weights.len()];
        return Ok(TorusIso { weights, s, t, w });
    };

    let mut next: Vec<usize> = vec![0; blocks.len()];
    let mut s = vec![];
    let mut t = mat::zeros(n, 0);
    let mut w = vec![];
    for f in target {
        let c = classes.apply(&f.coords());
        let b = blocks
            .iter()
            .position(|blk| blk.0 == c)
            .ok_or_else(|| Error::WeightMismatch(format!("target weight {f} matches no weight class of the module")))?;
        let k = next[b];
        if k >= blocks[b].2.len() {
            return Err(Error::WeightMismatch(format!("too many target weights in the class of {f}")));
        }
        next[b] += 1;
        let wk = preimage(alg, lattice, &alg.group.sub(f, &blocks[b].1))?;
        s.push(blocks[b].2[k].iter().map(|x| x.shift(&neg(&wk))).collect());
        for (row, brow) in t.iter_mut().zip(&blocks[b].3) {
            row.push(brow[k].shift(&wk));
        }
        w.push(wk);
    }
    if next.iter().zip(&blocks).any(|(&k, blk)| k != blk.2.len()) {
        return Err(Error::WeightMismatch("target weights leave part of the module unmatched".into()));
    }
    Ok(TorusIso { weights: target.to_vec(), s, t, w })
}

/// S̃ (r × n), T̃ (n × r) over R[K] with S̃T̃ = I, T̃S̃ = ẽ.
fn factor_weight_zero(alg: &ToricGAlgebra, kbasis: &[Point], et: &ElemMat) -> Result<(ElemMat, ElemMat)> {
    let n = et.len();
    let d = alg.rank();
    if n == 0 {
        return Ok((vec![], vec![]));
    }
    let found = match kbasis.len() {
        0 => {
            let m: Vec<Vec<Coeff>> = et.iter().map(|r| r.iter().map(|x| x.as_constant().unwrap_or_else(Coeff::zero)).collect()).collect();
            match row_echelon(&ScalarCtx { ring: alg.coeff }, &m) {
                Ok(re) => {
                    let lift = |a: &[Vec<Coeff>]| -> ElemMat { a.iter().map(|r| r.iter().map(|c| AlgebraElem::constant(c.clone(), d)).collect()).collect() };
                    Some(from_elimination(et, &lift(&re.x), &lift(&re.x_inv), re.rank))
                }
                Err(_) => None,
            }
        }
        1 => {
            let axis = Axis::new(kbasis[0].clone());
            let tm = axis.mat_to_t(et).ok_or_else(|| Error::Internal("weight-0 entry off the kernel lattice".into()))?;
            match row_echelon(&LaurentCtx { ring: alg.coeff }, &mat_to_laurent(&tm)) {
                Ok(re) => {
                    let x = axis.mat_from_t(&mat_from_laurent(&re.x));
                    let x_inv = axis.mat_from_t(&mat_from_laurent(&re.x_inv));
                    Some(from_elimination(et, &x, &x_inv, re.rank))
                }
                Err(_) => None,
            }
        }
        _ => None,
    };
    let (s, t) = match found {
        Some(st) => st,
        None => unit_minor(alg, et)?,
    };
    if !mat::is_identity(&mat::mul(&s, &t)) || super::mul_to(&t, &s, n) != *et {
        return Err(Error::Internal("torus factorization failed to reproduce the idempotent".into()));
    }
    Ok((s, t))
}

// X·ẽ vanishes below row r, so S = (X·ẽ)[:r] and T = X⁻¹[:, :r] give S·T = I, T·S = ẽ.
fn from_elimination(et: &ElemMat, x: &ElemMat, x_inv: &ElemMat, r: usize) -> (ElemMat, ElemMat) {
    let s = mat::mul(&x[..r].to_vec(), et);
    let t: ElemMat = x_inv.iter().map(|row| row[..r].to_vec()).collect();
    (s, t)
}

/// Rank of a weight-0 idempotent from its trace.
fn idempotent_rank(alg: &ToricGAlgebra, et: &ElemMat) -> Result<usize> {
    let mut tr = AlgebraElem::zero();
    for (i, row) in et.iter().enumerate() {
        tr = &tr + &row[i];
    }
    let c = if tr.is_zero() { Coeff::zero() } else { tr.as_constant().ok_or_else(|| Error::Validation("idempotent has non-constant trace".into()))? };
    let v = c.to_bigint().to_usize().ok_or_else(|| Error::Validation("idempotent has negative trace".into()))?;
    if let CoeffKind::PrimeField(p) = alg.coeff.kind {
        if et.len() as u64 >= p {
            return Err(Error::Unsupported { step: "torus_iso".into(), reason: format!("rank is ambiguous modulo {p}") });
        }
    }
    Ok(v)
}

/// T̃ = ẽ[:, J], S̃ = ẽ[I, J]⁻¹ ẽ[I, :] for an r × r minor with unit determinant.
fn unit_minor(alg: &ToricGAlgebra, et: &ElemMat) -> Result<(ElemMat, ElemMat)> {
    let n = et.len();
    let d = alg.rank();
    let r = idempotent_rank(alg, et)?;
    if r == 0 {
        return Ok((vec![], mat::zeros(n, 0)));
    }
    let all: Vec<usize> = (0..n).collect();
    for rows in combinations(n, r) {
        for cols in combinations(n, r) {
            let minor = mat::select(et, &rows, &cols);
            let det = mat::det(&minor, d);
            let Some(inv) = mat::laurent_unit_inverse(&det, |c| alg.coeff.is_unit(c)) else { continue };
            let minor_inv = mat::scale(&mat::adjugate(&minor, d), &inv);
            let s = mat::mul(&minor_inv, &mat::select(et, &rows, &all));
            let t = mat::select(et, &all, &cols);
            return Ok((s, t));
        }
    }
    Err(Error::Unsupported {
        step: "torus_iso".into(),
        reason: "no elimination over the kernel lattice and no unit minor".into(),
    })
}
