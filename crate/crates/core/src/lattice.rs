//! Integer matrices, Smith normal form, kernels, cokernels and finitely
//! generated abelian groups.
//!
//! Group coordinates list torsion components first and free components last.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::euclid::{smith_int, Mat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> IntMat {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds from rows; `cols` disambiguates the zero-row case.
    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> IntMat {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r.iter().cloned());
        }
        IntMat { rows: rows.len(), cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> IntMat {
        let cols = rows.first().map_or(0, |r| r.len());
        let rs: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        IntMat::from_rows(&rs, cols)
    }

    pub fn from_cols(cols: &[Vec<BigInt>], rows: usize) -> IntMat {
        IntMat::from_rows(cols, rows).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }
    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn to_rows(&self) -> Mat<BigInt> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }
    pub fn to_cols(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMat) -> IntMat {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut p = IntMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = p.get(i, j) + a * o.get(k, j);
                    p.set(i, j, v);
                }
            }
        }
        p
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(BigInt::zero(), |s, j| s + self.get(i, j) * &v[j]))
            .collect()
    }

    pub fn mul_vec_i64(&self, v: &[i64]) -> Vec<BigInt> {
        let b: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.mul_vec(&b)
    }

    pub fn hstack(&self, o: &IntMat) -> IntMat {
        assert_eq!(self.rows, o.rows);
        let rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i);
                r.extend(o.row(i));
                r
            })
            .collect();
        IntMat::from_rows(&rows, self.cols + o.cols)
    }

    pub fn vstack(&self, o: &IntMat) -> IntMat {
        assert_eq!(self.cols, o.cols);
        let mut rows = self.to_rows();
        rows.extend(o.to_rows());
        IntMat::from_rows(&rows, self.cols)
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMat {
        let rows: Vec<Vec<BigInt>> = idx.iter().map(|&i| self.row(i)).collect();
        IntMat::from_rows(&rows, self.cols)
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMat {
        self.transpose().select_rows(idx).transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Determinant of a square matrix (fraction-free elimination).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|v| v.to_i64()).collect()).collect()
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| format!("[{}]", self.row(i).iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[derive(Clone, Debug)]
pub struct SnfResult {
    /// Invariant factors, length `min(rows, cols)`; zeros trail.
    pub d: Vec<BigInt>,
    pub u: IntMat,
    pub v: IntMat,
    pub u_inv: IntMat,
    pub v_inv: IntMat,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMat) -> SnfResult {
    let (r, c) = (m.rows(), m.cols());
    if r == 0 || c == 0 {
        return SnfResult {
            d: vec![],
            u: IntMat::identity(r),
            v: IntMat::identity(c),
            u_inv: IntMat::identity(r),
            v_inv: IntMat::identity(c),
        };
    }
    let out = smith_int(&m.to_rows());
    let mut d = out.diag;
    d.resize(r.min(c), BigInt::zero());
    SnfResult {
        d,
        u: IntMat::from_rows(&out.x, r),
        v: IntMat::from_rows(&out.y, c),
        u_inv: IntMat::from_rows(&out.x_inv, r),
        v_inv: IntMat::from_rows(&out.y_inv, c),
    }
}

/// Columns form a saturated lattice basis of `{v : M v = 0}`.
pub fn kernel_basis(m: &IntMat) -> IntMat {
    let s = smith_normal_form(m);
    let r = s.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    s.v.select_cols(&idx)
}

pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |s, (x, y)| s + x * y)
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_small(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

/// A finitely generated abelian group `⊕ ℤ/t_i ⊕ ℤ^free_rank` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem {
    pub torsion_part: Vec<BigInt>,
    pub free_part: Vec<BigInt>,
}

impl GroupElem {
    /// Coordinates in the group's generator order (torsion first).
    pub fn coords(&self) -> Vec<BigInt> {
        let mut v = self.torsion_part.clone();
        v.extend(self.free_part.iter().cloned());
        v
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords().iter().map(|v| v.to_string()).collect();
        write!(f, "({})", c.join(","))
    }
}

impl FinAbGroup {
    /// Canonicalizes arbitrary cyclic orders: drops units, merges into a divisibility chain.
    pub fn new(free_rank: usize, orders: &[BigInt]) -> Result<FinAbGroup, String> {
        if orders.iter().any(|d| d.is_zero() || d.is_negative()) {
            return Err("torsion orders must be positive".into());
        }
        let n = orders.len();
        let mut m = IntMat::zeros(n, n);
        for (i, d) in orders.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        let s = smith_normal_form(&m);
        let torsion: Vec<BigInt> = s.d.into_iter().filter(|d| !d.is_one()).collect();
        Ok(FinAbGroup { free_rank, torsion })
    }

    pub fn free(rank: usize) -> FinAbGroup {
        FinAbGroup { free_rank: rank, torsion: vec![] }
    }

    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem { torsion_part: vec![BigInt::zero(); self.torsion.len()], free_part: vec![BigInt::zero(); self.free_rank] }
    }

    pub fn reduce(&self, coords: &[BigInt]) -> GroupElem {
        assert_eq!(coords.len(), self.ngens(), "group coordinate length");
        let t = self.torsion.len();
        GroupElem {
            torsion_part: coords[..t].iter().zip(&self.torsion).map(|(c, d)| c.mod_floor(d)).collect(),
            free_part: coords[t..].to_vec(),
        }
    }

    pub fn add(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        let c: Vec<BigInt> = a.coords().iter().zip(b.coords()).map(|(x, y)| x + y).collect();
        self.reduce(&c)
    }

    pub fn sub(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        let c: Vec<BigInt> = a.coords().iter().zip(b.coords()).map(|(x, y)| x - y).collect();
        self.reduce(&c)
    }

    pub fn neg(&self, a: &GroupElem) -> GroupElem {
        let c: Vec<BigInt> = a.coords().iter().map(|x| -x).collect();
        self.reduce(&c)
    }

    pub fn is_zero(&self, a: &GroupElem) -> bool {
        a.torsion_part.iter().all(|x| x.is_zero()) && a.free_part.iter().all(|x| x.is_zero())
    }

    /// The relation matrix (`ngens × #torsion`): columns `t_i e_i`.
    pub fn relations(&self) -> IntMat {
        let mut m = IntMat::zeros(self.ngens(), self.torsion.len());
        for (i, d) in self.torsion.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `ℤ^rows / im(M)` with a projection sending vectors to their classes.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FinAbGroup,
    /// `ngens × rows`; apply then reduce.
    pub projection: IntMat,
}

impl Cokernel {
    pub fn apply(&self, v: &[BigInt]) -> GroupElem {
        self.group.reduce(&self.projection.mul_vec(v))
    }
}

pub fn cokernel(m: &IntMat) -> Cokernel {
    let rows = m.rows();
    let s = smith_normal_form(m);
    let mut tors_rows = vec![];
    let mut tors = vec![];
    let mut free_rows = vec![];
    for i in 0..rows {
        let d = s.d.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            free_rows.push(i);
        } else if !d.is_one() {
            tors_rows.push(i);
            tors.push(d);
        }
    }
    let mut sel = tors_rows;
    sel.extend(&free_rows);
    Cokernel {
        group: FinAbGroup { free_rank: free_rows.len(), torsion: tors },
        projection: s.u.select_rows(&sel),
    }
}

/// The image `Q = ψ(L) ⊆ P` in canonical form.
#[derive(Clone, Debug)]
pub struct SubgroupImage {
    pub group: FinAbGroup,
    /// `P.ngens × Q.ngens`: canonical generators of Q written in P.
    pub inclusion: IntMat,
    /// `Q.ngens × rank L`: ψ corestricted to Q (surjective).
    pub corestriction: IntMat,
}

impl SubgroupImage {
    pub fn include(&self, p: &FinAbGroup, q: &GroupElem) -> GroupElem {
        p.reduce(&self.inclusion.mul_vec(&q.coords()))
    }
}

/// Basis (columns) of `{x ∈ ℤ^k : ψ x = 0 in P}`.
pub fn group_kernel(psi: &IntMat, p: &FinAbGroup) -> IntMat {
    let k = psi.cols();
    let aug = psi.hstack(&neg(&p.relations()));
    let kb = kernel_basis(&aug);
    let idx: Vec<usize> = (0..k).collect();
    kb.select_rows(&idx)
}

fn neg(m: &IntMat) -> IntMat {
    let rows: Vec<Vec<BigInt>> = m.to_rows().into_iter().map(|r| r.into_iter().map(|v| -v).collect()).collect();
    IntMat::from_rows(&rows, m.cols())
}

pub fn hom_image_group(psi: &IntMat, p: &FinAbGroup) -> SubgroupImage {
    assert_eq!(psi.rows(), p.ngens(), "ψ targets must be P coordinates");
    let k = psi.cols();
    let kern = group_kernel(psi, p);
    let ck = cokernel(&kern);
    let s = smith_normal_form(&kern);
    // generator i of Q has lattice preimage u_inv[:, sel_i]
    let mut sel = vec![];
    for i in 0..k {
        let d = s.d.get(i).cloned().unwrap_or_else(BigInt::zero);
        if !d.is_zero() && !d.is_one() {
            sel.push(i);
        }
    }
    for i in 0..k {
        if s.d.get(i).map_or(true, |d| d.is_zero()) {
            sel.push(i);
        }
    }
    let pre = s.u_inv.select_cols(&sel);
    SubgroupImage { group: ck.group, inclusion: psi.mul(&pre), corestriction: ck.projection }
}

/// Some `x` with `ψ x = w` in P, if `w ∈ ψ(ℤ^k)`.
pub fn solve_in_group(psi: &IntMat, p: &FinAbGroup, w: &[BigInt]) -> Option<Vec<BigInt>> {
    let k = psi.cols();
    let aug = psi.hstack(&neg(&p.relations()));
    let s = smith_normal_form(&aug);
    let uw = s.u.mul_vec(w);
    let n = aug.cols();
    let mut y = vec![BigInt::zero(); n];
    for (i, val) in uw.iter().enumerate() {
        let d = s.d.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !val.is_zero() {
                return None;
            }
        } else {
            let (q, r) = val.div_mod_floor(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    let z = s.v.mul_vec(&y);
    Some(z[..k].to_vec())
}

/// Lattice points with ℓ¹ norm exactly `rho`, in lexicographic order.
pub fn l1_sphere(dim: usize, rho: i64) -> Vec<Vec<i64>> {
    fn rec(dim: usize, rho: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if dim == 0 {
            if rho == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if dim == 1 {
            for v in if rho == 0 { vec![0] } else { vec![-rho, rho] } {
                prefix.push(v);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        for v in -rho..=rho {
            prefix.push(v);
            rec(dim - 1, rho - v.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = vec![];
    rec(dim, rho, &mut vec![], &mut out);
    out
}

/// Shortest `x` in the lattice spanned by `basis` (columns, ambient
/// coordinates) with `ψ(x) = w`: minimal ℓ¹ norm of the basis coordinates,
/// then minimal ambient ℓ¹ norm, then lexicographically smallest.
pub fn shortest_preimage(psi: &IntMat, p: &FinAbGroup, basis: &IntMat, w: &[BigInt]) -> Option<Vec<BigInt>> {
    let restricted = psi.mul(basis);
    let x0 = solve_in_group(&restricted, p, w)?;
    let bound: i64 = x0.iter().map(|v| v.abs().to_i64().unwrap_or(i64::MAX / 4)).sum();
    let k = basis.cols();
    let target = p.reduce(w);
    let mut best: Option<(BigInt, Vec<i64>, Vec<BigInt>)> = None;
    for rho in 0..=bound {
        for y in l1_sphere(k, rho) {
            let yb = to_big(&y);
            if p.reduce(&restricted.mul_vec(&yb)) == target {
                let x = basis.mul_vec(&yb);
                let n1: BigInt = x.iter().map(|v| v.abs()).sum();
                let better = match &best {
                    None => true,
                    Some((bn, by, _)) => n1 < *bn || (n1 == *bn && y < *by),
                };
                if better {
                    best = Some((n1, y, x));
                }
            }
        }
        if best.is_some() {
            break;
        }
    }
    best.map(|(_, _, x)| x)
}

/// A saturated sublattice with an integral left inverse of its basis.
#[derive(Clone, Debug)]
pub struct Chart {
    /// `d × k` basis columns.
    pub basis: IntMat,
    left_inv: IntMat,
}

impl Chart {
    pub fn identity(d: usize) -> Chart {
        Chart { basis: IntMat::identity(d), left_inv: IntMat::identity(d) }
    }

    /// `basis` must have saturated, independent columns.
    pub fn new(basis: IntMat) -> Chart {
        let k = basis.cols();
        let s = smith_normal_form(&basis);
        assert!(s.d.iter().all(|x| x.is_one()), "chart basis must be saturated and independent");
        let idx: Vec<usize> = (0..k).collect();
        let left_inv = s.v.mul(&s.u.select_rows(&idx));
        Chart { basis, left_inv }
    }

    pub fn ambient_rank(&self) -> usize {
        self.basis.rows()
    }
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn to_ambient(&self, y: &[i64]) -> Vec<i64> {
        to_small(&self.basis.mul_vec_i64(y)).expect("coordinates fit in i64")
    }

    /// Coordinates of `x`, if it lies in the sublattice.
    pub fn to_sub(&self, x: &[i64]) -> Option<Vec<i64>> {
        let y = self.left_inv.mul_vec_i64(x);
        let back = self.basis.mul_vec(&y);
        if back != to_big(x) {
            return None;
        }
        to_small(&y)
    }

    /// Pulls a map on ambient coordinates back to chart coordinates.
    pub fn pull(&self, m: &IntMat) -> IntMat {
        m.mul(&self.basis)
    }
}

/// Saturated basis of `span(vs) ∩ ℤ^d`.
pub fn saturated_span(d: usize, vs: &[Vec<BigInt>]) -> IntMat {
    if vs.is_empty() {
        return IntMat::zeros(d, 0);
    }
    let m = IntMat::from_rows(vs, d);
    // span = kernel of the kernel of the row space
    let perp = kernel_basis(&m);
    kernel_basis(&perp.transpose())
}
