//! Affine monoids σ ∩ M: Gordon generators, membership, invariant submonoids.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{group_kernel, kernel_basis, smith_normal_form, to_big, to_small, Chart, FinAbGroup, IntMat, SnfResult};

pub const DEFAULT_POINT_BUDGET: u64 = 1_000_000;

pub type Point = Vec<i64>;

/// A full-rank sublattice of some ambient ℤ^d with exact membership.
#[derive(Clone, Debug)]
pub struct Sublattice {
    /// `d × k`, independent columns.
    pub basis: IntMat,
    snf: SnfResult,
}

impl Sublattice {
    pub fn new(basis: IntMat) -> Sublattice {
        let snf = smith_normal_form(&basis);
        assert_eq!(snf.rank(), basis.cols(), "sublattice basis must be independent");
        Sublattice { basis, snf }
    }

    pub fn full(d: usize) -> Sublattice {
        Sublattice::new(IntMat::identity(d))
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates of `x` in the basis, if `x` lies in the sublattice.
    pub fn coords(&self, x: &[i64]) -> Option<Vec<BigInt>> {
        let ux = self.snf.u.mul_vec_i64(x);
        let k = self.basis.cols();
        let mut y = vec![BigInt::zero(); k];
        for (i, v) in ux.iter().enumerate() {
            if i < k {
                let d = &self.snf.d[i];
                if !(v % d).is_zero() {
                    return None;
                }
                y[i] = v / d;
            } else if !v.is_zero() {
                return None;
            }
        }
        Some(self.snf.v.mul_vec(&y))
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.coords(x).is_some()
    }
}

#[derive(Debug)]
pub struct AffineMonoid {
    pub cone: Cone,
    pub lattice: Sublattice,
    budget: u64,
    gens: OnceLock<Result<Vec<Point>>>,
}

impl Clone for AffineMonoid {
    fn clone(&self) -> AffineMonoid {
        let gens = OnceLock::new();
        if let Some(g) = self.gens.get() {
            let _ = gens.set(g.clone());
        }
        AffineMonoid { cone: self.cone.clone(), lattice: self.lattice.clone(), budget: self.budget, gens }
    }
}

impl AffineMonoid {
    /// σ ∩ L for the ambient lattice L.
    pub fn new(cone: Cone) -> AffineMonoid {
        let d = cone.ambient_rank();
        AffineMonoid::with_lattice(cone, IntMat::identity(d))
    }

    pub fn with_lattice(cone: Cone, lattice_embed: IntMat) -> AffineMonoid {
        AffineMonoid { cone, lattice: Sublattice::new(lattice_embed), budget: DEFAULT_POINT_BUDGET, gens: OnceLock::new() }
    }

    pub fn with_budget(mut self, budget: u64) -> AffineMonoid {
        self.budget = budget;
        self.gens = OnceLock::new();
        self
    }

    pub fn lattice_embed(&self) -> &IntMat {
        &self.lattice.basis
    }

    pub fn ambient_rank(&self) -> usize {
        self.cone.ambient_rank()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.cone.contains(x) && self.lattice.contains(x)
    }

    /// A minimal generating set, sorted. Units appear as ± a lattice basis of
    /// the lineality part.
    pub fn generators(&self) -> Result<Vec<Point>> {
        self.gens.get_or_init(|| self.compute_generators()).clone()
    }

    fn compute_generators(&self) -> Result<Vec<Point>> {
        if self.lattice.rank() == 0 {
            return Ok(vec![]);
        }
        let frame = QuotientFrame::new(&self.cone, &self.lattice.basis)?;
        let hilb = pointed_hilbert_basis(&frame.pointed, self.budget)?;
        let mut out: BTreeSet<Point> = hilb.iter().map(|g| frame.lift(g)).collect();
        for l in frame.units() {
            out.insert(l.iter().map(|v| -v).collect());
            out.insert(l);
        }
        Ok(out.into_iter().collect())
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// σ ∩ ker(u) for `u` from the ambient lattice into `target`.
    pub fn invariant_monoid(&self, u: &IntMat, target: &FinAbGroup) -> AffineMonoid {
        let restricted = u.mul(&self.lattice.basis);
        let kern = group_kernel(&restricted, target);
        let basis = self.lattice.basis.mul(&kern);
        AffineMonoid::with_lattice(self.cone.clone(), basis).with_budget(self.budget)
    }

    /// σ ∩ M is saturated in M by construction.
    pub fn is_normal(&self) -> bool {
        true
    }

    pub fn has_nontrivial_units(&self) -> bool {
        let b = &self.lattice.basis;
        if b.cols() == 0 {
            return false;
        }
        let f = self.cone.functionals();
        if f.is_empty() {
            return true;
        }
        let m = IntMat::from_rows(f, self.ambient_rank()).mul(b);
        kernel_basis(&m).cols() > 0
    }
}

/// σ ∩ M presented as (lineality lattice) × (full-dimensional pointed cone).
pub(crate) struct QuotientFrame {
    /// M-basis in ambient coordinates.
    basis: IntMat,
    /// Saturated lineality basis in M-coordinates.
    lin: IntMat,
    u_inv: IntMat,
    chart: Chart,
    pub pointed: Cone,
}

impl QuotientFrame {
    pub fn new(cone: &Cone, basis: &IntMat) -> Result<QuotientFrame> {
        let k = basis.cols();
        let ineqs: Vec<Vec<BigInt>> = cone
            .functionals()
            .iter()
            .map(|l| IntMat::from_rows(&[l.clone()], l.len()).mul(basis).row(0))
            .collect();
        let cm = Cone::from_inequalities(k, &ineqs)?;
        let lin = cm.lineality().clone();
        let s = lin.cols();
        // unimodular coordinates z = U y with the lineality lattice first
        let (u, u_inv) = if s == 0 {
            (IntMat::identity(k), IntMat::identity(k))
        } else {
            let snf = smith_normal_form(&lin);
            (snf.u, snf.u_inv)
        };
        let q_rays: Vec<Vec<BigInt>> = cm
            .rays()
            .iter()
            .map(|r| u.mul_vec(r)[s..].to_vec())
            .filter(|r| r.iter().any(|v| !v.is_zero()))
            .collect();
        let qcone = Cone::from_rays(k - s, &q_rays)?;
        let (pointed, chart) = qcone.span_reduce();
        Ok(QuotientFrame { basis: basis.clone(), lin, u_inv, chart, pointed })
    }

    /// Ambient point over a point of the pointed cone (zero lineality part).
    pub fn lift(&self, g: &[i64]) -> Point {
        let s = self.lin.cols();
        let mut z = vec![BigInt::zero(); s];
        z.extend(to_big(&self.chart.to_ambient(g)));
        let y = self.u_inv.mul_vec(&z);
        to_small(&self.basis.mul_vec(&y)).expect("point fits in i64")
    }

    /// Lattice basis of the units, in ambient coordinates.
    pub fn units(&self) -> Vec<Point> {
        (0..self.lin.cols()).map(|j| to_small(&self.basis.mul_vec(&self.lin.col(j))).expect("fits")).collect()
    }
}

/// Hilbert basis of a full-dimensional pointed cone via fundamental
/// parallelepipeds of its simplicial subcones.
pub(crate) fn pointed_hilbert_basis(c: &Cone, budget: u64) -> Result<Vec<Point>> {
    let n = c.ambient_rank();
    if n == 0 {
        return Ok(vec![]);
    }
    let ext: Vec<Point> = c.rays().iter().map(|r| to_small(r).expect("ray fits")).collect();
    let mut cand: BTreeSet<Point> = ext.iter().cloned().collect();
    let mut spent: u64 = 0;
    for subset in combinations(ext.len(), n) {
        let cols: Vec<Vec<BigInt>> = subset.iter().map(|&i| to_big(&ext[i])).collect();
        let v = IntMat::from_cols(&cols, n);
        let det = v.det();
        if det.is_zero() {
            continue;
        }
        spent += det.abs().to_u64().unwrap_or(u64::MAX);
        if spent > budget {
            return Err(Error::Resource(format!("parallelepiped point count exceeds budget {budget}")));
        }
        for p in parallelepiped_points(&v) {
            if p.iter().any(|&x| x != 0) {
                cand.insert(p);
            }
        }
    }
    let cand: Vec<Point> = cand.into_iter().collect();
    let mut out = vec![];
    for (i, x) in cand.iter().enumerate() {
        let reducible = cand.iter().enumerate().any(|(j, y)| {
            if i == j {
                return false;
            }
            let diff: Point = x.iter().zip(y).map(|(a, b)| a - b).collect();
            diff.iter().any(|&v| v != 0) && c.contains(&diff)
        });
        if !reducible {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// Lattice points of `{V t : 0 ≤ t_j < 1}` for a nonsingular square `V`.
pub(crate) fn parallelepiped_points(v: &IntMat) -> Vec<Point> {
    let n = v.rows();
    let snf = smith_normal_form(v);
    let inv = rational_inverse(v);
    let mut out = vec![];
    let orders: Vec<i64> = snf.d.iter().map(|d| d.to_i64().expect("small determinant")).collect();
    let mut y = vec![0i64; n];
    loop {
        let x = snf.u_inv.mul_vec_i64(&y);
        let lam: Vec<BigRational> = (0..n)
            .map(|i| (0..n).fold(BigRational::zero(), |s, j| s + &inv[i][j] * BigRational::from_integer(x[j].clone())))
            .collect();
        let frac: Vec<BigRational> = lam.iter().map(|l| l - l.floor()).collect();
        let p: Point = (0..n)
            .map(|i| {
                let s = (0..n).fold(BigRational::zero(), |s, j| s + BigRational::from_integer(v.get(i, j).clone()) * &frac[j]);
                assert!(s.is_integer());
                s.to_integer().to_i64().expect("fits")
            })
            .collect();
        out.push(p);
        // odometer over ∏ ℤ/d_i
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            y[i] += 1;
            if y[i] < orders[i] {
                break;
            }
            y[i] = 0;
            i += 1;
        }
    }
}

pub(crate) fn rational_inverse(v: &IntMat) -> Vec<Vec<BigRational>> {
    let n = v.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(v.get(i, j).clone())
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("nonsingular");
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = &*x / &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let t = &a[c][j] * &f;
                    a[r][j] = &a[r][j] - t;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, n, k, &mut vec![], &mut out);
    out
}

/// Whether `x` is a nonnegative integer combination of `gens`, all lying in
/// the pointed cone `c` (σ ∩ −σ = 0 is required for termination).
pub fn in_nonneg_span(gens: &[Point], c: &Cone, x: &[i64]) -> Result<bool> {
    if !c.is_pointed() {
        return Err(Error::Unsupported { step: "monoid".into(), reason: "span membership needs a pointed cone".into() });
    }
    let fs = c.functionals_small();
    let deg = |p: &[i64]| -> i128 {
        fs.iter().map(|l| l.iter().zip(p).map(|(&a, &b)| a as i128 * b as i128).sum::<i128>()).sum()
    };
    let gens: Vec<&Point> = gens.iter().filter(|g| g.iter().any(|&v| v != 0)).collect();
    let mut memo: BTreeMap<Point, bool> = BTreeMap::new();
    fn rec(x: Point, gens: &[&Point], c: &Cone, deg: &dyn Fn(&[i64]) -> i128, memo: &mut BTreeMap<Point, bool>) -> bool {
        if x.iter().all(|&v| v == 0) {
            return true;
        }
        if let Some(&v) = memo.get(&x) {
            return v;
        }
        let dx = deg(&x);
        let mut ok = false;
        for g in gens {
            if deg(g) > dx {
                continue;
            }
            let y: Point = x.iter().zip(g.iter()).map(|(a, b)| a - b).collect();
            if c.contains(&y) && rec(y, gens, c, deg, memo) {
                ok = true;
                break;
            }
        }
        memo.insert(x, ok);
        ok
    }
    if !c.contains(x) {
        return Ok(false);
    }
    Ok(rec(x.to_vec(), &gens, c, &deg, &mut memo))
}

/// Saturation of the monoid generated by `gens` in the ambient lattice ℤ^d:
/// every Gordon generator of cone(gens) ∩ ℤ^d must be a combination of `gens`.
pub fn generated_is_normal(d: usize, gens: &[Point]) -> Result<bool> {
    saturated_in(d, gens, None)
}

/// Normality in the intrinsic sense: saturation inside the group G(Q)
/// generated by `gens`.
pub fn generated_is_normal_in_group(d: usize, gens: &[Point]) -> Result<bool> {
    let nz: Vec<Point> = gens.iter().filter(|g| g.iter().any(|&v| v != 0)).cloned().collect();
    let group = group_basis(d, &nz);
    saturated_in(d, gens, Some(group))
}

fn saturated_in(d: usize, gens: &[Point], lattice: Option<IntMat>) -> Result<bool> {
    let nz: Vec<Point> = gens.iter().filter(|g| g.iter().any(|&v| v != 0)).cloned().collect();
    if nz.is_empty() {
        return Ok(true);
    }
    let cone = Cone::from_rays_i64(d, &nz)?;
    let sat = AffineMonoid::with_lattice(cone.clone(), lattice.unwrap_or_else(|| IntMat::identity(d)));
    for h in sat.generators()? {
        if !in_nonneg_span(&nz, &cone, &h)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sampled seminormality: for x in G(Q) within the box, x², x³ ∈ Q ⇒ x ∈ Q.
pub fn seminormal_sample(d: usize, gens: &[Point], radius: i64) -> Result<bool> {
    let nz: Vec<Point> = gens.iter().filter(|g| g.iter().any(|&v| v != 0)).cloned().collect();
    if nz.is_empty() {
        return Ok(true);
    }
    let cone = Cone::from_rays_i64(d, &nz)?;
    let group = Sublattice::new(group_basis(d, &nz));
    for x in box_points(d, radius) {
        if !group.contains(&x) || !cone.contains(&x) {
            continue;
        }
        let x2: Point = x.iter().map(|v| 2 * v).collect();
        let x3: Point = x.iter().map(|v| 3 * v).collect();
        if in_nonneg_span(&nz, &cone, &x2)? && in_nonneg_span(&nz, &cone, &x3)? && !in_nonneg_span(&nz, &cone, &x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Basis (columns) of the group generated by `gens`.
fn group_basis(d: usize, gens: &[Point]) -> IntMat {
    let cols: Vec<Vec<BigInt>> = gens.iter().map(|g| to_big(g)).collect();
    let g = IntMat::from_cols(&cols, d);
    let s = smith_normal_form(&g);
    let r = s.rank();
    // im G = U⁻¹ D ℤ^r
    let mut basis = IntMat::zeros(d, r);
    for j in 0..r {
        for i in 0..d {
            basis.set(i, j, s.u_inv.get(i, j) * &s.d[j]);
        }
    }
    basis
}

/// All points of `[-r, r]^d` in lexicographic order.
pub fn box_points(d: usize, r: i64) -> Vec<Point> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        let mut next = vec![];
        for p in &out {
            for v in -r..=r {
                let mut q: Point = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(rays: &[&[i64]]) -> Cone {
        let d = rays[0].len();
        Cone::from_rays_i64(d, &rays.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Exact box oracle: every monoid point in the box is an ℕ-combination of
    /// `gens`, found by search with remainders confined to σ ∩ a larger box.
    fn generated_in_box(m: &AffineMonoid, gens: &[Point], r: i64) -> bool {
        let d = m.ambient_rank();
        let big = 4 * r;
        let mut reach: BTreeSet<Point> = BTreeSet::new();
        reach.insert(vec![0; d]);
        let mut frontier = vec![vec![0; d]];
        while let Some(p) = frontier.pop() {
            for g in gens {
                let q: Point = p.iter().zip(g).map(|(a, b)| a + b).collect();
                if q.iter().all(|v| v.abs() <= big) && reach.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        box_points(d, r).into_iter().filter(|x| m.contains(x)).all(|x| reach.contains(&x))
    }

    #[test]
    fn orthant_generators() {
        let m = AffineMonoid::new(Cone::orthant(2));
        assert_eq!(m.generators().unwrap(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn skew_cone_generators() {
        let m = AffineMonoid::new(cone(&[&[1, 0], &[1, 2]]));
        let g = m.generators().unwrap();
        assert_eq!(g, vec![vec![1, 0], vec![1, 1], vec![1, 2]]);
        assert!(generated_in_box(&m, &g, 4));
    }

    #[test]
    fn half_plane_generators() {
        let m = AffineMonoid::new(cone(&[&[1, 0], &[-1, 0], &[0, 1]]));
        let g = m.generators().unwrap();
        assert_eq!(g, vec![vec![-1, 0], vec![0, 1], vec![1, 0]]);
        assert!(generated_in_box(&m, &g, 4));
        assert!(m.has_nontrivial_units());
    }

    #[test]
    fn membership() {
        let m = AffineMonoid::new(Cone::orthant(2));
        assert!(m.contains(&[3, 1]));
        assert!(!m.contains(&[-1, 0]));
        let inv = m.invariant_monoid(&IntMat::from_i64(&[&[1, -1]]), &FinAbGroup::free(1));
        assert!(inv.contains(&[1, 1]));
        assert!(!inv.contains(&[1, 0]));
    }

    #[test]
    fn invariant_monoid_examples() {
        let m = AffineMonoid::new(Cone::orthant(2));
        let inv = m.invariant_monoid(&IntMat::from_i64(&[&[1, -1]]), &FinAbGroup::free(1));
        assert_eq!(inv.generators().unwrap(), vec![vec![1, 1]]);
        let inv = m.invariant_monoid(&IntMat::zeros(1, 2), &FinAbGroup::free(1));
        assert_eq!(inv.generators().unwrap(), vec![vec![0, 1], vec![1, 0]]);
        let z2 = FinAbGroup { free_rank: 0, torsion: vec![BigInt::from(2)] };
        let inv = m.invariant_monoid(&IntMat::from_i64(&[&[1, -1]]), &z2);
        assert_eq!(inv.generators().unwrap(), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        for x in box_points(2, 5) {
            let even = (x[0] - x[1]).rem_euclid(2) == 0;
            assert_eq!(inv.contains(&x), m.contains(&x) && even);
        }
    }

    #[test]
    fn normality_of_generated_monoids() {
        assert!(!generated_is_normal(2, &[vec![1, 0], vec![1, 2]]).unwrap());
        // inside its own group (index 2 in ℤ²) the same monoid is free
        assert!(generated_is_normal_in_group(2, &[vec![1, 0], vec![1, 2]]).unwrap());
        assert!(generated_is_normal(1, &[vec![1]]).unwrap());
        assert!(generated_is_normal(2, &[vec![1, 0], vec![1, 1], vec![1, 2]]).unwrap());
        // ⟨2, 3⟩ ⊂ ℤ is neither normal nor seminormal
        assert!(!generated_is_normal_in_group(1, &[vec![2], vec![3]]).unwrap());
        assert!(!seminormal_sample(1, &[vec![2], vec![3]], 6).unwrap());
        assert!(seminormal_sample(2, &[vec![1, 0], vec![1, 2]], 4).unwrap());
    }

    #[test]
    fn units() {
        assert!(!AffineMonoid::new(Cone::orthant(2)).has_nontrivial_units());
        assert!(!AffineMonoid::new(Cone::from_rays(2, &[]).unwrap()).has_nontrivial_units());
    }

    #[test]
    fn three_dimensional_cone() {
        // cone over a non-unimodular triangle
        let m = AffineMonoid::new(cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]));
        let g = m.generators().unwrap();
        assert!(generated_in_box(&m, &g, 3));
        for (i, x) in g.iter().enumerate() {
            let others: Vec<Point> = g.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, y)| y.clone()).collect();
            assert!(!in_nonneg_span(&others, &m.cone, x).unwrap());
        }
    }
}
