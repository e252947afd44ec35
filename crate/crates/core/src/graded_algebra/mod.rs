//! The P-graded monoid algebra A = R[σ ∩ L], its invariants, face maps and
//! the boundary ideal J.

mod elem;
mod local;

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub use elem::AlgebraElem;
pub use local::{LocalizedElem, Localization};

use crate::cone::{Cone, Face};
use crate::error::{Error, Result};
use crate::lattice::{cokernel, group_kernel, solve_in_group, to_big, Cokernel, FinAbGroup, GroupElem, IntMat};
use crate::monoid::{combinations, parallelepiped_points, AffineMonoid, Point, QuotientFrame};
use crate::scalar::{Coeff, CoeffRing};

/// Which monomial ideal to intersect with the invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialIdeal {
    /// J: monomials in the relative interior of σ.
    Interior,
    Unit,
    Zero,
}

#[derive(Clone, Debug)]
pub struct ToricGAlgebra {
    pub coeff: CoeffRing,
    pub monoid: AffineMonoid,
    pub group: FinAbGroup,
    /// P.ngens × rank(L); rows for torsion coordinates come first.
    pub psi: IntMat,
    /// Minimal monomials of J, filled on first use.
    j_gens: OnceLock<Vec<Point>>,
}

impl ToricGAlgebra {
    pub fn new(coeff: CoeffRing, cone: Cone, group: FinAbGroup, psi: IntMat) -> Result<ToricGAlgebra> {
        if psi.cols() != cone.ambient_rank() || psi.rows() != group.ngens() {
            return Err(Error::Validation(format!(
                "weight map is {}x{}, expected {}x{}",
                psi.rows(),
                psi.cols(),
                group.ngens(),
                cone.ambient_rank()
            )));
        }
        Ok(ToricGAlgebra { coeff, monoid: AffineMonoid::new(cone), group, psi, j_gens: OnceLock::new() })
    }

    pub fn with_budget(mut self, budget: u64) -> ToricGAlgebra {
        self.monoid = self.monoid.with_budget(budget);
        self.j_gens = OnceLock::new();
        self
    }

    pub fn rank(&self) -> usize {
        self.monoid.ambient_rank()
    }

    pub fn cone(&self) -> &Cone {
        &self.monoid.cone
    }

    pub fn budget(&self) -> u64 {
        self.monoid.budget()
    }

    pub fn one(&self) -> AlgebraElem {
        AlgebraElem::constant(Coeff::one().in_ring(&self.coeff), self.rank())
    }

    pub fn constant(&self, c: Coeff) -> AlgebraElem {
        AlgebraElem::constant(c.in_ring(&self.coeff), self.rank())
    }

    pub fn parse(&self, s: &str) -> Result<AlgebraElem> {
        AlgebraElem::parse(s, self.rank(), &self.coeff)
    }

    pub fn is_member(&self, x: &AlgebraElem) -> bool {
        x.support().all(|m| m.len() == self.rank() && self.cone().contains(m))
    }

    /// Class of ψ(m) in P; defined for any lattice point.
    pub fn weight(&self, m: &[i64]) -> GroupElem {
        self.group.reduce(&self.psi.mul_vec_i64(m))
    }

    /// P modulo ψ of the lineality lattice. Monomials there are units, so
    /// A(a) ≅ A(a + ψ(λ)) and free modules are determined by these classes.
    pub fn unit_shift_classes(&self) -> Cokernel {
        cokernel(&self.psi.mul(self.cone().lineality()).hstack(&self.group.relations()))
    }

    pub fn is_homogeneous(&self, x: &AlgebraElem, w: &GroupElem) -> bool {
        x.support().all(|m| &self.weight(m) == w)
    }

    /// The common weight of all support points; `None` for 0 or mixed weights.
    pub fn weight_of(&self, x: &AlgebraElem) -> Option<GroupElem> {
        let mut it = x.support();
        let w = self.weight(it.next()?);
        it.all(|m| self.weight(m) == w).then_some(w)
    }

    pub fn is_invariant(&self, x: &AlgebraElem) -> bool {
        self.is_homogeneous(x, &self.group.zero())
    }

    /// Weight-`w` component.
    pub fn component(&self, x: &AlgebraElem, w: &GroupElem) -> AlgebraElem {
        x.filter(|m| &self.weight(m) == w)
    }

    pub fn invariant_monoid(&self) -> AffineMonoid {
        self.monoid.invariant_monoid(&self.psi, &self.group)
    }

    pub fn invariant_generators(&self) -> Result<Vec<AlgebraElem>> {
        Ok(self.invariant_monoid().generators()?.into_iter().map(|q| self.monomial(q)).collect())
    }

    fn monomial(&self, q: Point) -> AlgebraElem {
        AlgebraElem::monomial(q, Coeff::one().in_ring(&self.coeff))
    }

    /// i_τ: keeps the monomials lying in τ.
    pub fn face_restrict(&self, tau: &Face, x: &AlgebraElem) -> AlgebraElem {
        x.filter(|m| tau.contains(m))
    }

    /// π_τ: the inclusion R[σ_τ ∩ L] ⊆ A.
    pub fn face_section(&self, tau: &Face, x: &AlgebraElem) -> Result<AlgebraElem> {
        match x.support().find(|m| !tau.contains(m)) {
            Some(m) => Err(Error::PreconditionFailed(format!("monomial {m:?} is not supported on the face"))),
            None => Ok(x.clone()),
        }
    }

    /// Inverse of x in A when x = r·e_q with r ∈ R^× and q a unit of σ ∩ L.
    pub fn unit_inverse(&self, x: &AlgebraElem) -> Option<AlgebraElem> {
        let (m, c) = x.as_monomial()?;
        if !self.coeff.is_unit(c) {
            return None;
        }
        let neg: Point = m.iter().map(|v| -v).collect();
        if !self.cone().contains(&neg) || !self.cone().contains(m) {
            return None;
        }
        Some(AlgebraElem::monomial(neg, c.inv()?))
    }

    pub fn is_unit(&self, x: &AlgebraElem) -> bool {
        self.unit_inverse(x).is_some()
    }

    /// e_m ∈ J.
    pub fn is_interior(&self, m: &[i64]) -> bool {
        self.cone().relative_interior(m)
    }

    /// Every support monomial lies in J.
    pub fn in_j(&self, x: &AlgebraElem) -> bool {
        x.support().all(|m| self.is_interior(m))
    }

    fn active_values(&self, m: &[i64]) -> Vec<i128> {
        let c = self.cone();
        c.active_functionals().into_iter().map(|i| c.eval(i, m)).collect()
    }

    /// Minimal interior points: J = ⋃ e_g·A over the returned g.
    pub fn j_generators(&self) -> Result<Vec<Point>> {
        if let Some(g) = self.j_gens.get() {
            return Ok(g.clone());
        }
        let trivial = ToricGAlgebra {
            coeff: self.coeff,
            monoid: self.monoid.clone(),
            group: FinAbGroup::free(1),
            psi: IntMat::zeros(1, self.rank()),
            j_gens: OnceLock::new(),
        };
        let g = trivial.invariant_interior_points()?;
        Ok(self.j_gens.get_or_init(|| g).clone())
    }

    /// Membership of x in J^N, decided exactly.
    ///
    /// Every interior point is g + s with g a minimal interior point and
    /// s ∈ σ ∩ L, so e_m ∈ J^N iff m minus some N-fold sum of minimal
    /// interior points stays in σ. Partial sums leaving m − σ are pruned.
    pub fn ideal_j_power_member(&self, x: &AlgebraElem, n: u32) -> Result<bool> {
        if n == 0 {
            return Ok(self.is_member(x));
        }
        let gens = self.j_generators()?;
        let mut memo: HashMap<(u32, Point), bool> = HashMap::new();
        for m in x.support() {
            if !self.cone().contains(m) || !self.power_search(&gens, 0, m.clone(), n, &mut memo) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    // rest − (k gens drawn from gens[from..]) ∈ σ for some choice?
    fn power_search(&self, gens: &[Point], from: usize, rest: Point, k: u32, memo: &mut HashMap<(u32, Point), bool>) -> bool {
        if k == 0 {
            return true;
        }
        if let Some(&b) = memo.get(&(k, rest.clone())) {
            return b;
        }
        let ok = (from..gens.len()).any(|i| {
            let next: Point = rest.iter().zip(&gens[i]).map(|(a, b)| a - b).collect();
            self.cone().contains(&next) && self.power_search(gens, i, next, k - 1, memo)
        });
        // memo is only sound for from = 0; nondecreasing order is an optimization
        if from == 0 {
            memo.insert((k, rest), ok);
        }
        ok
    }

    /// s = min{ l_i(v_j) > 0 } over active functionals and monoid generators.
    pub fn large_n_step(&self) -> Result<i128> {
        let mut s: Option<i128> = None;
        for g in self.monoid.generators()? {
            for v in self.active_values(&g) {
                if v > 0 {
                    s = Some(s.map_or(v, |s| s.min(v)));
                }
            }
        }
        Ok(s.unwrap_or(1))
    }

    /// N = max(0, max_i ⌈l_i(m)/s⌉): every f ∈ J^N has f/e_m supported in σ.
    pub fn large_n(&self, m: &[i64]) -> Result<u32> {
        let s = self.large_n_step()?;
        let n = self.active_values(m).into_iter().map(|v| Integer::div_ceil(&v, &s)).max().unwrap_or(0).max(0);
        u32::try_from(n).map_err(|_| Error::Resource("large-N bound overflows".into()))
    }

    /// Monomial generators of I ∩ A^G as an A^G-module ideal.
    pub fn invariant_part_of_monomial_ideal(&self, ideal: MonomialIdeal) -> Result<Vec<AlgebraElem>> {
        match ideal {
            MonomialIdeal::Zero => Ok(vec![]),
            MonomialIdeal::Unit => self.invariant_generators(),
            MonomialIdeal::Interior => {
                Ok(self.invariant_interior_points()?.into_iter().map(|q| self.monomial(q)).collect())
            }
        }
    }

    /// Minimal interior points of σ ∩ K with K = ker ψ, up to invariant-monoid translation.
    ///
    /// Each interior point of a simplicial subcone cone(v_S) is p + Σ n_j v_j with p in
    /// the half-open parallelepiped; replacing n_j ≥ 1 by 1 stays in the same open face,
    /// so the candidates p + Σ_{j∈T} v_j suffice.
    fn invariant_interior_points(&self) -> Result<Vec<Point>> {
        let d = self.rank();
        let k = group_kernel(&self.psi, &self.group);
        if k.cols() == 0 {
            let z = vec![0; d];
            return Ok(if self.is_interior(&z) { vec![z] } else { vec![] });
        }
        let frame = QuotientFrame::new(self.cone(), &k)?;
        let pc = &frame.pointed;
        let n = pc.ambient_rank();
        let mut cands: BTreeSet<Point> = BTreeSet::new();
        if n == 0 {
            cands.insert(vec![]);
        } else {
            let rays: Vec<Point> = pc.rays().iter().map(|r| r.iter().map(|v| v.to_i64().unwrap()).collect()).collect();
            let mut spent = 0u64;
            for s in combinations(rays.len(), n) {
                let cols: Vec<Vec<BigInt>> = s.iter().map(|&j| to_big(&rays[j])).collect();
                let v = IntMat::from_cols(&cols, n);
                let det = v.det().abs();
                if det.is_zero() {
                    continue;
                }
                spent += det.to_u64().unwrap_or(u64::MAX).saturating_mul(1 << n);
                if spent > self.budget() {
                    return Err(Error::Resource(format!("interior enumeration exceeded {} points", self.budget())));
                }
                for p in parallelepiped_points(&v) {
                    for mask in 0u32..(1 << n) {
                        let mut c = p.clone();
                        for (bit, &j) in s.iter().enumerate() {
                            if mask >> bit & 1 == 1 {
                                for i in 0..n {
                                    c[i] += rays[j][i];
                                }
                            }
                        }
                        if pc.strict_interior(&c) {
                            cands.insert(c);
                        }
                    }
                }
            }
        }
        let list: Vec<Point> = cands.into_iter().collect();
        let minimal: Vec<Point> = list
            .iter()
            .filter(|c| {
                !list.iter().any(|o| o != *c && pc.contains(&c.iter().zip(o).map(|(a, b)| a - b).collect::<Vec<_>>()))
            })
            .cloned()
            .collect();
        let mut out: Vec<Point> = minimal.iter().map(|c| frame.lift(c)).filter(|q| self.is_interior(q)).collect();
        out.sort();
        Ok(out)
    }

    /// Whether A_c ≠ 0, i.e. some point of σ ∩ L has weight c.
    ///
    /// The solutions form x0 + K·y over the polyhedron Q = {y : l(x0 + K y) ≥ 0}.
    /// Q has a lattice point iff conv(vertices) + Σ [0,1]·(recession rays) does,
    /// and that set is bounded.
    pub fn weight_component_nonempty(&self, c: &GroupElem) -> Result<bool> {
        let x0 = match solve_in_group(&self.psi, &self.group, &c.coords()) {
            Some(x) => x,
            None => return Ok(false),
        };
        let cone = self.cone();
        if x0.iter().any(|v| v.abs() > BigInt::from(i64::MAX / 4)) {
            return Err(Error::Resource("weight preimage too large".into()));
        }
        let x0s: Vec<i64> = x0.iter().map(|v| v.to_i64().unwrap()).collect();
        let k = group_kernel(&self.psi, &self.group);
        let kk = k.cols();
        if kk == 0 {
            return Ok(cone.contains(&x0s));
        }
        let mut ineqs: Vec<Vec<BigInt>> = cone
            .functionals()
            .iter()
            .map(|l| {
                let mut row = IntMat::from_rows(&[l.clone()], l.len()).mul(&k).row(0);
                row.push(l.iter().zip(&x0).map(|(a, b)| a * b).sum());
                row
            })
            .collect();
        let mut t_row = vec![BigInt::zero(); kk + 1];
        t_row[kk] = BigInt::from(1);
        ineqs.push(t_row);
        let hom = Cone::from_inequalities(kk + 1, &ineqs)?;
        let mut vertices: Vec<Vec<BigRational>> = vec![];
        let mut recession: Vec<Vec<BigInt>> = vec![];
        for r in hom.rays() {
            if r[kk].is_positive() {
                vertices.push(r[..kk].iter().map(|v| BigRational::new(v.clone(), r[kk].clone())).collect());
            } else {
                recession.push(r[..kk].to_vec());
            }
        }
        for j in 0..hom.lineality().cols() {
            let l = hom.lineality().col(j);
            recession.push(l[..kk].iter().map(|v| -v).collect());
            recession.push(l[..kk].to_vec());
        }
        if vertices.is_empty() {
            return Ok(false);
        }
        let mut lo = vec![0i64; kk];
        let mut hi = vec![0i64; kk];
        for i in 0..kk {
            let vmin = vertices.iter().map(|v| v[i].floor()).min().unwrap();
            let vmax = vertices.iter().map(|v| v[i].ceil()).max().unwrap();
            let up: BigInt = recession.iter().map(|r| r[i].clone().max(BigInt::zero())).sum();
            let down: BigInt = recession.iter().map(|r| (-r[i].clone()).max(BigInt::zero())).sum();
            lo[i] = (vmin.to_integer() - down).to_i64().ok_or_else(|| Error::Resource("box".into()))?;
            hi[i] = (vmax.to_integer() + up).to_i64().ok_or_else(|| Error::Resource("box".into()))?;
        }
        let volume = lo.iter().zip(&hi).try_fold(1u64, |acc, (l, h)| acc.checked_mul((h - l + 1) as u64));
        match volume {
            Some(v) if v <= self.budget() => {}
            _ => return Err(Error::Resource("weight-component search box too large".into())),
        }
        let ksmall: Vec<Vec<i64>> = k.to_i64_rows().ok_or_else(|| Error::Resource("kernel entries".into()))?;
        let mut y = lo.clone();
        loop {
            let x: Vec<i64> =
                (0..x0s.len()).map(|r| x0s[r] + (0..kk).map(|j| ksmall[r][j] * y[j]).sum::<i64>()).collect();
            if cone.contains(&x) {
                return Ok(true);
            }
            let mut i = 0;
            loop {
                if i == kk {
                    return Ok(false);
                }
                if y[i] < hi[i] {
                    y[i] += 1;
                    break;
                }
                y[i] = lo[i];
                i += 1;
            }
        }
    }

    /// Chooses the lex-smallest point of σ ∩ L among those of minimal ℓ¹ size with
    /// weight c, searching ℓ¹ spheres up to `radius`.
    pub fn small_point_of_weight(&self, c: &GroupElem, radius: i64) -> Option<Point> {
        let d = self.rank();
        for rho in 0..=radius {
            let hit = crate::lattice::l1_sphere(d, rho)
                .into_iter()
                .filter(|m| self.cone().contains(m) && &self.weight(m) == c)
                .min();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
}
