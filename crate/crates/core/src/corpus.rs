//! Curated actions and random test modules: linear actions of G_m and
//! G_m × μ₂ on planes, 3-space and a Laurent plane, and idempotents
//! U·proj·U⁻¹ with U a product of graded elementary matrices.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::cone::Cone;
use crate::graded_algebra::{AlgebraElem, ToricGAlgebra};
use crate::graded_linalg::{mat, ElemMat, GradedMatrix};
use crate::lattice::{FinAbGroup, GroupElem, IntMat};
use crate::monoid::{box_points, Point};
use crate::scalar::{Coeff, CoeffRing};

#[derive(Clone, Debug)]
pub struct Family {
    pub name: &'static str,
    pub alg: ToricGAlgebra,
}

fn family(name: &'static str, coeff: CoeffRing, cone: Cone, group: FinAbGroup, psi: &[&[i64]]) -> Family {
    Family { name, alg: ToricGAlgebra::new(coeff, cone, group, IntMat::from_i64(psi)).expect("curated family") }
}

fn gm_mu2() -> FinAbGroup {
    FinAbGroup::new(1, &[BigInt::from(2)]).expect("Z/2 + Z")
}

fn laurent_plane() -> Cone {
    Cone::from_rays_i64(2, &[vec![1, 0], vec![0, 1], vec![0, -1]]).expect("half plane")
}

/// The linear-action families used for round trips.
pub fn families() -> Vec<Family> {
    let q = CoeffRing::QQ;
    let z = CoeffRing::ZZ;
    vec![
        family("QQ[x,y], Gm weights (1,-1)", q, Cone::orthant(2), FinAbGroup::free(1), &[&[1, -1]]),
        family("QQ[x,y], Gm x mu2 weights (1,0 | 1,-1)", q, Cone::orthant(2), gm_mu2(), &[&[1, 0], &[1, -1]]),
        family("QQ[x,y,z], Gm weights (1,1,1)", q, Cone::orthant(3), FinAbGroup::free(1), &[&[1, 1, 1]]),
        family("QQ[x,y,z], Gm x mu2 weights (1,1,0 | 1,2,1)", q, Cone::orthant(3), gm_mu2(), &[&[1, 1, 0], &[1, 2, 1]]),
        family("QQ[x,y^±], Gm weights (1,1)", q, laurent_plane(), FinAbGroup::free(1), &[&[1, 1]]),
        family("QQ[x,y^±], Gm x mu2 weights (0,1 | 1,1)", q, laurent_plane(), gm_mu2(), &[&[0, 1], &[1, 1]]),
        family("ZZ[x,y], Gm weights (1,1)", z, Cone::orthant(2), FinAbGroup::free(1), &[&[1, 1]]),
        family("ZZ[x,y], Gm x mu2 weights (1,0 | 1,1)", z, Cone::orthant(2), gm_mu2(), &[&[1, 0], &[1, 1]]),
    ]
}

/// A module presented as U·proj·U⁻¹ together with the weights proj keeps.
#[derive(Clone, Debug)]
pub struct Case {
    pub e: GradedMatrix,
    pub hit: Vec<GroupElem>,
}

fn random_weight<R: Rng>(alg: &ToricGAlgebra, rng: &mut R) -> GroupElem {
    let mut coords: Vec<BigInt> = vec![];
    for d in &alg.group.torsion {
        let d = d.to_i64().expect("small torsion");
        coords.push(BigInt::from(rng.gen_range(0..d)));
    }
    for _ in 0..alg.group.free_rank {
        coords.push(BigInt::from(rng.gen_range(-2..=2)));
    }
    alg.group.reduce(&coords)
}

/// Random element of A_w built from monomials with ‖m‖∞ ≤ 2; may be 0.
fn random_homogeneous<R: Rng>(alg: &ToricGAlgebra, pool: &[(Point, GroupElem)], w: &GroupElem, rng: &mut R) -> AlgebraElem {
    let cands: Vec<&Point> = pool.iter().filter(|(_, c)| c == w).map(|(m, _)| m).collect();
    if cands.is_empty() {
        return AlgebraElem::zero();
    }
    let mut x = AlgebraElem::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let m = cands[rng.gen_range(0..cands.len())].clone();
        let mut c = rng.gen_range(-2i64..=2);
        if c == 0 {
            c = 1;
        }
        x.add_term(m, Coeff::from_int(c).in_ring(&alg.coeff));
    }
    x
}

/// U and U⁻¹ for a product of `steps` graded elementary matrices on `weights`.
pub fn random_unimodular<R: Rng>(alg: &ToricGAlgebra, weights: &[GroupElem], steps: usize, rng: &mut R) -> (ElemMat, ElemMat) {
    let n = weights.len();
    let d = alg.rank();
    let pool: Vec<(Point, GroupElem)> =
        box_points(d, 2).into_iter().filter(|m| alg.cone().contains(m)).map(|m| (m.clone(), alg.weight(&m))).collect();
    let id = mat::map(&mat::identity(n, d), |x| x.in_ring(&alg.coeff));
    let (mut u, mut u_inv) = (id.clone(), id.clone());
    if n < 2 {
        return (u, u_inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        // entry (i, j) has weight v_j − v_i
        let c = random_homogeneous(alg, &pool, &alg.group.sub(&weights[j], &weights[i]), rng);
        if c.is_zero() {
            continue;
        }
        let mut el = id.clone();
        el[i][j] = c.clone();
        let mut el_inv = id.clone();
        el_inv[i][j] = -&c;
        u = mat::mul(&u, &el);
        u_inv = mat::mul(&el_inv, &u_inv);
    }
    (u, u_inv)
}

/// U·diag(hit)·U⁻¹ on random weights.
pub fn random_case<R: Rng>(alg: &ToricGAlgebra, max_rank: usize, rng: &mut R) -> Case {
    let n = rng.gen_range(1..=max_rank);
    let weights: Vec<GroupElem> = (0..n).map(|_| random_weight(alg, rng)).collect();
    let keep: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.6)).collect();
    conjugated_projector(alg, &weights, &keep, 2 * n + 1, rng)
}

pub fn conjugated_projector<R: Rng>(alg: &ToricGAlgebra, weights: &[GroupElem], keep: &[bool], steps: usize, rng: &mut R) -> Case {
    let n = weights.len();
    let d = alg.rank();
    let (u, u_inv) = random_unimodular(alg, weights, steps, rng);
    let mut proj = mat::zeros(n, n);
    for i in 0..n {
        if keep[i] {
            proj[i][i] = AlgebraElem::one(d).in_ring(&alg.coeff);
        }
    }
    let entries = mat::mul(&mat::mul(&u, &proj), &u_inv);
    let e = GradedMatrix::new(alg, weights.to_vec(), weights.to_vec(), entries).expect("conjugation preserves gradings");
    let hit = weights.iter().zip(keep).filter(|(_, &k)| k).map(|(w, _)| w.clone()).collect();
    Case { e, hit }
}

/// e ⊕ e′ with concatenated weights.
pub fn direct_sum(a: &GradedMatrix, b: &GradedMatrix) -> GradedMatrix {
    let (n, m) = (a.rows(), b.rows());
    let mut entries = mat::zeros(n + m, n + m);
    for i in 0..n {
        for j in 0..n {
            entries[i][j] = a.entries[i][j].clone();
        }
    }
    for i in 0..m {
        for j in 0..m {
            entries[n + i][n + j] = b.entries[i][j].clone();
        }
    }
    let w: Vec<GroupElem> = a.source.iter().chain(&b.source).cloned().collect();
    GradedMatrix { source: w.clone(), target: w, entries }
}
