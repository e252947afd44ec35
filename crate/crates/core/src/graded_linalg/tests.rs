use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::cone::Cone;
use crate::lattice::{cokernel, FinAbGroup, IntMat};
use crate::scalar::{Coeff, CoeffRing};

fn alg(ring: CoeffRing, psi: &[i64]) -> ToricGAlgebra {
    ToricGAlgebra::new(ring, Cone::orthant(2), FinAbGroup::free(1), IntMat::from_i64(&[psi])).unwrap()
}

fn ws(a: &ToricGAlgebra, v: &[i64]) -> WeightVector {
    v.iter().map(|&x| a.group.reduce(&[BigInt::from(x)])).collect()
}

fn m(a: &ToricGAlgebra, rows: &[&[&str]]) -> ElemMat {
    rows.iter().map(|r| r.iter().map(|s| a.parse(s).unwrap()).collect()).collect()
}

fn u_example(a: &ToricGAlgebra) -> GradedMatrix {
    GradedMatrix::new(a, ws(a, &[0, 1]), ws(a, &[0, 1]), m(a, &[&["1", "e[1,0]"], &["e[0,1]", "1 + e[1,1]"]])).unwrap()
}

#[test]
fn determinants() {
    let a = alg(CoeffRing::QQ, &[1, -1]);
    assert!(det_endo(&a, &u_example(&a)).unwrap().is_one());
    assert!(det_endo(&a, &GradedMatrix::identity(&a, &ws(&a, &[0, 1]))).unwrap().is_one());
    let dg = GradedMatrix::new(&a, ws(&a, &[0, 0]), ws(&a, &[0, 0]), m(&a, &[&["e[1,1]", "0"], &["0", "1"]])).unwrap();
    let d = det_endo(&a, &dg).unwrap();
    assert_eq!(d, a.parse("e[1,1]").unwrap());
    assert!(a.is_invariant(&d));
}

#[test]
fn gradedness_is_checked() {
    let a = alg(CoeffRing::QQ, &[1, -1]);
    let bad = GradedMatrix::new(&a, ws(&a, &[0, 1]), ws(&a, &[0, 1]), m(&a, &[&["1", "e[0,1]"], &["0", "1"]]));
    assert!(matches!(bad, Err(Error::WeightMismatch(_))));
}

#[test]
fn inversion() {
    let a = alg(CoeffRing::QQ, &[1, -1]);
    let u = u_example(&a);
    let ui = invert(&a, &u).unwrap();
    assert_eq!(ui.entries, m(&a, &[&["1 + e[1,1]", "-e[1,0]"], &["-e[0,1]", "1"]]));
    assert!(mat::is_identity(&compose(&a, &ui, &u).unwrap().entries));
    let id = GradedMatrix::identity(&a, &ws(&a, &[0, 1]));
    assert_eq!(invert(&a, &id).unwrap(), id);
    let z = alg(CoeffRing::ZZ, &[1, -1]);
    let d2 = GradedMatrix::new(&z, ws(&z, &[0, 0]), ws(&z, &[0, 0]), m(&z, &[&["2", "0"], &["0", "1"]])).unwrap();
    assert!(matches!(invert(&z, &d2), Err(Error::NotInvertible(_))));
}

#[test]
fn units() {
    let a = alg(CoeffRing::QQ, &[1, -1]);
    assert!(is_unit(&a, &a.parse("3").unwrap()));
    assert!(!is_unit(&a, &a.parse("1 + e[1,0]").unwrap()));
    assert!(!is_unit(&a, &a.parse("e[1,0]").unwrap()));
    let laurent = ToricGAlgebra::new(
        CoeffRing::QQ,
        Cone::from_rays_i64(1, &[vec![1], vec![-1]]).unwrap(),
        FinAbGroup::free(1),
        IntMat::from_i64(&[&[1]]),
    )
    .unwrap();
    let x = laurent.parse("e[1]").unwrap();
    assert_eq!(unit_inverse(&laurent, &x), Some(laurent.parse("e[-1]").unwrap()));
}

#[test]
fn entry_masks() {
    let a = alg(CoeffRing::QQ, &[1, -1]);
    let f = GradedMatrix::zero(&ws(&a, &[0, 1]), &ws(&a, &[0, 1]));
    assert_eq!(invariant_entry_mask(&a, &f).unwrap(), vec![vec![true; 2]; 2]);
    let g = GradedMatrix::zero(&ws(&a, &[0]), &ws(&a, &[1]));
    assert_eq!(invariant_entry_mask(&a, &g).unwrap(), vec![vec![true]]);
    let pos = alg(CoeffRing::QQ, &[1, 1]);
    let h = GradedMatrix::zero(&ws(&pos, &[0, 1]), &ws(&pos, &[0, 1]));
    assert_eq!(invariant_entry_mask(&pos, &h).unwrap(), vec![vec![true, true], vec![false, true]]);
}

#[test]
fn weight_splitting() {
    let a = alg(CoeffRing::QQ, &[1, -1]);
    let e = GradedMatrix::new(&a, ws(&a, &[0, 1]), ws(&a, &[0, 1]), m(&a, &[&["1", "0"], &["0", "0"]])).unwrap();
    let parity = cokernel(&IntMat::from_i64(&[&[2]]));
    let blocks = weight_split(&a, &e, &parity).unwrap();
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks[0].indices, vec![0]);
    let same = cokernel(&a.group.relations());
    assert_eq!(weight_split(&a, &e, &same).unwrap().len(), 2);
    let to_zero = cokernel(&IntMat::identity(1));
    let one = weight_split(&a, &e, &to_zero).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].idempotent, e);
    let coupled = GradedMatrix::new(&a, ws(&a, &[0, 1]), ws(&a, &[0, 1]), m(&a, &[&["1", "e[1,0]"], &["0", "0"]])).unwrap();
    assert!(coupled.is_idempotent());
    assert!(matches!(weight_split(&a, &coupled, &parity), Err(Error::StructuralViolation(_))));
}

#[test]
fn face_restriction_of_matrices() {
    let a = alg(CoeffRing::QQ, &[1, -1]);
    let x_axis = a.cone().faces().into_iter().find(|f| f.dim == 1 && f.contains(&[1, 0])).unwrap();
    let f = GradedMatrix::new(&a, ws(&a, &[0]), ws(&a, &[0]), m(&a, &[&["1 + e[1,1]"]])).unwrap();
    assert_eq!(restrict_to_face(&a, &f, &x_axis).entries, m(&a, &[&["1"]]));
    let g = GradedMatrix::new(&a, ws(&a, &[1]), ws(&a, &[0]), m(&a, &[&["e[1,0]"]])).unwrap();
    assert_eq!(restrict_to_face(&a, &g, &x_axis), g);
    let id = GradedMatrix::identity(&a, &ws(&a, &[0, 1]));
    assert_eq!(restrict_to_face(&a, &id, &x_axis), id);
}

/// A graded surjection that splits ungraded also splits graded: project an
/// ungraded section onto the prescribed weight components.
#[test]
fn graded_splitting_from_ungraded() {
    let a = alg(CoeffRing::QQ, &[1, -1]);
    // f = (1, x): A(0) ⊕ A(1) → A(0)
    let f = GradedMatrix::new(&a, ws(&a, &[0, 1]), ws(&a, &[0]), m(&a, &[&["1", "e[1,0]"]])).unwrap();
    // ungraded section with junk in the second row
    let s_raw = m(&a, &[&["1 - e[1,0] + e[2,0]"], &["1 - e[1,0]"]]);
    assert!(mat::is_identity(&mat::mul(&f.entries, &s_raw)));
    let s = GradedMatrix { source: f.target.clone(), target: f.source.clone(), entries: s_raw.clone() };
    let projected: ElemMat = (0..2).map(|i| vec![a.component(&s_raw[i][0], &s.entry_weight(&a, i, 0))]).collect();
    let sg = GradedMatrix::new(&a, f.target.clone(), f.source.clone(), projected).unwrap();
    assert!(mat::is_identity(&compose(&a, &f, &sg).unwrap().entries));
}

fn entry_of_weight(c: i64, ks: Vec<(i64, i64)>) -> AlgebraElem {
    AlgebraElem::from_terms(ks.into_iter().map(|(k, coef)| {
        (if c >= 0 { vec![k + c, k] } else { vec![k, k - c] }, Coeff::from_int(coef))
    }))
}

fn graded2() -> impl Strategy<Value = (Vec<i64>, Vec<Vec<Vec<(i64, i64)>>>)> {
    (
        prop::collection::vec(-1i64..2, 2),
        prop::collection::vec(prop::collection::vec(prop::collection::vec((0i64..2, -2i64..3), 0..3), 2), 2),
    )
}

fn build(a: &ToricGAlgebra, w: &[i64], raw: Vec<Vec<Vec<(i64, i64)>>>) -> GradedMatrix {
    let entries: ElemMat = raw
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.into_iter().enumerate().map(|(j, ks)| entry_of_weight(w[j] - w[i], ks)).collect())
        .collect();
    GradedMatrix::new(a, ws(a, w), ws(a, w), entries).unwrap()
}

proptest! {
    #[test]
    fn composition_and_determinant_stay_graded((w, r1) in graded2(), (_, r2) in graded2()) {
        let a = alg(CoeffRing::QQ, &[1, -1]);
        let f = build(&a, &w, r1);
        let g = build(&a, &w, r2);
        let fg = compose(&a, &f, &g).unwrap();
        prop_assert!(fg.check(&a).is_ok());
        prop_assert!(a.is_invariant(&det_endo(&a, &f).unwrap()));
        let adj = adjugate(&a, &f).unwrap();
        prop_assert!(adj.check(&a).is_ok());
        let d = det_endo(&a, &f).unwrap();
        let prod = compose(&a, &adj, &f).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { d.clone() } else { AlgebraElem::zero() };
                prop_assert_eq!(&prod.entries[i][j], &expect);
            }
        }
    }

    #[test]
    fn elementary_products_invert(w in prop::collection::vec(-1i64..2, 3), ops in prop::collection::vec((0usize..3, 0usize..3, 0i64..2, -2i64..3), 1..5)) {
        let a = alg(CoeffRing::QQ, &[1, -1]);
        let mut u = GradedMatrix::identity(&a, &ws(&a, &w));
        for (i, j, k, c) in ops {
            if i == j {
                continue;
            }
            let mut el = GradedMatrix::identity(&a, &ws(&a, &w));
            el.entries[i][j] = entry_of_weight(w[j] - w[i], vec![(k, c)]);
            u = compose(&a, &u, &el).unwrap();
        }
        let ui = invert(&a, &u).unwrap();
        prop_assert!(mat::is_identity(&compose(&a, &ui, &u).unwrap().entries));
        prop_assert!(mat::is_identity(&compose(&a, &u, &ui).unwrap().entries));
    }
}
