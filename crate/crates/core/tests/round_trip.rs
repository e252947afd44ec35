use std::collections::BTreeMap;

use eqtoric::cone::Cone;
use eqtoric::corpus::{conjugated_projector, direct_sum, families, random_case};
use eqtoric::graded_algebra::ToricGAlgebra;
use eqtoric::graded_linalg::{mat, GradedMatrix};
use eqtoric::lattice::{FinAbGroup, GroupElem, IntMat};
use eqtoric::scalar::CoeffRing;
use eqtoric::trivializer::{k0_class, trivialize, GActionProblem, ModuleSpec, Options, Outcome, TraceEntry, Trivialization};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn solve(alg: &ToricGAlgebra, e: &GradedMatrix) -> Outcome {
    let p = GActionProblem { alg: alg.clone(), module: ModuleSpec::Idempotent(e.clone()) };
    trivialize(&p, &Options::default()).expect("valid problem")
}

fn complete(alg: &ToricGAlgebra, e: &GradedMatrix) -> Trivialization {
    match solve(alg, e) {
        Outcome::Complete(t) => t,
        Outcome::Partial(p) => panic!("partial at {}: {}", p.failed_step, p.reason),
    }
}

/// Multiset of weights modulo shifts by units.
fn classes(alg: &ToricGAlgebra, ws: &[GroupElem]) -> BTreeMap<GroupElem, usize> {
    let c = alg.unit_shift_classes();
    let mut out = BTreeMap::new();
    for w in ws {
        *out.entry(c.apply(&w.coords())).or_default() += 1;
    }
    out
}

fn check_iso(alg: &ToricGAlgebra, e: &GradedMatrix, t: &Trivialization) {
    let iso = &t.iso;
    let r = iso.weights.len();
    GradedMatrix::new(alg, e.source.clone(), iso.weights.clone(), iso.s.clone()).expect("S is graded");
    GradedMatrix::new(alg, iso.weights.clone(), e.source.clone(), iso.t.clone()).expect("T is graded");
    for x in iso.s.iter().chain(&iso.t).flatten() {
        assert!(alg.is_member(x), "{x} leaves the cone");
    }
    if r > 0 {
        assert!(mat::is_identity(&mat::mul(&iso.s, &iso.t)));
        assert_eq!(mat::mul(&iso.t, &iso.s), e.entries);
    } else {
        assert!(e.entries.iter().flatten().all(|x| x.is_zero()));
    }
    assert_eq!(t.trace.last(), Some(&TraceEntry::Final { rank: r }));
}

#[test]
fn random_modules_round_trip_in_every_family() {
    for (k, fam) in families().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + k as u64);
        for _ in 0..12 {
            let case = random_case(&fam.alg, 3, &mut rng);
            let t = complete(&fam.alg, &case.e);
            check_iso(&fam.alg, &case.e, &t);
            assert_eq!(classes(&fam.alg, &t.iso.weights), classes(&fam.alg, &case.hit), "{}", fam.name);
            if fam.alg.cone().is_pointed() {
                assert_eq!(k0_class(&t.iso.weights), k0_class(&case.hit), "{}", fam.name);
            }
        }
    }
}

#[test]
fn gluing_is_exercised() {
    let fam = &families()[0];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let glued = (0..40)
        .filter(|_| {
            let case = random_case(&fam.alg, 3, &mut rng);
            complete(&fam.alg, &case.e).trace.iter().any(|x| matches!(x, TraceEntry::Glue { .. }))
        })
        .count();
    assert!(glued > 0);
}

#[test]
fn k0_classes_are_additive() {
    for (k, fam) in families().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(200 + k as u64);
        let a = random_case(&fam.alg, 2, &mut rng);
        let b = random_case(&fam.alg, 2, &mut rng);
        let sum = direct_sum(&a.e, &b.e);
        let (ta, tb, ts) = (complete(&fam.alg, &a.e), complete(&fam.alg, &b.e), complete(&fam.alg, &sum));
        check_iso(&fam.alg, &sum, &ts);
        let mut both = ta.iso.weights.clone();
        both.extend(tb.iso.weights.iter().cloned());
        assert_eq!(classes(&fam.alg, &ts.iso.weights), classes(&fam.alg, &both), "{}", fam.name);
        if fam.alg.cone().is_pointed() {
            assert_eq!(k0_class(&ts.iso.weights), k0_class(&ta.iso.weights).add(&k0_class(&tb.iso.weights)));
        }
    }
}

#[test]
fn projector_onto_everything_and_nothing() {
    let fam = &families()[1];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ws: Vec<GroupElem> = [[0, 1], [1, -1]].iter().map(|c| fam.alg.group.reduce(&[c[0].into(), c[1].into()])).collect();
    for keep in [[true, true], [false, false]] {
        let case = conjugated_projector(&fam.alg, &ws, &keep, 6, &mut rng);
        let t = complete(&fam.alg, &case.e);
        check_iso(&fam.alg, &case.e, &t);
        assert_eq!(k0_class(&t.iso.weights), k0_class(&case.hit));
    }
}

#[test]
fn integer_coefficients_end_partial_or_complete() {
    // with ψ = (1, −1) over ℤ the torus step can stall; it must never lie
    let alg = ToricGAlgebra::new(CoeffRing::ZZ, Cone::orthant(2), FinAbGroup::free(1), IntMat::from_i64(&[&[1, -1]])).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let case = random_case(&alg, 3, &mut rng);
        match solve(&alg, &case.e) {
            Outcome::Complete(t) => {
                check_iso(&alg, &case.e, &t);
                assert_eq!(k0_class(&t.iso.weights), k0_class(&case.hit));
            }
            Outcome::Partial(p) => assert!(!p.failed_step.is_empty() && !p.reason.is_empty()),
        }
    }
}
