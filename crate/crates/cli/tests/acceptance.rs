//! Acceptance gate: nine criteria, one PASS/FAIL line each. Every check
//! compares against an oracle computed here by brute force or by replaying
//! the defining identity, never against the library's own bookkeeping.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use eqtoric::cone::Cone;
use eqtoric::corpus::{direct_sum, families, random_case, Case, Family};
use eqtoric::graded_algebra::{AlgebraElem, MonomialIdeal, ToricGAlgebra};
use eqtoric::graded_linalg::{det_endo, mat, ElemMat, GradedMatrix};
use eqtoric::lattice::{FinAbGroup, GroupElem, IntMat};
use eqtoric::monoid::{box_points, AffineMonoid, Point};
use eqtoric::problem::ProblemFile;
use eqtoric::scalar::CoeffRing;
use eqtoric::trivializer::{refine_matrix, trivialize, GActionProblem, ModuleSpec, Options, Outcome};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn lib<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("took {t:.1?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------- corpora

/// Pointed full-dimensional cone from 2 to 4 random rays in [-2, 2]^d.
fn random_cone(d: usize, rng: &mut ChaCha8Rng) -> Cone {
    loop {
        let k = rng.gen_range(d..=d + 1);
        let rays: Vec<Vec<i64>> = (0..k).map(|_| (0..d).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        if rays.iter().any(|r| r.iter().all(|&v| v == 0)) {
            continue;
        }
        if let Ok(c) = Cone::from_rays_i64(d, &rays) {
            if c.is_pointed() && c.dim() == d {
                return c;
            }
        }
    }
}

/// ℤ, ℤ/2 ⊕ ℤ or ℤ² with ψ entries in [-3, 3]. Half the time each free row
/// vanishes on a chosen interior point so that invariants exist.
fn random_grading(cone: &Cone, rng: &mut ChaCha8Rng) -> (FinAbGroup, IntMat) {
    let d = cone.ambient_rank();
    let group = match rng.gen_range(0..3) {
        0 => FinAbGroup::free(1),
        1 => FinAbGroup::new(1, &[BigInt::from(2)]).expect("Z/2 + Z"),
        _ => FinAbGroup::free(2),
    };
    let interior: Vec<Point> = box_points(d, 2).into_iter().filter(|m| cone.strict_interior(m)).collect();
    let aim = interior.choose(rng).filter(|_| d > 1 && rng.gen_bool(0.5)).cloned();
    let row = |rng: &mut ChaCha8Rng| loop {
        let r: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
        match &aim {
            Some(u) if r.iter().zip(u).map(|(a, b)| a * b).sum::<i64>() != 0 => continue,
            _ => return r,
        }
    };
    let rows: Vec<Vec<BigInt>> = (0..group.ngens()).map(|_| row(rng).into_iter().map(BigInt::from).collect()).collect();
    (group, IntMat::from_rows(&rows, d))
}

fn random_algebras(n: usize, seed: u64) -> Vec<ToricGAlgebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=3);
            let cone = random_cone(d, &mut rng);
            let (group, psi) = random_grading(&cone, &mut rng);
            ToricGAlgebra::new(CoeffRing::QQ, cone, group, psi).expect("random algebra")
        })
        .collect()
}

/// Five cones: two orthants, a non-normal-looking simplicial cone, a
/// square pyramid and a half plane with lineality.
fn five_cones() -> Vec<Cone> {
    vec![
        Cone::orthant(2),
        Cone::orthant(3),
        Cone::from_rays_i64(2, &[vec![1, 0], vec![1, 2]]).unwrap(),
        Cone::from_rays_i64(3, &[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]]).unwrap(),
        Cone::from_rays_i64(2, &[vec![1, 0], vec![0, 1], vec![0, -1]]).unwrap(),
    ]
}

fn five_algebras() -> Vec<ToricGAlgebra> {
    let psis: [&[&[i64]]; 5] = [&[&[1, -1]], &[&[1, -1, 0]], &[&[2, -1]], &[&[1, 0, -1]], &[&[0, 1]]];
    five_cones()
        .into_iter()
        .zip(psis)
        .map(|(c, psi)| ToricGAlgebra::new(CoeffRing::QQ, c, FinAbGroup::free(1), IntMat::from_i64(psi)).unwrap())
        .collect()
}

// ---------------------------------------------------------------- oracles

/// Strictly positive on σ \ {0} for pointed full-dimensional σ.
fn height(c: &Cone, m: &[i64]) -> i128 {
    (0..c.functionals().len()).map(|i| c.eval(i, m)).sum()
}

/// Whether p is a sum of `gens`, searched downward along `height`.
fn generated(c: &Cone, gens: &[Point], p: &[i64], memo: &mut HashMap<Point, bool>) -> bool {
    if p.iter().all(|&v| v == 0) {
        return true;
    }
    if let Some(&b) = memo.get(p) {
        return b;
    }
    let mut ok = false;
    for g in gens {
        let rest: Point = p.iter().zip(g).map(|(a, b)| a - b).collect();
        if c.contains(&rest) && height(c, &rest) < height(c, p) && generated(c, gens, &rest, memo) {
            ok = true;
            break;
        }
    }
    memo.insert(p.to_vec(), ok);
    ok
}

/// Every box point of σ ∩ L satisfying `keep` is a sum of `gens`, and no
/// generator is a sum of two nonzero kept points.
fn generates_box(c: &Cone, gens: &[Point], keep: impl Fn(&Point) -> bool, radius: i64) -> Result<usize, String> {
    let pts: Vec<Point> = box_points(c.ambient_rank(), radius).into_iter().filter(|m| c.contains(m) && keep(m)).collect();
    for g in gens {
        ensure!(c.contains(g) && keep(g), "generator {g:?} is not a point of the monoid");
    }
    let mut memo = HashMap::new();
    for p in &pts {
        ensure!(generated(c, gens, p, &mut memo), "{p:?} is not generated by {gens:?}");
    }
    for g in gens {
        for a in &pts {
            let b: Point = g.iter().zip(a).map(|(x, y)| x - y).collect();
            let nonzero = |v: &Point| v.iter().any(|&x| x != 0);
            ensure!(!(nonzero(a) && nonzero(&b) && c.contains(&b) && keep(&b)), "generator {g:?} = {a:?} + {b:?}");
        }
    }
    Ok(pts.len())
}

fn random_elem(alg: &ToricGAlgebra, pool: &[Point], rng: &mut ChaCha8Rng) -> AlgebraElem {
    let mut x = AlgebraElem::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let m = pool.choose(rng).expect("nonempty pool").clone();
        x.add_term(m, alg.coeff.from_int(rng.gen_range(-3i64..=3)));
    }
    x
}

fn cone_points(alg: &ToricGAlgebra, r: i64) -> Vec<Point> {
    box_points(alg.rank(), r).into_iter().filter(|m| alg.cone().contains(m)).collect()
}

// ---------------------------------------------------------------- criteria

fn invariant_ring_oracle() -> Check {
    let start = Instant::now();
    let (mut points, mut nontrivial) = (0, 0);
    for (k, alg) in random_algebras(50, 1).iter().enumerate() {
        let gens = lib(alg.invariant_monoid().generators())?;
        let zero = alg.group.zero();
        points += generates_box(alg.cone(), &gens, |m| alg.weight(m) == zero, 6).map_err(|e| format!("algebra {k}: {e}"))?;
        nontrivial += usize::from(!gens.is_empty());
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("50 gradings ({nontrivial} with invariants), {points} invariant box points generated"))
}

fn gordan_oracle() -> Check {
    let start = Instant::now();
    let mut points = 0;
    for (k, alg) in random_algebras(50, 1).iter().enumerate() {
        let gens = lib(AffineMonoid::new(alg.cone().clone()).generators())?;
        points += generates_box(alg.cone(), &gens, |_| true, 6).map_err(|e| format!("cone {k}: {e}"))?;
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("50 cones, {points} box points generated"))
}

fn large_n_soundness() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let algs = five_algebras();
    let mut max_n = 0;
    for case in 0..50 {
        let alg = &algs[case % 5];
        let pts = cone_points(alg, 3);
        let interior: Vec<&Point> = pts.iter().filter(|m| alg.is_interior(m)).collect();
        let m = pts.choose(&mut rng).unwrap().clone();
        let n = lib(alg.large_n(&m))?;
        max_n = max_n.max(n);
        // f ∈ J^N: each monomial is N interior points plus a point of σ
        let mut f = AlgebraElem::zero();
        for _ in 0..3 {
            let mut q = pts.choose(&mut rng).unwrap().clone();
            for _ in 0..n {
                let x = interior.choose(&mut rng).unwrap();
                q.iter_mut().zip(x.iter()).for_each(|(a, b)| *a += b);
            }
            f.add_term(q, alg.coeff.from_int(rng.gen_range(1i64..=5)));
        }
        let neg: Point = m.iter().map(|v| -v).collect();
        let quotient = f.shift(&neg);
        ensure!(quotient.support().all(|q| alg.cone().contains(q)), "f/e_m leaves σ for m = {m:?}, N = {n}: {f}");
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("50 cases on 5 cones, N up to {max_n}"))
}

fn random_weights(alg: &ToricGAlgebra, n: usize, rng: &mut ChaCha8Rng) -> Vec<GroupElem> {
    let pts = cone_points(alg, 2);
    (0..n).map(|_| alg.weight(pts.choose(rng).unwrap())).collect()
}

/// Entry (i, j) drawn from A_{v_j − v_i}; zero when that piece has no small monomial.
fn random_graded_endo(alg: &ToricGAlgebra, w: &[GroupElem], rng: &mut ChaCha8Rng) -> GradedMatrix {
    let pts = cone_points(alg, 3);
    let n = w.len();
    let mut entries = mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let target = alg.group.sub(&w[j], &w[i]);
            let pool: Vec<Point> = pts.iter().filter(|m| alg.weight(m) == target).cloned().collect();
            if !pool.is_empty() {
                entries[i][j] = random_elem(alg, &pool, rng);
            }
        }
    }
    GradedMatrix::new(alg, w.to_vec(), w.to_vec(), entries).expect("graded by construction")
}

fn determinant_invariance() -> Check {
    let algs = five_algebras();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut nonzero = 0;
    for k in 0..200 {
        let alg = &algs[k % 5];
        let n = rng.gen_range(1..=3);
        let w = random_weights(alg, n, &mut rng);
        let f = random_graded_endo(alg, &w, &mut rng);
        let det = lib(det_endo(alg, &f))?;
        ensure!(det == mat::det(&f.entries, alg.rank()), "det_endo disagrees with cofactor expansion");
        ensure!(alg.is_invariant(&det), "det {det} is not of weight 0");
        nonzero += usize::from(!det.is_zero());
    }
    Ok(format!("200 endomorphisms over 5 algebras, {nonzero} nonzero determinants"))
}

fn invariants_and_j(alg: &ToricGAlgebra) -> Result<(Vec<AlgebraElem>, Vec<AlgebraElem>), String> {
    let gens = lib(alg.invariant_generators())?;
    let j = lib(alg.invariant_part_of_monomial_ideal(MonomialIdeal::Interior))?;
    Ok((gens, j))
}

/// Random element of A^G: a combination of products of at most two generators.
fn random_invariant(alg: &ToricGAlgebra, gens: &[AlgebraElem], rng: &mut ChaCha8Rng) -> AlgebraElem {
    let mut x = AlgebraElem::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let mut t = alg.constant(alg.coeff.from_int(rng.gen_range(1i64..=3)));
        for _ in 0..rng.gen_range(0..=2) {
            t = &t * gens.choose(rng).unwrap();
        }
        x = &x + &t;
    }
    x
}

/// L·U with unitriangular factors over A^G, then J ∩ A^G added everywhere;
/// every codimension-1 restriction is unitriangular, hence invertible.
fn perturbed_triangular(alg: &ToricGAlgebra, gens: &[AlgebraElem], j: &[AlgebraElem], n: usize, rng: &mut ChaCha8Rng) -> ElemMat {
    let d = alg.rank();
    let one = mat::map(&mat::identity(n, d), |x| x.in_ring(&alg.coeff));
    let (mut lower, mut upper) = (one.clone(), one);
    for i in 0..n {
        for k in 0..i {
            if rng.gen_bool(0.7) {
                lower[i][k] = random_invariant(alg, gens, rng);
            }
            if rng.gen_bool(0.7) {
                upper[k][i] = random_invariant(alg, gens, rng);
            }
        }
    }
    let mut p = mat::mul(&lower, &upper);
    for row in p.iter_mut() {
        for x in row.iter_mut() {
            if rng.gen_bool(0.5) {
                let jx = &random_invariant(alg, gens, rng) * j.choose(rng).unwrap();
                *x = &*x + &jx;
            }
        }
    }
    p
}

fn refine_contract() -> Check {
    let start = Instant::now();
    // J ∩ A^G must be nonzero for the perturbations to mean anything
    let algs: Vec<ToricGAlgebra> = five_algebras()
        .into_iter()
        .filter(|a| a.invariant_part_of_monomial_ideal(MonomialIdeal::Interior).is_ok_and(|j| !j.is_empty()))
        .collect();
    ensure!(algs.len() >= 3, "only {} algebras with interior invariants", algs.len());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checks = 0;
    for k in 0..30 {
        let alg = &algs[k % algs.len()];
        let (gens, j) = invariants_and_j(alg)?;
        let n = rng.gen_range(2..=3);
        let p = perturbed_triangular(alg, &gens, &j, n, &mut rng);
        for big_n in 1..=3 {
            let r = lib(refine_matrix(alg, &p, big_n))?;
            let det = mat::det(&r.p_tilde, alg.rank());
            ensure!(alg.is_unit(&det), "det P̃ = {det} is not a unit");
            ensure!(r.p_tilde.iter().flatten().all(|x| alg.is_invariant(x) && alg.is_member(x)), "P̃ leaves A^G");
            let prod = mat::mul(&p, &r.p_tilde);
            for (a, row) in prod.iter().enumerate() {
                for (b, x) in row.iter().enumerate() {
                    if a != b {
                        ensure!(lib(alg.ideal_j_power_member(x, big_n))?, "({a},{b}) entry {x} of P·P̃ is not in J^{big_n}");
                        checks += 1;
                    }
                }
            }
        }
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!("30 matrices over {} algebras at N = 1, 2, 3; {checks} off-diagonal memberships", algs.len()))
}

fn retraction_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut faces = 0;
    for alg in five_algebras() {
        let pts = cone_points(&alg, 3);
        for tau in alg.cone().faces() {
            let on_face: Vec<Point> = pts.iter().filter(|m| tau.contains(m)).cloned().collect();
            for _ in 0..100 {
                let x = random_elem(&alg, &on_face, &mut rng);
                let back = alg.face_restrict(&tau, &lib(alg.face_section(&tau, &x))?);
                ensure!(back == x, "i∘π moved {x} to {back}");
                // i_τ is multiplicative on all of A
                let (a, b) = (random_elem(&alg, &pts, &mut rng), random_elem(&alg, &pts, &mut rng));
                let lhs = alg.face_restrict(&tau, &(&a * &b));
                let rhs = &alg.face_restrict(&tau, &a) * &alg.face_restrict(&tau, &b);
                ensure!(lhs == rhs, "restriction is not multiplicative on {a} and {b}");
            }
            faces += 1;
        }
    }
    Ok(format!("100 elements on each of {faces} faces"))
}

// ------------------------------------------------ end-to-end via the binary

fn eqtoric(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eqtoric")).args(args).output().expect("the binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

/// Weight multiset modulo shifts by weights of units.
fn classes(alg: &ToricGAlgebra, ws: &[Vec<i64>]) -> BTreeMap<GroupElem, usize> {
    let c = alg.unit_shift_classes();
    let mut out = BTreeMap::new();
    for w in ws {
        let v: Vec<BigInt> = w.iter().map(|&x| BigInt::from(x)).collect();
        *out.entry(c.apply(&v)).or_default() += 1;
    }
    out
}

fn coords(ws: &[GroupElem]) -> Vec<Vec<i64>> {
    ws.iter().map(|w| w.coords().iter().map(|v| i64::try_from(v).unwrap()).collect()).collect()
}

fn round_trip_corpus() -> Vec<(Family, Vec<Case>)> {
    families()
        .into_iter()
        .enumerate()
        .map(|(k, fam)| {
            let mut rng = ChaCha8Rng::seed_from_u64(700 + k as u64);
            let cases = (0..6).map(|_| random_case(&fam.alg, 3, &mut rng)).collect();
            (fam, cases)
        })
        .collect()
}

fn end_to_end(dir: &Path, corpus: &[(Family, Vec<Case>)]) -> Check {
    let start = Instant::now();
    let mut n = 0;
    for (fam, cases) in corpus {
        for case in cases {
            let file = dir.join(format!("p{n}.json"));
            let cert = dir.join(format!("c{n}.json"));
            let problem = ProblemFile::describe(&fam.alg, Some(&ModuleSpec::Idempotent(case.e.clone())));
            std::fs::write(&file, problem.to_json()).unwrap();
            let (f, c) = (file.to_str().unwrap(), cert.to_str().unwrap());
            let (code, stdout) = eqtoric(&["--format", "json", "trivialize", f, "--out", c, "--seed", "7"]);
            ensure!(code == 0, "{}: trivialize exited {code}: {stdout}", fam.name);
            let report: Value = serde_json::from_str(&stdout).map_err(|e| e.to_string())?;
            let got: Vec<Vec<i64>> = serde_json::from_value(report["weights"].clone()).map_err(|e| e.to_string())?;
            ensure!(
                classes(&fam.alg, &got) == classes(&fam.alg, &coords(&case.hit)),
                "{}: weights {got:?}, expected {}",
                fam.name,
                case.hit.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" ")
            );
            let (code, stdout) = eqtoric(&["verify", c, f]);
            ensure!(code == 0, "{}: verify exited {code}: {stdout}", fam.name);
            n += 1;
        }
    }
    within(Duration::from_secs(300), start)?;
    Ok(format!("{n} idempotents over {} families trivialized and verified", corpus.len()))
}

fn k0_additivity(corpus: &[(Family, Vec<Case>)]) -> Check {
    let weights = |alg: &ToricGAlgebra, e: &GradedMatrix| -> Result<Vec<Vec<i64>>, String> {
        let p = GActionProblem { alg: alg.clone(), module: ModuleSpec::Idempotent(e.clone()) };
        match lib(trivialize(&p, &Options::default()))? {
            Outcome::Complete(t) => Ok(coords(&t.iso.weights)),
            Outcome::Partial(p) => Err(format!("partial at {}", p.failed_step)),
        }
    };
    let mut pairs = 0;
    for (fam, cases) in corpus {
        for (a, b) in cases.iter().zip(cases.iter().skip(1)) {
            let (wa, wb) = (weights(&fam.alg, &a.e)?, weights(&fam.alg, &b.e)?);
            let ws = weights(&fam.alg, &direct_sum(&a.e, &b.e))?;
            let both: Vec<Vec<i64>> = wa.iter().chain(&wb).cloned().collect();
            ensure!(classes(&fam.alg, &ws) == classes(&fam.alg, &both), "{}: [e ⊕ e'] = {ws:?}, [e] + [e'] = {both:?}", fam.name);
            pairs += 1;
        }
    }
    Ok(format!("{pairs} direct sums"))
}

fn honest_partiality(dir: &Path) -> Check {
    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/problems/adversarial.json");
    let cert = dir.join("adversarial-cert.json");
    let c = cert.to_str().unwrap();
    let (code, stdout) = eqtoric(&["--format", "json", "trivialize", file, "--out", c]);
    ensure!(code == 5, "trivialize exited {code}");
    let report: Value = serde_json::from_str(&stdout).map_err(|e| e.to_string())?;
    ensure!(report["status"] == "partial" && report["failed_step"] == "factor_cover", "report {report}");
    let steps = report["trace"].as_array().map_or(0, |t| t.len());
    ensure!(steps > 0, "empty partial trace");
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&cert).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure!(written.get("iso_entries").is_none(), "a partial certificate carries an isomorphism");
    let (code, stdout) = eqtoric(&["verify", c, file]);
    ensure!(code == 5, "verify of the partial trace exited {code}: {stdout}");
    Ok(format!("exit 5 at factor_cover, {steps} trace steps replayed"))
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let corpus = round_trip_corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("invariant-ring oracle", Box::new(invariant_ring_oracle)),
        ("monoid generators oracle", Box::new(gordan_oracle)),
        ("large-N soundness", Box::new(large_n_soundness)),
        ("graded determinant invariance", Box::new(determinant_invariance)),
        ("refine_matrix contract", Box::new(refine_contract)),
        ("retraction identities", Box::new(retraction_identities)),
        ("end-to-end round trip", Box::new(|| end_to_end(dir.path(), &corpus))),
        ("K0 additivity", Box::new(|| k0_additivity(&corpus))),
        ("honest partiality", Box::new(|| honest_partiality(dir.path()))),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail} ({t:.1?})", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({t:.1?})", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
