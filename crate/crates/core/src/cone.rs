//! Rational polyhedral cones: double description, faces, interiors and
//! span reduction. Cones may contain lines.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{dot, kernel_basis, primitive, saturated_span, Chart, IntMat};

/// Ambient ranks above this are rejected.
pub const MAX_CONE_RANK: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    ambient_rank: usize,
    rays: Vec<Vec<BigInt>>,
    functionals: Vec<Vec<BigInt>>,
    func_small: Vec<Vec<i64>>,
    /// Functionals vanishing on all of σ (present when σ does not span).
    func_vanish: Vec<bool>,
    /// Saturated basis (columns) of σ ∩ (−σ).
    lineality: IntMat,
    dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Indices of all parent functionals vanishing on the face.
    pub zero_set: Vec<usize>,
    /// Indices of parent rays lying in the face; the face's identity.
    pub ray_indices: Vec<usize>,
    pub rays: Vec<Vec<BigInt>>,
    pub dim: usize,
    /// Saturated basis (columns) of span(face) ∩ L.
    pub span_basis: IntMat,
    functionals: Vec<Vec<i64>>,
}

fn eval(l: &[i64], m: &[i64]) -> i128 {
    l.iter().zip(m).map(|(&a, &b)| a as i128 * b as i128).sum()
}

impl Face {
    pub fn contains(&self, m: &[i64]) -> bool {
        self.functionals.iter().enumerate().all(|(i, l)| {
            let v = eval(l, m);
            if self.zero_set.binary_search(&i).is_ok() {
                v == 0
            } else {
                v >= 0
            }
        })
    }

    /// Points of the face where every functional not vanishing on it is positive.
    pub fn relative_interior(&self, m: &[i64]) -> bool {
        self.functionals.iter().enumerate().all(|(i, l)| {
            let v = eval(l, m);
            if self.zero_set.binary_search(&i).is_ok() {
                v == 0
            } else {
                v > 0
            }
        })
    }

    pub fn is_subface_of(&self, other: &Face) -> bool {
        self.ray_indices.iter().all(|i| other.ray_indices.binary_search(i).is_ok())
    }

    /// Ray vectors as `i64`.
    pub fn rays_small(&self) -> Vec<Vec<i64>> {
        self.rays.iter().map(|r| r.iter().map(|v| v.to_i64().unwrap()).collect()).collect()
    }
}

/// `(lineality generators, extreme rays)` of `{x : a·x ≥ 0 for a in ineqs}`.
/// Rays are primitive and orthogonal to the lineality space.
fn double_description(d: usize, ineqs: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut lin: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut rays: Vec<Vec<BigInt>> = vec![];
    let mut done: Vec<Vec<BigInt>> = vec![];
    let comb = |c1: &BigInt, v1: &[BigInt], c2: &BigInt, v2: &[BigInt]| -> Vec<BigInt> {
        primitive(&v1.iter().zip(v2).map(|(a, b)| c1 * a + c2 * b).collect::<Vec<_>>())
    };
    for a in ineqs {
        if let Some(p) = lin.iter().position(|b| !dot(a, b).is_zero()) {
            let mut b0 = lin.remove(p);
            if dot(a, &b0).is_negative() {
                b0 = b0.iter().map(|x| -x).collect();
            }
            let ab0 = dot(a, &b0);
            for b in lin.iter_mut() {
                let ab = dot(a, b);
                if !ab.is_zero() {
                    *b = comb(&ab0, b, &(-ab), &b0);
                }
            }
            for r in rays.iter_mut() {
                let ar = dot(a, r);
                if !ar.is_zero() {
                    *r = comb(&ab0, r, &(-ar), &b0);
                }
            }
            rays.push(primitive(&b0));
        } else {
            let mut pos = vec![];
            let mut neg = vec![];
            let mut next = vec![];
            for r in &rays {
                let v = dot(a, r);
                if v.is_positive() {
                    pos.push((r.clone(), v));
                } else if v.is_negative() {
                    neg.push((r.clone(), v));
                } else {
                    next.push(r.clone());
                }
            }
            if neg.is_empty() {
                done.push(a.clone());
                continue;
            }
            let mut cand = vec![];
            for (p, ap) in &pos {
                for (n, an) in &neg {
                    cand.push(comb(ap, n, &(-an), p));
                }
            }
            done.push(a.clone());
            let s = lin.len();
            let extreme = |r: &Vec<BigInt>| {
                let tight: Vec<Vec<BigInt>> = done.iter().filter(|c| dot(c, r).is_zero()).cloned().collect();
                if tight.is_empty() {
                    return d - s == 1;
                }
                IntMat::from_rows(&tight, d).rank() == d - s - 1
            };
            next.extend(cand.into_iter().filter(|r| extreme(r)));
            next.extend(pos.into_iter().map(|(r, _)| r));
            rays = next;
            canonical_rays(&mut rays, &lin);
            continue;
        }
        done.push(a.clone());
        canonical_rays(&mut rays, &lin);
    }
    canonical_rays(&mut rays, &lin);
    (lin, rays)
}

/// Projects onto the orthogonal complement of `lin`, makes primitive, dedupes.
fn canonical_rays(rays: &mut Vec<Vec<BigInt>>, lin: &[Vec<BigInt>]) {
    let mut seen = BTreeSet::new();
    let mut out = vec![];
    for r in rays.iter() {
        let p = project_perp(r, lin);
        if p.iter().all(|v| v.is_zero()) {
            continue;
        }
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out.sort();
    *rays = out;
}

/// Primitive integer multiple of the orthogonal projection of `v` onto `lin^⊥`.
fn project_perp(v: &[BigInt], lin: &[Vec<BigInt>]) -> Vec<BigInt> {
    if lin.is_empty() {
        return primitive(v);
    }
    let k = lin.len();
    // solve G c = Bᵀ v, G = Bᵀ B
    let mut a: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..k).map(|j| BigRational::from_integer(dot(&lin[i], &lin[j]))).collect();
            row.push(BigRational::from_integer(dot(&lin[i], v)));
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&r| !a[r][c].is_zero()).expect("independent lineality basis");
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = &*x / &piv;
        }
        for r in 0..k {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..=k {
                    let t = &a[c][j] * &f;
                    a[r][j] = &a[r][j] - t;
                }
            }
        }
    }
    let coef: Vec<BigRational> = a.iter().map(|row| row[k].clone()).collect();
    let proj: Vec<BigRational> = (0..v.len())
        .map(|i| {
            let mut s = BigRational::from_integer(v[i].clone());
            for (j, b) in lin.iter().enumerate() {
                s -= &coef[j] * BigRational::from_integer(b[i].clone());
            }
            s
        })
        .collect();
    let den = proj.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = proj.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    primitive(&ints)
}

fn to_small(vs: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    vs.iter().map(|r| r.iter().map(|v| v.to_i64().expect("functional fits in i64")).collect()).collect()
}

impl Cone {
    pub fn from_rays(ambient_rank: usize, rays: &[Vec<BigInt>]) -> Result<Cone> {
        if ambient_rank > MAX_CONE_RANK {
            return Err(Error::Resource(format!("ambient rank {ambient_rank} exceeds {MAX_CONE_RANK}")));
        }
        if ambient_rank == 0 && !rays.is_empty() {
            return Err(Error::Validation("rank-0 ambient lattice cannot carry rays".into()));
        }
        let mut prim: Vec<Vec<BigInt>> = vec![];
        for r in rays {
            if r.len() != ambient_rank {
                return Err(Error::Validation(format!("ray of length {} in rank {ambient_rank}", r.len())));
            }
            if r.iter().all(|v| v.is_zero()) {
                return Err(Error::Validation("zero ray".into()));
            }
            let p = primitive(r);
            if !prim.contains(&p) {
                prim.push(p);
            }
        }
        // drop rays lying in the cone of the remaining ones, last first
        let mut i = prim.len();
        while i > 0 {
            i -= 1;
            let others: Vec<Vec<BigInt>> = prim.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
            let f = dual_functionals(ambient_rank, &others);
            if f.iter().all(|l| !dot(l, &prim[i]).is_negative()) {
                prim.remove(i);
            }
        }
        Ok(Cone::assemble(ambient_rank, prim))
    }

    fn assemble(d: usize, rays: Vec<Vec<BigInt>>) -> Cone {
        let functionals = dual_functionals(d, &rays);
        let lineality = if functionals.is_empty() {
            IntMat::identity(d)
        } else {
            kernel_basis(&IntMat::from_rows(&functionals, d))
        };
        let dim = if rays.is_empty() { 0 } else { IntMat::from_rows(&rays, d).rank() };
        let func_small = to_small(&functionals);
        let func_vanish = functionals.iter().map(|l| rays.iter().all(|r| dot(l, r).is_zero())).collect();
        Cone { ambient_rank: d, rays, functionals, func_small, func_vanish, lineality, dim }
    }

    pub fn from_inequalities(ambient_rank: usize, ineqs: &[Vec<BigInt>]) -> Result<Cone> {
        if ambient_rank > MAX_CONE_RANK {
            return Err(Error::Resource(format!("ambient rank {ambient_rank} exceeds {MAX_CONE_RANK}")));
        }
        for a in ineqs {
            if a.len() != ambient_rank {
                return Err(Error::Validation(format!("inequality of length {} in rank {ambient_rank}", a.len())));
            }
        }
        let ineqs: Vec<Vec<BigInt>> = ineqs.iter().filter(|a| a.iter().any(|v| !v.is_zero())).cloned().collect();
        let (_, ext) = double_description(ambient_rank, &ineqs);
        let lin = if ineqs.is_empty() {
            IntMat::identity(ambient_rank)
        } else {
            kernel_basis(&IntMat::from_rows(&ineqs, ambient_rank))
        };
        let mut rays = ext;
        for b in lin.to_cols() {
            rays.push(b.clone());
            rays.push(b.iter().map(|v| -v).collect());
        }
        Cone::from_rays(ambient_rank, &rays)
    }

    pub fn from_rays_i64(ambient_rank: usize, rays: &[Vec<i64>]) -> Result<Cone> {
        let rs: Vec<Vec<BigInt>> = rays.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        Cone::from_rays(ambient_rank, &rs)
    }

    pub fn orthant(d: usize) -> Cone {
        let rays: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        Cone::from_rays_i64(d, &rays).expect("orthant")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }
    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }
    pub fn functionals(&self) -> &[Vec<BigInt>] {
        &self.functionals
    }
    pub fn functionals_small(&self) -> &[Vec<i64>] {
        &self.func_small
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    /// Which functionals vanish on all of σ.
    pub fn vanishing(&self) -> &[bool] {
        &self.func_vanish
    }
    /// Indices of functionals not vanishing on σ; these cut out its relative boundary.
    pub fn active_functionals(&self) -> Vec<usize> {
        (0..self.func_small.len()).filter(|&i| !self.func_vanish[i]).collect()
    }
    pub fn lineality(&self) -> &IntMat {
        &self.lineality
    }
    pub fn spans_ambient(&self) -> bool {
        self.dim == self.ambient_rank
    }
    pub fn is_pointed(&self) -> bool {
        self.lineality.cols() == 0
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        self.func_small.iter().all(|l| eval(l, m) >= 0)
    }

    pub fn contains_big(&self, m: &[BigInt]) -> bool {
        self.functionals.iter().all(|l| !dot(l, m).is_negative())
    }

    pub fn eval(&self, i: usize, m: &[i64]) -> i128 {
        eval(&self.func_small[i], m)
    }

    /// Every functional is strictly positive at `m`.
    pub fn strict_interior(&self, m: &[i64]) -> bool {
        self.func_small.iter().all(|l| eval(l, m) > 0)
    }

    /// Interior relative to span(σ): functionals not vanishing on σ are positive.
    pub fn relative_interior(&self, m: &[i64]) -> bool {
        self.func_small.iter().zip(&self.func_vanish).all(|(l, &vanish)| {
            let v = eval(l, m);
            if vanish {
                v == 0
            } else {
                v > 0
            }
        })
    }


    /// All faces, ordered by dimension then by ray set.
    pub fn faces(&self) -> Vec<Face> {
        let all: BTreeSet<usize> = (0..self.rays.len()).collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(all.clone());
        queue.push_back(all);
        while let Some(f) = queue.pop_front() {
            for l in &self.functionals {
                let g: BTreeSet<usize> = f.iter().copied().filter(|&i| dot(l, &self.rays[i]).is_zero()).collect();
                if seen.insert(g.clone()) {
                    queue.push_back(g);
                }
            }
        }
        let mut faces: Vec<Face> = seen.into_iter().map(|s| self.face_from_rays(&s.into_iter().collect::<Vec<_>>())).collect();
        faces.sort_by(|a, b| (a.dim, &a.ray_indices).cmp(&(b.dim, &b.ray_indices)));
        faces
    }

    fn face_from_rays(&self, idx: &[usize]) -> Face {
        let rays: Vec<Vec<BigInt>> = idx.iter().map(|&i| self.rays[i].clone()).collect();
        let zero_set: Vec<usize> = (0..self.functionals.len())
            .filter(|&i| rays.iter().all(|r| dot(&self.functionals[i], r).is_zero()))
            .collect();
        let d = self.ambient_rank;
        let span_basis = saturated_span(d, &rays);
        Face {
            zero_set,
            ray_indices: idx.to_vec(),
            dim: span_basis.cols(),
            rays,
            span_basis,
            functionals: self.func_small.clone(),
        }
    }

    pub fn whole_face(&self) -> Face {
        self.face_from_rays(&(0..self.rays.len()).collect::<Vec<_>>())
    }

    pub fn codim1_faces(&self) -> Vec<Face> {
        if self.dim == 0 {
            return vec![];
        }
        self.faces().into_iter().filter(|f| f.dim + 1 == self.dim).collect()
    }

    /// The lineality face σ ∩ (−σ).
    pub fn smallest_face(&self) -> Face {
        let idx: Vec<usize> = (0..self.rays.len())
            .filter(|&i| self.functionals.iter().all(|l| dot(l, &self.rays[i]).is_zero()))
            .collect();
        self.face_from_rays(&idx)
    }

    /// The cone in the coordinates of `span(σ) ∩ L`, with the chart back.
    pub fn span_reduce(&self) -> (Cone, Chart) {
        let basis = saturated_span(self.ambient_rank, &self.rays);
        let chart = Chart::new(basis);
        let rays: Vec<Vec<i64>> = self
            .rays
            .iter()
            .map(|r| {
                let small: Vec<i64> = r.iter().map(|v| v.to_i64().unwrap()).collect();
                chart.to_sub(&small).expect("ray lies in its span")
            })
            .collect();
        let cone = Cone::from_rays_i64(chart.rank(), &rays).expect("reduced cone");
        (cone, chart)
    }

    /// Restricts to a face, as a cone in the same ambient lattice.
    pub fn face_cone(&self, f: &Face) -> Cone {
        Cone::from_rays(self.ambient_rank, &f.rays).expect("face cone")
    }

    /// Rays grouped by face for reports.
    pub fn face_index(&self) -> BTreeMap<Vec<usize>, usize> {
        self.faces().iter().enumerate().map(|(i, f)| (f.ray_indices.clone(), i)).collect()
    }
}

/// Functionals cutting out `cone(rays)`: primitive facet normals orthogonal to
/// the dual's lineality, then ± a saturated basis of span(rays)^⊥.
fn dual_functionals(d: usize, rays: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let (_, ext) = double_description(d, rays);
    let mut out = ext;
    let perp = if rays.is_empty() {
        IntMat::identity(d)
    } else {
        kernel_basis(&IntMat::from_rows(rays, d))
    };
    for b in perp.to_cols() {
        out.push(b.clone());
        out.push(b.iter().map(|v| -v).collect());
    }
    out
}
