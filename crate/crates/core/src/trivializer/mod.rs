//! Trivialization of graded projective modules over A = R[σ ∩ L].
//!
//! After splitting off the classes of P/ψ(L), each block is handled by
//! induction over the faces of σ in increasing dimension: the smallest face
//! is a torus; every larger face τ patches the isomorphisms of its
//! codimension-1 faces into one over A_τ/J, lifts it to A_τ[1/h], and when h
//! is not a unit glues it with the torus-side isomorphism along t·h ≠ 0.

mod axis;
pub mod cover;
mod extend;
pub mod faithful;
mod glue;
mod patch;
pub mod refine;
mod torus;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::cone::Face;
use crate::error::{Error, Result};
use crate::graded_algebra::{AlgebraElem, ToricGAlgebra};
use crate::graded_linalg::{mat, restrict_to_face, ElemMat, GradedMatrix};
use crate::lattice::GroupElem;
use crate::monoid::Point;

pub use cover::{descend, factor_cover, CoverFactors};
pub use faithful::{reduce_to_faithful, FaithfulBlock, FaithfulReduction};
pub use refine::{refine_matrix, Refined};

use patch::FacePair;

/// a·b with the column count given explicitly (b may have no rows).
pub(crate) fn mul_to(a: &ElemMat, b: &ElemMat, cols: usize) -> ElemMat {
    if b.is_empty() {
        mat::zeros(a.len(), cols)
    } else {
        mat::mul(a, b)
    }
}

#[derive(Clone, Debug)]
pub enum ModuleSpec {
    /// A free module with the given weights.
    Free(Vec<GroupElem>),
    Idempotent(GradedMatrix),
}

#[derive(Clone, Debug)]
pub struct GActionProblem {
    pub alg: ToricGAlgebra,
    pub module: ModuleSpec,
}

impl GActionProblem {
    /// The presenting idempotent (the identity for a free module).
    pub fn idempotent(&self) -> GradedMatrix {
        match &self.module {
            ModuleSpec::Free(w) => GradedMatrix::identity(&self.alg, w),
            ModuleSpec::Idempotent(e) => e.clone(),
        }
    }

    pub fn validate(&self, opts: &Options) -> Result<()> {
        if self.alg.rank() > opts.max_ambient {
            return Err(Error::Resource(format!("ambient rank {} exceeds {}", self.alg.rank(), opts.max_ambient)));
        }
        let e = self.idempotent();
        if e.rows() > opts.max_rank {
            return Err(Error::Resource(format!("module rank {} exceeds {}", e.rows(), opts.max_rank)));
        }
        if !e.is_square_endo() {
            return Err(Error::Validation("the idempotent must have equal source and target weights".into()));
        }
        e.check(&self.alg)?;
        for (i, row) in e.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !self.alg.is_member(x) {
                    return Err(Error::Validation(format!("entry ({i},{j}) = {x} has monomials outside the cone")));
                }
            }
        }
        if !e.is_idempotent() {
            return Err(Error::Validation("matrix is not idempotent".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub max_rank: usize,
    pub max_ambient: usize,
}

impl Default for Options {
    fn default() -> Options {
        Options { max_rank: 8, max_ambient: 4 }
    }
}

/// S: E → F and T: F → E with S·T = I and T·S = e; F has the listed weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iso {
    pub weights: Vec<GroupElem>,
    pub s: ElemMat,
    pub t: ElemMat,
}

/// One replayable step. `indices` locate a block of the module; `face`
/// lists the ray indices of σ spanning the face. Weights are in P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEntry {
    FaceIso { indices: Vec<usize>, face: Vec<usize>, weights: Vec<GroupElem>, s: ElemMat, t: ElemMat },
    Patch { indices: Vec<usize>, face: Vec<usize>, sbar: ElemMat, tbar: ElemMat, h: AlgebraElem },
    Glue { indices: Vec<usize>, face: Vec<usize>, kappa: Point, n: u32, s: u32, p: ElemMat, p_tilde: ElemMat },
    Final { rank: usize },
}

#[derive(Clone, Debug)]
pub struct Trivialization {
    pub iso: Iso,
    pub trace: Vec<TraceEntry>,
}

#[derive(Clone, Debug)]
pub struct PartialResult {
    pub failed_step: String,
    pub reason: String,
    pub trace: Vec<TraceEntry>,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Complete(Trivialization),
    Partial(PartialResult),
}

pub fn trivialize(p: &GActionProblem, opts: &Options) -> Result<Outcome> {
    p.validate(opts)?;
    let e = p.idempotent();
    let n = e.rows();
    let mut trace = vec![];
    if let ModuleSpec::Free(w) = &p.module {
        let id = GradedMatrix::identity(&p.alg, w).entries;
        trace.push(TraceEntry::Final { rank: n });
        return Ok(Outcome::Complete(Trivialization { iso: Iso { weights: w.clone(), s: id.clone(), t: id }, trace }));
    }
    let red = reduce_to_faithful(&p.alg, &e)?;
    let mut weights = vec![];
    let mut s: ElemMat = vec![];
    let mut t: ElemMat = mat::zeros(n, 0);
    for (b, block) in red.blocks.iter().enumerate() {
        let lift = |q: &GroupElem| red.retwist(&p.alg, b, q);
        let iso = match solve_block(block, &lift, &mut trace) {
            Ok(iso) => iso,
            Err(Error::Unsupported { step, reason }) => {
                return Ok(Outcome::Partial(PartialResult { failed_step: step, reason, trace }));
            }
            Err(Error::UnsupportedFactorization(reason)) => {
                return Ok(Outcome::Partial(PartialResult { failed_step: "factor_cover".into(), reason, trace }));
            }
            Err(err) => return Err(err),
        };
        for row in &iso.s {
            let mut full = vec![AlgebraElem::zero(); n];
            for (a, &j) in block.indices.iter().enumerate() {
                full[j] = row[a].clone();
            }
            s.push(full);
        }
        for (j, row) in t.iter_mut().enumerate() {
            match block.indices.iter().position(|&k| k == j) {
                Some(a) => row.extend(iso.t[a].iter().cloned()),
                None => row.extend(std::iter::repeat(AlgebraElem::zero()).take(iso.weights.len())),
            }
        }
        weights.extend(iso.weights.iter().map(|q| lift(q)));
    }
    let r = weights.len();
    if !mat::is_identity(&mul_to(&s, &t, r)) || mul_to(&t, &s, n) != e.entries {
        return Err(Error::Internal("assembled isomorphism fails S·T = I or T·S = e".into()));
    }
    trace.push(TraceEntry::Final { rank: r });
    Ok(Outcome::Complete(Trivialization { iso: Iso { weights, s, t }, trace }))
}

fn face_algebra(alg: &ToricGAlgebra, tau: &Face) -> Result<ToricGAlgebra> {
    Ok(ToricGAlgebra::new(alg.coeff, alg.cone().face_cone(tau), alg.group.clone(), alg.psi.clone())?.with_budget(alg.budget()))
}

fn solve_block(block: &FaithfulBlock, lift: &dyn Fn(&GroupElem) -> GroupElem, trace: &mut Vec<TraceEntry>) -> Result<Iso> {
    let alg = &block.alg;
    let e = &block.e;
    let n = e.rows();
    let sigma = alg.cone();
    let faces = sigma.faces();
    let base = sigma.smallest_face();
    let indices = block.indices.clone();
    let face_entry = |tau: &Face, weights: &[GroupElem], s: &ElemMat, t: &ElemMat| TraceEntry::FaceIso {
        indices: indices.clone(),
        face: tau.ray_indices.clone(),
        weights: weights.iter().map(lift).collect(),
        s: s.clone(),
        t: t.clone(),
    };

    let base_alg = face_algebra(alg, &base)?;
    let base_iso = torus::torus_iso(&base_alg, &base.span_basis, &restrict_to_face(alg, e, &base), None)?;
    let target = base_iso.weights.clone();
    trace.push(face_entry(&base, &target, &base_iso.s, &base_iso.t));
    let mut memo: HashMap<Vec<usize>, (ElemMat, ElemMat)> = HashMap::new();
    memo.insert(base.ray_indices.clone(), (base_iso.s, base_iso.t));

    for tau in faces.iter().filter(|f| f.dim > base.dim) {
        let alg_t = face_algebra(alg, tau)?;
        let e_t = restrict_to_face(alg, e, tau);
        let subs: Vec<&Face> = faces.iter().filter(|f| f.dim + 1 == tau.dim && f.is_subface_of(tau)).collect();
        let pairs: Vec<FacePair> = subs
            .iter()
            .map(|f| {
                let (s, t) = &memo[&f.ray_indices];
                FacePair { face: f, s, t }
            })
            .collect();
        let patched = patch::patch_faces(&pairs, n)?;
        let ext = extend::extend_h(&alg_t, &e_t.entries, &patched.s, &patched.t)?;
        trace.push(TraceEntry::Patch {
            indices: indices.clone(),
            face: tau.ray_indices.clone(),
            sbar: patched.s.clone(),
            tbar: patched.t.clone(),
            h: ext.h.clone(),
        });
        let (s, t) = match ext.over_a(&alg_t) {
            Some(st) => st,
            None => {
                let (s, t, rec) = glue::glue(&alg_t, &tau.span_basis, &e_t, &target, &ext)?;
                trace.push(TraceEntry::Glue {
                    indices: indices.clone(),
                    face: tau.ray_indices.clone(),
                    kappa: rec.kappa,
                    n: rec.n,
                    s: rec.s,
                    p: rec.p,
                    p_tilde: rec.p_tilde,
                });
                (s, t)
            }
        };
        let r = target.len();
        if !mat::is_identity(&mul_to(&s, &t, r)) || mul_to(&t, &s, n) != e_t.entries {
            return Err(Error::Internal(format!("face {:?}: S·T = I or T·S = e fails", tau.ray_indices)));
        }
        GradedMatrix::new(alg, e.source.clone(), target.clone(), s.clone())?;
        GradedMatrix::new(alg, target.clone(), e.source.clone(), t.clone())?;
        trace.push(face_entry(tau, &target, &s, &t));
        memo.insert(tau.ray_indices.clone(), (s, t));
    }
    let whole = sigma.whole_face();
    let (s, t) = memo.remove(&whole.ray_indices).expect("the whole cone is a face");
    Ok(Iso { weights: target, s, t })
}

/// An element of ℤ[P]: weights with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct K0Class {
    pub terms: BTreeMap<GroupElem, i64>,
}

impl K0Class {
    pub fn add(&self, o: &K0Class) -> K0Class {
        let mut terms = self.terms.clone();
        for (w, k) in &o.terms {
            *terms.entry(w.clone()).or_default() += k;
        }
        terms.retain(|_, k| *k != 0);
        K0Class { terms }
    }

    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }
}

impl fmt::Display for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, k)| format!("{k}*[{w}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn k0_class(weights: &[GroupElem]) -> K0Class {
    let mut c = K0Class::default();
    for w in weights {
        *c.terms.entry(w.clone()).or_default() += 1;
    }
    c
}
