//! Equivariant maps between graded free A-modules as weight-annotated matrices.
//!
//! Convention: a map V → W with source weights v (columns) and target weights
//! w (rows) has entry(i, j) ∈ A_{v_j − w_i}, so multiplication by A_c raises
//! weights by c.

pub mod mat;

use std::collections::BTreeMap;

use crate::cone::Face;
use crate::error::{Error, Result};
use crate::graded_algebra::{AlgebraElem, ToricGAlgebra};
use crate::lattice::{Cokernel, GroupElem};

pub use mat::ElemMat;

pub type WeightVector = Vec<GroupElem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    pub source: WeightVector,
    pub target: WeightVector,
    pub entries: ElemMat,
}

impl GradedMatrix {
    /// Builds and checks gradedness.
    pub fn new(alg: &ToricGAlgebra, source: WeightVector, target: WeightVector, entries: ElemMat) -> Result<GradedMatrix> {
        let f = GradedMatrix { source, target, entries };
        f.check(alg)?;
        Ok(f)
    }

    pub fn identity(alg: &ToricGAlgebra, weights: &[GroupElem]) -> GradedMatrix {
        GradedMatrix {
            source: weights.to_vec(),
            target: weights.to_vec(),
            entries: mat::map(&mat::identity(weights.len(), alg.rank()), |e| e.in_ring(&alg.coeff)),
        }
    }

    pub fn zero(source: &[GroupElem], target: &[GroupElem]) -> GradedMatrix {
        GradedMatrix { source: source.to_vec(), target: target.to_vec(), entries: mat::zeros(target.len(), source.len()) }
    }

    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn cols(&self) -> usize {
        self.source.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgebraElem {
        &self.entries[i][j]
    }

    /// Weight class required of entry (i, j).
    pub fn entry_weight(&self, alg: &ToricGAlgebra, i: usize, j: usize) -> GroupElem {
        alg.group.sub(&self.source[j], &self.target[i])
    }

    pub fn check(&self, alg: &ToricGAlgebra) -> Result<()> {
        if self.entries.len() != self.rows() || self.entries.iter().any(|r| r.len() != self.cols()) {
            return Err(Error::Validation(format!("matrix shape does not match {}x{} weights", self.rows(), self.cols())));
        }
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let w = self.entry_weight(alg, i, j);
                if !alg.is_homogeneous(&self.entries[i][j], &w) {
                    return Err(Error::WeightMismatch(format!(
                        "entry ({i},{j}) = {} is not of weight {w}",
                        self.entries[i][j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_square_endo(&self) -> bool {
        self.source == self.target
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_square_endo() && mat::mul(&self.entries, &self.entries) == self.entries
    }
}

/// f ∘ g.
pub fn compose(alg: &ToricGAlgebra, f: &GradedMatrix, g: &GradedMatrix) -> Result<GradedMatrix> {
    if f.source != g.target {
        return Err(Error::WeightMismatch("source of the outer map differs from target of the inner map".into()));
    }
    let out = GradedMatrix { source: g.source.clone(), target: f.target.clone(), entries: mat::mul(&f.entries, &g.entries) };
    debug_assert!(out.check(alg).is_ok());
    Ok(out)
}

/// Determinant of an endomorphism; always of weight 0.
pub fn det_endo(alg: &ToricGAlgebra, f: &GradedMatrix) -> Result<AlgebraElem> {
    if !f.is_square_endo() {
        return Err(Error::WeightMismatch("determinant needs equal source and target weights".into()));
    }
    let d = mat::det(&f.entries, alg.rank());
    debug_assert!(alg.is_invariant(&d));
    Ok(d)
}

/// Adjugate of an endomorphism (again graded with the same weights).
pub fn adjugate(alg: &ToricGAlgebra, f: &GradedMatrix) -> Result<GradedMatrix> {
    if !f.is_square_endo() {
        return Err(Error::WeightMismatch("adjugate needs equal source and target weights".into()));
    }
    Ok(GradedMatrix { source: f.source.clone(), target: f.target.clone(), entries: mat::adjugate(&f.entries, alg.rank()) })
}

pub fn is_unit(alg: &ToricGAlgebra, x: &AlgebraElem) -> bool {
    alg.is_unit(x)
}

pub fn unit_inverse(alg: &ToricGAlgebra, x: &AlgebraElem) -> Option<AlgebraElem> {
    alg.unit_inverse(x)
}

/// adj(f) · det(f)⁻¹ for a square graded f with unit determinant.
pub fn invert(alg: &ToricGAlgebra, f: &GradedMatrix) -> Result<GradedMatrix> {
    if f.rows() != f.cols() {
        return Err(Error::NotInvertible("matrix is not square".into()));
    }
    let d = mat::det(&f.entries, alg.rank());
    let dinv = alg.unit_inverse(&d).ok_or_else(|| Error::NotInvertible(format!("determinant {d} is not a unit")))?;
    let entries = mat::scale(&mat::adjugate(&f.entries, alg.rank()), &dinv);
    let out = GradedMatrix { source: f.target.clone(), target: f.source.clone(), entries };
    out.check(alg)?;
    Ok(out)
}

/// Entries whose prescribed weight component A_{v_j − w_i} is nonzero.
pub fn invariant_entry_mask(alg: &ToricGAlgebra, f: &GradedMatrix) -> Result<Vec<Vec<bool>>> {
    let mut memo: BTreeMap<GroupElem, bool> = BTreeMap::new();
    let mut out = vec![vec![false; f.cols()]; f.rows()];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let w = f.entry_weight(alg, i, j);
            *slot = match memo.get(&w) {
                Some(&b) => b,
                None => {
                    let b = alg.weight_component_nonempty(&w)?;
                    memo.insert(w, b);
                    b
                }
            };
        }
    }
    Ok(out)
}

/// One diagonal block of a weight splitting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightBlock {
    pub class: GroupElem,
    pub indices: Vec<usize>,
    pub idempotent: GradedMatrix,
}

/// Splits e along the classes of its weights under P → P₃ (given on P-coordinates).
pub fn weight_split(alg: &ToricGAlgebra, e: &GradedMatrix, quotient: &Cokernel) -> Result<Vec<WeightBlock>> {
    if !e.is_square_endo() {
        return Err(Error::StructuralViolation("weight splitting needs an endomorphism".into()));
    }
    if quotient.projection.cols() != alg.group.ngens() {
        return Err(Error::StructuralViolation("quotient is not defined on P".into()));
    }
    let rel = alg.group.relations();
    for j in 0..rel.cols() {
        if !quotient.group.is_zero(&quotient.apply(&rel.col(j))) {
            return Err(Error::StructuralViolation("quotient map does not kill the relations of P".into()));
        }
    }
    let classes: Vec<GroupElem> = e.source.iter().map(|w| quotient.apply(&w.coords())).collect();
    let mut groups: BTreeMap<GroupElem, Vec<usize>> = BTreeMap::new();
    for (i, c) in classes.iter().enumerate() {
        groups.entry(c.clone()).or_default().push(i);
    }
    for i in 0..e.rows() {
        for j in 0..e.cols() {
            if classes[i] != classes[j] && !e.entries[i][j].is_zero() {
                return Err(Error::StructuralViolation(format!("entry ({i},{j}) couples different classes")));
            }
        }
    }
    Ok(groups
        .into_iter()
        .map(|(class, idx)| {
            let ws: Vec<GroupElem> = idx.iter().map(|&i| e.source[i].clone()).collect();
            let entries = mat::select(&e.entries, &idx, &idx);
            WeightBlock { class, indices: idx, idempotent: GradedMatrix { source: ws.clone(), target: ws, entries } }
        })
        .collect())
}

/// Entrywise i_τ.
pub fn restrict_to_face(alg: &ToricGAlgebra, f: &GradedMatrix, tau: &Face) -> GradedMatrix {
    GradedMatrix {
        source: f.source.clone(),
        target: f.target.clone(),
        entries: mat::map(&f.entries, |x| alg.face_restrict(tau, x)),
    }
}

/// A graded matrix divided by h^k, for the invariant h of a localization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalGradedMatrix {
    pub num: GradedMatrix,
    pub k: u32,
}

#[cfg(test)]
mod tests;
