//! Replacing P by the image Q = ψ(L). Weights in different classes of P/Q
//! never interact, so the module splits; each block is shifted by an offset
//! so that its weights land in Q.

use crate::error::{Error, Result};
use crate::graded_algebra::ToricGAlgebra;
use crate::graded_linalg::{weight_split, GradedMatrix};
use crate::lattice::{cokernel, hom_image_group, solve_in_group, GroupElem, SubgroupImage};

#[derive(Clone, Debug)]
pub struct FaithfulBlock {
    /// Positions of the block inside the original module.
    pub indices: Vec<usize>,
    /// a_b ∈ P; block weights are include(q) + a_b.
    pub offset: GroupElem,
    pub alg: ToricGAlgebra,
    pub e: GradedMatrix,
}

#[derive(Clone, Debug)]
pub struct FaithfulReduction {
    pub image: SubgroupImage,
    pub blocks: Vec<FaithfulBlock>,
}

impl FaithfulReduction {
    /// A weight of the block's algebra (in Q) back in P.
    pub fn retwist(&self, p_alg: &ToricGAlgebra, block: usize, q: &GroupElem) -> GroupElem {
        p_alg.group.add(&self.image.include(&p_alg.group, q), &self.blocks[block].offset)
    }
}

pub fn reduce_to_faithful(alg: &ToricGAlgebra, e: &GradedMatrix) -> Result<FaithfulReduction> {
    let image = hom_image_group(&alg.psi, &alg.group);
    let classes = cokernel(&image.inclusion.hstack(&alg.group.relations()));
    let q_alg = ToricGAlgebra::new(alg.coeff, alg.cone().clone(), image.group.clone(), image.corestriction.clone())?
        .with_budget(alg.budget());
    let mut blocks = vec![];
    for b in weight_split(alg, e, &classes)? {
        let offset = if classes.group.is_zero(&b.class) { alg.group.zero() } else { e.source[b.indices[0]].clone() };
        let q_weights: Vec<GroupElem> = b
            .idempotent
            .source
            .iter()
            .map(|v| {
                let shifted = alg.group.sub(v, &offset);
                let x = solve_in_group(&alg.psi, &alg.group, &shifted.coords())
                    .ok_or_else(|| Error::Internal(format!("weight {shifted} is not in the image of ψ")))?;
                Ok(q_alg.group.reduce(&image.corestriction.mul_vec(&x)))
            })
            .collect::<Result<_>>()?;
        let qe = GradedMatrix { source: q_weights.clone(), target: q_weights, entries: b.idempotent.entries };
        qe.check(&q_alg)?;
        blocks.push(FaithfulBlock { indices: b.indices, offset, alg: q_alg.clone(), e: qe });
    }
    Ok(FaithfulReduction { image, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Cone;
    use crate::graded_linalg::mat;
    use crate::lattice::{FinAbGroup, IntMat};
    use crate::scalar::CoeffRing;
    use num_bigint::BigInt;

    fn alg(psi: &[i64]) -> ToricGAlgebra {
        ToricGAlgebra::new(CoeffRing::QQ, Cone::orthant(2), FinAbGroup::free(1), IntMat::from_i64(&[psi])).unwrap()
    }

    fn w(a: &ToricGAlgebra, v: i64) -> GroupElem {
        a.group.reduce(&[BigInt::from(v)])
    }

    fn identity(a: &ToricGAlgebra, ws: &[i64]) -> GradedMatrix {
        let ws: Vec<GroupElem> = ws.iter().map(|&v| w(a, v)).collect();
        GradedMatrix::identity(a, &ws)
    }

    #[test]
    fn surjective_map_gives_one_block() {
        let a = alg(&[1, -1]);
        let red = reduce_to_faithful(&a, &identity(&a, &[0, 1])).unwrap();
        assert_eq!(red.blocks.len(), 1);
        assert_eq!(red.blocks[0].indices, vec![0, 1]);
        assert_eq!(red.retwist(&a, 0, &red.blocks[0].e.source[1]), w(&a, 1));
    }

    #[test]
    fn even_image() {
        let a = alg(&[2, -2]);
        let red = reduce_to_faithful(&a, &identity(&a, &[0, 2])).unwrap();
        assert_eq!(red.blocks.len(), 1);
        assert!(a.group.is_zero(&red.blocks[0].offset));
        let back: Vec<GroupElem> = red.blocks[0].e.source.iter().map(|q| red.retwist(&a, 0, q)).collect();
        assert_eq!(back, vec![w(&a, 0), w(&a, 2)]);
    }

    #[test]
    fn two_classes_split() {
        let a = alg(&[2, -2]);
        let red = reduce_to_faithful(&a, &identity(&a, &[0, 1])).unwrap();
        assert_eq!(red.blocks.len(), 2);
        for (i, b) in red.blocks.iter().enumerate() {
            assert_eq!(b.indices.len(), 1);
            assert!(mat::is_identity(&b.e.entries));
            assert_eq!(red.retwist(&a, i, &b.e.source[0]), w(&a, b.indices[0] as i64));
        }
    }
}
